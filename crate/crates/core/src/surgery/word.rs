//! Surgery words and their evaluation with per-fixed-point bookkeeping.

use std::fmt;

use crate::error::{Error, Result};
use crate::invariant::{InvariantRecord, OddPrime};

use super::ops::{self, Connectivity, Orientability, Summand};

/// Starting surface of a word.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BaseSpace {
    /// Torus with a free rotation.
    M1Free,
    /// Rotation sphere whose north pole has Ding value `i`.
    Sphere(u32),
    /// Klein bottle with the free action of parameter `i`.
    KleinFree(u32),
    /// Projective plane with one fixed point, `Sphere(i)` with a Möbius band
    /// in place of the south pole.
    ProjPlaneOne(u32),
    /// Tower of `n` twisted polygons with core rotation `i`.
    Poly { n: u32, i: u32 },
}

/// Symbolic reference to a fixed point of the running surface.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Selector {
    BaseNorth,
    BaseSouth,
    /// Pole of the `j`-th ribbon (1-based, counting `+R` steps of the word)
    /// whose rotation equals that ribbon's parameter.
    RibbonNorth(u32),
    RibbonSouth(u32),
    /// The two vertices left by the `j`-th `+TR` step.
    TwistA(u32),
    TwistB(u32),
    /// Fixed point `j` (1-based) of a `Poly` base, three per layer.
    PolyVertex(u32),
    /// Position `k` (0-based) in the sorted rotation tuple.
    At(u32),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SurgeryStep {
    ConnSum(Summand),
    PlusRibbon(u32),
    MinusRibbon,
    PlusTwisted(Selector),
    MinusTwisted,
    PlusFmb(Selector),
    PlusMbf,
}

impl SurgeryStep {
    /// Plus surgeries have a scheme-level realization in the oracle.
    pub fn is_plus(&self) -> bool {
        matches!(
            self,
            SurgeryStep::ConnSum(_)
                | SurgeryStep::PlusRibbon(_)
                | SurgeryStep::PlusTwisted(_)
                | SurgeryStep::PlusFmb(_)
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SurgeryWord {
    pub p: OddPrime,
    pub base: BaseSpace,
    pub steps: Vec<SurgeryStep>,
}

impl SurgeryWord {
    pub fn new(p: OddPrime, base: BaseSpace) -> Self {
        SurgeryWord {
            p,
            base,
            steps: Vec::new(),
        }
    }

    pub fn then(mut self, step: SurgeryStep) -> Self {
        self.steps.push(step);
        self
    }
}

impl fmt::Display for SurgeryWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&super::syntax::print(self))
    }
}

/// Where a fixed point came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Role {
    BaseNorth,
    BaseSouth,
    RibbonNorth(u32),
    RibbonSouth(u32),
    TwistA(u32),
    TwistB(u32),
    PolyVertex(u32),
    /// Created by `-TR` or `+MBF` at the given step index.
    Step(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FixedPoint {
    pub role: Role,
    /// Ding value (folded on non-orientable surfaces); `None` once unknown.
    pub ding: Option<u32>,
}

/// Record plus fixed-point roles, threaded through a word.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurfaceState {
    pub record: InvariantRecord,
    pub points: Vec<FixedPoint>,
    pub ribbons: u32,
    pub twists: u32,
    pub last_connectivity: Option<Connectivity>,
    pub orientability: Orientability,
}

impl SurfaceState {
    pub fn base(p: OddPrime, base: BaseSpace) -> Result<Self> {
        let unit = |i: u32| -> Result<u32> {
            if i % p.get() == 0 {
                Err(Error::MalformedRotation { value: i, p: p.get() })
            } else {
                Ok(i % p.get())
            }
        };
        let pt = |role, ding| FixedPoint {
            role,
            ding: Some(ding),
        };
        let (orientable, beta, points) = match base {
            BaseSpace::M1Free => (true, 2, vec![]),
            BaseSpace::KleinFree(i) => {
                unit(i)?;
                (false, 2, vec![])
            }
            BaseSpace::Sphere(i) => {
                let i = unit(i)?;
                (true, 0, vec![pt(Role::BaseNorth, i), pt(Role::BaseSouth, p.neg(i))])
            }
            BaseSpace::ProjPlaneOne(i) => {
                let i = unit(i)?;
                (false, 1, vec![pt(Role::BaseNorth, p.fold(i))])
            }
            BaseSpace::Poly { n, i } => {
                let i = unit(i)?;
                if n == 0 {
                    return Err(Error::SurgeryUndefined("Poly needs n >= 1".into()));
                }
                let (h, _) = ops::twisted_split(p, p.neg(i));
                let mut pts = Vec::new();
                for layer in 0..n {
                    pts.push(pt(Role::PolyVertex(3 * layer + 1), i));
                    pts.push(pt(Role::PolyVertex(3 * layer + 2), h));
                    pts.push(pt(Role::PolyVertex(3 * layer + 3), h));
                }
                let beta = (3 * n as u64 - 2) * (p.get() as u64 - 1);
                (true, beta, pts)
            }
        };
        let mut state = SurfaceState {
            record: InvariantRecord::new(p, orientable, beta, points.len() as u64),
            points,
            ribbons: 0,
            twists: 0,
            last_connectivity: None,
            orientability: Orientability::Known,
        };
        state.sync_rotations();
        Ok(state)
    }

    fn sync_rotations(&mut self) {
        let dings: Option<Vec<u32>> = self.points.iter().map(|pt| pt.ding).collect();
        self.record.rotations = dings.map(|mut d| {
            d.sort_unstable();
            d
        });
    }

    pub fn p(&self) -> OddPrime {
        self.record.p
    }

    /// Index into `points` named by a selector.
    pub fn resolve(&self, sel: Selector) -> Result<usize> {
        let by_role = |role: Role| {
            self.points
                .iter()
                .position(|pt| pt.role == role)
                .ok_or_else(|| Error::SurgeryUndefined(format!("no fixed point {sel:?}")))
        };
        match sel {
            Selector::BaseNorth => by_role(Role::BaseNorth),
            Selector::BaseSouth => by_role(Role::BaseSouth),
            Selector::RibbonNorth(j) => by_role(Role::RibbonNorth(j)),
            Selector::RibbonSouth(j) => by_role(Role::RibbonSouth(j)),
            Selector::TwistA(j) => by_role(Role::TwistA(j)),
            Selector::TwistB(j) => by_role(Role::TwistB(j)),
            Selector::PolyVertex(j) => by_role(Role::PolyVertex(j)),
            Selector::At(k) => {
                let k = k as usize;
                if k >= self.points.len() {
                    return Err(Error::SurgeryUndefined(format!(
                        "no fixed point at index {k} (F = {})",
                        self.points.len()
                    )));
                }
                match &self.record.rotations {
                    Some(sorted) => {
                        let v = sorted[k];
                        Ok(self
                            .points
                            .iter()
                            .position(|pt| pt.ding == Some(v))
                            .expect("sorted tuple mirrors points"))
                    }
                    None => Ok(k),
                }
            }
        }
    }

    /// Position in the sorted rotation tuple of the point at `idx`.
    fn sorted_position(&self, idx: usize) -> usize {
        match (&self.record.rotations, self.points[idx].ding) {
            (Some(sorted), Some(v)) => sorted.iter().position(|&x| x == v).expect("present"),
            _ => idx,
        }
    }

    pub fn apply(&self, step: &SurgeryStep, index: usize) -> Result<SurfaceState> {
        let p = self.p();
        let mut next = self.clone();
        next.last_connectivity = None;
        match *step {
            SurgeryStep::ConnSum(summand) => {
                next.record = ops::apply_conn_sum(&self.record, summand)?;
                if !next.record.orientable {
                    for pt in &mut next.points {
                        pt.ding = pt.ding.map(|d| p.fold(d));
                    }
                }
            }
            SurgeryStep::PlusRibbon(i) => {
                next.record = ops::apply_plus_ribbon(&self.record, i)?;
                next.ribbons += 1;
                let j = next.ribbons;
                let fold = |v: u32| if self.record.orientable { v } else { p.fold(v) };
                let i = i % p.get();
                next.points.push(FixedPoint {
                    role: Role::RibbonNorth(j),
                    ding: Some(fold(i)),
                });
                next.points.push(FixedPoint {
                    role: Role::RibbonSouth(j),
                    ding: Some(fold(p.neg(i))),
                });
            }
            SurgeryStep::MinusRibbon => {
                let (rec, conn) = ops::apply_minus_ribbon(&self.record)?;
                next.last_connectivity = Some(conn);
                let (a, b) = match &self.record.rotations {
                    Some(r) => {
                        let mut r = r.clone();
                        r.sort_unstable();
                        let (x, y) = ops::ribbon_pair(p, self.record.orientable, &r)
                            .expect("record-level check passed");
                        let first = |v: u32, skip: Option<usize>| {
                            self.points
                                .iter()
                                .enumerate()
                                .position(|(n, pt)| pt.ding == Some(v) && Some(n) != skip)
                                .expect("value present")
                        };
                        let a = first(r[x], None);
                        let b = first(r[y], Some(a));
                        (a, b)
                    }
                    None => (0, 1),
                };
                remove_two(&mut next.points, a, b);
                next.record = rec;
            }
            SurgeryStep::PlusTwisted(sel) => {
                let idx = self.resolve(sel)?;
                next.record = ops::apply_plus_twisted(&self.record, self.sorted_position(idx))?;
                next.twists += 1;
                let j = next.twists;
                let removed = next.points.remove(idx);
                let half = removed.ding.map(|d| {
                    let (h, _) = ops::twisted_split(p, d);
                    if self.record.orientable {
                        h
                    } else {
                        p.fold(h)
                    }
                });
                next.points.push(FixedPoint {
                    role: Role::TwistA(j),
                    ding: half,
                });
                next.points.push(FixedPoint {
                    role: Role::TwistB(j),
                    ding: half,
                });
            }
            SurgeryStep::MinusTwisted => {
                next.record = ops::apply_minus_twisted(&self.record, None)?;
                let (a, b, merged) = match &self.record.rotations {
                    Some(r) => {
                        let mut r = r.clone();
                        r.sort_unstable();
                        let v = r.windows(2).find(|w| w[0] == w[1]).expect("checked")[0];
                        let a = self.points.iter().position(|pt| pt.ding == Some(v)).expect("present");
                        let b = self.points.iter().rposition(|pt| pt.ding == Some(v)).expect("present");
                        let m = p.mul(v, 2);
                        (a, b, Some(if self.record.orientable { m } else { p.fold(m) }))
                    }
                    None => (0, 1, None),
                };
                remove_two(&mut next.points, a, b);
                next.points.push(FixedPoint {
                    role: Role::Step(index),
                    ding: merged,
                });
            }
            SurgeryStep::PlusFmb(sel) => {
                let idx = self.resolve(sel)?;
                next.record = ops::apply_fmb(&self.record, self.sorted_position(idx))?;
                next.points.remove(idx);
                for pt in &mut next.points {
                    pt.ding = pt.ding.map(|d| p.fold(d));
                }
            }
            SurgeryStep::PlusMbf => {
                let (rec, status) = ops::apply_mbf(&self.record)?;
                next.orientability = status;
                let new_ding = if rec.orientable {
                    next.points.first().and_then(|pt| pt.ding).map(|a| p.neg(a))
                } else {
                    None
                };
                next.points.push(FixedPoint {
                    role: Role::Step(index),
                    ding: new_ding,
                });
                if rec.rotations.is_none() {
                    for pt in &mut next.points {
                        pt.ding = None;
                    }
                }
                next.record = rec;
            }
        }
        next.sync_rotations();
        debug_assert_eq!(next.record.fixed_points as usize, next.points.len());
        Ok(next)
    }
}

fn remove_two<T>(v: &mut Vec<T>, a: usize, b: usize) {
    let (lo, hi) = (a.min(b), a.max(b));
    v.remove(hi);
    v.remove(lo);
}

/// Fold the word's steps over its base, returning every intermediate state
/// (the base first).
pub fn trace(word: &SurgeryWord) -> Result<Vec<SurfaceState>> {
    let mut states = vec![SurfaceState::base(word.p, word.base)?];
    for (index, step) in word.steps.iter().enumerate() {
        let next = states
            .last()
            .expect("non-empty")
            .apply(step, index)
            .map_err(|e| e.at_step(index))?;
        states.push(next);
    }
    Ok(states)
}

pub fn evaluate(word: &SurgeryWord) -> Result<InvariantRecord> {
    Ok(trace(word)?.pop().expect("non-empty").record)
}
