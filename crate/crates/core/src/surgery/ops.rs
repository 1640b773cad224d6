//! Record-level effect of each surgery.
//!
//! Every function returns a fresh record and rejects the step when the input
//! does not admit it or when the output would violate [`validate`].

use serde::Serialize;

use crate::error::{Error, Result};
use crate::invariant::{validate, InvariantRecord, OddPrime};
use super::family::candidates_for;

/// The non-equivariant surface summed in by an equivariant connected sum.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Summand {
    /// Orientable genus `g` surface `M_g`; `g = 0` is the sphere (a no-op).
    Orientable(u32),
    /// Non-orientable surface `N_r` with `r >= 1` crosscaps.
    NonOrientable(u32),
}

impl Summand {
    pub fn beta(self) -> u64 {
        match self {
            Summand::Orientable(g) => 2 * g as u64,
            Summand::NonOrientable(r) => r as u64,
        }
    }

    pub fn is_orientable(self) -> bool {
        matches!(self, Summand::Orientable(_))
    }
}

/// Whether removing a ribbon is guaranteed to leave a connected surface.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Connectivity {
    Guaranteed,
    ChoiceDependent,
}

/// Orientability after a Möbius-band-to-fixed-point surgery.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Orientability {
    Known,
    /// Neither parity nor β = 0 decides it; the record is kept
    /// non-orientable with rotations dropped.
    Unknown,
}

fn undefined(msg: impl Into<String>) -> Error {
    Error::SurgeryUndefined(msg.into())
}

fn checked(rec: InvariantRecord) -> Result<InvariantRecord> {
    let v = validate(&rec);
    if v.is_ok() {
        Ok(rec)
    } else {
        let rules: Vec<String> = v.violations.iter().map(|r| r.to_string()).collect();
        Err(undefined(format!("result {rec} violates {}", rules.join(", "))))
    }
}

fn require_valid(rec: &InvariantRecord) -> Result<()> {
    let v = validate(rec);
    if v.is_ok() {
        Ok(())
    } else {
        Err(Error::InvalidRecord(rec.to_string()))
    }
}

fn sorted(mut v: Vec<u32>) -> Vec<u32> {
    v.sort_unstable();
    v
}

/// Map a rotation value into the record's storage convention.
fn store(p: OddPrime, orientable: bool, v: u32) -> u32 {
    if orientable {
        v % p.get()
    } else {
        p.fold(v)
    }
}

/// Ding values of the two vertices created by a twisted ribbon that replaces
/// a fixed point with Ding value `d`: both equal `d / 2`.
pub fn twisted_split(p: OddPrime, d: u32) -> (u32, u32) {
    let half = p.mul(d, p.inverse(2).expect("2 is a unit for odd p"));
    (half, half)
}

pub fn apply_conn_sum(rec: &InvariantRecord, summand: Summand) -> Result<InvariantRecord> {
    require_valid(rec)?;
    if summand == Summand::NonOrientable(0) {
        return Err(Error::InvalidSummand("N_0 is not a surface; use M(0)".into()));
    }
    if summand == Summand::Orientable(0) {
        return Ok(rec.clone());
    }
    let p = rec.p;
    let orientable = rec.orientable && summand.is_orientable();
    let rotations = rec
        .rotations
        .as_ref()
        .map(|r| sorted(r.iter().map(|&v| store(p, orientable, v)).collect()));
    checked(InvariantRecord {
        p,
        orientable,
        beta: rec.beta + p.get() as u64 * summand.beta(),
        fixed_points: rec.fixed_points,
        rotations,
    })
}

pub fn apply_plus_ribbon(rec: &InvariantRecord, i: u32) -> Result<InvariantRecord> {
    require_valid(rec)?;
    let p = rec.p;
    if i % p.get() == 0 {
        return Err(Error::MalformedRotation { value: i, p: p.get() });
    }
    let rotations = rec.rotations.as_ref().map(|r| {
        let mut r = r.clone();
        r.push(store(p, rec.orientable, i));
        r.push(store(p, rec.orientable, p.neg(i % p.get())));
        sorted(r)
    });
    checked(InvariantRecord {
        beta: rec.beta + 2 * (p.get() as u64 - 1),
        fixed_points: rec.fixed_points + 2,
        rotations,
        ..rec.clone()
    })
}

/// Replace the fixed point at position `target` of the sorted rotation tuple
/// by a twisted ribbon. Without rotation data `target` only needs to be a
/// valid index.
pub fn apply_plus_twisted(rec: &InvariantRecord, target: usize) -> Result<InvariantRecord> {
    require_valid(rec)?;
    if rec.fixed_points == 0 {
        return Err(undefined("+TR needs a fixed point"));
    }
    if target as u64 >= rec.fixed_points {
        return Err(undefined(format!(
            "no fixed point at index {target} (F = {})",
            rec.fixed_points
        )));
    }
    let p = rec.p;
    let rotations = rec.rotations.as_ref().map(|r| {
        let mut r = sorted(r.clone());
        let d = r.remove(target);
        let (a, b) = twisted_split(p, d);
        r.push(store(p, rec.orientable, a));
        r.push(store(p, rec.orientable, b));
        sorted(r)
    });
    checked(InvariantRecord {
        beta: rec.beta + (p.get() as u64 - 1),
        fixed_points: rec.fixed_points + 1,
        rotations,
        ..rec.clone()
    })
}

/// Position pair of the lex-least `{i, -i}` pair (orientable) or equal
/// folded pair (non-orientable) in a sorted tuple.
pub(crate) fn ribbon_pair(p: OddPrime, orientable: bool, r: &[u32]) -> Option<(usize, usize)> {
    for (a, &i) in r.iter().enumerate() {
        let want = if orientable { p.neg(i) } else { i };
        if let Some(b) = r.iter().enumerate().position(|(b, &v)| b != a && v == want) {
            return Some((a.min(b), a.max(b)));
        }
    }
    None
}

pub fn apply_minus_ribbon(rec: &InvariantRecord) -> Result<(InvariantRecord, Connectivity)> {
    require_valid(rec)?;
    let p = rec.p;
    let drop = 2 * (p.get() as u64 - 1);
    if rec.fixed_points < 2 {
        return Err(undefined("-R needs two fixed points"));
    }
    if rec.beta < drop {
        return Err(undefined(format!("-R would make beta negative ({} - {drop})", rec.beta)));
    }
    let rotations = match &rec.rotations {
        None => None,
        Some(r) => {
            let mut r = sorted(r.clone());
            let (a, b) = ribbon_pair(p, rec.orientable, &r)
                .ok_or_else(|| undefined("-R needs a pair of fixed points with opposite rotations"))?;
            r.remove(b);
            r.remove(a);
            Some(r)
        }
    };
    let conn = if rec.fixed_points >= 3 {
        Connectivity::Guaranteed
    } else {
        Connectivity::ChoiceDependent
    };
    let out = checked(InvariantRecord {
        beta: rec.beta - drop,
        fixed_points: rec.fixed_points - 2,
        rotations,
        ..rec.clone()
    })?;
    Ok((out, conn))
}

/// Remove a twisted ribbon, merging two fixed points of equal rotation `v`
/// into one of rotation `2v`. `value` picks the pair; by default the least
/// repeated value is used.
pub fn apply_minus_twisted(rec: &InvariantRecord, value: Option<u32>) -> Result<InvariantRecord> {
    require_valid(rec)?;
    let p = rec.p;
    if rec.fixed_points < 2 {
        return Err(undefined("-TR needs two fixed points"));
    }
    if rec.beta < p.get() as u64 - 1 {
        return Err(undefined("-TR would make beta negative"));
    }
    let rotations = match &rec.rotations {
        None => None,
        Some(r) => {
            let mut r = sorted(r.clone());
            let v = match value {
                Some(v) => store(p, rec.orientable, v),
                None => *r
                    .windows(2)
                    .find(|w| w[0] == w[1])
                    .ok_or_else(|| undefined("-TR needs two fixed points with equal rotation"))?
                    .first()
                    .expect("window of two"),
            };
            let a = r.iter().position(|&x| x == v);
            let b = r.iter().rposition(|&x| x == v);
            match (a, b) {
                (Some(a), Some(b)) if a != b => {
                    r.remove(b);
                    r.remove(a);
                }
                _ => return Err(undefined(format!("-TR: rotation {v} does not occur twice"))),
            }
            r.push(store(p, rec.orientable, p.mul(v, 2)));
            Some(sorted(r))
        }
    };
    checked(InvariantRecord {
        beta: rec.beta - (p.get() as u64 - 1),
        fixed_points: rec.fixed_points - 1,
        rotations,
        ..rec.clone()
    })
}

/// Replace the fixed point at position `target` by an equivariant Möbius band.
pub fn apply_fmb(rec: &InvariantRecord, target: usize) -> Result<InvariantRecord> {
    require_valid(rec)?;
    if rec.fixed_points == 0 {
        return Err(undefined("+FMB needs a fixed point"));
    }
    if target as u64 >= rec.fixed_points {
        return Err(undefined(format!(
            "no fixed point at index {target} (F = {})",
            rec.fixed_points
        )));
    }
    let p = rec.p;
    let rotations = rec.rotations.as_ref().map(|r| {
        let mut r = sorted(r.clone());
        r.remove(target);
        sorted(r.into_iter().map(|v| p.fold(v)).collect())
    });
    checked(InvariantRecord {
        p,
        orientable: false,
        beta: rec.beta + 1,
        fixed_points: rec.fixed_points - 1,
        rotations,
    })
}

/// Collapse an equivariant Möbius band to a fixed point.
///
/// The result's orientability is read off the families that admit its
/// `(β, F)`: when only one orientability class does, it is
/// [`Orientability::Known`], when both do it is [`Orientability::Unknown`],
/// and when none does the surgery is undefined. The β = 0 result is the
/// sphere, whose rotations are `{a, -a}` for the surviving entry `a`.
pub fn apply_mbf(rec: &InvariantRecord) -> Result<(InvariantRecord, Orientability)> {
    require_valid(rec)?;
    if rec.orientable {
        return Err(undefined("+MBF needs a non-orientable surface"));
    }
    if rec.beta == 0 {
        return Err(undefined("+MBF would make beta negative"));
    }
    let p = rec.p;
    let beta = rec.beta - 1;
    let fixed_points = rec.fixed_points + 1;
    let admits = |orientable| !candidates_for(p, orientable, beta, fixed_points).is_empty();
    let (orientable, rotations, status) = match (admits(true), admits(false)) {
        (false, false) => {
            return Err(undefined(format!(
                "+MBF would give beta={beta} F={fixed_points}, which no surface has"
            )))
        }
        (true, false) => {
            let rot = match (beta, rec.rotations.as_deref()) {
                (0, Some([a])) => Some(sorted(vec![*a, p.neg(*a)])),
                _ => None,
            };
            (true, rot, Orientability::Known)
        }
        (false, true) => (false, None, Orientability::Known),
        (true, true) => (false, None, Orientability::Unknown),
    };
    let out = checked(InvariantRecord {
        p,
        orientable,
        beta,
        fixed_points,
        rotations,
    })?;
    Ok((out, status))
}
