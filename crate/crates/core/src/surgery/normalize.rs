//! Rewriting surgery words to canonical families.
//!
//! The word is evaluated step by step while a family state is carried
//! alongside. Orientable plus-steps are rewritten by family rules; the
//! twisted-ribbon rules inspect the target's rotation to separate the
//! `Poly(n+1)` branch (target rotation opposite to the Poly core) from the
//! `Sph`/`Poly(n-1)` branch. Every other step re-derives the family from the
//! running record.

use crate::error::{Error, Result};
use crate::invariant::OddPrime;

use super::family::{classify, poly_core, Classification, Family, FamilyClass};
use super::ops::{Orientability, Summand};
use super::word::{trace, BaseSpace, SurfaceState, SurgeryStep, SurgeryWord};

/// Family state: a family plus, for `Poly`, the core rotation `c` whose
/// copies are `{c, -c/2, -c/2}`.
#[derive(Clone, Debug, PartialEq, Eq)]
enum State {
    Known(FamilyClass, Option<u32>),
    Open(Classification),
}

fn known(p: OddPrime, family: Family, core: Option<u32>) -> Result<State> {
    Ok(State::Known(FamilyClass::new(p, family)?, core))
}

fn from_record(state: &SurfaceState) -> Result<State> {
    let rec = &state.record;
    if state.orientability == Orientability::Unknown {
        // Both orientability classes remain possible.
        let mut cands = Vec::new();
        for orientable in [true, false] {
            let mut r = rec.clone();
            r.orientable = orientable;
            r.rotations = None;
            if let Ok(c) = classify(&r) {
                cands.extend(c.candidates());
            }
        }
        if cands.is_empty() {
            return Err(Error::Incomplete(format!("no family for {rec}")));
        }
        return Ok(State::Open(Classification::Ambiguous { candidates: cands }));
    }
    let c = classify(rec).map_err(|e| match e {
        Error::NoFamily(m) => Error::Incomplete(m),
        other => other,
    })?;
    Ok(match c {
        Classification::Unique { class } => {
            let core = match (class.family, &rec.rotations) {
                (Family::Poly { n, .. }, Some(rot)) => poly_core(rec.p, rot, n),
                _ => None,
            };
            State::Known(class, core)
        }
        other => State::Open(other),
    })
}

fn base_state(p: OddPrime, base: BaseSpace) -> Result<State> {
    match base {
        BaseSpace::M1Free => known(p, Family::MFree { g: 0 }, None),
        BaseSpace::Sphere(_) => known(p, Family::Sph { k: 0, g: 0 }, None),
        BaseSpace::KleinFree(_) => known(p, Family::NFree { r: 0 }, None),
        BaseSpace::ProjPlaneOne(_) => known(p, Family::NProj { k: 0, r: 0 }, None),
        BaseSpace::Poly { n, i } => known(
            p,
            Family::Poly {
                n: n as u64,
                k: 0,
                g: 0,
            },
            Some(i % p.get()),
        ),
    }
}

fn rewrite(
    p: OddPrime,
    fam: FamilyClass,
    core: Option<u32>,
    before: &SurfaceState,
    after: &SurfaceState,
    step: &SurgeryStep,
) -> Result<State> {
    use Family::*;
    if !after.record.orientable {
        return from_record(after);
    }
    match (*step, fam.family) {
        (SurgeryStep::ConnSum(Summand::Orientable(h)), f) => {
            let h = h as u64;
            let family = match f {
                MFree { g } => MFree { g: g + h },
                Sph { k, g } => Sph { k, g: g + h },
                Poly { n, k, g } => Poly { n, k, g: g + h },
                _ => return from_record(after),
            };
            known(p, family, core)
        }
        (SurgeryStep::PlusRibbon(_), f) => {
            let family = match f {
                MFree { g } => Sph { k: 0, g: g + 1 },
                Sph { k, g } => Sph { k: k + 1, g },
                Poly { n, k, g } => Poly { n, k: k + 1, g },
                _ => return from_record(after),
            };
            known(p, family, core)
        }
        (SurgeryStep::PlusTwisted(sel), f) => {
            let idx = before.resolve(sel)?;
            let target = before.points[idx].ding;
            match f {
                Sph { k, g } => known(p, Poly { n: 1, k, g }, target.map(|d| p.neg(d))),
                Poly { n, k, g } => {
                    let opposite = matches!((target, core), (Some(d), Some(c)) if d == p.neg(c));
                    if k >= 1 && opposite {
                        known(p, Poly { n: n + 1, k: k - 1, g }, core)
                    } else if n == 1 {
                        known(p, Sph { k: k + 1, g }, None)
                    } else {
                        known(p, Poly { n: n - 1, k: k + 2, g }, core)
                    }
                }
                _ => from_record(after),
            }
        }
        _ => from_record(after),
    }
}

/// Canonical family of the surface a word builds.
pub fn normalize(word: &SurgeryWord) -> Result<Classification> {
    let p = word.p;
    let states = trace(word)?;
    let mut state = base_state(p, word.base)?;
    for (index, step) in word.steps.iter().enumerate() {
        let (before, after) = (&states[index], &states[index + 1]);
        state = match state {
            State::Known(fam, core) => rewrite(p, fam, core, before, after, step),
            State::Open(_) => from_record(after),
        }
        .map_err(|e| e.at_step(index))?;
    }
    let out = match state {
        State::Known(class, _) => Classification::Unique { class },
        State::Open(c) => c,
    };
    let rec = &states.last().expect("non-empty").record;
    for c in out.candidates() {
        if (c.beta(), c.fixed_points()) != (rec.beta, rec.fixed_points) {
            return Err(Error::Incomplete(format!("{c} does not match {rec}")));
        }
    }
    Ok(out)
}
