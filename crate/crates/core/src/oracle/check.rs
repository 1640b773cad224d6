//! Cross-checks between explicit maps and the symbolic calculus.

use std::str::FromStr;

use serde::Serialize;

use super::pieces::ExampleName;
use super::realize::{build_example, realize, realize_with, DiskChoice};
use super::scheme::{beta_genus, fixed_point_report, invariant_record, BetaGenus, GluingScheme};
use super::surgery::tr_rotation_table;
use crate::error::{Error, Result};
use crate::invariant::{InvariantRecord, OddPrime};
use crate::surgery::{evaluate, print, trace, BaseSpace, Selector, Summand, SurgeryStep, SurgeryWord};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckScope {
    Examples,
    Surgeries,
    Ding,
    All,
}

impl FromStr for CheckScope {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "examples" => Ok(CheckScope::Examples),
            "surgeries" => Ok(CheckScope::Surgeries),
            "ding" => Ok(CheckScope::Ding),
            "all" => Ok(CheckScope::All),
            _ => Err(Error::Parse {
                pos: 0,
                message: format!("unknown scope {s:?}; expected examples, surgeries, ding or all"),
            }),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckItem {
    pub scope: CheckScope,
    pub subject: String,
    pub ok: bool,
    /// Offending field and both values on a mismatch, a summary otherwise.
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckSummary {
    pub p: OddPrime,
    pub passed: usize,
    pub failed: usize,
    pub items: Vec<CheckItem>,
}

impl CheckSummary {
    pub fn ok(&self) -> bool {
        self.failed == 0
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckItem> {
        self.items.iter().filter(|i| !i.ok)
    }
}

struct Collector {
    scope: CheckScope,
    items: Vec<CheckItem>,
}

impl Collector {
    fn push(&mut self, subject: impl Into<String>, outcome: std::result::Result<String, String>) {
        let (ok, detail) = match outcome {
            Ok(d) => (true, d),
            Err(d) => (false, d),
        };
        self.items.push(CheckItem { scope: self.scope, subject: subject.into(), ok, detail });
    }
}

/// First differing field between two records.
pub fn record_diff(calculus: &InvariantRecord, oracle: &InvariantRecord) -> Option<String> {
    let field = |name: &str, a: String, b: String| Some(format!("{name}: calculus {a}, oracle {b}"));
    if calculus.orientable != oracle.orientable {
        return field("orientable", calculus.orientable.to_string(), oracle.orientable.to_string());
    }
    if calculus.beta != oracle.beta {
        return field("beta", calculus.beta.to_string(), oracle.beta.to_string());
    }
    if calculus.fixed_points != oracle.fixed_points {
        return field("fixed_points", calculus.fixed_points.to_string(), oracle.fixed_points.to_string());
    }
    if calculus.rotations != oracle.rotations {
        return field(
            "rotations",
            format!("{:?}", calculus.rotations),
            format!("{:?}", oracle.rotations),
        );
    }
    None
}

/// Compare canonical records of a word run both ways.
pub fn compare_word(word: &SurgeryWord) -> std::result::Result<String, String> {
    compare_word_with(word, DiskChoice::First)
}

fn compare_word_with(word: &SurgeryWord, choice: DiskChoice) -> std::result::Result<String, String> {
    let want = evaluate(word).and_then(|r| r.canonical()).map_err(|e| format!("calculus: {e}"))?;
    let got = realize_with(word, choice)
        .and_then(|r| r.record())
        .and_then(|r| r.canonical())
        .map_err(|e| format!("oracle: {e}"))?;
    match record_diff(&want, &got) {
        None => Ok(got.to_string()),
        Some(d) => Err(d),
    }
}

fn check_examples(p: OddPrime, c: &mut Collector) -> Result<()> {
    let pm1 = p.get() as u64 - 1;
    for name in ExampleName::ALL {
        for i in p.units() {
            let subject = format!("{}({i})", name.as_str());
            let scheme = build_example(name, p, i)?;
            let text = scheme.to_json();
            let round = GluingScheme::from_json(&text).map(|s| s.to_json());
            if round.as_deref() != Ok(text.as_str()) {
                c.push(subject.clone(), Err("json: round trip is not exact".into()));
                continue;
            }
            let g = scheme.to_gmap()?;
            let report = fixed_point_report(&g);
            let closed_base = match name {
                ExampleName::Sphere => Some(BaseSpace::Sphere(i)),
                ExampleName::Poly1 => Some(BaseSpace::Poly { n: 1, i }),
                ExampleName::M1Free => Some(BaseSpace::M1Free),
                ExampleName::KleinFree => Some(BaseSpace::KleinFree(i)),
                ExampleName::ProjPlaneOne => Some(BaseSpace::ProjPlaneOne(i)),
                _ => None,
            };
            let outcome = match closed_base {
                Some(base) => {
                    let want = evaluate(&SurgeryWord::new(p, base))?.canonical()?;
                    let got = invariant_record(&g)?.canonical()?;
                    let congruent = (got.fixed_points + got.beta) % p.get() as u64 == 2 % p.get() as u64;
                    let sum_ok = !got.orientable
                        || report.points.iter().map(|e| e.rotation as u64).sum::<u64>() % p.get() as u64 == 0;
                    match record_diff(&want, &got) {
                        Some(d) => Err(d),
                        None if !congruent => Err(format!("F + beta: {} is not 2 mod p", got.fixed_points + got.beta)),
                        None if !sum_ok => Err("rotations: orientable sum is not 0 mod p".into()),
                        None => Ok(got.to_string()),
                    }
                }
                None => {
                    let (orientable, betti, circles, fixed) = match name {
                        ExampleName::TR => (true, pm1, 1, 2),
                        ExampleName::Rp => (true, pm1, p.get() as usize, 2),
                        _ => (false, 1, 1, 0),
                    };
                    let want = BetaGenus::Bounded { first_betti: betti, boundary_count: circles };
                    let got = beta_genus(&g);
                    if got != want {
                        Err(format!("first_betti/boundary: expected {want:?}, oracle {got:?}"))
                    } else if g.is_orientable() != orientable {
                        Err(format!("orientable: expected {orientable}, oracle {}", g.is_orientable()))
                    } else if report.points.len() != fixed {
                        Err(format!("fixed_points: expected {fixed}, oracle {}", report.points.len()))
                    } else if name == ExampleName::TR {
                        let table = tr_rotation_table(p, p.neg(i))?;
                        let r = report.rotations();
                        if (r[0], r[1]) == table {
                            Ok(format!("bounded, rotations {r:?}"))
                        } else {
                            Err(format!("rotations: table {table:?}, oracle {r:?}"))
                        }
                    } else {
                        Ok(format!("{got:?}"))
                    }
                }
            };
            c.push(subject, outcome);
        }
    }
    Ok(())
}

fn check_surgeries(p: OddPrime, c: &mut Collector) -> Result<()> {
    let mut bases = vec![BaseSpace::M1Free, BaseSpace::KleinFree(1), BaseSpace::ProjPlaneOne(1)];
    bases.extend(p.units().map(BaseSpace::Sphere));
    bases.push(BaseSpace::Poly { n: 1, i: 1 });
    for base in bases {
        let word = SurgeryWord::new(p, base);
        let f = evaluate(&word)?.fixed_points as u32;
        let mut steps: Vec<SurgeryStep> = p.units().map(SurgeryStep::PlusRibbon).collect();
        steps.extend([
            SurgeryStep::ConnSum(Summand::Orientable(1)),
            SurgeryStep::ConnSum(Summand::NonOrientable(1)),
            SurgeryStep::ConnSum(Summand::NonOrientable(2)),
        ]);
        for k in 0..f {
            steps.push(SurgeryStep::PlusTwisted(Selector::At(k)));
            steps.push(SurgeryStep::PlusFmb(Selector::At(k)));
        }
        let before = realize(&word)?.record()?;
        for step in steps {
            let w = word.clone().then(step);
            let subject = print(&w);
            let outcome = compare_word(&w).and_then(|summary| {
                let after = realize(&w).and_then(|r| r.record()).map_err(|e| e.to_string())?;
                let sym = trace(&w).map_err(|e| e.to_string())?;
                let (s0, s1) = (&sym[0].record, &sym[1].record);
                let d_oracle = (
                    after.fixed_points as i64 - before.fixed_points as i64,
                    after.beta as i64 - before.beta as i64,
                );
                let d_calc = (
                    s1.fixed_points as i64 - s0.fixed_points as i64,
                    s1.beta as i64 - s0.beta as i64,
                );
                if d_oracle == d_calc {
                    Ok(format!("delta(F, beta) = {d_calc:?}; {summary}"))
                } else {
                    Err(format!("delta(F, beta): calculus {d_calc:?}, oracle {d_oracle:?}"))
                }
            });
            c.push(subject, outcome);
        }
    }
    Ok(())
}

/// Rotation tuples of Poly₂ and the two-ribbon sphere, with the same
/// `(β, F)`.
pub fn ding_pair(p: OddPrime) -> Result<(InvariantRecord, InvariantRecord)> {
    let poly = realize(&SurgeryWord::new(p, BaseSpace::Poly { n: 2, i: 1 }))?.record()?.canonical()?;
    let sph = realize(
        &SurgeryWord::new(p, BaseSpace::Sphere(1))
            .then(SurgeryStep::PlusRibbon(1))
            .then(SurgeryStep::PlusRibbon(1)),
    )?
    .record()?
    .canonical()?;
    Ok((poly, sph))
}

/// True when no automorphism of the group carries one tuple to the other.
pub fn tuples_separated(p: OddPrime, a: &InvariantRecord, b: &InvariantRecord) -> bool {
    let (Some(x), Some(y)) = (a.rotation_multiset(), b.rotation_multiset()) else {
        return false;
    };
    p.units().all(|u| x.twist(u, p) != y)
}

fn check_ding(p: OddPrime, c: &mut Collector) -> Result<()> {
    let (poly, sph) = ding_pair(p)?;
    let same_shape = poly.beta == sph.beta && poly.fixed_points == sph.fixed_points;
    let outcome = if !same_shape {
        Err(format!("(beta, F): Poly2 ({}, {}), Sph ({}, {})", poly.beta, poly.fixed_points, sph.beta, sph.fixed_points))
    } else if !tuples_separated(p, &poly, &sph) {
        Err(format!("rotations: {:?} and {:?} are conjugate", poly.rotations, sph.rotations))
    } else {
        Ok(format!("Poly2 {:?} vs Sph {:?}", poly.rotations, sph.rotations))
    };
    c.push("Poly(2,1) vs S(1) +R(1) +R(1)", outcome);

    for src in ["S(1) +R(1)", "S(1) +R(1) +R(2)", "M1free +R(1) +TR(ribbon-south:1)", "N2free(1) +R(1)"] {
        let word = crate::surgery::parse(src, p)?;
        let a = compare_word_with(&word, DiskChoice::First);
        let b = compare_word_with(&word, DiskChoice::Last);
        let outcome = match (a, b) {
            (Ok(x), Ok(y)) if x == y => Ok(format!("disk choice independent: {x}")),
            (Ok(x), Ok(y)) => Err(format!("disk choice: first {x}, last {y}")),
            (Err(e), _) | (_, Err(e)) => Err(e),
        };
        c.push(src, outcome);
    }

    let word = crate::surgery::parse("S(1) +R(2) +TR(ribbon-south:1) +TR(base-north)", p)?;
    let states = trace(&word)?;
    let r = realize(&word)?;
    let mut bad = Vec::new();
    for pt in &states.last().expect("non-empty").points {
        let got = r.role_rotation(pt.role)?;
        if got != pt.ding {
            bad.push(format!("{:?}: calculus {:?}, oracle {got:?}", pt.role, pt.ding));
        }
    }
    c.push(
        print(&word),
        if bad.is_empty() { Ok("per-point rotations agree".into()) } else { Err(bad.join("; ")) },
    );
    Ok(())
}

pub fn run_oracle_check(scope: CheckScope, p: OddPrime) -> Result<CheckSummary> {
    let scopes: &[CheckScope] = match scope {
        CheckScope::All => &[CheckScope::Examples, CheckScope::Surgeries, CheckScope::Ding],
        CheckScope::Examples => &[CheckScope::Examples],
        CheckScope::Surgeries => &[CheckScope::Surgeries],
        CheckScope::Ding => &[CheckScope::Ding],
    };
    let mut items = Vec::new();
    for &s in scopes {
        let mut c = Collector { scope: s, items: Vec::new() };
        match s {
            CheckScope::Examples => check_examples(p, &mut c)?,
            CheckScope::Surgeries => check_surgeries(p, &mut c)?,
            CheckScope::Ding => check_ding(p, &mut c)?,
            CheckScope::All => unreachable!(),
        }
        items.extend(c.items);
    }
    let failed = items.iter().filter(|i| !i.ok).count();
    Ok(CheckSummary { p, passed: items.len() - failed, failed, items })
}
