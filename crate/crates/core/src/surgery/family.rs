//! The six canonical families and record classification.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::invariant::{canonicalize_rotations, validate, InvariantRecord, OddPrime, RotationMultiset};

/// Family parameters. β and F follow from these and `p`:
///
/// | family         | F        | β                            |
/// |----------------|----------|------------------------------|
/// | `MFree(g)`     | 0        | 2 + 2pg                      |
/// | `Sph(k,g)`     | 2k + 2   | 2(p-1)k + 2pg                |
/// | `Poly(n,k,g)`  | 3n + 2k  | (p-1)(3n-2+2k) + 2pg         |
/// | `NFree(r)`     | 0        | 2 + pr                       |
/// | `NSph(k,r)`    | 2k + 2   | 2(p-1)k + pr, r >= 1         |
/// | `NProj(k,r)`   | 2k + 1   | 1 + 2(p-1)k + pr             |
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum Family {
    MFree { g: u64 },
    Sph { k: u64, g: u64 },
    Poly { n: u64, k: u64, g: u64 },
    NFree { r: u64 },
    NSph { k: u64, r: u64 },
    NProj { k: u64, r: u64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct FamilyClass {
    pub p: OddPrime,
    #[serde(flatten)]
    pub family: Family,
}

impl FamilyClass {
    pub fn new(p: OddPrime, family: Family) -> Result<Self> {
        let ok = match family {
            Family::Poly { n, .. } => n >= 1,
            Family::NSph { r, .. } => r >= 1,
            _ => true,
        };
        if ok {
            Ok(FamilyClass { p, family })
        } else {
            Err(Error::NoFamily(format!("{family:?} is outside the parameter range")))
        }
    }

    pub fn is_orientable(&self) -> bool {
        matches!(
            self.family,
            Family::MFree { .. } | Family::Sph { .. } | Family::Poly { .. }
        )
    }

    pub fn fixed_points(&self) -> u64 {
        match self.family {
            Family::MFree { .. } | Family::NFree { .. } => 0,
            Family::Sph { k, .. } | Family::NSph { k, .. } => 2 * k + 2,
            Family::Poly { n, k, .. } => 3 * n + 2 * k,
            Family::NProj { k, .. } => 2 * k + 1,
        }
    }

    pub fn beta(&self) -> u64 {
        let p = self.p.get() as u64;
        match self.family {
            Family::MFree { g } => 2 + 2 * p * g,
            Family::Sph { k, g } => 2 * (p - 1) * k + 2 * p * g,
            Family::Poly { n, k, g } => (p - 1) * (3 * n - 2 + 2 * k) + 2 * p * g,
            Family::NFree { r } => 2 + p * r,
            Family::NSph { k, r } => 2 * (p - 1) * k + p * r,
            Family::NProj { k, r } => 1 + 2 * (p - 1) * k + p * r,
        }
    }

    /// Canonical rotation data, when the family determines it. For p = 3
    /// every unit is ±1 and the tuple is forced; for larger p the pieces'
    /// parameters are free and only (β, F) are family invariants.
    pub fn canonical_rotations(&self) -> Option<Vec<u32>> {
        if self.p.get() != 3 {
            return None;
        }
        let f = self.fixed_points() as usize;
        let entries: Vec<u32> = match self.family {
            Family::Sph { k, .. } => {
                let h = k as usize + 1;
                [vec![1; h], vec![2; h]].concat()
            }
            Family::Poly { n, k, .. } => {
                [vec![1; 3 * n as usize + k as usize], vec![2; k as usize]].concat()
            }
            // Free families and every non-orientable family (values fold to 1).
            _ => vec![1; f],
        };
        let ms = RotationMultiset::new(entries, self.is_orientable(), self.p).ok()?;
        canonicalize_rotations(&ms, self.p).ok().map(|m| m.entries().to_vec())
    }

    /// The family's invariant record, with canonical rotations where the
    /// family determines them.
    pub fn record(&self) -> InvariantRecord {
        InvariantRecord {
            p: self.p,
            orientable: self.is_orientable(),
            beta: self.beta(),
            fixed_points: self.fixed_points(),
            rotations: self.canonical_rotations(),
        }
    }

    pub fn name(&self) -> String {
        match self.family {
            Family::MFree { g } => format!("M_{}^free", 1 + self.p.get() as u64 * g),
            Family::Sph { k, g } => format!("Sph(k={k},g={g})"),
            Family::Poly { n, k, g } => format!("Poly(n={n},k={k},g={g})"),
            Family::NFree { r } => format!("N_{}^free", 2 + self.p.get() as u64 * r),
            Family::NSph { k, r } => format!("NSph(k={k},r={r})"),
            Family::NProj { k, r } => format!("NProj(k={k},r={r})"),
        }
    }
}

impl fmt::Display for FamilyClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

/// Outcome of classification.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum Classification {
    Unique { class: FamilyClass },
    /// Several families share (β, F) and no rotation data separates them.
    Ambiguous { candidates: Vec<FamilyClass> },
    /// Rotation data is present but matches no family's pattern; the
    /// (β, F)-compatible families are listed.
    Unmatched { candidates: Vec<FamilyClass> },
}

impl Classification {
    pub fn unique(&self) -> Option<FamilyClass> {
        match self {
            Classification::Unique { class } => Some(*class),
            _ => None,
        }
    }

    pub fn candidates(&self) -> Vec<FamilyClass> {
        match self {
            Classification::Unique { class } => vec![*class],
            Classification::Ambiguous { candidates } | Classification::Unmatched { candidates } => {
                candidates.clone()
            }
        }
    }
}

fn exact_div(num: i64, den: i64) -> Option<u64> {
    (num >= 0 && num % den == 0).then(|| (num / den) as u64)
}

/// All families whose (orientability, β, F) equal the record's.
pub fn candidates_for(p: OddPrime, orientable: bool, beta: u64, f: u64) -> Vec<FamilyClass> {
    let q = p.get() as i64;
    let (b, fi) = (beta as i64, f as i64);
    let mut out = Vec::new();
    let mut push = |family| out.push(FamilyClass { p, family });
    if orientable {
        if f == 0 {
            if let Some(g) = exact_div(b - 2, 2 * q) {
                push(Family::MFree { g });
            }
            return out;
        }
        // Sph and Poly share β = (p-1)(F-2) + 2pg.
        let Some(g) = exact_div(b - (q - 1) * (fi - 2), 2 * q) else {
            return out;
        };
        if f % 2 == 0 {
            push(Family::Sph { k: (f - 2) / 2, g });
        }
        let mut n = 1;
        while 3 * n <= f {
            if (f - 3 * n) % 2 == 0 {
                push(Family::Poly {
                    n,
                    k: (f - 3 * n) / 2,
                    g,
                });
            }
            n += 1;
        }
    } else if f == 0 {
        if let Some(r) = exact_div(b - 2, q) {
            push(Family::NFree { r });
        }
    } else if f % 2 == 0 {
        let k = (f - 2) / 2;
        if let Some(r) = exact_div(b - 2 * (q - 1) * k as i64, q) {
            if r >= 1 {
                push(Family::NSph { k, r });
            }
        }
    } else {
        let k = (f - 1) / 2;
        if let Some(r) = exact_div(b - 1 - 2 * (q - 1) * k as i64, q) {
            push(Family::NProj { k, r });
        }
    }
    out
}

/// Remove `n` copies of the core `{c, -c/2, -c/2}` from a count table.
fn remove_cores(p: OddPrime, counts: &mut [usize], n: usize, c: u32) -> bool {
    let h = p.mul(p.neg(c), p.inverse(2).expect("odd p"));
    // At p = 3 the core is {c, c, c}.
    if c == h {
        if counts[c as usize] < 3 * n {
            return false;
        }
        counts[c as usize] -= 3 * n;
        return true;
    }
    if counts[c as usize] < n || counts[h as usize] < 2 * n {
        return false;
    }
    counts[c as usize] -= n;
    counts[h as usize] -= 2 * n;
    true
}

fn pairs_up(p: OddPrime, counts: &[usize]) -> bool {
    (1..p.get()).all(|v| counts[v as usize] == counts[p.neg(v) as usize])
}

/// Poly core value `c` matched by orientable rotation data, if the family is
/// `Poly(n, ..)`.
pub(crate) fn poly_core(p: OddPrime, rotations: &[u32], n: u64) -> Option<u32> {
    let mut base = vec![0usize; p.get() as usize];
    for &r in rotations {
        base[(r % p.get()) as usize] += 1;
    }
    p.units().find(|&c| {
        let mut counts = base.clone();
        remove_cores(p, &mut counts, n as usize, c) && pairs_up(p, &counts)
    })
}

pub fn classify(record: &InvariantRecord) -> Result<Classification> {
    let verdict = validate(record);
    if !verdict.is_ok() {
        let rules: Vec<String> = verdict.violations.iter().map(|r| r.to_string()).collect();
        return Err(Error::InvalidRecord(format!("{record}: {}", rules.join(", "))));
    }
    let p = record.p;
    let cands = candidates_for(p, record.orientable, record.beta, record.fixed_points);
    if cands.is_empty() {
        return Err(Error::NoFamily(format!("{record}")));
    }
    if cands.len() == 1 && (!record.orientable || record.rotations.is_none()) {
        return Ok(Classification::Unique { class: cands[0] });
    }
    let Some(rot) = record.rotations.as_ref().filter(|_| record.orientable) else {
        return Ok(if cands.len() == 1 {
            Classification::Unique { class: cands[0] }
        } else {
            Classification::Ambiguous { candidates: cands }
        });
    };
    let matching: Vec<FamilyClass> = cands
        .iter()
        .copied()
        .filter(|c| match c.family {
            Family::MFree { .. } => rot.is_empty(),
            Family::Sph { .. } => {
                let ms = RotationMultiset::new(rot.iter().copied(), true, p);
                ms.map(|m| m.is_pair_decomposable(p)).unwrap_or(false)
            }
            Family::Poly { n, .. } => poly_core(p, rot, n).is_some(),
            _ => false,
        })
        .collect();
    Ok(match matching.len() {
        0 => Classification::Unmatched { candidates: cands },
        1 => Classification::Unique { class: matching[0] },
        _ => Classification::Ambiguous {
            candidates: matching,
        },
    })
}

/// A row of the family atlas.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AtlasRow {
    pub class: FamilyClass,
    pub name: String,
    pub orientable: bool,
    pub beta: u64,
    pub fixed_points: u64,
    pub rotations: Option<Vec<u32>>,
    /// Another family has the same (orientability, β, F).
    pub ambiguous_without_rotations: bool,
}

/// Every family member with β <= `beta_max`, sorted by (β, F).
pub fn atlas(p: OddPrime, beta_max: u64) -> Vec<AtlasRow> {
    let q = p.get() as u64;
    let mut classes = Vec::new();
    // Each family's β grows at least linearly in every parameter, so the
    // loop bounds below are generous but finite.
    let lim = beta_max + 1;
    for g in 0..lim {
        for k in 0..lim {
            let mut add = |family| {
                let c = FamilyClass { p, family };
                if c.beta() <= beta_max {
                    classes.push(c);
                }
            };
            if k == 0 {
                add(Family::MFree { g });
                add(Family::NFree { r: g });
            }
            add(Family::Sph { k, g });
            add(Family::NProj { k, r: g });
            if g >= 1 {
                add(Family::NSph { k, r: g });
            }
            for n in 1..lim {
                if (q - 1) * (3 * n - 2) > beta_max {
                    break;
                }
                add(Family::Poly { n, k, g });
            }
            if 2 * (q - 1) * k > beta_max {
                break;
            }
        }
        if q * g > beta_max {
            break;
        }
    }
    classes.sort_by_key(|c| (c.beta(), c.fixed_points(), !c.is_orientable(), *c));
    classes.dedup();
    let key = |c: &FamilyClass| (c.is_orientable(), c.beta(), c.fixed_points());
    classes
        .iter()
        .map(|c| {
            let shared = classes.iter().filter(|d| key(d) == key(c)).count() > 1;
            AtlasRow {
                class: *c,
                name: c.name(),
                orientable: c.is_orientable(),
                beta: c.beta(),
                fixed_points: c.fixed_points(),
                rotations: c.canonical_rotations(),
                ambiguous_without_rotations: shared,
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(n: u32) -> OddPrime {
        OddPrime::new(n).unwrap()
    }

    fn fc(q: u32, family: Family) -> FamilyClass {
        FamilyClass::new(p(q), family).unwrap()
    }

    #[test]
    fn family_formulas() {
        assert_eq!(fc(3, Family::Sph { k: 2, g: 0 }).beta(), 8);
        assert_eq!(fc(3, Family::Poly { n: 2, k: 0, g: 0 }).beta(), 8);
        assert_eq!(fc(3, Family::Poly { n: 1, k: 0, g: 0 }).beta(), 2);
        assert_eq!(fc(3, Family::MFree { g: 2 }).beta(), 14);
        assert_eq!(fc(5, Family::Sph { k: 1, g: 0 }).beta(), 8);
        assert!(FamilyClass::new(p(3), Family::NSph { k: 0, r: 0 }).is_err());
        assert!(FamilyClass::new(p(3), Family::Poly { n: 0, k: 0, g: 0 }).is_err());
    }

    #[test]
    fn classify_examples() {
        let r = InvariantRecord::new(p(3), false, 8, 3);
        assert_eq!(
            classify(&r).unwrap(),
            Classification::Unique {
                class: fc(3, Family::NProj { k: 1, r: 1 })
            }
        );

        let r = InvariantRecord::new(p(3), true, 8, 6);
        assert_eq!(
            classify(&r).unwrap(),
            Classification::Ambiguous {
                candidates: vec![
                    fc(3, Family::Sph { k: 2, g: 0 }),
                    fc(3, Family::Poly { n: 2, k: 0, g: 0 })
                ]
            }
        );

        let r = r.with_rotations([1; 6]).unwrap();
        assert_eq!(
            classify(&r).unwrap().unique(),
            Some(fc(3, Family::Poly { n: 2, k: 0, g: 0 }))
        );
        let r = InvariantRecord::new(p(3), true, 8, 6)
            .with_rotations([1, 1, 1, 2, 2, 2])
            .unwrap();
        assert_eq!(classify(&r).unwrap().unique(), Some(fc(3, Family::Sph { k: 2, g: 0 })));
    }

    #[test]
    fn classify_rejects_invalid_and_unsolvable() {
        assert!(matches!(
            classify(&InvariantRecord::new(p(3), true, 0, 1)),
            Err(Error::InvalidRecord(_))
        ));
        // Valid congruence but β too small for any orientable family with F = 4.
        assert!(matches!(
            classify(&InvariantRecord::new(p(5), true, 3, 4)),
            Err(Error::InvalidRecord(_)) | Err(Error::NoFamily(_))
        ));
        assert!(matches!(
            classify(&InvariantRecord::new(p(3), false, 0, 2)),
            Err(Error::NoFamily(_))
        ));
    }

    #[test]
    fn family_records_classify_back() {
        for q in [3, 5, 7] {
            for row in atlas(p(q), 30) {
                let rec = row.class.record();
                let c = classify(&rec).unwrap();
                assert!(c.candidates().contains(&row.class), "{row:?} -> {c:?}");
            }
        }
    }

    #[test]
    fn atlas_small() {
        let rows = atlas(p(3), 2);
        let names: Vec<(u64, u64, bool)> =
            rows.iter().map(|r| (r.beta, r.fixed_points, r.orientable)).collect();
        assert_eq!(
            names,
            vec![(0, 2, true), (1, 1, false), (2, 0, true), (2, 0, false), (2, 3, true)]
        );
        let only_sphere = atlas(p(3), 0);
        assert_eq!(only_sphere.len(), 1);
        assert_eq!(only_sphere[0].class.family, Family::Sph { k: 0, g: 0 });

        let rows = atlas(p(3), 8);
        let amb: Vec<_> = rows
            .iter()
            .filter(|r| r.beta == 8 && r.fixed_points == 6 && r.orientable)
            .collect();
        assert_eq!(amb.len(), 2);
        assert!(amb.iter().all(|r| r.ambiguous_without_rotations));
    }

    #[test]
    fn p3_canonical_rotations() {
        assert_eq!(fc(3, Family::Sph { k: 2, g: 0 }).canonical_rotations(), Some(vec![1, 1, 1, 2, 2, 2]));
        assert_eq!(fc(3, Family::Poly { n: 2, k: 0, g: 0 }).canonical_rotations(), Some(vec![1; 6]));
        assert_eq!(fc(5, Family::Sph { k: 2, g: 0 }).canonical_rotations(), None);
    }
}
