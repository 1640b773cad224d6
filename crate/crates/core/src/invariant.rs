//! Shared algebraic vocabulary: odd primes, rotation data, invariant records
//! and the consistency rules every C_p-surface satisfies.
//!
//! Rotation entries are Ding values: for a fixed point `x`, the unit `g` such
//! that a small positively oriented loop around the image of `x` in the
//! quotient lifts to a path from `y` to `σ^g · y`. On a non-orientable surface
//! there is no global orientation, so each entry is stored folded to
//! `min(g, p - g)`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An odd prime `p >= 3`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct OddPrime(u32);

impl OddPrime {
    pub fn new(p: u32) -> Result<Self> {
        if p >= 3 && p % 2 == 1 && is_prime(p as u64) {
            Ok(OddPrime(p))
        } else {
            Err(Error::NotOddPrime(p as u64))
        }
    }

    #[inline]
    pub fn get(self) -> u32 {
        self.0
    }

    /// Reduce an arbitrary integer into `[0, p)`.
    #[inline]
    pub fn reduce(self, x: i64) -> u32 {
        x.rem_euclid(self.0 as i64) as u32
    }

    /// Multiplicative inverse of a unit.
    pub fn inverse(self, a: u32) -> Option<u32> {
        let p = self.0 as i64;
        let a = (a as i64).rem_euclid(p);
        if a == 0 {
            return None;
        }
        // Extended Euclid.
        let (mut r0, mut r1) = (p, a);
        let (mut t0, mut t1) = (0i64, 1i64);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        Some(t0.rem_euclid(p) as u32)
    }

    #[inline]
    pub fn mul(self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.0 as u64) as u32
    }

    #[inline]
    pub fn neg(self, a: u32) -> u32 {
        (self.0 - a % self.0) % self.0
    }

    /// `min(a, p - a)`: the representative of `{a, -a}` used for unsigned data.
    #[inline]
    pub fn fold(self, a: u32) -> u32 {
        let a = a % self.0;
        a.min(self.0 - a)
    }

    pub fn units(self) -> impl Iterator<Item = u32> {
        1..self.0
    }
}

impl TryFrom<u32> for OddPrime {
    type Error = Error;
    fn try_from(p: u32) -> Result<Self> {
        OddPrime::new(p)
    }
}

impl From<OddPrime> for u32 {
    fn from(p: OddPrime) -> u32 {
        p.0
    }
}

impl fmt::Display for OddPrime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// A single rotation value: a unit mod p.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RotationClass(u32);

impl RotationClass {
    pub fn new(value: u32, p: OddPrime) -> Result<Self> {
        if value % p.get() == 0 {
            Err(Error::MalformedRotation {
                value,
                p: p.get(),
            })
        } else {
            Ok(RotationClass(value % p.get()))
        }
    }

    #[inline]
    pub fn value(self) -> u32 {
        self.0
    }
}

/// A multiset of rotation entries, one per fixed point.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RotationMultiset {
    entries: Vec<u32>,
    pub orientable: bool,
}

impl RotationMultiset {
    /// Entries are reduced mod p, folded when `orientable` is false, and
    /// sorted.
    pub fn new(entries: impl IntoIterator<Item = u32>, orientable: bool, p: OddPrime) -> Result<Self> {
        let mut out = Vec::new();
        for e in entries {
            let r = RotationClass::new(e, p)?.value();
            out.push(if orientable { r } else { p.fold(r) });
        }
        out.sort_unstable();
        Ok(RotationMultiset {
            entries: out,
            orientable,
        })
    }

    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Image under multiplication by the unit `u` (an automorphism of C_p).
    pub fn twist(&self, u: u32, p: OddPrime) -> RotationMultiset {
        let mut entries: Vec<u32> = self
            .entries
            .iter()
            .map(|&e| {
                let v = p.mul(e, u);
                if self.orientable {
                    v
                } else {
                    p.fold(v)
                }
            })
            .collect();
        entries.sort_unstable();
        RotationMultiset {
            entries,
            orientable: self.orientable,
        }
    }

    /// True when every value `v` occurs as often as `-v`, i.e. the entries
    /// split into `{i, p - i}` pairs.
    pub fn is_pair_decomposable(&self, p: OddPrime) -> bool {
        if !self.orientable {
            return self.entries.chunks(2).all(|c| c.len() == 2 && c[0] == c[1])
                && self.entries.len() % 2 == 0;
        }
        let mut counts = vec![0usize; p.get() as usize];
        for &e in &self.entries {
            counts[e as usize] += 1;
        }
        (1..p.get()).all(|v| counts[v as usize] == counts[p.neg(v) as usize])
    }
}

/// Lexicographically least sorted tuple among all unit multiples of `ms`.
pub fn canonicalize_rotations(ms: &RotationMultiset, p: OddPrime) -> Result<RotationMultiset> {
    if let Some(&bad) = ms.entries.iter().find(|&&e| e % p.get() == 0) {
        return Err(Error::MalformedRotation {
            value: bad,
            p: p.get(),
        });
    }
    Ok(p.units()
        .map(|u| ms.twist(u, p))
        .min_by(|a, b| a.entries.cmp(&b.entries))
        .expect("p >= 3 has units"))
}

/// The algebraic fingerprint of a C_p-surface.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct InvariantRecord {
    pub p: OddPrime,
    pub orientable: bool,
    pub beta: u64,
    pub fixed_points: u64,
    pub rotations: Option<Vec<u32>>,
}

impl InvariantRecord {
    pub fn new(p: OddPrime, orientable: bool, beta: u64, fixed_points: u64) -> Self {
        InvariantRecord {
            p,
            orientable,
            beta,
            fixed_points,
            rotations: None,
        }
    }

    /// Attach rotation entries; they are folded for non-orientable records
    /// and sorted.
    pub fn with_rotations(mut self, entries: impl IntoIterator<Item = u32>) -> Result<Self> {
        let ms = RotationMultiset::new(entries, self.orientable, self.p)?;
        self.rotations = Some(ms.entries);
        Ok(self)
    }

    pub fn rotation_multiset(&self) -> Option<RotationMultiset> {
        self.rotations.as_ref().map(|r| {
            let mut entries = r.clone();
            entries.sort_unstable();
            RotationMultiset {
                entries,
                orientable: self.orientable,
            }
        })
    }

    /// Same record with the rotation data replaced by its canonical form.
    pub fn canonical(&self) -> Result<Self> {
        let mut out = self.clone();
        if let Some(ms) = self.rotation_multiset() {
            out.rotations = Some(canonicalize_rotations(&ms, self.p)?.entries);
        }
        Ok(out)
    }

    pub fn without_rotations(&self) -> Self {
        InvariantRecord {
            rotations: None,
            ..self.clone()
        }
    }
}

impl fmt::Display for InvariantRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "p={} {} beta={} F={}",
            self.p,
            if self.orientable { "orientable" } else { "non-orientable" },
            self.beta,
            self.fixed_points
        )?;
        if let Some(r) = &self.rotations {
            write!(f, " rotations={r:?}")?;
        }
        Ok(())
    }
}

/// A rule a record can violate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Rule {
    /// `F ≡ 2 - β (mod p)`.
    EulerCongruence,
    /// Orientable surfaces have even β.
    OrientableEvenBeta,
    /// Orientable surfaces never have exactly one fixed point.
    NoOrientableSingleFixedPoint,
    /// One rotation entry per fixed point.
    RotationCount,
    /// Every rotation entry is a unit.
    RotationUnits,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Rule::EulerCongruence => "F ≡ 2 - beta (mod p)",
            Rule::OrientableEvenBeta => "orientable => beta even",
            Rule::NoOrientableSingleFixedPoint => "orientable => F != 1",
            Rule::RotationCount => "|rotations| = F",
            Rule::RotationUnits => "rotations are units",
        };
        f.write_str(s)
    }
}

/// Non-fatal observations reported alongside a verdict.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Warning {
    /// Orientable rotation entries do not sum to zero mod p.
    RotationSumNonzero,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub violations: Vec<Rule>,
    pub warnings: Vec<Warning>,
}

impl Verdict {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn validate(record: &InvariantRecord) -> Verdict {
    let p = record.p;
    let mut v = Verdict::default();
    let lhs = p.reduce(record.fixed_points as i64);
    let rhs = p.reduce(2 - record.beta as i64);
    if lhs != rhs {
        v.violations.push(Rule::EulerCongruence);
    }
    if record.orientable && record.beta % 2 == 1 {
        v.violations.push(Rule::OrientableEvenBeta);
    }
    if record.orientable && record.fixed_points == 1 {
        v.violations.push(Rule::NoOrientableSingleFixedPoint);
    }
    if let Some(rot) = &record.rotations {
        if rot.len() as u64 != record.fixed_points {
            v.violations.push(Rule::RotationCount);
        }
        if rot.iter().any(|&e| e % p.get() == 0) {
            v.violations.push(Rule::RotationUnits);
        }
        let sum: u64 = rot.iter().map(|&e| e as u64).sum();
        if record.orientable && sum % p.get() as u64 != 0 {
            v.warnings.push(Warning::RotationSumNonzero);
        }
    }
    v
}

/// χ = 2 - β.
pub fn euler_characteristic(record: &InvariantRecord) -> i64 {
    2 - record.beta as i64
}
