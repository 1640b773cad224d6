//! Exhaustive orbit enumeration on (Z/p)^n.
//!
//! Vectors are encoded base p with coordinate 0 most significant, so the
//! numeric order of codes is the lexicographic order of vectors. A bitset
//! over all `p^n` codes records visited vectors.

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::invariant::OddPrime;

use super::matrix::{
    crosscap_slide_matrix, dehn_twist_matrix, psi_matrix, symplectic_generators, CrosscapBasis,
    GeneratorMatrix,
};

pub const DEFAULT_BUDGET: u64 = 100_000_000;
pub const BUDGET_ENV: &str = "EQUISURF_BUDGET";

/// Default budget, overridden by `EQUISURF_BUDGET` when it parses.
pub fn default_budget() -> u64 {
    std::env::var(BUDGET_ENV)
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_BUDGET)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SurfaceModel {
    /// Closed non-orientable surface with `r >= 2` crosscaps.
    ClosedNonorientable(usize),
    /// Closed orientable surface of genus `g >= 1`.
    ClosedOrientable(usize),
    /// Disk with `m >= 1` crosscaps.
    Boundary(usize),
}

impl SurfaceModel {
    pub fn rank(&self) -> usize {
        match *self {
            SurfaceModel::ClosedNonorientable(r) => r - 1,
            SurfaceModel::ClosedOrientable(g) => 2 * g,
            SurfaceModel::Boundary(m) => m,
        }
    }

    fn validate(&self) -> Result<()> {
        let ok = match *self {
            SurfaceModel::ClosedNonorientable(r) => r >= 2,
            SurfaceModel::ClosedOrientable(g) => g >= 1,
            SurfaceModel::Boundary(m) => m >= 1,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::BadIndices(format!("model {self} has rank 0")))
        }
    }

    /// The generator set used by the orbit propositions.
    pub fn generators(&self, p: OddPrime) -> Result<Vec<GeneratorMatrix>> {
        self.validate()?;
        let crosscap = |basis: CrosscapBasis| -> Result<Vec<GeneratorMatrix>> {
            let r = basis.crosscaps();
            let mut out = Vec::new();
            for i in 1..=r {
                for j in 1..=r {
                    if i != j {
                        out.push(dehn_twist_matrix(i, j, basis, p)?);
                        out.push(crosscap_slide_matrix(i, j, basis, p)?);
                    }
                }
            }
            Ok(out)
        };
        match *self {
            SurfaceModel::ClosedNonorientable(r) => crosscap(CrosscapBasis::Closed { r }),
            SurfaceModel::ClosedOrientable(g) => Ok(symplectic_generators(g, p)),
            SurfaceModel::Boundary(m) => {
                let mut gens = crosscap(CrosscapBasis::Free { m })?;
                gens.push(psi_matrix(m, p));
                Ok(gens)
            }
        }
    }
}

impl fmt::Display for SurfaceModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SurfaceModel::ClosedNonorientable(r) => write!(f, "closed-nonorientable:{r}"),
            SurfaceModel::ClosedOrientable(g) => write!(f, "closed-orientable:{g}"),
            SurfaceModel::Boundary(m) => write!(f, "boundary:{m}"),
        }
    }
}

impl FromStr for SurfaceModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = |message: &str| Error::Parse {
            pos: 0,
            message: format!("{message} in model {s:?}"),
        };
        let (kind, n) = s.split_once(':').ok_or_else(|| bad("expected kind:n"))?;
        let n: usize = n.trim().parse().map_err(|_| bad("expected a number"))?;
        let model = match kind.trim() {
            "closed-nonorientable" => SurfaceModel::ClosedNonorientable(n),
            "closed-orientable" => SurfaceModel::ClosedOrientable(n),
            "boundary" | "boundary-nonorientable" => SurfaceModel::Boundary(n),
            _ => return Err(bad("unknown kind")),
        };
        model.validate().map_err(|e| bad(&e.to_string()))?;
        Ok(model)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrbitReport {
    pub p: u32,
    pub model: String,
    pub rank: usize,
    pub nonzero_orbits: usize,
    /// Lex-least vector of each orbit, in increasing order.
    pub representatives: Vec<Vec<u32>>,
    pub state_count: u64,
    /// Orbit sizes, aligned with `representatives`.
    #[serde(skip)]
    pub orbit_sizes: Vec<u64>,
}

/// Base-p codec for vectors of a fixed length.
#[derive(Clone, Copy, Debug)]
pub struct Codec {
    pub p: u32,
    pub n: usize,
}

impl Codec {
    pub fn states(&self) -> u128 {
        (self.p as u128).pow(self.n as u32)
    }

    #[inline]
    pub fn encode(&self, v: &[u32]) -> u64 {
        v.iter().fold(0u64, |acc, &x| acc * self.p as u64 + x as u64)
    }

    #[inline]
    pub fn decode(&self, mut code: u64, out: &mut [u32]) {
        for slot in out.iter_mut().rev() {
            *slot = (code % self.p as u64) as u32;
            code /= self.p as u64;
        }
    }
}

struct Bitset(Vec<u64>);

impl Bitset {
    fn new(len: u64) -> Self {
        Bitset(vec![0; len.div_ceil(64) as usize])
    }

    #[inline]
    fn get(&self, i: u64) -> bool {
        self.0[(i / 64) as usize] >> (i % 64) & 1 == 1
    }

    /// Set bit `i`; true when it was clear.
    #[inline]
    fn insert(&mut self, i: u64) -> bool {
        let w = &mut self.0[(i / 64) as usize];
        let mask = 1u64 << (i % 64);
        let fresh = *w & mask == 0;
        *w |= mask;
        fresh
    }
}

fn check_budget(codec: Codec, budget: u64) -> Result<()> {
    let states = codec.states();
    if states > budget as u128 {
        Err(Error::BudgetExceeded { states, budget })
    } else {
        Ok(())
    }
}

/// Orbit partition of the nonzero vectors under the group generated by
/// `gens`. Seeds are tried in the given order; `None` means increasing code
/// order.
pub fn orbit_partition(
    gens: &[GeneratorMatrix],
    n: usize,
    p: OddPrime,
    budget: u64,
    seeds: Option<&[u64]>,
) -> Result<Vec<(u64, u64)>> {
    let codec = Codec { p: p.get(), n };
    check_budget(codec, budget)?;
    let total = codec.states() as u64;
    let mut visited = Bitset::new(total);
    visited.insert(0);
    let mut orbits = Vec::new();
    let mut queue = VecDeque::new();
    let (mut v, mut w) = (vec![0u32; n], vec![0u32; n]);
    let mut visit = |seed: u64, visited: &mut Bitset, orbits: &mut Vec<(u64, u64)>| {
        if !visited.insert(seed) {
            return;
        }
        let (mut min, mut size) = (seed, 0u64);
        queue.push_back(seed);
        while let Some(code) = queue.pop_front() {
            size += 1;
            min = min.min(code);
            codec.decode(code, &mut v);
            for g in gens {
                g.apply(&v, p, &mut w);
                let next = codec.encode(&w);
                if visited.insert(next) {
                    queue.push_back(next);
                }
            }
        }
        orbits.push((min, size));
    };
    match seeds {
        None => {
            for seed in 1..total {
                if !visited.get(seed) {
                    visit(seed, &mut visited, &mut orbits);
                }
            }
        }
        Some(order) => {
            for &seed in order {
                if seed != 0 && seed < total {
                    visit(seed, &mut visited, &mut orbits);
                }
            }
            for seed in 1..total {
                visit(seed, &mut visited, &mut orbits);
            }
        }
    }
    orbits.sort_unstable();
    Ok(orbits)
}

fn report(model: &str, n: usize, p: OddPrime, orbits: Vec<(u64, u64)>) -> OrbitReport {
    let codec = Codec { p: p.get(), n };
    let representatives = orbits
        .iter()
        .map(|&(code, _)| {
            let mut v = vec![0; n];
            codec.decode(code, &mut v);
            v
        })
        .collect();
    OrbitReport {
        p: p.get(),
        model: model.to_string(),
        rank: n,
        nonzero_orbits: orbits.len(),
        representatives,
        state_count: codec.states() as u64,
        orbit_sizes: orbits.iter().map(|&(_, s)| s).collect(),
    }
}

pub fn orbit_count(model: SurfaceModel, p: OddPrime, budget: u64) -> Result<OrbitReport> {
    let gens = model.generators(p)?;
    let n = model.rank();
    let orbits = orbit_partition(&gens, n, p, budget, None)?;
    Ok(report(&model.to_string(), n, p, orbits))
}

/// Same as [`orbit_count`] but seeding the search in the given order.
pub fn orbit_count_seeded(model: SurfaceModel, p: OddPrime, budget: u64, seeds: &[u64]) -> Result<OrbitReport> {
    let gens = model.generators(p)?;
    let n = model.rank();
    let orbits = orbit_partition(&gens, n, p, budget, Some(seeds))?;
    Ok(report(&model.to_string(), n, p, orbits))
}

/// Lex-least vector in the orbit of `v` under `gens`.
pub fn orbit_of_with(v: &[u32], gens: &[GeneratorMatrix], p: OddPrime, budget: u64) -> Result<Vec<u32>> {
    let n = v.len();
    if v.iter().all(|&x| x % p.get() == 0) {
        return Err(Error::ZeroVector);
    }
    let codec = Codec { p: p.get(), n };
    check_budget(codec, budget)?;
    let reduced: Vec<u32> = v.iter().map(|&x| x % p.get()).collect();
    let seed = codec.encode(&reduced);
    let mut visited = Bitset::new(codec.states() as u64);
    visited.insert(seed);
    let mut queue = VecDeque::from([seed]);
    let mut min = seed;
    let (mut a, mut b) = (vec![0u32; n], vec![0u32; n]);
    while let Some(code) = queue.pop_front() {
        min = min.min(code);
        codec.decode(code, &mut a);
        for g in gens {
            g.apply(&a, p, &mut b);
            let next = codec.encode(&b);
            if visited.insert(next) {
                queue.push_back(next);
            }
        }
    }
    let mut out = vec![0; n];
    codec.decode(min, &mut out);
    Ok(out)
}

pub fn orbit_of(v: &[u32], model: SurfaceModel, p: OddPrime, budget: u64) -> Result<Vec<u32>> {
    if v.len() != model.rank() {
        return Err(Error::BadIndices(format!(
            "vector of length {} for rank {}",
            v.len(),
            model.rank()
        )));
    }
    orbit_of_with(v, &model.generators(p)?, p, budget)
}
