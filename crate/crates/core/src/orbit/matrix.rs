//! Generator matrices over Z/p.
//!
//! Matrices act on column vectors; column `k` is the image of basis vector
//! `k`.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::invariant::OddPrime;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct GeneratorMatrix {
    pub label: String,
    pub n: usize,
    /// Row-major entries in `[0, p)`.
    pub entries: Vec<u32>,
}

impl GeneratorMatrix {
    pub fn identity(n: usize, label: impl Into<String>) -> Self {
        let mut entries = vec![0; n * n];
        for i in 0..n {
            entries[i * n + i] = 1;
        }
        GeneratorMatrix {
            label: label.into(),
            n,
            entries,
        }
    }

    /// Build from the images of the basis vectors, reducing mod p.
    pub fn from_columns(label: impl Into<String>, p: OddPrime, columns: &[Vec<i64>]) -> Self {
        let n = columns.len();
        let mut entries = vec![0; n * n];
        for (c, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), n, "square matrix");
            for (r, &v) in col.iter().enumerate() {
                entries[r * n + c] = p.reduce(v);
            }
        }
        GeneratorMatrix {
            label: label.into(),
            n,
            entries,
        }
    }

    pub fn from_rows(label: impl Into<String>, p: OddPrime, rows: &[Vec<i64>]) -> Self {
        let n = rows.len();
        let entries = rows
            .iter()
            .flat_map(|row| {
                assert_eq!(row.len(), n, "square matrix");
                row.iter().map(move |&v| p.reduce(v))
            })
            .collect();
        GeneratorMatrix {
            label: label.into(),
            n,
            entries,
        }
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.entries[r * self.n + c]
    }

    pub fn apply(&self, v: &[u32], p: OddPrime, out: &mut [u32]) {
        let q = p.get() as u64;
        for (r, o) in out.iter_mut().enumerate() {
            let row = &self.entries[r * self.n..(r + 1) * self.n];
            let s: u64 = row.iter().zip(v).map(|(&a, &b)| a as u64 * b as u64).sum();
            *o = (s % q) as u32;
        }
    }

    pub fn mul(&self, other: &GeneratorMatrix, p: OddPrime) -> GeneratorMatrix {
        let n = self.n;
        let q = p.get() as u64;
        let mut entries = vec![0; n * n];
        for r in 0..n {
            for c in 0..n {
                let s: u64 = (0..n).map(|k| self.get(r, k) as u64 * other.get(k, c) as u64).sum();
                entries[r * n + c] = (s % q) as u32;
            }
        }
        GeneratorMatrix {
            label: format!("{}*{}", self.label, other.label),
            n,
            entries,
        }
    }

    pub fn transpose(&self) -> GeneratorMatrix {
        let n = self.n;
        let mut entries = vec![0; n * n];
        for r in 0..n {
            for c in 0..n {
                entries[c * n + r] = self.get(r, c);
            }
        }
        GeneratorMatrix {
            label: format!("{}^T", self.label),
            n,
            entries,
        }
    }

    /// Determinant mod p by Gaussian elimination.
    pub fn det(&self, p: OddPrime) -> u32 {
        let n = self.n;
        let mut a = self.entries.clone();
        let mut det = 1u32;
        for col in 0..n {
            let Some(piv) = (col..n).find(|&r| a[r * n + col] != 0) else {
                return 0;
            };
            if piv != col {
                for c in 0..n {
                    a.swap(piv * n + c, col * n + c);
                }
                det = p.neg(det);
            }
            let pv = a[col * n + col];
            det = p.mul(det, pv);
            let inv = p.inverse(pv).expect("nonzero pivot");
            for r in col + 1..n {
                let f = p.mul(a[r * n + col], inv);
                if f == 0 {
                    continue;
                }
                for c in col..n {
                    let sub = p.mul(f, a[col * n + c]);
                    a[r * n + c] = (a[r * n + c] + p.get() - sub) % p.get();
                }
            }
        }
        det
    }

    pub fn is_invertible(&self, p: OddPrime) -> bool {
        self.det(p) != 0
    }

    pub fn is_identity(&self) -> bool {
        *self == GeneratorMatrix::identity(self.n, self.label.clone())
    }

    /// `MᵀJM = J` for the block form `J = ⊕ [[0, 1], [-1, 0]]` in the basis
    /// `(e1, f1, e2, f2, ...)`.
    pub fn is_symplectic(&self, p: OddPrime) -> bool {
        if self.n % 2 == 1 {
            return false;
        }
        let j = standard_form(self.n / 2, p);
        let lhs = self.transpose().mul(&j, p).mul(self, p);
        lhs.entries == j.entries
    }
}

impl fmt::Display for GeneratorMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}:", self.label)?;
        for r in 0..self.n {
            let row: Vec<String> = (0..self.n).map(|c| self.get(r, c).to_string()).collect();
            writeln!(f, "  [{}]", row.join(" "))?;
        }
        Ok(())
    }
}

pub fn standard_form(g: usize, p: OddPrime) -> GeneratorMatrix {
    let n = 2 * g;
    let mut rows = vec![vec![0i64; n]; n];
    for b in 0..g {
        rows[2 * b][2 * b + 1] = 1;
        rows[2 * b + 1][2 * b] = -1;
    }
    GeneratorMatrix::from_rows("J", p, &rows)
}

/// How homology classes are coordinatized.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CrosscapBasis {
    /// `r` crosscap classes with the relation `α_r = -(α_1 + ... + α_{r-1})`;
    /// coordinates are those of `α_1 .. α_{r-1}`.
    Closed { r: usize },
    /// `m` independent crosscap classes (surface with one boundary circle).
    Free { m: usize },
}

impl CrosscapBasis {
    pub fn crosscaps(self) -> usize {
        match self {
            CrosscapBasis::Closed { r } => r,
            CrosscapBasis::Free { m } => m,
        }
    }

    pub fn rank(self) -> usize {
        match self {
            CrosscapBasis::Closed { r } => r - 1,
            CrosscapBasis::Free { m } => m,
        }
    }

    /// Coordinates of crosscap class `α_k` (1-based).
    fn alpha(self, k: usize) -> Vec<i64> {
        let n = self.rank();
        let mut v = vec![0i64; n];
        if k <= n {
            v[k - 1] = 1;
        } else {
            v.iter_mut().for_each(|x| *x = -1);
        }
        v
    }

    fn check(self, i: usize, j: usize) -> Result<()> {
        let r = self.crosscaps();
        if i == j || i == 0 || j == 0 || i > r || j > r {
            return Err(Error::BadIndices(format!("({i}, {j}) with {r} crosscaps")));
        }
        if self.rank() == 0 {
            return Err(Error::BadIndices("rank-0 model".into()));
        }
        Ok(())
    }

    /// Matrix of the map given on all crosscap classes by `image`.
    fn build(self, label: String, p: OddPrime, image: impl Fn(usize) -> Vec<i64>) -> GeneratorMatrix {
        let n = self.rank();
        let cols: Vec<Vec<i64>> = (1..=n).map(image).collect();
        GeneratorMatrix::from_columns(label, p, &cols)
    }
}

fn combo(basis: CrosscapBasis, terms: &[(i64, usize)]) -> Vec<i64> {
    let mut out = vec![0i64; basis.rank()];
    for &(c, k) in terms {
        for (o, a) in out.iter_mut().zip(basis.alpha(k)) {
            *o += c * a;
        }
    }
    out
}

/// Dehn twist `T_{i,j}`: `α_i ↦ 2α_i + α_j`, `α_j ↦ -α_i`.
pub fn dehn_twist_matrix(i: usize, j: usize, basis: CrosscapBasis, p: OddPrime) -> Result<GeneratorMatrix> {
    basis.check(i, j)?;
    Ok(basis.build(format!("T{i},{j}"), p, |k| {
        if k == i {
            combo(basis, &[(2, i), (1, j)])
        } else if k == j {
            combo(basis, &[(-1, i)])
        } else {
            combo(basis, &[(1, k)])
        }
    }))
}

/// Crosscap slide `Y_{i,j}`: `α_i ↦ -α_i`, `α_j ↦ 2α_i + α_j`.
pub fn crosscap_slide_matrix(i: usize, j: usize, basis: CrosscapBasis, p: OddPrime) -> Result<GeneratorMatrix> {
    basis.check(i, j)?;
    Ok(basis.build(format!("Y{i},{j}"), p, |k| {
        if k == i {
            combo(basis, &[(-1, i)])
        } else if k == j {
            combo(basis, &[(2, i), (1, j)])
        } else {
            combo(basis, &[(1, k)])
        }
    }))
}

/// Reflection negating every class.
pub fn psi_matrix(n: usize, p: OddPrime) -> GeneratorMatrix {
    let cols: Vec<Vec<i64>> = (0..n)
        .map(|k| {
            let mut v = vec![0i64; n];
            v[k] = -1;
            v
        })
        .collect();
    GeneratorMatrix::from_columns("psi", p, &cols)
}

fn embed(block: &[Vec<i64>], at: usize, n: usize) -> Vec<Vec<i64>> {
    let mut rows: Vec<Vec<i64>> = (0..n)
        .map(|r| {
            let mut row = vec![0i64; n];
            row[r] = 1;
            row
        })
        .collect();
    for (r, brow) in block.iter().enumerate() {
        for (c, &v) in brow.iter().enumerate() {
            rows[at + r][at + c] = v;
        }
    }
    rows
}

/// Per-block `A`, `B`, adjacent block swaps and the 4×4 mixing matrix
/// embedded at every adjacent block pair.
pub fn symplectic_generators(g: usize, p: OddPrime) -> Vec<GeneratorMatrix> {
    let n = 2 * g;
    let a = vec![vec![1, 0], vec![1, 1]];
    let b = vec![vec![1, 1], vec![0, 1]];
    let swap = vec![
        vec![0, 0, 1, 0],
        vec![0, 0, 0, 1],
        vec![-1, 0, 0, 0],
        vec![0, -1, 0, 0],
    ];
    let mix = vec![
        vec![1, 0, 0, 0],
        vec![0, 1, 0, -1],
        vec![1, 0, 1, 0],
        vec![0, 0, 0, 1],
    ];
    let mut out = Vec::new();
    for k in 0..g {
        out.push(GeneratorMatrix::from_rows(format!("A{}", k + 1), p, &embed(&a, 2 * k, n)));
        out.push(GeneratorMatrix::from_rows(format!("B{}", k + 1), p, &embed(&b, 2 * k, n)));
    }
    for k in 0..g.saturating_sub(1) {
        out.push(GeneratorMatrix::from_rows(format!("S{}", k + 1), p, &embed(&swap, 2 * k, n)));
        out.push(GeneratorMatrix::from_rows(format!("B4_{}", k + 1), p, &embed(&mix, 2 * k, n)));
    }
    out
}
