//! Generalized maps with an explicit order-p symmetry.
//!
//! A surface is a set of darts (flags) with three involutions: `α0` swaps the
//! two ends of a side, `α1` the two sides at a corner, `α2` the two faces
//! across an edge. A dart with `α2 d = d` lies on the boundary. The symmetry
//! `φ` is a dart permutation commuting with all three.
//!
//! Cells are orbits: vertices of `⟨α1, α2⟩`, edges of `⟨α0, α2⟩`, faces of
//! `⟨α0, α1⟩`.
//!
//! Surgery never deletes darts. New darts are created in bulk from a
//! `φ`-closed set of existing darts, one per (old dart, role) pair, and `φ`
//! is extended by `φ(new(d, r)) = new(φ d, r)`, which keeps every local
//! operation equivariant.

use std::collections::{HashMap, VecDeque};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::invariant::OddPrime;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CellKind {
    Vertex,
    Face,
}

/// A cell named by one of its darts.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Cell {
    pub kind: CellKind,
    pub dart: u32,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GMap {
    pub p: OddPrime,
    pub a: [Vec<u32>; 3],
    pub phi: Vec<u32>,
}

/// Darts created from a `φ`-closed source set.
pub(crate) struct NewDarts {
    base: u32,
    roles: u32,
    pos: HashMap<u32, u32>,
}

impl NewDarts {
    pub(crate) fn id(&self, d: u32, role: u32) -> u32 {
        debug_assert!(role < self.roles);
        self.base + self.pos[&d] * self.roles + role
    }
}

const VERTEX: [usize; 2] = [1, 2];
const EDGE: [usize; 2] = [0, 2];
const FACE: [usize; 2] = [0, 1];

/// Boundary walk direction for gluing.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Same,
    Reversed,
}

impl GMap {
    pub fn empty(p: OddPrime) -> Self {
        GMap {
            p,
            a: [Vec::new(), Vec::new(), Vec::new()],
            phi: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.phi.len()
    }

    pub fn is_empty(&self) -> bool {
        self.phi.is_empty()
    }

    #[inline]
    pub fn alpha(&self, i: usize, d: u32) -> u32 {
        self.a[i][d as usize]
    }

    #[inline]
    pub fn phi(&self, d: u32) -> u32 {
        self.phi[d as usize]
    }

    pub fn is_boundary(&self, d: u32) -> bool {
        self.alpha(2, d) == d
    }

    fn set(&mut self, i: usize, x: u32, y: u32) {
        self.a[i][x as usize] = y;
        self.a[i][y as usize] = x;
    }

    pub fn orbit(&self, d: u32, gens: &[usize]) -> Vec<u32> {
        let mut seen = vec![d];
        let mut queue = VecDeque::from([d]);
        while let Some(x) = queue.pop_front() {
            for &i in gens {
                let y = self.alpha(i, x);
                if !seen.contains(&y) {
                    seen.push(y);
                    queue.push_back(y);
                }
            }
        }
        seen
    }

    /// Label every dart by its cell; returns labels and the cell count.
    pub fn cell_labels(&self, gens: &[usize]) -> (Vec<u32>, usize) {
        let n = self.len();
        let mut label = vec![u32::MAX; n];
        let mut count = 0u32;
        for d in 0..n as u32 {
            if label[d as usize] != u32::MAX {
                continue;
            }
            let mut stack = vec![d];
            label[d as usize] = count;
            while let Some(x) = stack.pop() {
                for &i in gens {
                    let y = self.alpha(i, x);
                    if label[y as usize] == u32::MAX {
                        label[y as usize] = count;
                        stack.push(y);
                    }
                }
            }
            count += 1;
        }
        (label, count as usize)
    }

    pub fn vertex_count(&self) -> usize {
        self.cell_labels(&VERTEX).1
    }

    pub fn edge_count(&self) -> usize {
        self.cell_labels(&EDGE).1
    }

    pub fn face_count(&self) -> usize {
        self.cell_labels(&FACE).1
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.vertex_count() as i64 - self.edge_count() as i64 + self.face_count() as i64
    }

    pub fn is_connected(&self) -> bool {
        self.is_empty() || self.cell_labels(&[0, 1, 2]).1 == 1
    }

    /// Two-colouring of darts with every `α` swapping colours and dart 0
    /// coloured 0, if the surface is orientable.
    pub fn orientation(&self) -> Option<Vec<u8>> {
        let n = self.len();
        let mut color = vec![u8::MAX; n];
        for start in 0..n as u32 {
            if color[start as usize] != u8::MAX {
                continue;
            }
            color[start as usize] = 0;
            let mut stack = vec![start];
            while let Some(x) = stack.pop() {
                for i in 0..3 {
                    let y = self.alpha(i, x);
                    if y == x {
                        continue;
                    }
                    let want = 1 - color[x as usize];
                    match color[y as usize] {
                        u8::MAX => {
                            color[y as usize] = want;
                            stack.push(y);
                        }
                        c if c != want => return None,
                        _ => {}
                    }
                }
            }
        }
        Some(color)
    }

    pub fn is_orientable(&self) -> bool {
        self.orientation().is_some()
    }

    pub fn has_boundary(&self) -> bool {
        (0..self.len() as u32).any(|d| self.is_boundary(d))
    }

    /// Number of boundary circles.
    pub fn boundary_count(&self) -> usize {
        let mut seen = vec![false; self.len()];
        let mut count = 0;
        for d in 0..self.len() as u32 {
            if !self.is_boundary(d) || seen[d as usize] {
                continue;
            }
            count += 1;
            for w in self.boundary_walk(d) {
                seen[w as usize] = true;
                seen[self.alpha(0, w) as usize] = true;
            }
        }
        count
    }

    /// Walk-first darts of the boundary circle through `b`, in order.
    pub fn boundary_walk(&self, b: u32) -> Vec<u32> {
        debug_assert!(self.is_boundary(b));
        let mut out = Vec::new();
        let mut x = b;
        loop {
            out.push(x);
            let mut z = self.alpha(1, self.alpha(0, x));
            while !self.is_boundary(z) {
                z = self.alpha(1, self.alpha(2, z));
            }
            x = z;
            if x == b {
                return out;
            }
        }
    }

    /// Structural checks: involutions, the cell complex conditions, and
    /// `φ` being a fixed-point-free order-p automorphism.
    pub fn validate(&self) -> Result<()> {
        self.validate_parts()?;
        if !self.is_connected() {
            return Err(Error::InvalidScheme("surface is not connected".into()));
        }
        Ok(())
    }

    /// [`GMap::validate`] without the connectivity requirement.
    pub fn validate_parts(&self) -> Result<()> {
        let n = self.len();
        let bad = |m: String| Err(Error::InvalidScheme(m));
        for i in 0..3 {
            if self.a[i].len() != n {
                return bad(format!("alpha{i} has wrong length"));
            }
        }
        for d in 0..n as u32 {
            for i in 0..3 {
                let e = self.alpha(i, d);
                if e as usize >= n || self.alpha(i, e) != d {
                    return bad(format!("alpha{i} is not an involution at dart {d}"));
                }
                if i < 2 && e == d {
                    return bad(format!("alpha{i} fixes dart {d}"));
                }
            }
            let e = self.alpha(0, self.alpha(2, d));
            if self.alpha(0, self.alpha(2, e)) != d {
                return bad(format!("alpha0 alpha2 is not an involution at dart {d}"));
            }
        }
        let act = |m: String| Err(Error::InvalidAction(m));
        let mut hit = vec![false; n];
        for d in 0..n as u32 {
            let e = self.phi(d);
            if e as usize >= n || hit[e as usize] {
                return act("phi is not a permutation".into());
            }
            hit[e as usize] = true;
        }
        for d in 0..n as u32 {
            for i in 0..3 {
                if self.phi(self.alpha(i, d)) != self.alpha(i, self.phi(d)) {
                    return act(format!("phi does not commute with alpha{i} at dart {d}"));
                }
            }
            if self.phi(d) == d {
                return act(format!("phi fixes dart {d}, so some edge is fixed"));
            }
            let mut x = d;
            for _ in 0..self.p.get() {
                x = self.phi(x);
            }
            if x != d {
                return act(format!("phi^p moves dart {d}"));
            }
        }
        Ok(())
    }

    /// Fixed vertices and faces with their rotation (Ding) values. Boundary
    /// vertices are skipped.
    pub fn fixed_cells(&self) -> Vec<(Cell, u32)> {
        let colors = self.orientation();
        let mut out = Vec::new();
        for (kind, gens) in [(CellKind::Vertex, VERTEX), (CellKind::Face, FACE)] {
            let (labels, count) = self.cell_labels(&gens);
            let mut reps = vec![u32::MAX; count];
            for d in 0..self.len() as u32 {
                let l = labels[d as usize] as usize;
                if reps[l] == u32::MAX {
                    reps[l] = d;
                }
            }
            for rep in reps {
                if labels[self.phi(rep) as usize] != labels[rep as usize] {
                    continue;
                }
                let cell = Cell { kind, dart: rep };
                if let Some(r) = self.rotation(cell, colors.as_deref()) {
                    out.push((cell, r));
                }
            }
        }
        out
    }

    /// Local rotation at a fixed cell: with `φ(d) = ρ^s(d)` on a positive
    /// rotation cycle of length `m`, the rotation step is `t = s / (m/p)` and
    /// the Ding value is `t⁻¹`. Folded to `min(g, p-g)` without a global
    /// orientation.
    pub fn rotation(&self, cell: Cell, colors: Option<&[u8]>) -> Option<u32> {
        let p = self.p;
        let step = |d: u32| match cell.kind {
            CellKind::Vertex => self.alpha(2, self.alpha(1, d)),
            CellKind::Face => self.alpha(1, self.alpha(0, d)),
        };
        let gens = match cell.kind {
            CellKind::Vertex => VERTEX,
            CellKind::Face => FACE,
        };
        let members = self.orbit(cell.dart, &gens);
        if cell.kind == CellKind::Vertex && members.iter().any(|&d| self.is_boundary(d)) {
            return None;
        }
        let start = match colors {
            Some(c) => *members.iter().filter(|&&d| c[d as usize] == 0).min()?,
            None => *members.iter().min()?,
        };
        let target = self.phi(start);
        let mut cycle = vec![start];
        let mut x = step(start);
        while x != start {
            cycle.push(x);
            x = step(x);
        }
        let m = cycle.len() as u32;
        let s = cycle.iter().position(|&d| d == target)? as u32;
        if m % p.get() != 0 || s % (m / p.get()) != 0 {
            return None;
        }
        let t = s / (m / p.get());
        let g = p.inverse(t)?;
        Some(if colors.is_some() { g } else { p.fold(g) })
    }

    /// The cell containing `dart`, as the orbit's least dart.
    pub fn canonical_cell(&self, cell: Cell) -> Cell {
        let gens = match cell.kind {
            CellKind::Vertex => VERTEX,
            CellKind::Face => FACE,
        };
        let dart = *self.orbit(cell.dart, &gens).iter().min().expect("non-empty orbit");
        Cell { kind: cell.kind, dart }
    }

    pub fn same_cell(&self, x: Cell, y: Cell) -> bool {
        x.kind == y.kind && self.canonical_cell(x) == self.canonical_cell(y)
    }

    /// Rotation of a specific fixed cell.
    pub fn cell_rotation(&self, cell: Cell) -> Option<u32> {
        let colors = self.orientation();
        self.rotation(cell, colors.as_deref())
    }

    pub fn is_fixed(&self, cell: Cell) -> bool {
        let gens = match cell.kind {
            CellKind::Vertex => VERTEX,
            CellKind::Face => FACE,
        };
        self.orbit(cell.dart, &gens).contains(&self.phi(cell.dart))
    }

    /// The φ-orbit of a dart.
    pub fn phi_orbit(&self, d: u32) -> Vec<u32> {
        let mut out = vec![d];
        let mut x = self.phi(d);
        while x != d {
            out.push(x);
            x = self.phi(x);
        }
        out
    }

    // ---- construction primitives ---------------------------------------

    /// Append a disjoint copy of `other`; returns the dart offset.
    pub fn append(&mut self, other: &GMap) -> u32 {
        let off = self.len() as u32;
        for i in 0..3 {
            self.a[i].extend(other.a[i].iter().map(|&d| d + off));
        }
        self.phi.extend(other.phi.iter().map(|&d| d + off));
        off
    }

    /// Allocate `roles` new darts per dart of the `φ`-closed set `olds`.
    pub(crate) fn extend(&mut self, olds: &[u32], roles: u32) -> NewDarts {
        let base = self.len() as u32;
        let pos: HashMap<u32, u32> = olds.iter().enumerate().map(|(k, &d)| (d, k as u32)).collect();
        let nd = NewDarts { base, roles, pos };
        let total = olds.len() as u32 * roles;
        for i in 0..3 {
            self.a[i].extend(base..base + total);
        }
        self.phi.extend(base..base + total);
        for &d in olds {
            let img = self.phi(d);
            assert!(nd.pos.contains_key(&img), "source set must be phi-closed");
            for r in 0..roles {
                self.phi[nd.id(d, r) as usize] = nd.id(img, r);
            }
        }
        nd
    }

    /// Open the face through `dart` into an annulus; returns the new inner
    /// boundary darts, one per old dart of the face, in face order.
    pub fn hole_faces(&mut self, darts: &[u32]) -> Vec<u32> {
        let mut face: Vec<u32> = Vec::new();
        for &d in darts {
            if !face.contains(&d) {
                face.extend(self.orbit(d, &FACE));
            }
        }
        let old_a1: HashMap<u32, u32> = face.iter().map(|&d| (d, self.alpha(1, d))).collect();
        let nd = self.extend(&face, 3);
        let (r_out, r_in, inner) = (0, 1, 2);
        for &d in &face {
            let ro = nd.id(d, r_out);
            let ri = nd.id(d, r_in);
            let id = nd.id(d, inner);
            self.set(1, d, ro);
            self.set(0, ro, ri);
            self.a[2][ro as usize] = nd.id(old_a1[&d], r_out);
            self.a[2][ri as usize] = nd.id(old_a1[&d], r_in);
            self.set(1, ri, id);
            self.a[0][id as usize] = nd.id(self.alpha(0, d), inner);
            self.a[2][id as usize] = id;
        }
        darts.iter().map(|&d| nd.id(d, inner)).collect()
    }

    /// Cut off a neighbourhood of the vertex through `dart`; returns one new
    /// boundary dart.
    pub fn truncate_vertex(&mut self, dart: u32) -> u32 {
        let vertex = self.orbit(dart, &VERTEX);
        let old_a1: HashMap<u32, u32> = vertex.iter().map(|&d| (d, self.alpha(1, d))).collect();
        let nd = self.extend(&vertex, 1);
        for &d in &vertex {
            let c = nd.id(d, 0);
            self.set(1, d, c);
            self.a[0][c as usize] = nd.id(old_a1[&d], 0);
            self.a[2][c as usize] = c;
        }
        nd.id(dart, 0)
    }

    /// Replace a fixed face by an annulus of quads around a new copy of the
    /// face, so the quads form free orbits; returns a dart of the new centre
    /// face.
    pub fn refine_face(&mut self, dart: u32) -> u32 {
        let face = self.orbit(dart, &FACE);
        let old_a1: HashMap<u32, u32> = face.iter().map(|&d| (d, self.alpha(1, d))).collect();
        let inner: Vec<u32> = self.hole_faces(&face);
        let inner_of: HashMap<u32, u32> = face.iter().copied().zip(inner.iter().copied()).collect();
        let nd = self.extend(&face, 1);
        for &d in &face {
            let c = nd.id(d, 0);
            self.set(2, c, inner_of[&d]);
            self.a[0][c as usize] = nd.id(self.alpha(0, d), 0);
            self.a[1][c as usize] = nd.id(old_a1[&d], 0);
        }
        nd.id(dart, 0)
    }

    /// Split every side of the given boundary walks into `q` sides. The walks
    /// together must form a `φ`-closed set. Returns the refined walks.
    pub fn subdivide(&mut self, walks: &[Vec<u32>], q: u32) -> Vec<Vec<u32>> {
        if q <= 1 {
            return walks.to_vec();
        }
        let firsts: Vec<u32> = walks.iter().flatten().copied().collect();
        let seconds: HashMap<u32, u32> = firsts.iter().map(|&u| (u, self.alpha(0, u))).collect();
        let k = 2 * q - 2;
        let nd = self.extend(&firsts, k);
        for &u in &firsts {
            let n = |r: u32| nd.id(u, r - 1);
            self.set(0, u, n(1));
            for j in 1..q - 1 {
                self.set(0, n(2 * j), n(2 * j + 1));
            }
            self.set(0, n(2 * q - 2), seconds[&u]);
            for j in 1..q {
                self.set(1, n(2 * j - 1), n(2 * j));
            }
            for r in 1..=k {
                self.a[2][n(r) as usize] = n(r);
            }
        }
        let nd = &nd;
        walks
            .iter()
            .map(|w| {
                w.iter()
                    .flat_map(|&u| std::iter::once(u).chain((1..q).map(move |j| nd.id(u, 2 * j - 1))))
                    .collect()
            })
            .collect()
    }

    /// Sew boundary walk `a` to walk `b` of the same length.
    pub fn glue(&mut self, a: &[u32], b: &[u32], dir: Direction) {
        assert_eq!(a.len(), b.len(), "walks must have equal length");
        let l = a.len();
        for j in 0..l {
            let (ua, va) = (a[j], self.alpha(0, a[j]));
            match dir {
                Direction::Same => {
                    let (ub, vb) = (b[j], self.alpha(0, b[j]));
                    self.set(2, ua, ub);
                    self.set(2, va, vb);
                }
                Direction::Reversed => {
                    let k = (l - j) % l;
                    let (ub, vb) = (b[k], self.alpha(0, b[k]));
                    self.set(2, ua, vb);
                    self.set(2, va, ub);
                }
            }
        }
    }

    /// Shift `s` with `φ(w[0]) = w[s]` for a `φ`-invariant walk.
    pub fn walk_shift(&self, walk: &[u32]) -> Option<usize> {
        let target = self.phi(walk[0]);
        walk.iter().position(|&d| d == target)
    }
}
