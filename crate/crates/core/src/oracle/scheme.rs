//! Polygon gluing schemes: the file format and the bridge to [`GMap`].
//!
//! A scheme lists faces as cyclic words of signed edge labels (`"-e2"` is
//! `e2` traversed backwards). A label used twice is an interior edge, a label
//! used once a boundary edge. `pairing` lists the two occurrences of each
//! interior label. `action[f][k] = [f', k', reversed]` sends side `k` of
//! face `f` onto side `k'` of face `f'`, reversing it when the flag is set.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::gmap::{CellKind, GMap};
use crate::error::{Error, Result};
use crate::invariant::{InvariantRecord, OddPrime};

pub type Occurrence = [u32; 2];

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GluingScheme {
    pub p: OddPrime,
    pub faces: Vec<Vec<String>>,
    pub pairing: Vec<[Occurrence; 2]>,
    pub action: Vec<Vec<(u32, u32, bool)>>,
}

fn split_label(s: &str) -> (&str, bool) {
    match s.strip_prefix('-') {
        Some(rest) => (rest, false),
        None => (s, true),
    }
}

/// Occurrences of each label, in order of appearance.
fn occurrences(faces: &[Vec<String>]) -> BTreeMap<&str, Vec<(Occurrence, bool)>> {
    let mut out: BTreeMap<&str, Vec<(Occurrence, bool)>> = BTreeMap::new();
    for (f, face) in faces.iter().enumerate() {
        for (k, side) in face.iter().enumerate() {
            let (label, plus) = split_label(side);
            out.entry(label).or_default().push(([f as u32, k as u32], plus));
        }
    }
    out
}

/// The pairing implied by the face words, ordered by first occurrence.
pub fn pairing_of(faces: &[Vec<String>]) -> Vec<[Occurrence; 2]> {
    let mut pairs: Vec<[Occurrence; 2]> = occurrences(faces)
        .values()
        .filter(|occ| occ.len() == 2)
        .map(|occ| [occ[0].0, occ[1].0])
        .collect();
    pairs.sort();
    pairs
}

impl GluingScheme {
    /// Scheme with the pairing derived from the labels.
    pub fn new(p: OddPrime, faces: Vec<Vec<String>>, action: Vec<Vec<(u32, u32, bool)>>) -> Self {
        let pairing = pairing_of(&faces);
        GluingScheme { p, faces, pairing, action }
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let scheme: GluingScheme =
            serde_json::from_str(s).map_err(|e| Error::InvalidScheme(e.to_string()))?;
        scheme.to_gmap()?;
        Ok(scheme)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("scheme serializes")
    }

    fn offsets(&self) -> Vec<u32> {
        let mut off = Vec::with_capacity(self.faces.len());
        let mut total = 0u32;
        for face in &self.faces {
            off.push(total);
            total += face.len() as u32;
        }
        off
    }

    /// Build and validate the generalized map. Dart `(f, k, e)` is end `e`
    /// of side `k` of face `f`; end 0 is where the side starts in the face
    /// word.
    pub fn to_gmap(&self) -> Result<GMap> {
        let g = self.to_gmap_parts()?;
        g.validate()?;
        Ok(g)
    }

    /// [`GluingScheme::to_gmap`] allowing several components.
    pub(crate) fn to_gmap_parts(&self) -> Result<GMap> {
        let bad = |m: String| Err(Error::InvalidScheme(m));
        if self.faces.is_empty() || self.faces.iter().any(Vec::is_empty) {
            return bad("every face needs at least one side".into());
        }
        let off = self.offsets();
        let sides: u32 = self.faces.iter().map(|f| f.len() as u32).sum();
        let dart = |f: u32, k: u32, e: u32| 2 * (off[f as usize] + k) + e;
        let n = 2 * sides;
        let mut g = GMap::empty(self.p);
        for i in 0..3 {
            g.a[i] = (0..n).collect();
        }
        g.phi = (0..n).collect();

        for (f, face) in self.faces.iter().enumerate() {
            let len = face.len() as u32;
            for k in 0..len {
                let f = f as u32;
                let (s, e) = (dart(f, k, 0), dart(f, k, 1));
                g.a[0][s as usize] = e;
                g.a[0][e as usize] = s;
                let prev = dart(f, (k + len - 1) % len, 1);
                g.a[1][s as usize] = prev;
                g.a[1][prev as usize] = s;
            }
        }
        let occ = occurrences(&self.faces);
        for (label, uses) in &occ {
            match uses.as_slice() {
                [_] => {}
                [(x, px), (y, py)] => {
                    let tail = |o: &Occurrence, plus: bool| dart(o[0], o[1], if plus { 0 } else { 1 });
                    let head = |o: &Occurrence, plus: bool| dart(o[0], o[1], if plus { 1 } else { 0 });
                    let (tx, ty) = (tail(x, *px), tail(y, *py));
                    let (hx, hy) = (head(x, *px), head(y, *py));
                    g.a[2][tx as usize] = ty;
                    g.a[2][ty as usize] = tx;
                    g.a[2][hx as usize] = hy;
                    g.a[2][hy as usize] = hx;
                }
                _ => return bad(format!("label {label} is used more than twice")),
            }
        }
        if pairing_of(&self.faces) != {
            let mut given: Vec<[Occurrence; 2]> =
                self.pairing.iter().map(|&[a, b]| if a <= b { [a, b] } else { [b, a] }).collect();
            given.sort();
            given
        } {
            return bad("pairing does not match the edge labels".into());
        }

        if self.action.len() != self.faces.len() {
            return Err(Error::InvalidAction("action needs one row per face".into()));
        }
        for (f, row) in self.action.iter().enumerate() {
            if row.len() != self.faces[f].len() {
                return Err(Error::InvalidAction(format!("action row {f} has the wrong length")));
            }
            for (k, &(tf, tk, rev)) in row.iter().enumerate() {
                if tf as usize >= self.faces.len() || tk as usize >= self.faces[tf as usize].len() {
                    return Err(Error::InvalidAction(format!("action of side ({f}, {k}) is out of range")));
                }
                for e in 0..2u32 {
                    g.phi[dart(f as u32, k as u32, e) as usize] = dart(tf, tk, e ^ rev as u32);
                }
            }
        }
        g.validate_parts()?;
        Ok(g)
    }

    /// Read a scheme back off a generalized map. Faces are ordered by their
    /// least dart and start there; edge labels are numbered by first use.
    pub fn from_gmap(g: &GMap) -> Result<Self> {
        g.validate()?;
        let (face_label, face_count) = g.cell_labels(&[0, 1]);
        let mut starts = vec![u32::MAX; face_count];
        for d in 0..g.len() as u32 {
            let l = face_label[d as usize] as usize;
            if starts[l] == u32::MAX {
                starts[l] = d;
            }
        }
        // side_of[dart] = (face, side, end)
        let mut side_of = vec![(0u32, 0u32, 0u32); g.len()];
        let mut side_starts: Vec<Vec<u32>> = Vec::with_capacity(face_count);
        for (f, &d0) in starts.iter().enumerate() {
            let mut row = Vec::new();
            let mut x = d0;
            loop {
                let k = row.len() as u32;
                row.push(x);
                side_of[x as usize] = (f as u32, k, 0);
                side_of[g.alpha(0, x) as usize] = (f as u32, k, 1);
                x = g.alpha(1, g.alpha(0, x));
                if x == d0 {
                    break;
                }
            }
            side_starts.push(row);
        }

        let mut tail: BTreeMap<u32, (usize, u32)> = BTreeMap::new();
        let mut next = 1usize;
        let mut faces = Vec::with_capacity(face_count);
        for row in &side_starts {
            let mut words = Vec::with_capacity(row.len());
            for &x in row {
                let other = g.alpha(2, x);
                let known = tail.get(&x).or_else(|| tail.get(&g.alpha(0, x))).copied();
                let word = match known {
                    Some((n, t)) => {
                        if t == x {
                            format!("e{n}")
                        } else {
                            format!("-e{n}")
                        }
                    }
                    None => {
                        let n = next;
                        next += 1;
                        if other != x {
                            tail.insert(other, (n, other));
                            tail.insert(g.alpha(0, other), (n, other));
                        }
                        format!("e{n}")
                    }
                };
                words.push(word);
            }
            faces.push(words);
        }
        let action = side_starts
            .iter()
            .map(|row| {
                row.iter()
                    .map(|&x| {
                        let (f, k, e) = side_of[g.phi(x) as usize];
                        (f, k, e == 1)
                    })
                    .collect()
            })
            .collect();
        Ok(GluingScheme::new(g.p, faces, action))
    }
}

/// One fixed cell with its rotation value.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FixedPointEntry {
    pub cell: u32,
    pub kind: CellKind,
    pub rotation: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FixedPointReport {
    pub orientable: bool,
    pub points: Vec<FixedPointEntry>,
}

impl FixedPointReport {
    pub fn rotations(&self) -> Vec<u32> {
        let mut r: Vec<u32> = self.points.iter().map(|e| e.rotation).collect();
        r.sort_unstable();
        r
    }
}

pub fn fixed_point_report(g: &GMap) -> FixedPointReport {
    let points = g
        .fixed_cells()
        .into_iter()
        .map(|(cell, rotation)| FixedPointEntry { cell: cell.dart, kind: cell.kind, rotation })
        .collect();
    FixedPointReport { orientable: g.is_orientable(), points }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum BetaGenus {
    Closed { beta: u64 },
    Bounded { first_betti: u64, boundary_count: usize },
}

pub fn beta_genus(g: &GMap) -> BetaGenus {
    let chi = g.euler_characteristic();
    if g.has_boundary() {
        BetaGenus::Bounded {
            first_betti: (1 - chi) as u64,
            boundary_count: g.boundary_count(),
        }
    } else {
        BetaGenus::Closed { beta: (2 - chi) as u64 }
    }
}

/// Invariant record of a closed surface, computed from cells alone.
pub fn invariant_record(g: &GMap) -> Result<InvariantRecord> {
    if g.has_boundary() {
        return Err(Error::InvalidScheme("surface has boundary".into()));
    }
    let report = fixed_point_report(g);
    let beta = (2 - g.euler_characteristic()) as u64;
    InvariantRecord::new(g.p, report.orientable, beta, report.points.len() as u64)
        .with_rotations(report.rotations())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn words(ws: &[&str]) -> Vec<String> {
        ws.iter().map(|s| s.to_string()).collect()
    }

    /// The 6-gon with opposite sides identified and rotation by two sides.
    fn hexagon() -> GluingScheme {
        let p = OddPrime::new(3).unwrap();
        let action = vec![(0..6).map(|k| (0, (k + 2) % 6, false)).collect()];
        GluingScheme::new(p, vec![words(&["e1", "e2", "e3", "-e1", "-e2", "-e3"])], action)
    }

    #[test]
    fn hexagon_is_a_torus_with_three_fixed_points() {
        let g = hexagon().to_gmap().unwrap();
        assert_eq!((g.vertex_count(), g.edge_count(), g.face_count()), (2, 3, 1));
        assert_eq!(g.euler_characteristic(), 0);
        assert!(g.is_orientable());
        assert_eq!(beta_genus(&g), BetaGenus::Closed { beta: 2 });
        let report = fixed_point_report(&g);
        assert_eq!(report.points.len(), 3);
        let sum: u32 = report.rotations().iter().sum();
        assert_eq!(sum % 3, 0);
    }

    #[test]
    fn json_round_trip_is_exact() {
        let s = hexagon();
        let text = s.to_json();
        assert_eq!(
            text,
            r#"{"p":3,"faces":[["e1","e2","e3","-e1","-e2","-e3"]],"pairing":[[[0,0],[0,3]],[[0,1],[0,4]],[[0,2],[0,5]]],"action":[[[0,2,false],[0,3,false],[0,4,false],[0,5,false],[0,0,false],[0,1,false]]]}"#
        );
        let back = GluingScheme::from_json(&text).unwrap();
        assert_eq!(back, s);
        assert_eq!(back.to_json(), text);
    }

    #[test]
    fn gmap_round_trip_preserves_scheme() {
        let s = hexagon();
        let g = s.to_gmap().unwrap();
        let back = GluingScheme::from_gmap(&g).unwrap();
        assert_eq!(back, s);
        assert_eq!(back.to_gmap().unwrap(), g);
    }

    #[test]
    fn rejects_bad_schemes() {
        let p = OddPrime::new(3).unwrap();
        let fixed_edge = GluingScheme::new(p, vec![words(&["e1", "-e1"])], vec![vec![(0, 0, false), (0, 1, false)]]);
        assert!(matches!(fixed_edge.to_gmap(), Err(Error::InvalidAction(_))));
        let mut wrong_pairing = hexagon();
        wrong_pairing.pairing.pop();
        assert!(matches!(wrong_pairing.to_gmap(), Err(Error::InvalidScheme(_))));
        let triple = GluingScheme::new(
            p,
            vec![words(&["e1", "e1", "e1"])],
            vec![vec![(0, 1, false), (0, 2, false), (0, 0, false)]],
        );
        assert!(triple.to_gmap().is_err());
    }
}
