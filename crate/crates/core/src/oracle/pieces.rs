//! Building blocks: the standard symmetric surfaces as gluing schemes.

use std::str::FromStr;

use super::gmap::{Cell, CellKind, GMap};
use super::scheme::GluingScheme;
use crate::error::{Error, Result};
use crate::invariant::OddPrime;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExampleName {
    Sphere,
    Poly1,
    TR,
    Rp,
    M1Free,
    MB,
    KleinFree,
    ProjPlaneOne,
}

impl ExampleName {
    pub const ALL: [ExampleName; 8] = [
        ExampleName::Sphere,
        ExampleName::Poly1,
        ExampleName::TR,
        ExampleName::Rp,
        ExampleName::M1Free,
        ExampleName::MB,
        ExampleName::KleinFree,
        ExampleName::ProjPlaneOne,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ExampleName::Sphere => "Sphere",
            ExampleName::Poly1 => "Poly1",
            ExampleName::TR => "TR",
            ExampleName::Rp => "Rp",
            ExampleName::M1Free => "M1Free",
            ExampleName::MB => "MB",
            ExampleName::KleinFree => "KleinFree",
            ExampleName::ProjPlaneOne => "ProjPlaneOne",
        }
    }
}

impl FromStr for ExampleName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ExampleName::ALL
            .into_iter()
            .find(|n| n.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::UnknownExample(s.to_string()))
    }
}

fn signed(label: String, plus: bool) -> String {
    if plus {
        label
    } else {
        format!("-{label}")
    }
}

fn unit(p: OddPrime, i: u32) -> Result<u32> {
    let i = i % p.get();
    if i == 0 {
        Err(Error::MalformedRotation { value: i, p: p.get() })
    } else {
        Ok(i)
    }
}

/// Sphere as a north p-gon, a ring of p quads and a south p-gon, rotated so
/// the north pole has Ding value `i`. Face 0 is north, face `p + 1` south,
/// faces `1..=p` the quads.
pub fn sphere(p: OddPrime, i: u32) -> Result<GluingScheme> {
    let n = p.get();
    let s = p.inverse(unit(p, i)?).expect("unit");
    let mut faces = vec![(0..n).map(|k| format!("a{k}")).collect::<Vec<_>>()];
    for k in 0..n {
        faces.push(vec![
            format!("c{k}"),
            format!("w{}", (k + 1) % n),
            format!("-a{k}"),
            format!("-w{k}"),
        ]);
    }
    faces.push((0..n).rev().map(|k| format!("-c{k}")).collect());
    let mut action = vec![(0..n).map(|k| (0, (k + s) % n, false)).collect::<Vec<_>>()];
    for k in 0..n {
        action.push((0..4).map(|j| (1 + (k + s) % n, j, false)).collect());
    }
    action.push((0..n).map(|j| (n + 1, (j + n - s) % n, false)).collect());
    Ok(GluingScheme::new(p, faces, action))
}

pub fn sphere_north(_p: OddPrime) -> Cell {
    Cell { kind: CellKind::Face, dart: 0 }
}

pub fn sphere_south(p: OddPrime) -> Cell {
    Cell { kind: CellKind::Face, dart: 2 * (p.get() + 4 * p.get()) }
}

/// First dart of quad `k` of [`sphere`].
fn sphere_quad(p: OddPrime, k: u32) -> u32 {
    2 * (p.get() + 4 * k)
}

/// The 2p-gon with opposite sides identified, rotated so its centre has Ding
/// value `i`. Its two vertices carry darts 0 and 1.
pub fn poly1(p: OddPrime, i: u32) -> Result<GluingScheme> {
    let n = p.get();
    let c = p.inverse(unit(p, i)?).expect("unit");
    let face = (0..2 * n).map(|k| signed(format!("e{}", k % n + 1), k < n)).collect();
    let action = vec![(0..2 * n).map(|k| (0, (k + 2 * c) % (2 * n), false)).collect()];
    Ok(GluingScheme::new(p, vec![face], action))
}

/// The free torus: a cyclic strip of p squares.
pub fn m1_free(p: OddPrime) -> GluingScheme {
    let n = p.get();
    let faces = (0..n)
        .map(|k| {
            vec![
                format!("h{k}"),
                format!("v{}", (k + 1) % n),
                format!("-h{k}"),
                format!("-v{k}"),
            ]
        })
        .collect();
    let action = (0..n).map(|k| (0..4).map(|j| ((k + 1) % n, j, false)).collect()).collect();
    GluingScheme::new(p, faces, action)
}

/// Möbius band as p squares with a half twist, acted on by a shift of `i`
/// squares combined with a flip across the core circle.
pub fn mobius(p: OddPrime, i: u32) -> Result<GluingScheme> {
    let n = p.get();
    let i = unit(p, i)?;
    let shift = if i % 2 == 1 { i } else { i + n };
    let faces = (0..n)
        .map(|k| {
            let right = if k + 1 < n { format!("v{}", k + 1) } else { "-v0".to_string() };
            vec![format!("b{k}"), right, format!("-t{k}"), format!("-v{k}")]
        })
        .collect();
    let action = (0..n)
        .map(|k| {
            let m = k + shift;
            let target = m % n;
            if (m / n) % 2 == 0 {
                vec![(target, 2, true), (target, 1, true), (target, 0, true), (target, 3, true)]
            } else {
                (0..4).map(|j| (target, j, false)).collect()
            }
        })
        .collect();
    Ok(GluingScheme::new(p, faces, action))
}

/// Which closed surface a connected-sum summand is.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SummandShape {
    Orientable(u32),
    NonOrientable(u32),
}

/// p disjoint copies of a one-holed surface, cycled by the action. Returns
/// the map and one boundary dart of copy 0.
pub fn summand(p: OddPrime, shape: SummandShape) -> Result<(GMap, u32)> {
    let n = p.get();
    let word: Vec<(String, bool)> = match shape {
        SummandShape::Orientable(g) if g > 0 => (1..=g)
            .flat_map(|j| {
                [
                    (format!("a{j}"), true),
                    (format!("b{j}"), true),
                    (format!("a{j}"), false),
                    (format!("b{j}"), false),
                ]
            })
            .collect(),
        SummandShape::NonOrientable(r) if r > 0 => {
            (1..=r).flat_map(|j| [(format!("a{j}"), true), (format!("a{j}"), true)]).collect()
        }
        _ => return Err(Error::InvalidSummand(format!("{shape:?} has no handles"))),
    };
    let len = word.len() as u32;
    let faces = (0..n)
        .map(|copy| word.iter().map(|(l, plus)| signed(format!("{l}_{copy}"), *plus)).collect())
        .collect();
    let action = (0..n).map(|copy| (0..len).map(|k| ((copy + 1) % n, k, false)).collect()).collect();
    let mut g = GluingScheme::new(p, faces, action).to_gmap_parts()?;
    let darts: Vec<u32> = (0..n).map(|copy| 2 * copy * len).collect();
    let inner = g.hole_faces(&darts);
    Ok((g, inner[0]))
}

/// The ribbon piece: a sphere with its quad orbit removed. Returns the map,
/// one boundary dart of the circle replacing quad 0, and the north and south
/// pole cells (north has Ding `i`).
pub fn ribbon(p: OddPrime, i: u32) -> Result<(GMap, u32, Cell, Cell)> {
    let mut g = sphere(p, i)?.to_gmap()?;
    let quads: Vec<u32> = (0..p.get()).map(|k| sphere_quad(p, k)).collect();
    let inner = g.hole_faces(&quads);
    Ok((g, inner[0], sphere_north(p), sphere_south(p)))
}

/// The twisted-ribbon piece: [`poly1`] with its centre removed. Returns the
/// map, a boundary dart, and the two fixed vertices.
pub fn twisted_ribbon(p: OddPrime, centre: u32) -> Result<(GMap, u32, Cell, Cell)> {
    let mut g = poly1(p, centre)?.to_gmap()?;
    let inner = g.hole_faces(&[0]);
    let v = |dart| Cell { kind: CellKind::Vertex, dart };
    Ok((g, inner[0], v(0), v(1)))
}

/// The Möbius band piece with one boundary dart.
pub fn mobius_piece(p: OddPrime, i: u32) -> Result<(GMap, u32)> {
    let g = mobius(p, i)?.to_gmap()?;
    let b = (0..g.len() as u32).find(|&d| g.is_boundary(d)).expect("band has boundary");
    Ok((g, b))
}
