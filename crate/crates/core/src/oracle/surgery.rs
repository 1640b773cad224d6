//! Equivariant cut-and-paste on generalized maps.
//!
//! Every surgery removes equivariant disks from the surface (a free orbit of
//! faces, or one fixed cell), then sews in a piece along the new boundary.
//! Boundary walks are subdivided to a common length first. Where the piece
//! comes in a family (rotation parameter, gluing direction) the search keeps
//! the first candidate that is equivariant, preferring an orientable result
//! when both sides are orientable.

use num_integer::Integer;

use super::gmap::{Cell, CellKind, Direction, GMap};
use super::pieces::{self, SummandShape};
use super::scheme::GluingScheme;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SchemeSurgeryKind {
    ConnSum(SummandShape),
    PlusRibbon(u32),
    PlusTwisted,
    PlusFmb,
}

/// The cells taking part in a surgery.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SchemeSurgeryPlan {
    /// The free orbit of the face through this dart.
    FreeFaces(u32),
    FixedCell(Cell),
}

/// The sewn map plus the new fixed cells the piece brought along.
#[derive(Clone, Debug)]
pub struct SurgeryOutcome {
    pub gmap: GMap,
    pub new_cells: Vec<Cell>,
}

/// Faces not fixed by the action, as the least dart of each free orbit.
pub fn free_face_orbits(g: &GMap) -> Vec<u32> {
    let (labels, _) = g.cell_labels(&[0, 1]);
    let mut seen = std::collections::HashSet::new();
    let mut out = Vec::new();
    for d in 0..g.len() as u32 {
        let l = labels[d as usize];
        if labels[g.phi(d) as usize] == l || !seen.insert(l) {
            continue;
        }
        for x in g.phi_orbit(d) {
            seen.insert(labels[x as usize]);
        }
        out.push(d);
    }
    out
}

fn check_plan(g: &GMap, plan: SchemeSurgeryPlan, kind: SchemeSurgeryKind) -> Result<()> {
    let violation = |m: &str| Err(Error::PlanViolation(m.to_string()));
    match (kind, plan) {
        (SchemeSurgeryKind::ConnSum(_) | SchemeSurgeryKind::PlusRibbon(_), SchemeSurgeryPlan::FreeFaces(d)) => {
            if d as usize >= g.len() {
                return violation("dart out of range");
            }
            let face = g.orbit(d, &[0, 1]);
            if face.contains(&g.phi(d)) {
                return violation("face is fixed, not part of a free orbit");
            }
            Ok(())
        }
        (SchemeSurgeryKind::PlusTwisted | SchemeSurgeryKind::PlusFmb, SchemeSurgeryPlan::FixedCell(c)) => {
            if c.dart as usize >= g.len() || !g.is_fixed(c) {
                return violation("cell is not fixed by the action");
            }
            if c.kind == CellKind::Vertex && g.orbit(c.dart, &[1, 2]).iter().any(|&d| g.is_boundary(d)) {
                return violation("fixed vertex lies on the boundary");
            }
            Ok(())
        }
        _ => violation("a free orbit is needed for sums and ribbons, a fixed cell for twisted ribbons and bands"),
    }
}

/// Remove a fixed cell; returns a dart on the new boundary circle.
fn remove_fixed(g: &mut GMap, cell: Cell) -> u32 {
    match cell.kind {
        CellKind::Vertex => g.truncate_vertex(cell.dart),
        CellKind::Face => g.hole_faces(&[cell.dart])[0],
    }
}

/// Sew walks `a` (on the host) to walks `b` (on the piece), walk `k` to walk
/// `k`. Both lists are `φ`-closed. Returns `None` when the shifts of fixed
/// circles cannot be matched in this direction.
fn sew(g: &GMap, a: &[Vec<u32>], b: &[Vec<u32>], dir: Direction) -> Option<GMap> {
    let (la, lb) = (a[0].len(), b[0].len());
    let l = la.lcm(&lb);
    let mut g = g.clone();
    let a = g.subdivide(a, (l / la) as u32);
    let b = g.subdivide(b, (l / lb) as u32);
    if a.len() == 1 {
        let sa = g.walk_shift(&a[0])?;
        let sb = g.walk_shift(&b[0])?;
        let ok = match dir {
            Direction::Same => sa == sb,
            Direction::Reversed => (sa + sb) % l == 0,
        };
        if !ok {
            return None;
        }
    }
    for (x, y) in a.iter().zip(&b) {
        g.glue(x, y, dir);
    }
    Some(g)
}

/// Walks of the `φ`-images of the circle through `b`.
fn orbit_walks(g: &GMap, b: u32, free: bool) -> Vec<Vec<u32>> {
    if free {
        g.phi_orbit(b).into_iter().map(|x| g.boundary_walk(x)).collect()
    } else {
        vec![g.boundary_walk(b)]
    }
}

struct Candidate {
    gmap: GMap,
    new_cells: Vec<Cell>,
}

fn pick(mut found: Vec<Candidate>, want_orientable: bool) -> Result<SurgeryOutcome> {
    let idx = if want_orientable {
        found.iter().position(|c| c.gmap.is_orientable()).unwrap_or(0)
    } else {
        0
    };
    if found.is_empty() {
        return Err(Error::PlanViolation("no equivariant gluing exists".into()));
    }
    let c = found.swap_remove(idx);
    c.gmap.validate()?;
    Ok(SurgeryOutcome { gmap: c.gmap, new_cells: c.new_cells })
}

pub fn gmap_surgery(g: &GMap, plan: SchemeSurgeryPlan, kind: SchemeSurgeryKind) -> Result<SurgeryOutcome> {
    check_plan(g, plan, kind)?;
    let p = g.p;
    let orientable = g.is_orientable();
    let mut host = g.clone();
    let (host_dart, free) = match plan {
        SchemeSurgeryPlan::FreeFaces(d) => {
            let orbit = host.phi_orbit(d);
            (host.hole_faces(&orbit)[0], true)
        }
        SchemeSurgeryPlan::FixedCell(c) => (remove_fixed(&mut host, c), false),
    };

    let mut found = Vec::new();
    let mut try_piece = |piece: &GMap, piece_dart: u32, cells: &[Cell]| {
        let mut joined = host.clone();
        let off = joined.append(piece);
        let a = orbit_walks(&joined, host_dart, free);
        let b = orbit_walks(&joined, piece_dart + off, free);
        for dir in [Direction::Same, Direction::Reversed] {
            if let Some(gm) = sew(&joined, &a, &b, dir) {
                let new_cells = cells.iter().map(|c| Cell { kind: c.kind, dart: c.dart + off }).collect();
                found.push(Candidate { gmap: gm, new_cells });
            }
        }
    };
    match kind {
        SchemeSurgeryKind::ConnSum(shape) => {
            let (piece, b) = pieces::summand(p, shape)?;
            try_piece(&piece, b, &[]);
        }
        SchemeSurgeryKind::PlusRibbon(i) => {
            let (piece, b, north, south) = pieces::ribbon(p, i)?;
            try_piece(&piece, b, &[north, south]);
        }
        SchemeSurgeryKind::PlusTwisted => {
            for c in p.units() {
                let (piece, b, va, vb) = pieces::twisted_ribbon(p, c)?;
                try_piece(&piece, b, &[va, vb]);
            }
        }
        SchemeSurgeryKind::PlusFmb => {
            for i in p.units() {
                let (piece, b) = pieces::mobius_piece(p, i)?;
                try_piece(&piece, b, &[]);
            }
        }
    }
    let mut out = pick(found, orientable)?;
    if let SchemeSurgeryKind::PlusRibbon(i) = kind {
        // The ribbon's north pole is the one with Ding value i.
        if out.gmap.is_orientable() && out.gmap.cell_rotation(out.new_cells[0]) != Some(i % p.get()) {
            out.new_cells.swap(0, 1);
        }
    }
    Ok(out)
}

pub fn scheme_surgery(
    scheme: &GluingScheme,
    plan: SchemeSurgeryPlan,
    kind: SchemeSurgeryKind,
) -> Result<GluingScheme> {
    let g = scheme.to_gmap()?;
    GluingScheme::from_gmap(&gmap_surgery(&g, plan, kind)?.gmap)
}

/// Ding values at the two fixed vertices of the twisted ribbon that is sewn
/// in at a fixed point of Ding value `i`.
pub fn tr_rotation_table(p: crate::invariant::OddPrime, i: u32) -> Result<(u32, u32)> {
    let centre = p.neg(i % p.get());
    let (g, _, va, vb) = pieces::twisted_ribbon(p, centre)?;
    let colors = g.orientation();
    let r = |c| g.rotation(c, colors.as_deref()).expect("fixed interior vertex");
    let (a, b) = (r(va), r(vb));
    Ok((a.min(b), a.max(b)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::invariant::OddPrime;
    use crate::oracle::scheme::{fixed_point_report, invariant_record};

    fn p(n: u32) -> OddPrime {
        OddPrime::new(n).unwrap()
    }

    #[test]
    fn tr_table_values() {
        assert_eq!(tr_rotation_table(p(3), 2).unwrap(), (1, 1));
        assert_eq!(tr_rotation_table(p(3), 1).unwrap(), (2, 2));
        for q in [5, 7, 11] {
            let q = p(q);
            for i in q.units() {
                let (a, b) = tr_rotation_table(q, i).unwrap();
                assert_eq!((a + b) % q.get(), i);
            }
        }
        // p = 5, i = 1: both vertices carry 3 since 3 + 3 = 6 = 1 mod 5.
        assert_eq!(tr_rotation_table(p(5), 1).unwrap(), (3, 3));
    }

    #[test]
    fn sphere_plus_twisted_is_poly1() {
        let q = p(3);
        let s = pieces::sphere(q, 1).unwrap();
        let south = pieces::sphere_south(q);
        let out = scheme_surgery(&s, SchemeSurgeryPlan::FixedCell(south), SchemeSurgeryKind::PlusTwisted).unwrap();
        let rec = invariant_record(&out.to_gmap().unwrap()).unwrap();
        assert_eq!((rec.orientable, rec.beta, rec.fixed_points), (true, 2, 3));
        assert_eq!(rec.rotations, Some(vec![1, 1, 1]));
    }

    #[test]
    fn sphere_plus_two_bands_is_free_klein_bottle() {
        let q = p(3);
        let g = pieces::sphere(q, 1).unwrap().to_gmap().unwrap();
        let once = gmap_surgery(&g, SchemeSurgeryPlan::FixedCell(pieces::sphere_north(q)), SchemeSurgeryKind::PlusFmb)
            .unwrap();
        let r1 = invariant_record(&once.gmap).unwrap();
        assert_eq!((r1.orientable, r1.beta, r1.fixed_points), (false, 1, 1));
        let twice = gmap_surgery(
            &once.gmap,
            SchemeSurgeryPlan::FixedCell(pieces::sphere_south(q)),
            SchemeSurgeryKind::PlusFmb,
        )
        .unwrap();
        let r2 = invariant_record(&twice.gmap).unwrap();
        assert_eq!((r2.orientable, r2.beta, r2.fixed_points), (false, 2, 0));
    }

    #[test]
    fn ribbon_and_sum_deltas() {
        for q in [p(3), p(5)] {
            let g = pieces::m1_free(q).to_gmap().unwrap();
            let orbits = free_face_orbits(&g);
            let r = gmap_surgery(&g, SchemeSurgeryPlan::FreeFaces(orbits[0]), SchemeSurgeryKind::PlusRibbon(1)).unwrap();
            let rec = invariant_record(&r.gmap).unwrap();
            assert_eq!((rec.orientable, rec.beta, rec.fixed_points), (true, 2 + 2 * (q.get() as u64 - 1), 2));
            assert_eq!(r.gmap.cell_rotation(r.new_cells[0]), Some(1));
            assert_eq!(r.gmap.cell_rotation(r.new_cells[1]), Some(q.get() - 1));
            let s = gmap_surgery(
                &g,
                SchemeSurgeryPlan::FreeFaces(orbits[0]),
                SchemeSurgeryKind::ConnSum(SummandShape::NonOrientable(1)),
            )
            .unwrap();
            let rec = invariant_record(&s.gmap).unwrap();
            assert_eq!((rec.orientable, rec.beta, rec.fixed_points), (false, 2 + q.get() as u64, 0));
        }
    }

    #[test]
    fn plan_violations() {
        let q = p(3);
        let g = pieces::sphere(q, 1).unwrap().to_gmap().unwrap();
        let err = gmap_surgery(&g, SchemeSurgeryPlan::FreeFaces(0), SchemeSurgeryKind::PlusRibbon(1));
        assert!(matches!(err, Err(Error::PlanViolation(_))));
        let quad = Cell { kind: CellKind::Face, dart: 6 };
        let err = gmap_surgery(&g, SchemeSurgeryPlan::FixedCell(quad), SchemeSurgeryKind::PlusTwisted);
        assert!(matches!(err, Err(Error::PlanViolation(_))));
        assert_eq!(fixed_point_report(&g).points.len(), 2);
    }
}
