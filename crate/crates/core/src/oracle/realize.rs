//! Executing surgery words on explicit maps.
//!
//! Fixed points are tracked by role so selectors can be resolved, but every
//! rotation value reported comes from the cells of the final map.

use super::gmap::{Cell, CellKind, GMap};
use super::pieces::{self, ExampleName, SummandShape};
use super::scheme::{invariant_record, GluingScheme};
use super::surgery::{free_face_orbits, gmap_surgery, SchemeSurgeryKind, SchemeSurgeryPlan};
use crate::error::{Error, Result};
use crate::invariant::{InvariantRecord, OddPrime};
use crate::surgery::word::Role;
use crate::surgery::{trace, BaseSpace, Summand, SurgeryStep, SurgeryWord};

/// A map with named fixed cells.
#[derive(Clone, Debug)]
pub struct Realized {
    pub gmap: GMap,
    pub roles: Vec<(Role, Cell)>,
}

/// Which free face orbit sums and ribbons use.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum DiskChoice {
    #[default]
    First,
    Last,
}

impl Realized {
    fn cell(&self, role: Role) -> Result<Cell> {
        self.roles
            .iter()
            .find(|(r, _)| *r == role)
            .map(|&(_, c)| c)
            .ok_or_else(|| Error::PlanViolation(format!("no fixed cell with role {role:?}")))
    }

    fn fixed_surgery(&mut self, role: Role, kind: SchemeSurgeryKind) -> Result<Vec<Cell>> {
        let cell = self.cell(role)?;
        let out = gmap_surgery(&self.gmap, SchemeSurgeryPlan::FixedCell(cell), kind)?;
        self.gmap = out.gmap;
        self.roles.retain(|(r, _)| *r != role);
        Ok(out.new_cells)
    }

    fn free_surgery(&mut self, kind: SchemeSurgeryKind, choice: DiskChoice) -> Result<Vec<Cell>> {
        let mut orbits = free_face_orbits(&self.gmap);
        if orbits.is_empty() {
            self.refine_some_face();
            orbits = free_face_orbits(&self.gmap);
        }
        let d = match choice {
            DiskChoice::First => orbits[0],
            DiskChoice::Last => *orbits.last().expect("refinement creates free faces"),
        };
        let out = gmap_surgery(&self.gmap, SchemeSurgeryPlan::FreeFaces(d), kind)?;
        self.gmap = out.gmap;
        Ok(out.new_cells)
    }

    /// Every face is fixed: split one into a ring of free quads around a new
    /// centre face.
    fn refine_some_face(&mut self) {
        let face = Cell { kind: CellKind::Face, dart: 0 };
        let moved: Vec<bool> = self.roles.iter().map(|(_, c)| self.gmap.same_cell(*c, face)).collect();
        let centre = self.gmap.refine_face(0);
        for ((_, c), moved) in self.roles.iter_mut().zip(moved) {
            if moved {
                *c = Cell { kind: CellKind::Face, dart: centre };
            }
        }
    }

    pub fn record(&self) -> Result<InvariantRecord> {
        invariant_record(&self.gmap)
    }

    /// Ding value of the cell holding `role`.
    pub fn role_rotation(&self, role: Role) -> Result<Option<u32>> {
        Ok(self.gmap.cell_rotation(self.cell(role)?))
    }
}

fn sphere_state(p: OddPrime, i: u32) -> Result<Realized> {
    Ok(Realized {
        gmap: pieces::sphere(p, i)?.to_gmap()?,
        roles: vec![(Role::BaseNorth, pieces::sphere_north(p)), (Role::BaseSouth, pieces::sphere_south(p))],
    })
}

pub fn realize_base(p: OddPrime, base: BaseSpace) -> Result<Realized> {
    match base {
        BaseSpace::M1Free => Ok(Realized { gmap: pieces::m1_free(p).to_gmap()?, roles: vec![] }),
        BaseSpace::Sphere(i) => sphere_state(p, i),
        BaseSpace::KleinFree(i) => {
            let mut r = sphere_state(p, i)?;
            r.fixed_surgery(Role::BaseNorth, SchemeSurgeryKind::PlusFmb)?;
            r.fixed_surgery(Role::BaseSouth, SchemeSurgeryKind::PlusFmb)?;
            Ok(r)
        }
        BaseSpace::ProjPlaneOne(i) => {
            let mut r = sphere_state(p, i)?;
            r.fixed_surgery(Role::BaseSouth, SchemeSurgeryKind::PlusFmb)?;
            Ok(r)
        }
        BaseSpace::Poly { n, i } => {
            if n == 0 {
                return Err(Error::SurgeryUndefined("Poly needs n >= 1".into()));
            }
            let mut r = sphere_state(p, i)?;
            let mut north = Role::BaseNorth;
            let mut south = Role::BaseSouth;
            let mut roles = Vec::new();
            for layer in 0..n {
                if layer > 0 {
                    let cells = r.free_surgery(SchemeSurgeryKind::PlusRibbon(i), DiskChoice::First)?;
                    north = Role::RibbonNorth(layer);
                    south = Role::RibbonSouth(layer);
                    r.roles.push((north, cells[0]));
                    r.roles.push((south, cells[1]));
                }
                let twists = r.fixed_surgery(south, SchemeSurgeryKind::PlusTwisted)?;
                let top = r.cell(north)?;
                r.roles.retain(|(role, _)| *role != north);
                roles.push((Role::PolyVertex(3 * layer + 1), top));
                roles.push((Role::PolyVertex(3 * layer + 2), twists[0]));
                roles.push((Role::PolyVertex(3 * layer + 3), twists[1]));
            }
            r.roles = roles;
            Ok(r)
        }
    }
}

/// Run a word with plus surgeries only. Selectors are resolved through the
/// symbolic trace, which names the role each one targets.
pub fn realize_with(word: &SurgeryWord, choice: DiskChoice) -> Result<Realized> {
    let states = trace(word)?;
    let p = word.p;
    let mut r = realize_base(p, word.base)?;
    let mut ribbons = 0;
    let mut twists = 0;
    for (index, step) in word.steps.iter().enumerate() {
        let state = &states[index];
        let mut run = |r: &mut Realized| -> Result<()> {
            match *step {
                SurgeryStep::ConnSum(Summand::Orientable(0)) => {}
                SurgeryStep::ConnSum(s) => {
                    let shape = match s {
                        Summand::Orientable(g) => SummandShape::Orientable(g),
                        Summand::NonOrientable(k) => SummandShape::NonOrientable(k),
                    };
                    r.free_surgery(SchemeSurgeryKind::ConnSum(shape), choice)?;
                }
                SurgeryStep::PlusRibbon(i) => {
                    let cells = r.free_surgery(SchemeSurgeryKind::PlusRibbon(i), choice)?;
                    ribbons += 1;
                    r.roles.push((Role::RibbonNorth(ribbons), cells[0]));
                    r.roles.push((Role::RibbonSouth(ribbons), cells[1]));
                }
                SurgeryStep::PlusTwisted(sel) => {
                    let role = state.points[state.resolve(sel)?].role;
                    let cells = r.fixed_surgery(role, SchemeSurgeryKind::PlusTwisted)?;
                    twists += 1;
                    r.roles.push((Role::TwistA(twists), cells[0]));
                    r.roles.push((Role::TwistB(twists), cells[1]));
                }
                SurgeryStep::PlusFmb(sel) => {
                    let role = state.points[state.resolve(sel)?].role;
                    r.fixed_surgery(role, SchemeSurgeryKind::PlusFmb)?;
                }
                SurgeryStep::MinusRibbon | SurgeryStep::MinusTwisted | SurgeryStep::PlusMbf => {
                    return Err(Error::PlanViolation(
                        "only plus surgeries run on explicit maps".into(),
                    ))
                }
            }
            Ok(())
        };
        run(&mut r).map_err(|e| e.at_step(index))?;
    }
    Ok(r)
}

pub fn realize(word: &SurgeryWord) -> Result<Realized> {
    realize_with(word, DiskChoice::First)
}

/// Named example surface. `i` is the rotation parameter where one applies.
pub fn build_example(name: ExampleName, p: OddPrime, i: u32) -> Result<GluingScheme> {
    let from = |g: &GMap| GluingScheme::from_gmap(g);
    match name {
        ExampleName::Sphere => pieces::sphere(p, i),
        ExampleName::Poly1 => pieces::poly1(p, i),
        ExampleName::TR => from(&pieces::twisted_ribbon(p, i)?.0),
        ExampleName::Rp => from(&pieces::ribbon(p, i)?.0),
        ExampleName::M1Free => Ok(pieces::m1_free(p)),
        ExampleName::MB => pieces::mobius(p, i),
        ExampleName::KleinFree => from(&realize_base(p, BaseSpace::KleinFree(i))?.gmap),
        ExampleName::ProjPlaneOne => from(&realize_base(p, BaseSpace::ProjPlaneOne(i))?.gmap),
    }
}
