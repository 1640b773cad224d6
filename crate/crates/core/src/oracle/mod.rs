//! Explicit cell-complex models of surfaces with an order-p symmetry, used
//! as an independent check on the symbolic calculus.

pub mod check;
pub mod gmap;
pub mod pieces;
pub mod realize;
pub mod scheme;
pub mod surgery;

pub use check::{run_oracle_check, CheckScope, CheckSummary};
pub use gmap::{Cell, CellKind, Direction, GMap};
pub use pieces::ExampleName;
pub use realize::{build_example, realize, Realized};
pub use scheme::{
    beta_genus, fixed_point_report, invariant_record, BetaGenus, FixedPointEntry, FixedPointReport,
    GluingScheme,
};
pub use surgery::{scheme_surgery, tr_rotation_table, SchemeSurgeryKind, SchemeSurgeryPlan};
