//! Mapping class group generators acting on first homology mod p, and
//! exhaustive orbit enumeration.

pub mod engine;
pub mod matrix;

pub use engine::{
    default_budget, orbit_count, orbit_count_seeded, orbit_of, orbit_of_with, orbit_partition,
    Codec, OrbitReport, SurfaceModel, BUDGET_ENV, DEFAULT_BUDGET,
};
pub use matrix::{
    crosscap_slide_matrix, dehn_twist_matrix, psi_matrix, symplectic_generators, CrosscapBasis,
    GeneratorMatrix,
};
