//! Symbolic layer: surgery words, record-level surgery, families and
//! normalization.

pub mod family;
pub mod normalize;
pub mod ops;
pub mod random;
pub mod syntax;
pub mod word;

pub use family::{atlas, classify, AtlasRow, Classification, Family, FamilyClass};
pub use normalize::normalize;
pub use ops::{
    apply_conn_sum, apply_fmb, apply_mbf, apply_minus_ribbon, apply_minus_twisted,
    apply_plus_ribbon, apply_plus_twisted, Connectivity, Orientability, Summand,
};
pub use syntax::{parse, print};
pub use word::{evaluate, trace, BaseSpace, Selector, SurfaceState, SurgeryStep, SurgeryWord};
