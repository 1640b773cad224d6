//! Equivariant surgery calculus for closed surfaces carrying an action of a
//! cyclic group of odd prime order.
//!
//! * [`invariant`]: primes, rotation data, invariant records and validation.
//! * [`surgery`]: surgery words, their record-level evaluation, the canonical
//!   families and normalization.
//! * [`orbit`]: mapping class group generators over Z/p and exhaustive orbit
//!   enumeration.
//! * [`oracle`]: an independent combinatorial model (generalized maps with an
//!   explicit order-p symmetry) used to cross-check the symbolic layer.

pub mod error;
pub mod invariant;
pub mod orbit;
pub mod oracle;
pub mod surgery;

pub use error::{Error, Result};
pub use invariant::{
    canonicalize_rotations, euler_characteristic, validate, InvariantRecord, OddPrime,
    RotationClass, RotationMultiset, Rule, Verdict, Warning,
};
