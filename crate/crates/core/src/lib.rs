//! Exact Rényi–Parry densities for β-transformations `x ↦ βx mod 1`.
//!
//! The crate computes the orbit of 1 exactly in a real algebraic number
//! field, builds the invariant density as a right-continuous step function,
//! certifies invariance under the transfer operator, and decides when two
//! bases share the same invariant measure.

pub mod coincidence;
pub mod density;
pub mod dynamics;
pub mod error;
pub mod exactnum;
pub mod harness;
pub mod transfer;

pub use error::{Error, Result};
