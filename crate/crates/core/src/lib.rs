//! Exact computations around Hurwitz numbers and the tautological ring of
//! the moduli space of stable pointed curves.
//!
//! * [`symmetric`]: partitions, permutations, cycle types.
//! * [`hurwitz`]: Hurwitz numbers by exhaustive enumeration and by a
//!   class-algebra recursion.
//! * [`elsv`]: both sides of the ELSV formula, and recovery of linear Hodge
//!   integrals by exact interpolation of Hurwitz data.
//! * [`graphs`]: stable dual graphs, trivalent top strata, the duality move
//!   and move-connectivity certificates.
//! * [`chain`]: covers of a chain of rational curves and their stabilized
//!   dual graphs.
//!
//! All arithmetic is exact; see [`scalar`].

pub mod chain;
pub mod elsv;
pub mod error;
pub mod graphs;
pub mod hurwitz;
pub mod linalg;
pub mod manifest;
pub mod parallel;
pub mod scalar;
pub mod symmetric;

pub use error::{Error, Result};
pub use scalar::Scalar;
