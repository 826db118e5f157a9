//! Algebraic Jacobi functions: evaluation, ladder algebra, multiplication
//! rules and harmonic analysis on `[-1, 1]` and on the three-sphere.

pub mod ajf;
pub mod algebra;
pub mod analysis;
pub mod error;
pub mod lattice;
pub mod multiplication;

pub use ajf::{Basis, ChiRange};
pub use error::{Error, Result};
pub use lattice::{IndexTriple, Sector};
