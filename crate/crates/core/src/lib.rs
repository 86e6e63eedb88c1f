//! Finite, torsion and rational coefficient versions of graded homology-theory
//! values, computed exactly from finitely generated abelian group data.
//!
//! The [`fgab`] module is the integer linear algebra underneath everything;
//! [`theory`] holds graded periodic group data and mapping cones;
//! [`coefficients`] builds mod-q, torsion and rational theories and the exact
//! sequences relating them; [`transform`] checks natural-transformation samples.

pub mod admissible;
pub mod arith;
pub mod cli;
pub mod coefficients;
pub mod error;
pub mod fgab;
pub mod random;
pub mod theory;
pub mod transform;
pub mod wire;

pub use error::{Error, Result};
