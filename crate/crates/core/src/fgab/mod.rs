//! Exact calculus of finitely generated abelian groups.

mod bifunctor;
mod exact;
mod extension;
mod group;
mod hom;
pub(crate) mod lattice;
mod matrix;
mod snf;
mod sum;

pub use bifunctor::{tensor, tor};
pub use exact::{verify_exact, ExactnessReport, NodeExactness};
pub use extension::{lr_positive, partitions, solve_extension, ExtensionMode, ExtensionResolution};
pub use group::{group_from_presentation, Canonical, FgAbGroup, GroupSpec, Presentation};
pub use hom::{add_homs, multiplication_hom, GroupHom};
pub use matrix::IntMatrix;
pub use snf::{smith_normal_form, SmithNormalForm};
pub use sum::DirectSum;
