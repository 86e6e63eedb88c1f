//! Periodic graded group data, mapping cones and the algebra catalog.

mod catalog;
mod cone;
mod graded;
mod sequence;

pub use catalog::{Catalog, CatalogEntry};
pub use cone::{
    cone_algebra, cone_comparison_map, mapping_cone, mapping_cone_bounded, power_map, tensor_cone_q,
    MappingCone,
};
pub use graded::{DegreewiseMap, GradedTheory, Period, TheoryWire};
pub use sequence::{LongSequence, NodeVerdict, SequenceReport};
