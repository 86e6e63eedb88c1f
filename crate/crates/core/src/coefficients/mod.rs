//! Mod-q, torsion and rational coefficient theories and their exact sequences.

mod modq;
mod products;
mod torsion;

pub use modq::{
    annihilator_bound, build_mod_q_sequence, build_pq_sequence, mod_q, order_bound_check, pq_maps,
    transition, DegreeExponent, ModQTheory, OrderBoundReport, PqMaps,
};
pub use products::{
    mod_pq_product_check, rational_product_transport, BilinearBlock, ContractItem, ContractReport, Element, Pairing,
    ProductData, RationalPairing, TransportReport, Triple,
};
pub use torsion::{
    build_qz_bockstein_sequence, build_rational_torsion_sequence, colimit_oracle, rational, torsion,
    Chain, DivisibilityIndex, TorsionTheory,
};
