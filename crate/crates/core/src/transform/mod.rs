//! Natural-transformation samples and the integral/rational/finite equivalence checker.

mod equivalence;
mod sample;

pub use equivalence::{
    equivalence_report, induce_mod_q, induce_mod_q_case, induce_rational, induce_torsion,
    relevant_primes, soundness_spot_check, CaseReport, EquivalenceReport, RationalVerdict,
    TorsionVerdict,
};
pub use sample::{Role, TransformCase, TransformationSample};
