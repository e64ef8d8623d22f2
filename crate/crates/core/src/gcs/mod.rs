//! Pure spinors: purity, type, nondegeneracy, integrability and the
//! associated complex structure on `T ⊕ T*`.
//!
//! Nondegeneracy of `exp(B+iω)∧Ω` is `ω^{n−k}∧Ω∧Ω̄ ≠ 0` in real dimension
//! `2n`; this is the exponent that makes the degrees add up to `2n`.

mod frames;
mod integrability;
mod jop;
mod spinor;

pub use frames::{ideal_membership, normalize_theta, projective_ratio, projectively_equal};
pub use integrability::{
    check_ansatz, check_gcs, integrability_solve, involutivity_check, GcsReport, IntegrabilitySolution, Verdict,
};
pub use jop::{j_operator, JOperator};
pub use spinor::{
    annihilator, ansatz_to_form, is_pure, mukai_constant, nondegenerate_ansatz, nondegenerate_form, type_of,
    AnnihilatorBasis, PureSpinorAnsatz,
};
