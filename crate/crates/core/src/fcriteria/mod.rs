//! Splitting criteria for triples `(R, Δ, a^λ)` at the distinguished point.

mod criteria;
mod oracle;
mod ring;
mod testelem;

pub use criteria::{
    a_exponent, ceil_mul, check_witness, delta_factor, fpt_lower_bound, frobenius_colon, nu_value, point_bracket,
    sharply_fpure, strongly_fregular, FPurity, Regularity, SplittingWitness,
};
pub(crate) use criteria::search_witness;
pub use oracle::{default_degree_bound, find_weights, splitting_oracle, OracleVerdict};
pub use ring::{DivisorComponent, DivisorData, RingPresentation, TripleSpec};
pub use testelem::{in_radical, is_nonzerodivisor, jacobian_minors, suggest_test_elements};
