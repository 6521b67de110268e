//! Bell expressions, their quantum Bell operators, and the bounds used to
//! certify Bell correlations and Bell correlation depth.
//!
//! An expression is a weighted sum of correlators `⟨A_{p₁,x₁}⋯A_{p_k,x_k}⟩`.
//! Substituting one ±1-valued qubit observable per party and setting (a
//! [`MeasurementAssignment`]) turns it into a Bell operator whose expectation
//! is the energy; a value below the expression's classical bound cannot come
//! from a local hidden-variable model.

mod depth;
mod expression;
mod lattice;
mod lhv;
mod models;

pub use depth::{certify_depth, k_nonlocal_bound, DepthCertificate, GhzBellOperator, KMargin};
pub use expression::{
    bell_operator_dense, bell_operator_pauli, BellExpression, BlochVector, Correlator, MeasurementAssignment, Terms,
};
pub use lattice::{HoneycombLattice, Link, LinkColor, Sublattice};
pub use lhv::{lhv_bound_bruteforce, MAX_LHV_BITS};
pub use models::{
    build_chain_expression, build_chain_hamiltonian, build_chsh_expression, build_gisin_expression,
    build_honeycomb_expression, build_honeycomb_hamiltonian, build_mermin_expression, build_svetlichny_expression,
    chain_coupling, classical_bound_chain, ghz_bell_operator_dense, honeycomb_coupling, honeycomb_settings,
    MAX_MULTIPARTITE,
};
