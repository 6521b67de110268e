use num_complex::Complex64;

use super::state::StateVector;
use crate::Result;

/// A Hermitian operator that can be evaluated on, and applied to, a register.
pub trait Observable: Sync {
    fn num_qubits(&self) -> usize;

    /// `⟨ψ|O|ψ⟩`.
    fn expectation(&self, state: &StateVector) -> Result<f64>;

    /// `output = O·input` on raw amplitude vectors of length `2^num_qubits`.
    fn apply(&self, input: &[Complex64], output: &mut [Complex64]);
}
