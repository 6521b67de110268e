//! Exact statevector simulation.
//!
//! Amplitude index bit `q` is the computational-basis value of qubit `q`.
//! Gates act in place on a [`StateVector`]; observables are streamed over the
//! amplitudes without building matrices, so the simulator stays usable up to
//! [`MAX_QUBITS`] qubits. Dense constructions exist only as test oracles.

mod circuit;
mod eigen;
pub(crate) mod gate;
mod observable;
mod pauli;
mod state;

pub use circuit::{run_circuit, Circuit};
pub use eigen::{ground_energy, ground_energy_dense, ground_energy_with, LanczosConfig, LanczosOutcome};
pub use gate::{Angle, GateOp, Matrix2};
pub use observable::Observable;
pub use pauli::{Pauli, PauliString, PauliSum, PauliTerm};
pub use state::{histogram, init_state, sample_bitstrings, StateVector, MAX_QUBITS};

/// Below this many amplitudes kernels run sequentially.
pub(crate) const PAR_THRESHOLD: usize = 1 << 14;

/// Fixed reduction chunk. Partial sums are combined in chunk order, so results
/// do not depend on thread scheduling.
pub(crate) const REDUCE_CHUNK: usize = 1 << 12;
