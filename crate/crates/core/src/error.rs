use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// The request exceeds what can be represented or enumerated.
    #[error("capacity exceeded: {0}")]
    Capacity(String),

    #[error("qubit index {index} out of range for {num_qubits} qubits")]
    InvalidQubit { index: usize, num_qubits: usize },

    #[error("gate targets must be distinct, got {0} twice")]
    DuplicateTarget(usize),

    #[error("gate has an unbound parameter slot but no angle was supplied")]
    MissingAngle,

    #[error("an angle was supplied for a gate without a parameter slot")]
    UnexpectedAngle,

    #[error("expected {expected} parameters, got {got}")]
    ParamLength { expected: usize, got: usize },

    #[error("qubit count mismatch: expected {expected}, got {got}")]
    QubitMismatch { expected: usize, got: usize },

    #[error("parameter slot {0} is not bound by any gate")]
    UnusedSlot(usize),

    #[error("gate {0} is not eligible for the parameter-shift rule")]
    UnsupportedGate(String),

    #[error("iterative eigensolver did not converge after {iterations} iterations (residual {residual:e})")]
    NotConverged { iterations: usize, residual: f64 },

    #[error("invalid lattice: {0}")]
    InvalidLattice(String),

    #[error("invalid readout model: {0}")]
    InvalidModel(String),

    #[error("non-finite value encountered: {0}")]
    NonFinite(String),

    #[error("signal settings do not match the expected grid: {0}")]
    SettingsMismatch(String),

    #[error("signals are inconsistent: {0}")]
    SignalsInconsistent(String),

    #[error("sinusoid fit failed: {0}")]
    Fit(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
