//! Exact simulation and measurement emulation for certifying Bell correlations
//! with variational quantum circuits.
//!
//! The crate is split along the experimental pipeline:
//!
//! - [`qsim`]: statevector simulator, Pauli-sum observables and a matrix-free
//!   ground-state solver.
//! - [`bell`]: Bell expressions, their quantum Bell operators, classical and
//!   k-nonlocal bounds, and Bell correlation depth certificates.
//! - [`vqc`]: ansatz circuits, parameter-shift gradients, Adam, and flat or
//!   layer-wise training loops.
//! - [`measure`]: parity-oscillation and multiple-quantum-coherence pipelines,
//!   readout errors and their mitigation.
//!
//! Qubit `q` is bit `q` of an amplitude index (qubit 0 is the least significant
//! bit). The same convention is used for Bell-expression parties, Pauli strings
//! and sampled bitstrings.

pub mod bell;
pub mod error;
pub mod measure;
pub mod qsim;
pub mod rng;
pub mod vqc;

pub use error::{Error, Result};
pub use num_complex::Complex64;
