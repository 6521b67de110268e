use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::gradient::adjoint_gradient;
use crate::qsim::{Circuit, Observable, Pauli, PauliSum, StateVector};
use crate::rng::SeedStream;
use crate::{Error, Result};

/// One energy evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub energy: f64,
    pub energy_std: f64,
    /// Circuit executions consumed (0 in exact mode).
    pub shots: usize,
}

impl Estimate {
    pub fn exact(energy: f64) -> Self {
        Self {
            energy,
            energy_std: 0.0,
            shots: 0,
        }
    }
}

/// Maps circuit parameters to an energy, exactly or from emulated shots.
///
/// Every stochastic estimator must draw only from `stream`, so equal streams
/// give bit-identical results.
pub trait EnergyEstimator: Sync {
    fn num_qubits(&self) -> usize;

    fn estimate(&self, circuit: &Circuit, params: &[f64], stream: &SeedStream) -> Result<Estimate>;

    /// Whether repeated evaluations of the same point agree exactly.
    fn is_exact(&self) -> bool;

    /// An exact gradient over `slots`, for estimators that can compute one
    /// more cheaply than by shifted re-evaluation. `None` makes the training
    /// loop fall back to the parameter-shift rule.
    fn analytic_gradient(&self, _circuit: &Circuit, _params: &[f64], _slots: &[usize]) -> Option<Result<Vec<f64>>> {
        None
    }
}

/// `⟨ψ(θ)|O|ψ(θ)⟩` from the prepared statevector.
#[derive(Debug, Clone)]
pub struct ExactEstimator<O> {
    pub observable: O,
}

impl<O: Observable> ExactEstimator<O> {
    pub fn new(observable: O) -> Self {
        Self { observable }
    }
}

impl<O: Observable> EnergyEstimator for ExactEstimator<O> {
    fn num_qubits(&self) -> usize {
        self.observable.num_qubits()
    }

    fn estimate(&self, circuit: &Circuit, params: &[f64], _stream: &SeedStream) -> Result<Estimate> {
        let state = circuit.prepare(params)?;
        Ok(Estimate::exact(self.observable.expectation(&state)?))
    }

    fn analytic_gradient(&self, circuit: &Circuit, params: &[f64], slots: &[usize]) -> Option<Result<Vec<f64>>> {
        Some(adjoint_gradient(circuit, &self.observable, params, slots))
    }

    fn is_exact(&self) -> bool {
        true
    }
}

/// Terms that can be read off one measurement basis.
#[derive(Debug, Clone)]
struct BasisGroup {
    basis: Vec<Pauli>,
    /// `(coefficient, support mask)` of every term in the group.
    terms: Vec<(f64, u64)>,
}

/// Shot-based estimate of a Pauli sum: terms are greedily grouped into
/// qubit-wise commuting sets, each set is measured with `shots` shots in its
/// own basis, and the per-shot group values give mean and standard error.
#[derive(Debug, Clone)]
pub struct PauliShotEstimator {
    num_qubits: usize,
    constant: f64,
    groups: Vec<BasisGroup>,
    shots: usize,
}

impl PauliShotEstimator {
    pub fn new(h: &PauliSum, shots: usize) -> Result<Self> {
        if shots < 2 {
            return Err(Error::InvalidArgument(format!(
                "shot estimator needs at least 2 shots, got {shots}"
            )));
        }
        let n = h.num_qubits();
        let mut constant = 0.0;
        let mut groups: Vec<BasisGroup> = Vec::new();
        for t in h.simplified(0.0).terms() {
            let letters = t.string.letters();
            let mask = letters
                .iter()
                .enumerate()
                .filter(|(_, p)| **p != Pauli::I)
                .fold(0u64, |m, (q, _)| m | 1 << q);
            if mask == 0 {
                constant += t.coeff;
                continue;
            }
            let fits = |g: &BasisGroup| {
                letters
                    .iter()
                    .zip(&g.basis)
                    .all(|(p, b)| *p == Pauli::I || *b == Pauli::I || p == b)
            };
            match groups.iter_mut().find(|g| fits(g)) {
                Some(g) => {
                    for (b, p) in g.basis.iter_mut().zip(letters) {
                        if *p != Pauli::I {
                            *b = *p;
                        }
                    }
                    g.terms.push((t.coeff, mask));
                }
                None => groups.push(BasisGroup {
                    basis: letters.to_vec(),
                    terms: vec![(t.coeff, mask)],
                }),
            }
        }
        Ok(Self {
            num_qubits: n,
            constant,
            groups,
            shots,
        })
    }

    pub fn num_groups(&self) -> usize {
        self.groups.len()
    }
}

/// Rotates `state` so that a Z-basis readout of qubit `q` measures `basis[q]`.
pub(crate) fn rotate_to_basis(state: &mut StateVector, basis: &[Pauli]) {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let re = |v: f64| Complex64::new(v, 0.0);
    let x_to_z = [[re(h), re(h)], [re(h), re(-h)]];
    // H·S†: maps the Y eigenbasis onto the computational basis.
    let y_to_z = [[re(h), Complex64::new(0.0, -h)], [re(h), Complex64::new(0.0, h)]];
    for (q, p) in basis.iter().enumerate() {
        match p {
            Pauli::X => state.apply_matrix(q, &x_to_z),
            Pauli::Y => state.apply_matrix(q, &y_to_z),
            Pauli::I | Pauli::Z => {}
        }
    }
}

impl EnergyEstimator for PauliShotEstimator {
    fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    fn estimate(&self, circuit: &Circuit, params: &[f64], stream: &SeedStream) -> Result<Estimate> {
        let prepared = circuit.prepare(params)?;
        prepared.check_same(self.num_qubits)?;
        let mut energy = self.constant;
        let mut var = 0.0;
        for (g_idx, g) in self.groups.iter().enumerate() {
            let mut state = prepared.clone();
            rotate_to_basis(&mut state, &g.basis);
            let mut rng = stream.derive("basis-group", &[g_idx as u64]).rng();
            let samples = state.sample(self.shots, &mut rng);
            let values: Vec<f64> = samples
                .iter()
                .map(|&s| {
                    g.terms
                        .iter()
                        .map(|&(c, m)| if (s & m).count_ones() % 2 == 0 { c } else { -c })
                        .sum()
                })
                .collect();
            let m = self.shots as f64;
            let mean = values.iter().sum::<f64>() / m;
            let sample_var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (m - 1.0);
            energy += mean;
            var += sample_var / m;
        }
        Ok(Estimate {
            energy,
            energy_std: var.sqrt(),
            shots: self.shots * self.groups.len(),
        })
    }

    fn is_exact(&self) -> bool {
        false
    }
}
