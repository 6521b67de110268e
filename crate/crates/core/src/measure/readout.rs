use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::rng::SeedStream;
use crate::{Error, Result};

/// Independent per-qubit readout errors: `e0[q]` is the probability of
/// reading 1 when qubit `q` is in |0⟩, `e1[q]` of reading 0 when it is in |1⟩.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReadoutModel {
    pub e0: Vec<f64>,
    pub e1: Vec<f64>,
}

impl ReadoutModel {
    pub fn new(e0: Vec<f64>, e1: Vec<f64>) -> Result<Self> {
        let m = Self { e0, e1 };
        m.validate()?;
        Ok(m)
    }

    pub fn ideal(n: usize) -> Self {
        Self {
            e0: vec![0.0; n],
            e1: vec![0.0; n],
        }
    }

    pub fn symmetric(n: usize, e: f64) -> Result<Self> {
        Self::new(vec![e; n], vec![e; n])
    }

    pub fn num_qubits(&self) -> usize {
        self.e0.len()
    }

    pub fn is_ideal(&self) -> bool {
        self.e0.iter().chain(&self.e1).all(|&e| e == 0.0)
    }

    pub fn validate(&self) -> Result<()> {
        if self.e0.len() != self.e1.len() {
            return Err(Error::InvalidModel(format!(
                "{} values of e0 but {} of e1",
                self.e0.len(),
                self.e1.len()
            )));
        }
        for (q, (&a, &b)) in self.e0.iter().zip(&self.e1).enumerate() {
            if a + b >= 1.0 {
                return Err(Error::InvalidModel(format!(
                    "qubit {q}: e0 + e1 = {} makes the confusion matrix singular",
                    a + b
                )));
            }
            if !(0.0..0.5).contains(&a) || !(0.0..0.5).contains(&b) {
                return Err(Error::InvalidModel(format!(
                    "qubit {q}: error rates ({a}, {b}) outside [0, 0.5)"
                )));
            }
        }
        Ok(())
    }

    pub(crate) fn check_qubits(&self, n: usize) -> Result<()> {
        self.validate()?;
        if self.num_qubits() != n {
            return Err(Error::InvalidModel(format!(
                "model covers {} qubits, register has {n}",
                self.num_qubits()
            )));
        }
        Ok(())
    }

    /// Confusion matrix `A[r][t] = P(read r | true t)` of qubit `q`.
    pub fn confusion(&self, q: usize) -> [[f64; 2]; 2] {
        let (e0, e1) = (self.e0[q], self.e1[q]);
        [[1.0 - e0, e1], [e0, 1.0 - e1]]
    }

    /// `Aᵀo`: the observable on true outcomes whose mean equals the mean of
    /// `o` on noisy readouts.
    pub fn degrade(&self, q: usize, o: [f64; 2]) -> [f64; 2] {
        let a = self.confusion(q);
        [a[0][0] * o[0] + a[1][0] * o[1], a[0][1] * o[0] + a[1][1] * o[1]]
    }

    /// `(A⁻¹)ᵀo`: evaluated on a noisy readout, its mean is the noiseless
    /// mean of `o`.
    pub fn correct(&self, q: usize, o: [f64; 2]) -> [f64; 2] {
        let a = self.confusion(q);
        let det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
        let inv = [[a[1][1] / det, -a[0][1] / det], [-a[1][0] / det, a[0][0] / det]];
        [inv[0][0] * o[0] + inv[1][0] * o[1], inv[0][1] * o[0] + inv[1][1] * o[1]]
    }
}

/// Flips every bit of every sample independently: 0 → 1 with probability
/// `e0[q]`, 1 → 0 with probability `e1[q]`.
pub fn apply_readout_error(samples: &[u64], model: &ReadoutModel, stream: &SeedStream) -> Vec<u64> {
    if model.is_ideal() {
        return samples.to_vec();
    }
    let mut rng = stream.rng();
    samples
        .iter()
        .map(|&s| {
            let mut out = s;
            for q in 0..model.num_qubits() {
                let bit = (s >> q) & 1;
                let p = if bit == 0 { model.e0[q] } else { model.e1[q] };
                if rng.gen::<f64>() < p {
                    out ^= 1 << q;
                }
            }
            out
        })
        .collect()
}

/// A product of single-qubit diagonal observables, given by their values on
/// outcomes 0 and 1.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductObservable(pub Vec<[f64; 2]>);

impl ProductObservable {
    /// `Z⊗…⊗Z`.
    pub fn parity(n: usize) -> Self {
        Self(vec![[1.0, -1.0]; n])
    }

    /// `|0…0⟩⟨0…0|`.
    pub fn ground_indicator(n: usize) -> Self {
        Self(vec![[1.0, 0.0]; n])
    }

    pub fn value(&self, sample: u64) -> f64 {
        self.0
            .iter()
            .enumerate()
            .map(|(q, o)| o[((sample >> q) & 1) as usize])
            .product()
    }

    /// Exact mean over a probability vector, by contracting one qubit at a time.
    pub fn mean(&self, probs: &[f64]) -> f64 {
        let mut v = probs.to_vec();
        for o in &self.0 {
            v = v.chunks(2).map(|p| o[0] * p[0] + o[1] * p[1]).collect();
        }
        v[0]
    }

    pub fn degraded(&self, model: &ReadoutModel) -> Self {
        Self(self.0.iter().enumerate().map(|(q, &o)| model.degrade(q, o)).collect())
    }

    pub fn corrected(&self, model: &ReadoutModel) -> Self {
        Self(self.0.iter().enumerate().map(|(q, &o)| model.correct(q, o)).collect())
    }
}

/// Sample mean and standard error of a per-shot value.
pub(crate) fn mean_and_sem(values: impl Iterator<Item = f64>, count: usize) -> (f64, f64) {
    let v: Vec<f64> = values.collect();
    let m = count as f64;
    let mean = v.iter().sum::<f64>() / m;
    if count < 2 {
        return (mean, 0.0);
    }
    let var = v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (m - 1.0);
    (mean, (var / m).sqrt())
}

/// Readout-corrected mean of `observable` over noisy samples, evaluated shot
/// by shot with the per-qubit inverse confusion matrices. Returns the mean
/// and its standard error.
pub fn mitigate_readout(samples: &[u64], model: &ReadoutModel, observable: &ProductObservable) -> Result<(f64, f64)> {
    model.check_qubits(observable.0.len())?;
    if samples.is_empty() {
        return Err(Error::InvalidArgument("no samples to mitigate".into()));
    }
    let corrected = observable.corrected(model);
    Ok(mean_and_sem(samples.iter().map(|&s| corrected.value(s)), samples.len()))
}
