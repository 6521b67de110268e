use std::collections::BTreeMap;
use std::io::{Read, Write};

use num_complex::Complex64;
use rand::distributions::{Distribution, WeightedIndex};
use rand::Rng;
use rayon::prelude::*;

use super::gate::{GateOp, Matrix2};
use super::{PAR_THRESHOLD, REDUCE_CHUNK};
use crate::rng::SeedStream;
use crate::{Error, Result};

/// Largest register the simulator will allocate (2^26 amplitudes, 1 GiB).
pub const MAX_QUBITS: usize = 26;

/// Full amplitude vector of an `n`-qubit register.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    num_qubits: usize,
    amps: Vec<Complex64>,
}

/// Prepares `|0…0⟩` on `n` qubits.
pub fn init_state(n: usize) -> Result<StateVector> {
    StateVector::new(n)
}

impl StateVector {
    pub fn new(num_qubits: usize) -> Result<Self> {
        if num_qubits == 0 || num_qubits > MAX_QUBITS {
            return Err(Error::Capacity(format!(
                "{num_qubits} qubits requested, supported range is 1..={MAX_QUBITS}"
            )));
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << num_qubits];
        amps[0] = Complex64::new(1.0, 0.0);
        Ok(Self { num_qubits, amps })
    }

    /// Wraps raw amplitudes. The length must be a power of two and the vector
    /// normalised to within 1e-10.
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        let len = amps.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(Error::InvalidArgument(format!(
                "amplitude count {len} is not a power of two >= 2"
            )));
        }
        let num_qubits = len.trailing_zeros() as usize;
        if num_qubits > MAX_QUBITS {
            return Err(Error::Capacity(format!("{num_qubits} qubits exceeds {MAX_QUBITS}")));
        }
        let state = Self { num_qubits, amps };
        let norm = state.norm_sqr();
        if (norm - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidArgument(format!(
                "state is not normalised (|ψ|² = {norm})"
            )));
        }
        Ok(state)
    }

    /// `(|0…0⟩ + e^{iφ}|1…1⟩)/√2`.
    pub fn ghz(num_qubits: usize, phase: f64) -> Result<Self> {
        let mut s = Self::new(num_qubits)?;
        let h = std::f64::consts::FRAC_1_SQRT_2;
        s.amps[0] = Complex64::new(h, 0.0);
        let last = s.amps.len() - 1;
        s.amps[last] = Complex64::from_polar(h, phase);
        Ok(s)
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub(crate) fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        chunked_sum(&self.amps, |_, c| c.iter().map(|a| a.norm_sqr()).sum::<f64>())
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &StateVector) -> Result<Complex64> {
        self.check_same(other.num_qubits)?;
        let mut acc = Complex64::new(0.0, 0.0);
        for (a, b) in self.amps.iter().zip(&other.amps) {
            acc += a.conj() * b;
        }
        Ok(acc)
    }

    /// `|⟨self|other⟩|`, the phase-insensitive overlap used for state comparisons.
    pub fn overlap(&self, other: &StateVector) -> Result<f64> {
        self.inner(other).map(|c| c.norm())
    }

    pub(crate) fn check_same(&self, n: usize) -> Result<()> {
        if n != self.num_qubits {
            return Err(Error::QubitMismatch {
                expected: self.num_qubits,
                got: n,
            });
        }
        Ok(())
    }

    /// Applies `gate`. If the gate reads a parameter slot, `angle` supplies
    /// its value (every slot of the gate receives the same angle); otherwise
    /// `angle` must be `None`.
    pub fn apply_gate(&mut self, gate: &GateOp, angle: Option<f64>) -> Result<()> {
        let slots = gate.slots();
        let params: Vec<f64> = match (slots.is_empty(), angle) {
            (true, None) => Vec::new(),
            (true, Some(_)) => return Err(Error::UnexpectedAngle),
            (false, None) => return Err(Error::MissingAngle),
            (false, Some(a)) => {
                let max = slots.iter().copied().max().unwrap_or(0);
                vec![a; max + 1]
            }
        };
        self.apply_bound(gate, &params)
    }

    /// Applies `gate` with slots resolved against `params`.
    pub fn apply_bound(&mut self, gate: &GateOp, params: &[f64]) -> Result<()> {
        gate.validate(self.num_qubits)?;
        match *gate {
            GateOp::Cz(a, b) => self.apply_cz(a, b),
            GateOp::Cnot { control, target } => self.apply_cnot(control, target),
            _ => {
                let m = gate.matrix(params)?.expect("single-qubit gate");
                let q = gate.targets()[0];
                self.apply_matrix(q, &m);
            }
        }
        Ok(())
    }

    /// Applies a 2×2 matrix to qubit `q`. The caller guarantees `q` is in range.
    pub fn apply_matrix(&mut self, q: usize, m: &Matrix2) {
        let half = 1usize << q;
        let kernel = |block: &mut [Complex64]| {
            let (lo, hi) = block.split_at_mut(half);
            for (a0, a1) in lo.iter_mut().zip(hi.iter_mut()) {
                let (x, y) = (*a0, *a1);
                *a0 = m[0][0] * x + m[0][1] * y;
                *a1 = m[1][0] * x + m[1][1] * y;
            }
        };
        if self.amps.len() >= PAR_THRESHOLD {
            self.amps
                .par_chunks_mut(2 * half)
                .with_min_len(chunk_min(half))
                .for_each(kernel);
        } else {
            self.amps.chunks_mut(2 * half).for_each(kernel);
        }
    }

    fn apply_cz(&mut self, a: usize, b: usize) {
        let mask = (1usize << a) | (1usize << b);
        let kernel = |(i, amp): (usize, &mut Complex64)| {
            if i & mask == mask {
                *amp = -*amp;
            }
        };
        if self.amps.len() >= PAR_THRESHOLD {
            self.amps.par_iter_mut().enumerate().for_each(kernel);
        } else {
            self.amps.iter_mut().enumerate().for_each(kernel);
        }
    }

    fn apply_cnot(&mut self, control: usize, target: usize) {
        let c = 1usize << control;
        let t = 1usize << target;
        for i in 0..self.amps.len() {
            if i & c != 0 && i & t == 0 {
                self.amps.swap(i, i | t);
            }
        }
    }

    /// `⟨C⟩ = ⟨ψ|(|0⟩⟨1|)^{⊗N}|ψ⟩ = conj(ψ₀)·ψ_{2^N−1}`.
    pub fn antidiagonal_coherence(&self) -> Complex64 {
        self.amps[0].conj() * self.amps[self.amps.len() - 1]
    }

    /// Draws `shots` computational-basis outcomes; bit `q` of each outcome is qubit `q`.
    pub fn sample<R: Rng + ?Sized>(&self, shots: usize, rng: &mut R) -> Vec<u64> {
        let probs = self.probabilities();
        let dist = WeightedIndex::new(&probs).expect("normalised state has positive weight");
        (0..shots).map(|_| dist.sample(rng) as u64).collect()
    }

    /// Writes the debugging snapshot: little-endian u64 qubit count, then
    /// interleaved little-endian f64 (re, im) pairs.
    pub fn write_dump<W: Write>(&self, mut w: W) -> Result<()> {
        w.write_all(&(self.num_qubits as u64).to_le_bytes())?;
        for a in &self.amps {
            w.write_all(&a.re.to_le_bytes())?;
            w.write_all(&a.im.to_le_bytes())?;
        }
        Ok(())
    }

    pub fn read_dump<R: Read>(mut r: R) -> Result<Self> {
        let mut word = [0u8; 8];
        r.read_exact(&mut word)?;
        let n = u64::from_le_bytes(word) as usize;
        if n == 0 || n > MAX_QUBITS {
            return Err(Error::Capacity(format!("dump declares {n} qubits")));
        }
        let mut amps = Vec::with_capacity(1 << n);
        for _ in 0..(1usize << n) {
            r.read_exact(&mut word)?;
            let re = f64::from_le_bytes(word);
            r.read_exact(&mut word)?;
            let im = f64::from_le_bytes(word);
            amps.push(Complex64::new(re, im));
        }
        Self::from_amplitudes(amps)
    }
}

/// Samples `shots` bitstrings from the stream's generator.
pub fn sample_bitstrings(state: &StateVector, shots: usize, stream: &SeedStream) -> Vec<u64> {
    state.sample(shots, &mut stream.rng())
}

/// Order-independent aggregate of a sample.
pub fn histogram(samples: &[u64]) -> BTreeMap<u64, usize> {
    let mut h = BTreeMap::new();
    for &s in samples {
        *h.entry(s).or_insert(0) += 1;
    }
    h
}

fn chunk_min(half: usize) -> usize {
    (super::REDUCE_CHUNK / (2 * half)).max(1)
}

/// Sums `f` over fixed-size chunks, combining partial sums in chunk order.
pub(crate) fn chunked_sum<T, R, F>(data: &[T], f: F) -> R
where
    T: Sync,
    R: Send + Copy + std::iter::Sum<R>,
    F: Fn(usize, &[T]) -> R + Sync,
{
    if data.len() >= PAR_THRESHOLD {
        let parts: Vec<R> = data
            .par_chunks(REDUCE_CHUNK)
            .enumerate()
            .map(|(k, c)| f(k * REDUCE_CHUNK, c))
            .collect();
        parts.into_iter().sum()
    } else {
        f(0, data)
    }
}
