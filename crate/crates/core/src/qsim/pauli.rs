use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::observable::Observable;
use super::state::{chunked_sum, StateVector};
use super::PAR_THRESHOLD;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub fn matrix(self) -> [[Complex64; 2]; 2] {
        let o = Complex64::new(0.0, 0.0);
        let l = Complex64::new(1.0, 0.0);
        let i = Complex64::new(0.0, 1.0);
        match self {
            Pauli::I => [[l, o], [o, l]],
            Pauli::X => [[o, l], [l, o]],
            Pauli::Y => [[o, -i], [i, o]],
            Pauli::Z => [[l, o], [o, -l]],
        }
    }

    fn letter(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }
}

/// Per-qubit Pauli letters. Character `k` of the text form is qubit `k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PauliString(Vec<Pauli>);

impl PauliString {
    pub fn identity(n: usize) -> Self {
        Self(vec![Pauli::I; n])
    }

    /// Identity except for the listed `(qubit, letter)` factors.
    pub fn from_sparse(n: usize, factors: &[(usize, Pauli)]) -> Result<Self> {
        let mut s = Self::identity(n);
        for &(q, p) in factors {
            if q >= n {
                return Err(Error::InvalidQubit {
                    index: q,
                    num_qubits: n,
                });
            }
            s.0[q] = p;
        }
        Ok(s)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[Pauli] {
        &self.0
    }

    pub fn weight(&self) -> usize {
        self.0.iter().filter(|p| **p != Pauli::I).count()
    }

    /// `(x_mask, z_mask, number of Y)`. Only valid for strings of at most 64 qubits.
    pub(crate) fn masks(&self) -> (usize, usize, u32) {
        let (mut x, mut z, mut ny) = (0usize, 0usize, 0u32);
        for (q, p) in self.0.iter().enumerate() {
            match p {
                Pauli::I => {}
                Pauli::X => x |= 1 << q,
                Pauli::Z => z |= 1 << q,
                Pauli::Y => {
                    x |= 1 << q;
                    z |= 1 << q;
                    ny += 1;
                }
            }
        }
        (x, z, ny)
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in &self.0 {
            write!(f, "{}", p.letter())?;
        }
        Ok(())
    }
}

impl FromStr for PauliString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c {
                'I' => Ok(Pauli::I),
                'X' => Ok(Pauli::X),
                'Y' => Ok(Pauli::Y),
                'Z' => Ok(Pauli::Z),
                other => Err(Error::InvalidArgument(format!("bad Pauli letter {other:?}"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(PauliString)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PauliTerm {
    pub coeff: f64,
    pub string: PauliString,
}

/// Real-weighted sum of Pauli strings on a fixed number of qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliSum {
    num_qubits: usize,
    terms: Vec<PauliTerm>,
}

/// Terms sharing an X-mask, with the `i^{#Y}` phase folded into the weight.
struct FlipGroup {
    x_mask: usize,
    diag: Vec<(Complex64, usize)>,
}

impl FlipGroup {
    #[inline]
    fn weight(&self, i: usize) -> Complex64 {
        let mut w = Complex64::new(0.0, 0.0);
        for &(c, z) in &self.diag {
            if (i & z).count_ones() % 2 == 0 {
                w += c;
            } else {
                w -= c;
            }
        }
        w
    }
}

impl PauliSum {
    pub fn new(num_qubits: usize) -> Self {
        Self {
            num_qubits,
            terms: Vec::new(),
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn terms(&self) -> &[PauliTerm] {
        &self.terms
    }

    pub fn add(&mut self, coeff: f64, string: PauliString) -> Result<&mut Self> {
        if string.len() != self.num_qubits {
            return Err(Error::QubitMismatch {
                expected: self.num_qubits,
                got: string.len(),
            });
        }
        if !coeff.is_finite() {
            return Err(Error::NonFinite(format!("coefficient of {string}")));
        }
        self.terms.push(PauliTerm { coeff, string });
        Ok(self)
    }

    /// Adds `coeff · P_a ⊗ Q_b`.
    pub fn add_two_body(&mut self, coeff: f64, a: usize, pa: Pauli, b: usize, pb: Pauli) -> Result<&mut Self> {
        let s = PauliString::from_sparse(self.num_qubits, &[(a, pa), (b, pb)])?;
        self.add(coeff, s)
    }

    pub fn parse_term(&mut self, coeff: f64, s: &str) -> Result<&mut Self> {
        let string = s.parse()?;
        self.add(coeff, string)
    }

    /// Merges equal strings and drops terms with |coeff| ≤ `tol`.
    pub fn simplified(&self, tol: f64) -> PauliSum {
        let mut acc: BTreeMap<PauliString, f64> = BTreeMap::new();
        for t in &self.terms {
            *acc.entry(t.string.clone()).or_insert(0.0) += t.coeff;
        }
        PauliSum {
            num_qubits: self.num_qubits,
            terms: acc
                .into_iter()
                .filter(|(_, c)| c.abs() > tol)
                .map(|(string, coeff)| PauliTerm { coeff, string })
                .collect(),
        }
    }

    /// `Σ|c_k|`; `−Σ|c_k|` lower-bounds the spectrum.
    pub fn abs_coeff_sum(&self) -> f64 {
        self.terms.iter().map(|t| t.coeff.abs()).sum()
    }

    fn check_simulable(&self) -> Result<()> {
        if self.num_qubits > super::MAX_QUBITS {
            return Err(Error::Capacity(format!(
                "{}-qubit operator exceeds the simulator limit",
                self.num_qubits
            )));
        }
        Ok(())
    }

    fn flip_groups(&self) -> Vec<FlipGroup> {
        let mut groups: BTreeMap<usize, Vec<(Complex64, usize)>> = BTreeMap::new();
        for t in &self.terms {
            let (x, z, ny) = t.string.masks();
            let phase = match ny % 4 {
                0 => Complex64::new(1.0, 0.0),
                1 => Complex64::new(0.0, 1.0),
                2 => Complex64::new(-1.0, 0.0),
                _ => Complex64::new(0.0, -1.0),
            };
            groups.entry(x).or_default().push((phase * t.coeff, z));
        }
        groups
            .into_iter()
            .map(|(x_mask, diag)| FlipGroup { x_mask, diag })
            .collect()
    }

    /// Dense `2^n × 2^n` matrix built from Kronecker products. Oracle use only.
    pub fn to_dense(&self) -> Result<DMatrix<Complex64>> {
        if self.num_qubits > 12 {
            return Err(Error::Capacity(format!(
                "dense form of a {}-qubit operator",
                self.num_qubits
            )));
        }
        let dim = 1usize << self.num_qubits;
        let mut out = DMatrix::<Complex64>::zeros(dim, dim);
        for t in &self.terms {
            // Highest qubit is the leftmost Kronecker factor.
            let mut m = DMatrix::<Complex64>::from_element(1, 1, Complex64::new(1.0, 0.0));
            for p in t.string.letters().iter().rev() {
                let pm = p.matrix();
                let p2 = DMatrix::from_fn(2, 2, |i, j| pm[i][j]);
                m = m.kronecker(&p2);
            }
            out += m * Complex64::new(t.coeff, 0.0);
        }
        Ok(out)
    }
}

impl Observable for PauliSum {
    fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    /// Streams `Σ_k c_k ⟨ψ|P_k|ψ⟩` over the amplitudes.
    fn expectation(&self, state: &StateVector) -> Result<f64> {
        state.check_same(self.num_qubits)?;
        self.check_simulable()?;
        let amps = state.amplitudes();
        let groups = self.flip_groups();
        let mut total = Complex64::new(0.0, 0.0);
        for g in &groups {
            total += chunked_sum(amps, |offset, chunk| {
                let mut acc = Complex64::new(0.0, 0.0);
                for (k, a) in chunk.iter().enumerate() {
                    let i = offset + k;
                    acc += amps[i ^ g.x_mask].conj() * g.weight(i) * a;
                }
                acc
            });
        }
        let scale = self.abs_coeff_sum().max(1.0);
        if total.im.abs() > 1e-10 * scale {
            return Err(Error::NonFinite(format!(
                "expectation has imaginary residue {:e}; operator is not Hermitian",
                total.im
            )));
        }
        Ok(total.re)
    }

    fn apply(&self, input: &[Complex64], output: &mut [Complex64]) {
        let groups = self.flip_groups();
        let kernel = |(j, out): (usize, &mut Complex64)| {
            let mut acc = Complex64::new(0.0, 0.0);
            for g in &groups {
                let i = j ^ g.x_mask;
                acc += g.weight(i) * input[i];
            }
            *out = acc;
        };
        if output.len() >= PAR_THRESHOLD {
            output.par_iter_mut().enumerate().for_each(kernel);
        } else {
            output.iter_mut().enumerate().for_each(kernel);
        }
    }
}
