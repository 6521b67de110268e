use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::qsim::{Pauli, PauliString, PauliSum};
use crate::{Error, Result};

/// One correlator `⟨∏ A_{party, setting}⟩` with its weight.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Correlator {
    pub weight: f64,
    /// `(party, setting)` pairs; each party appears at most once.
    pub factors: Vec<(usize, usize)>,
}

/// Storage for the correlator weights.
#[derive(Debug, Clone, PartialEq)]
pub enum Terms {
    /// Few-body correlators listed explicitly.
    Sparse(Vec<Correlator>),
    /// Full N-body correlators over two settings per party; entry `x` is the
    /// weight of the setting tuple whose party-`i` setting is bit `i` of `x`.
    Full(Vec<f64>),
}

/// A Bell expression `Σ w ⟨A…⟩` together with its classical (local
/// hidden-variable) minimum.
#[derive(Debug, Clone, PartialEq)]
pub struct BellExpression {
    pub name: String,
    pub num_parties: usize,
    /// Number of measurement settings per party.
    pub settings: Vec<usize>,
    pub terms: Terms,
    pub classical_bound: f64,
}

impl BellExpression {
    pub fn sparse(
        name: impl Into<String>,
        settings: Vec<usize>,
        terms: Vec<Correlator>,
        classical_bound: f64,
    ) -> Result<Self> {
        let e = Self {
            name: name.into(),
            num_parties: settings.len(),
            settings,
            terms: Terms::Sparse(terms),
            classical_bound,
        };
        e.validate()?;
        Ok(e)
    }

    pub fn full(name: impl Into<String>, num_parties: usize, weights: Vec<f64>, classical_bound: f64) -> Result<Self> {
        let e = Self {
            name: name.into(),
            num_parties,
            settings: vec![2; num_parties],
            terms: Terms::Full(weights),
            classical_bound,
        };
        e.validate()?;
        Ok(e)
    }

    pub fn validate(&self) -> Result<()> {
        if self.settings.len() != self.num_parties {
            return Err(Error::InvalidArgument(
                "settings list does not match party count".into(),
            ));
        }
        if !self.classical_bound.is_finite() {
            return Err(Error::NonFinite("classical bound".into()));
        }
        match &self.terms {
            Terms::Sparse(terms) => {
                for t in terms {
                    if !t.weight.is_finite() {
                        return Err(Error::NonFinite(format!("weight of {:?}", t.factors)));
                    }
                    let mut parties: Vec<usize> = t.factors.iter().map(|f| f.0).collect();
                    parties.sort_unstable();
                    parties.dedup();
                    if parties.len() != t.factors.len() {
                        return Err(Error::InvalidArgument(format!("party repeated in {:?}", t.factors)));
                    }
                    for &(p, x) in &t.factors {
                        if p >= self.num_parties || x >= self.settings[p] {
                            return Err(Error::InvalidArgument(format!("setting ({p}, {x}) out of range")));
                        }
                    }
                }
            }
            Terms::Full(w) => {
                if self.num_parties >= usize::BITS as usize || w.len() != 1usize << self.num_parties {
                    return Err(Error::InvalidArgument(format!(
                        "{} full-correlator weights for {} parties",
                        w.len(),
                        self.num_parties
                    )));
                }
                if w.iter().any(|v| !v.is_finite()) {
                    return Err(Error::NonFinite("full-correlator weight".into()));
                }
            }
        }
        Ok(())
    }

    /// Number of correlators with a nonzero weight.
    pub fn num_terms(&self) -> usize {
        match &self.terms {
            Terms::Sparse(t) => t.iter().filter(|c| c.weight != 0.0).count(),
            Terms::Full(w) => w.iter().filter(|v| **v != 0.0).count(),
        }
    }

    /// Weight of the full setting tuple `xs` (full-correlator form only; for
    /// sparse expressions, the summed weight of correlators matching `xs` on
    /// their support and covering every party).
    pub fn coefficient(&self, xs: &[usize]) -> f64 {
        match &self.terms {
            Terms::Full(w) => {
                let idx = xs.iter().enumerate().fold(0usize, |acc, (i, &x)| acc | (x & 1) << i);
                w[idx]
            }
            Terms::Sparse(t) => t
                .iter()
                .filter(|c| c.factors.len() == xs.len() && c.factors.iter().all(|&(p, x)| xs.get(p) == Some(&x)))
                .map(|c| c.weight)
                .sum(),
        }
    }

    /// Value of the expression for deterministic outcomes `outcome[p][x] ∈ {±1}`.
    pub fn evaluate_deterministic(&self, outcome: &[Vec<i8>]) -> f64 {
        match &self.terms {
            Terms::Sparse(t) => t
                .iter()
                .map(|c| {
                    c.weight
                        * c.factors
                            .iter()
                            .map(|&(p, x)| f64::from(outcome[p][x]))
                            .product::<f64>()
                })
                .sum(),
            Terms::Full(w) => w
                .iter()
                .enumerate()
                .map(|(idx, wt)| {
                    let sign: f64 = (0..self.num_parties)
                        .map(|p| f64::from(outcome[p][(idx >> p) & 1]))
                        .product();
                    wt * sign
                })
                .sum(),
        }
    }
}

/// Unit vector `(x, y, z)`; the observable `xσ_x + yσ_y + zσ_z` has spectrum ±1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlochVector([f64; 3]);

impl BlochVector {
    pub fn new(x: f64, y: f64, z: f64) -> Result<Self> {
        let n = (x * x + y * y + z * z).sqrt();
        if (n - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidArgument(format!(
                "observable axis has norm {n}, expected 1"
            )));
        }
        Ok(Self([x, y, z]))
    }

    /// `cos φ σ_x + sin φ σ_y`.
    pub fn xy(phi: f64) -> Self {
        Self([phi.cos(), phi.sin(), 0.0])
    }

    pub fn x() -> Self {
        Self([1.0, 0.0, 0.0])
    }
    pub fn y() -> Self {
        Self([0.0, 1.0, 0.0])
    }
    pub fn z() -> Self {
        Self([0.0, 0.0, 1.0])
    }

    pub fn components(&self) -> [f64; 3] {
        self.0
    }

    pub fn matrix(&self) -> [[Complex64; 2]; 2] {
        let [x, y, z] = self.0;
        [
            [Complex64::new(z, 0.0), Complex64::new(x, -y)],
            [Complex64::new(x, y), Complex64::new(-z, 0.0)],
        ]
    }
}

/// Observables for every party and setting.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasurementAssignment {
    pub observables: Vec<Vec<BlochVector>>,
}

impl MeasurementAssignment {
    pub fn new(observables: Vec<Vec<BlochVector>>) -> Self {
        Self { observables }
    }

    /// The same settings for every party.
    pub fn uniform(num_parties: usize, per_party: Vec<BlochVector>) -> Self {
        Self {
            observables: vec![per_party; num_parties],
        }
    }

    fn check(&self, expr: &BellExpression) -> Result<()> {
        if self.observables.len() != expr.num_parties {
            return Err(Error::InvalidArgument(format!(
                "{} parties assigned, expression has {}",
                self.observables.len(),
                expr.num_parties
            )));
        }
        for (p, (obs, &m)) in self.observables.iter().zip(&expr.settings).enumerate() {
            if obs.len() != m {
                return Err(Error::InvalidArgument(format!(
                    "party {p}: {} observables for {m} settings",
                    obs.len()
                )));
            }
        }
        Ok(())
    }
}

/// Bell operator as a Pauli sum: every observable is expanded in the Pauli
/// basis and equal strings are merged.
pub fn bell_operator_pauli(expr: &BellExpression, meas: &MeasurementAssignment) -> Result<PauliSum> {
    meas.check(expr)?;
    let n = expr.num_parties;
    let letters = [Pauli::X, Pauli::Y, Pauli::Z];
    let mut acc: BTreeMap<PauliString, f64> = BTreeMap::new();
    match &expr.terms {
        Terms::Sparse(terms) => {
            for t in terms {
                let k = t.factors.len();
                for combo in 0..3usize.pow(k as u32) {
                    let mut c = t.weight;
                    let mut factors = Vec::with_capacity(k);
                    let mut rest = combo;
                    for &(p, x) in &t.factors {
                        let l = rest % 3;
                        rest /= 3;
                        c *= meas.observables[p][x].components()[l];
                        factors.push((p, letters[l]));
                    }
                    if c != 0.0 {
                        *acc.entry(PauliString::from_sparse(n, &factors)?).or_insert(0.0) += c;
                    }
                }
            }
        }
        Terms::Full(w) => {
            if n > 12 {
                return Err(Error::Capacity(format!(
                    "Pauli expansion of a {n}-party full-correlator expression"
                )));
            }
            // Contract one party at a time: the running tensor is indexed by
            // (Pauli letters of the contracted parties, settings of the rest).
            let mut tensor: Vec<f64> = w.clone();
            let mut done = 0usize;
            while done < n {
                let rest_bits = n - done;
                let head = 3usize.pow(done as u32);
                let mut next = vec![0.0; head * 3 * (1 << (rest_bits - 1))];
                for h in 0..head {
                    for r in 0..(1usize << rest_bits) {
                        let v = tensor[h * (1 << rest_bits) + r];
                        if v == 0.0 {
                            continue;
                        }
                        let x = r & 1;
                        let tail = r >> 1;
                        let comps = meas.observables[done][x].components();
                        for (l, &cl) in comps.iter().enumerate() {
                            next[(h * 3 + l) * (1 << (rest_bits - 1)) + tail] += v * cl;
                        }
                    }
                }
                tensor = next;
                done += 1;
            }
            for (idx, &c) in tensor.iter().enumerate() {
                if c.abs() <= 1e-14 {
                    continue;
                }
                // Letter of party 0 is the most significant base-3 digit.
                let mut digits = vec![0usize; n];
                let mut rest = idx;
                for p in (0..n).rev() {
                    digits[p] = rest % 3;
                    rest /= 3;
                }
                let factors: Vec<(usize, Pauli)> = digits.iter().enumerate().map(|(p, &l)| (p, letters[l])).collect();
                *acc.entry(PauliString::from_sparse(n, &factors)?).or_insert(0.0) += c;
            }
        }
    }
    let mut out = PauliSum::new(n);
    for (s, c) in acc {
        if c.abs() > 1e-14 {
            out.add(c, s)?;
        }
    }
    Ok(out)
}

/// Bell operator as a dense `2^N × 2^N` matrix, built directly from the 2×2
/// observables (party `p` acts on bit `p` of the row and column index).
pub fn bell_operator_dense(expr: &BellExpression, meas: &MeasurementAssignment) -> Result<DMatrix<Complex64>> {
    meas.check(expr)?;
    let n = expr.num_parties;
    if n > 12 {
        return Err(Error::Capacity(format!("dense Bell operator for {n} parties")));
    }
    let dim = 1usize << n;
    let mats: Vec<Vec<DMatrix<Complex64>>> = meas
        .observables
        .iter()
        .map(|obs| {
            obs.iter()
                .map(|o| {
                    let m = o.matrix();
                    DMatrix::from_fn(2, 2, |i, j| m[i][j])
                })
                .collect()
        })
        .collect();
    let mut out = DMatrix::<Complex64>::zeros(dim, dim);
    match &expr.terms {
        Terms::Sparse(terms) => {
            for t in terms {
                let support: usize = t.factors.iter().fold(0, |m, &(p, _)| m | 1 << p);
                for col in 0..dim {
                    let k = t.factors.len();
                    for choice in 0..(1usize << k) {
                        let mut row = col & !support;
                        let mut amp = Complex64::new(t.weight, 0.0);
                        for (j, &(p, x)) in t.factors.iter().enumerate() {
                            let rb = (choice >> j) & 1;
                            let cb = (col >> p) & 1;
                            amp *= mats[p][x][(rb, cb)];
                            row |= rb << p;
                        }
                        out[(row, col)] += amp;
                    }
                }
            }
        }
        Terms::Full(w) => {
            out = full_operator(&mats, w, n);
        }
    }
    Ok(out)
}

/// `Σ_x w_x A_{n-1,x_{n-1}} ⊗ … ⊗ A_{0,x_0}` by splitting on the top party.
fn full_operator(mats: &[Vec<DMatrix<Complex64>>], w: &[f64], parties: usize) -> DMatrix<Complex64> {
    if parties == 0 {
        return DMatrix::from_element(1, 1, Complex64::new(w[0], 0.0));
    }
    let half = w.len() / 2;
    let top = parties - 1;
    let lo = full_operator(mats, &w[..half], top);
    let hi = full_operator(mats, &w[half..], top);
    mats[top][0].kronecker(&lo) + mats[top][1].kronecker(&hi)
}
