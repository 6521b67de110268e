//! k-nonlocal bounds for the GHZ-type Bell operator and depth certificates.

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::qsim::{Observable, StateVector};
use crate::{Error, Result};

/// `−2^{(n − ⌈n/k⌉)/2}`: the smallest value of `⟨B_n⟩` reachable when no
/// group of more than `k` parties shares nonlocal resources.
pub fn k_nonlocal_bound(n: usize, k: usize) -> Result<f64> {
    if n < 2 || k == 0 || k >= n {
        return Err(Error::InvalidArgument(format!("k = {k} outside 1..{n}")));
    }
    let groups = n.div_ceil(k);
    Ok(-2f64.powf((n - groups) as f64 / 2.0))
}

/// Violation margin against one k-nonlocal bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KMargin {
    pub k: usize,
    pub bound: f64,
    /// `(bound − energy)/σ`; infinite when `σ = 0` and the bound is crossed.
    #[serde(with = "extended_float")]
    pub sigma_margin: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DepthCertificate {
    pub num_parties: usize,
    pub energy: f64,
    pub energy_std: f64,
    pub margins: Vec<KMargin>,
    pub certified_depth: usize,
}

/// Compares `energy` against every k-nonlocal bound. The certified depth is
/// `1 + max{k : energy < bound_k}`, so touching a bound certifies nothing;
/// `energy_std` only enters the margins.
pub fn certify_depth(n: usize, energy: f64, energy_std: f64) -> Result<DepthCertificate> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!(
            "depth needs at least 2 parties, got {n}"
        )));
    }
    if !energy.is_finite() || !energy_std.is_finite() {
        return Err(Error::NonFinite("energy estimate".into()));
    }
    if energy_std < 0.0 {
        return Err(Error::InvalidArgument(format!("negative energy std {energy_std}")));
    }
    let mut margins = Vec::with_capacity(n - 1);
    let mut depth = 1;
    for k in 1..n {
        let bound = k_nonlocal_bound(n, k)?;
        let gap = bound - energy;
        let sigma_margin = if energy_std > 0.0 {
            gap / energy_std
        } else if gap > 0.0 {
            f64::INFINITY
        } else if gap < 0.0 {
            f64::NEG_INFINITY
        } else {
            0.0
        };
        if energy < bound {
            depth = k + 1;
        }
        margins.push(KMargin { k, bound, sigma_margin });
    }
    Ok(DepthCertificate {
        num_parties: n,
        energy,
        energy_std,
        margins,
        certified_depth: depth,
    })
}

/// `H_B(n) = 2^{(n−1)/2}(|0…0⟩⟨1…1| + h.c.)` applied without a matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GhzBellOperator {
    pub num_qubits: usize,
}

impl GhzBellOperator {
    pub fn new(num_qubits: usize) -> Self {
        Self { num_qubits }
    }

    fn scale(&self) -> f64 {
        2f64.powf((self.num_qubits as f64 - 1.0) / 2.0)
    }

    /// `2^{(n+1)/2}·Re⟨C⟩` for a coherence value.
    pub fn energy_from_coherence(n: usize, coherence: Complex64) -> f64 {
        2f64.powf((n as f64 + 1.0) / 2.0) * coherence.re
    }
}

impl Observable for GhzBellOperator {
    fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    fn expectation(&self, state: &StateVector) -> Result<f64> {
        state.check_same(self.num_qubits)?;
        Ok(Self::energy_from_coherence(
            self.num_qubits,
            state.antidiagonal_coherence(),
        ))
    }

    fn apply(&self, input: &[Complex64], output: &mut [Complex64]) {
        let last = input.len() - 1;
        output.fill(Complex64::new(0.0, 0.0));
        let c = self.scale();
        output[0] += input[last] * c;
        output[last] += input[0] * c;
    }
}

/// Serialises non-finite floats as the strings `"inf"`, `"-inf"`, `"nan"`.
mod extended_float {
    use super::*;

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
        if v.is_finite() {
            s.serialize_f64(*v)
        } else if v.is_nan() {
            s.serialize_str("nan")
        } else if *v > 0.0 {
            s.serialize_str("inf")
        } else {
            s.serialize_str("-inf")
        }
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Num(f64),
        Text(String),
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<f64, D::Error> {
        match Repr::deserialize(d)? {
            Repr::Num(v) => Ok(v),
            Repr::Text(t) => match t.as_str() {
                "inf" => Ok(f64::INFINITY),
                "-inf" => Ok(f64::NEG_INFINITY),
                "nan" => Ok(f64::NAN),
                other => Err(serde::de::Error::custom(format!("unexpected float literal {other:?}"))),
            },
        }
    }
}
