use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::signals::{Method, SignalTable};
use crate::bell::GhzBellOperator;
use crate::{Error, Result};

/// An estimate of `⟨C⟩ = ⟨ψ|(|0⟩⟨1|)^{⊗n}|ψ⟩` and of the energy
/// `2^{(n+1)/2} Re⟨C⟩` it implies.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoherenceEstimate {
    pub method: Method,
    pub num_qubits: usize,
    /// Complex value; for an MQC estimate without a parity phase, the
    /// magnitude on the real axis.
    pub value: Complex64,
    pub magnitude: f64,
    /// Standard error of the real part (of the magnitude for MQC).
    pub std: f64,
    /// `None` when the phase is unknown.
    pub energy: Option<f64>,
    pub energy_std: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub warning: Option<String>,
}

fn energy_scale(n: usize) -> f64 {
    GhzBellOperator::energy_from_coherence(n, Complex64::new(1.0, 0.0))
}

/// Checks that `angles` is `offset + span·k/N_s` for `k = 0…N_s−1` and
/// returns `N_s`.
fn check_grid(angles: &[f64], offset: f64, span: f64) -> Result<usize> {
    let ns = angles.len();
    if ns == 0 {
        return Err(Error::SettingsMismatch("empty signal".into()));
    }
    for (k, &a) in angles.iter().enumerate() {
        let want = offset + span * k as f64 / ns as f64;
        if (a - want).abs() > 1e-9 {
            return Err(Error::SettingsMismatch(format!("angle {k} is {a}, expected {want}")));
        }
    }
    Ok(ns)
}

fn check_table(signals: &SignalTable, method: Method, n: usize) -> Result<()> {
    if signals.method != method {
        return Err(Error::SettingsMismatch(format!(
            "expected a {} signal, got {}",
            method.as_str(),
            signals.method.as_str()
        )));
    }
    if signals.num_qubits != n {
        return Err(Error::SettingsMismatch(format!(
            "signal is for {} qubits, not {n}",
            signals.num_qubits
        )));
    }
    signals.validate()
}

/// `⟨C⟩ = N_s⁻¹ Σ_γ e^{inγ} ⟨P(γ)⟩` on the grid `γ_k = −π/2 + πk/N_s`.
///
/// A Z readout after the parity rotation measures `e^{−iγ}|0⟩⟨1| + h.c.` on
/// every qubit, so `⟨C⟩` is the coefficient of `e^{−inγ}` and is picked out
/// by the `e^{+inγ}` kernel. Every other frequency `q ∈ {−n, −n+2, …}`
/// cancels exactly when `N_s ≥ n + 1`; smaller grids are accepted with a
/// warning. Each quadrature carries `√(Σ (σ_γ/N_s)²)`.
pub fn extract_coherence_parity(signals: &SignalTable, n: usize) -> Result<CoherenceEstimate> {
    check_table(signals, Method::Parity, n)?;
    let ns = check_grid(&signals.angles, -PI / 2.0, PI)?;
    let nf = n as f64;
    let value = signals
        .angles
        .iter()
        .zip(&signals.values)
        .map(|(&g, &p)| Complex64::from_polar(p, nf * g))
        .sum::<Complex64>()
        / ns as f64;
    let std = signals.stds.iter().map(|s| (s / ns as f64).powi(2)).sum::<f64>().sqrt();
    let warning = (ns < n + 1).then(|| format!("{ns} parity settings cannot separate all frequencies up to {n}"));
    Ok(CoherenceEstimate {
        method: Method::Parity,
        num_qubits: n,
        value,
        magnitude: value.norm(),
        std,
        energy: Some(energy_scale(n) * value.re),
        energy_std: Some(energy_scale(n) * std),
        warning,
    })
}

/// `|⟨C⟩| = √|N_s⁻¹ Σ_φ e^{inφ} K(φ)|` on the grid `φ_j = 2πj/N_s`.
///
/// The frequency-`n` component of `K` is `⟨C⟩*²`, a complex number, so only
/// its modulus carries information and the radicand is never negative.
///
/// The standard error goes through the square root to first order. When the
/// Fourier magnitude is below its own standard error that expansion breaks
/// down, and the error reported is the floor `√σ` instead.
pub fn extract_coherence_mqc(signals: &SignalTable, n: usize) -> Result<CoherenceEstimate> {
    check_table(signals, Method::Mqc, n)?;
    let ns = check_grid(&signals.angles, 0.0, 2.0 * PI)?;
    let nf = n as f64;
    let s = signals
        .angles
        .iter()
        .zip(&signals.values)
        .map(|(&phi, &k)| Complex64::from_polar(k, nf * phi))
        .sum::<Complex64>()
        / ns as f64;
    let s_std = signals.stds.iter().map(|v| (v / ns as f64).powi(2)).sum::<f64>().sqrt();
    let radicand = s.norm();
    if !radicand.is_finite() {
        return Err(Error::SignalsInconsistent("non-finite MQC Fourier component".into()));
    }
    let magnitude = radicand.sqrt();
    let (std, warning) = if radicand > s_std {
        (s_std / (2.0 * magnitude), None)
    } else {
        (
            s_std.sqrt(),
            Some("MQC component is within one standard error of zero".to_string()),
        )
    };
    let warning = match (warning, ns < 2 * n + 1) {
        (w, false) => w,
        (_, true) => Some(format!("{ns} MQC settings cannot separate all frequencies up to {n}")),
    };
    Ok(CoherenceEstimate {
        method: Method::Mqc,
        num_qubits: n,
        value: Complex64::new(magnitude, 0.0),
        magnitude,
        std,
        energy: None,
        energy_std: None,
        warning,
    })
}

/// Gives an MQC magnitude the phase of a parity estimate, so that it yields
/// an energy. The energy error propagates the magnitude error only.
pub fn with_parity_phase(mqc: &CoherenceEstimate, parity: &CoherenceEstimate) -> Result<CoherenceEstimate> {
    if mqc.method != Method::Mqc || mqc.num_qubits != parity.num_qubits {
        return Err(Error::SettingsMismatch(
            "phase transfer needs an MQC and a parity estimate for the same register".into(),
        ));
    }
    let n = mqc.num_qubits;
    let phase = parity.value.arg();
    let value = Complex64::from_polar(mqc.magnitude, phase);
    Ok(CoherenceEstimate {
        value,
        energy: Some(energy_scale(n) * value.re),
        energy_std: Some(energy_scale(n) * mqc.std * phase.cos().abs()),
        ..mqc.clone()
    })
}

/// Least-squares fit of `a·cos(fγ + b)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SinusoidFit {
    /// `a ≥ 0`.
    pub amplitude: f64,
    /// `b ∈ (−π, π]`.
    pub phase: f64,
    /// Coefficients of `cos fγ` and `sin fγ` and their standard errors.
    pub cos_coeff: f64,
    pub sin_coeff: f64,
    pub cos_std: f64,
    pub sin_std: f64,
}

/// Fits `y ≈ A cos fγ + B sin fγ` by ordinary least squares, then
/// `a = √(A² + B²)`, `b = atan2(−B, A)`. Point errors propagate linearly.
pub fn sinusoid_fit(signals: &SignalTable, freq: i32) -> Result<SinusoidFit> {
    signals.validate()?;
    if signals.angles.len() < 3 {
        return Err(Error::Fit(format!(
            "{} settings, need at least 3",
            signals.angles.len()
        )));
    }
    let f = f64::from(freq);
    let (mut cc, mut cs, mut ss) = (0.0, 0.0, 0.0);
    for &g in &signals.angles {
        let (s, c) = (f * g).sin_cos();
        cc += c * c;
        cs += c * s;
        ss += s * s;
    }
    let det = cc * ss - cs * cs;
    if det <= 1e-12 * (cc + ss).powi(2) {
        return Err(Error::Fit("design matrix is rank deficient for these settings".into()));
    }
    let (mut a, mut b, mut va, mut vb) = (0.0, 0.0, 0.0, 0.0);
    for ((&g, &y), &sd) in signals.angles.iter().zip(&signals.values).zip(&signals.stds) {
        let (s, c) = (f * g).sin_cos();
        // Rows of (XᵀX)⁻¹Xᵀ.
        let la = (ss * c - cs * s) / det;
        let lb = (cc * s - cs * c) / det;
        a += la * y;
        b += lb * y;
        va += (la * sd).powi(2);
        vb += (lb * sd).powi(2);
    }
    let amplitude = a.hypot(b);
    let mut phase = (-b).atan2(a);
    if phase <= -PI {
        phase += 2.0 * PI;
    }
    Ok(SinusoidFit {
        amplitude,
        phase,
        cos_coeff: a,
        sin_coeff: b,
        cos_std: va.sqrt(),
        sin_std: vb.sqrt(),
    })
}

/// Coherence from a sinusoid fit at frequency `n` of a parity signal:
/// `⟨P(γ)⟩ = 2Re⟨C⟩ cos nγ + 2Im⟨C⟩ sin nγ`, so `⟨C⟩ = (A + iB)/2`.
pub fn extract_coherence_fit(signals: &SignalTable, n: usize) -> Result<CoherenceEstimate> {
    check_table(signals, Method::Parity, n)?;
    let fit = sinusoid_fit(signals, n as i32)?;
    let value = Complex64::new(fit.cos_coeff, fit.sin_coeff) / 2.0;
    let std = fit.cos_std / 2.0;
    Ok(CoherenceEstimate {
        method: Method::SinusoidFit,
        num_qubits: n,
        value,
        magnitude: value.norm(),
        std,
        energy: Some(energy_scale(n) * value.re),
        energy_std: Some(energy_scale(n) * std),
        warning: None,
    })
}

/// Averages estimates from independent repetitions of a pipeline; the
/// standard error is the spread of the repetitions divided by `√R`.
pub fn combine_repetitions(estimates: &[CoherenceEstimate]) -> Result<CoherenceEstimate> {
    let first = estimates
        .first()
        .ok_or_else(|| Error::InvalidArgument("no repetitions".into()))?;
    if estimates
        .iter()
        .any(|e| e.method != first.method || e.num_qubits != first.num_qubits)
    {
        return Err(Error::InvalidArgument(
            "repetitions mix methods or register sizes".into(),
        ));
    }
    let r = estimates.len() as f64;
    let value = estimates.iter().map(|e| e.value).sum::<Complex64>() / r;
    let magnitude = estimates.iter().map(|e| e.magnitude).sum::<f64>() / r;
    let spread = |f: &dyn Fn(&CoherenceEstimate) -> f64, mean: f64| {
        if estimates.len() < 2 {
            return first.std;
        }
        (estimates.iter().map(|e| (f(e) - mean).powi(2)).sum::<f64>() / (r - 1.0) / r).sqrt()
    };
    let std = if first.method == Method::Mqc {
        spread(&|e| e.magnitude, magnitude)
    } else {
        spread(&|e| e.value.re, value.re)
    };
    let scale = energy_scale(first.num_qubits);
    let has_energy = estimates.iter().all(|e| e.energy.is_some());
    Ok(CoherenceEstimate {
        method: first.method,
        num_qubits: first.num_qubits,
        value,
        magnitude,
        std,
        energy: has_energy.then_some(scale * value.re),
        energy_std: has_energy.then(|| {
            scale
                * std
                * if first.method == Method::Mqc {
                    value.arg().cos().abs()
                } else {
                    1.0
                }
        }),
        warning: estimates.iter().find_map(|e| e.warning.clone()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::pipeline::ghz_parity_signal;
    use crate::measure::signals::{mqc_settings, parity_grid, parity_settings};

    fn parity_table(n: usize, angles: Vec<f64>, f: impl Fn(f64) -> f64) -> SignalTable {
        let k = angles.len();
        SignalTable {
            method: Method::Parity,
            num_qubits: n,
            values: angles.iter().map(|&g| f(g)).collect(),
            angles,
            stds: vec![0.0; k],
            shots: vec![0; k],
            repetition: 0,
        }
    }

    #[test]
    fn ghz_signals_are_extracted_exactly() {
        for n in 2..=12 {
            let t = parity_table(n, parity_settings(n), |g| -(n as f64 * g).cos());
            let c = extract_coherence_parity(&t, n).unwrap();
            assert!((c.value - Complex64::new(-0.5, 0.0)).norm() < 1e-12, "n={n}");
            let t = parity_table(n, parity_settings(n), |g| (n as f64 * g).cos());
            let c = extract_coherence_parity(&t, n).unwrap();
            assert!((c.energy.unwrap() - 2f64.powf((n as f64 - 1.0) / 2.0)).abs() < 1e-9);
        }
        let zero = parity_table(3, parity_settings(3), |_| 0.0);
        assert_eq!(
            extract_coherence_parity(&zero, 3).unwrap().value,
            Complex64::new(0.0, 0.0)
        );
    }

    #[test]
    fn complex_phase_round_trips() {
        let n = 5;
        let c0 = Complex64::from_polar(0.4, 0.7);
        let t = parity_table(n, parity_settings(n), |g| ghz_parity_signal(c0, n, g));
        assert!((extract_coherence_parity(&t, n).unwrap().value - c0).norm() < 1e-12);
        let dense = parity_table(n, parity_grid(10 * n + 1), |g| ghz_parity_signal(c0, n, g));
        assert!((extract_coherence_parity(&dense, n).unwrap().value - c0).norm() < 1e-12);
        assert!((extract_coherence_fit(&dense, n).unwrap().value - c0).norm() < 1e-12);
    }

    #[test]
    fn wrong_grid_is_rejected() {
        let mut t = parity_table(3, parity_settings(3), |_| 0.0);
        t.angles[1] += 0.01;
        assert!(matches!(
            extract_coherence_parity(&t, 3),
            Err(Error::SettingsMismatch(_))
        ));
        let t = parity_table(3, parity_settings(3), |_| 0.0);
        assert!(extract_coherence_parity(&t, 4).is_err());
    }

    #[test]
    fn mqc_of_ideal_ghz() {
        let n = 6;
        let angles = mqc_settings(n);
        let k = angles.len();
        let t = SignalTable {
            method: Method::Mqc,
            num_qubits: n,
            values: angles.iter().map(|&p| (1.0 + (n as f64 * p).cos()) / 2.0).collect(),
            angles,
            stds: vec![0.0; k],
            shots: vec![0; k],
            repetition: 0,
        };
        let c = extract_coherence_mqc(&t, n).unwrap();
        assert!((c.magnitude - 0.5).abs() < 1e-12);
        let zero = SignalTable {
            values: vec![0.0; k],
            ..t
        };
        assert_eq!(extract_coherence_mqc(&zero, n).unwrap().magnitude, 0.0);
    }

    #[test]
    fn fit_closed_forms() {
        let t = parity_table(8, parity_grid(81), |g| -(8.0 * g).cos());
        let f = sinusoid_fit(&t, 8).unwrap();
        assert!((f.amplitude - 1.0).abs() < 1e-12);
        assert!((f.phase - PI).abs() < 1e-12);
        let z = parity_table(8, parity_grid(81), |_| 0.0);
        assert_eq!(sinusoid_fit(&z, 8).unwrap().amplitude, 0.0);
        let degenerate = parity_table(1, vec![0.0, 2.0 * PI, 4.0 * PI], |_| 1.0);
        assert!(matches!(sinusoid_fit(&degenerate, 1), Err(Error::Fit(_))));
        let short = parity_table(1, vec![0.0, 1.0], |_| 1.0);
        assert!(matches!(sinusoid_fit(&short, 1), Err(Error::Fit(_))));
    }
}
