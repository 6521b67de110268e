use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::readout::{apply_readout_error, mitigate_readout, ProductObservable, ReadoutModel};
use super::signals::{Method, SignalTable};
use crate::qsim::{gate, Circuit, StateVector};
use crate::rng::SeedStream;
use crate::vqc::Mode;
use crate::{Error, Result};

/// How a single measurement setting is evaluated.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasureSettings {
    pub mode: Mode,
    /// Shots per setting (shot mode only).
    pub shots: usize,
    pub readout: ReadoutModel,
    /// Apply the tensor-product readout correction.
    pub mitigate: bool,
}

impl MeasureSettings {
    /// Exact expectations without readout errors.
    pub fn exact(n: usize) -> Self {
        Self {
            mode: Mode::Exact,
            shots: 0,
            readout: ReadoutModel::ideal(n),
            mitigate: false,
        }
    }

    pub fn shots(n: usize, shots: usize) -> Self {
        Self {
            mode: Mode::Shots,
            shots,
            readout: ReadoutModel::ideal(n),
            mitigate: false,
        }
    }

    pub fn with_readout(mut self, readout: ReadoutModel, mitigate: bool) -> Self {
        self.readout = readout;
        self.mitigate = mitigate;
        self
    }

    fn check(&self, n: usize) -> Result<()> {
        self.readout.check_qubits(n)?;
        if self.mode == Mode::Shots && self.shots == 0 {
            return Err(Error::InvalidArgument("shot mode needs at least one shot".into()));
        }
        Ok(())
    }
}

/// One point of a signal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignalPoint {
    pub value: f64,
    pub std: f64,
    pub shots: usize,
}

/// `(√2/2)[[1, e^{−iγ}], [−e^{iγ}, 1]] = U3(π/2, γ−π, π−γ)`: a Z readout
/// after it measures `cos γ σ_x + sin γ σ_y`.
fn parity_rotation(gamma: f64) -> crate::qsim::Matrix2 {
    gate::u3(PI / 2.0, gamma - PI, PI - gamma)
}

/// Mean of a two-valued diagonal product observable (values 1 and `low`) on
/// `state`, including the readout channel and, if requested, its correction.
fn evaluate(
    state: &StateVector,
    observable: &ProductObservable,
    settings: &MeasureSettings,
    stream: &SeedStream,
    low: f64,
) -> Result<SignalPoint> {
    match settings.mode {
        Mode::Exact => {
            let effective = if settings.mitigate || settings.readout.is_ideal() {
                observable.clone()
            } else {
                observable.degraded(&settings.readout)
            };
            Ok(SignalPoint {
                value: effective.mean(&state.probabilities()),
                std: 0.0,
                shots: 0,
            })
        }
        Mode::Shots => {
            let m = settings.shots;
            let raw = state.sample(m, &mut stream.derive("sample", &[]).rng());
            let noisy = apply_readout_error(&raw, &settings.readout, &stream.derive("readout", &[]));
            let (value, std) = if settings.mitigate {
                mitigate_readout(&noisy, &settings.readout, observable)?
            } else {
                let hits = noisy.iter().filter(|&&s| observable.value(s) == 1.0).count();
                let p = hits as f64 / m as f64;
                (low + (1.0 - low) * p, (1.0 - low) * (p * (1.0 - p) / m as f64).sqrt())
            };
            Ok(SignalPoint { value, std, shots: m })
        }
    }
}

/// Parity `⟨⊗_q (cos γ σ_x + sin γ σ_y)⟩` on a prepared state. In shot mode
/// the raw estimate is `(M₊ − M₋)/M` with standard error `2√(p(1−p)/M)`.
pub fn parity_point(
    state: &StateVector,
    gamma: f64,
    settings: &MeasureSettings,
    stream: &SeedStream,
) -> Result<SignalPoint> {
    let n = state.num_qubits();
    settings.check(n)?;
    let mut rotated = state.clone();
    let m = parity_rotation(gamma);
    for q in 0..n {
        rotated.apply_matrix(q, &m);
    }
    evaluate(&rotated, &ProductObservable::parity(n), settings, stream, -1.0)
}

/// Runs `circuit(params)` and measures the parity at angle `gamma`.
pub fn measure_parity(
    circuit: &Circuit,
    params: &[f64],
    gamma: f64,
    settings: &MeasureSettings,
    stream: &SeedStream,
) -> Result<SignalPoint> {
    parity_point(&circuit.prepare(params)?, gamma, settings, stream)
}

/// The echo `U†·RZ(φ)^{⊗n}·RX(π)^{⊗n}` applied to the prepared state `U|0⟩`,
/// followed by the probability of reading `0…0`.
pub fn mqc_point(
    prepared: &StateVector,
    inverse: &Circuit,
    phi: f64,
    settings: &MeasureSettings,
    stream: &SeedStream,
) -> Result<SignalPoint> {
    let n = prepared.num_qubits();
    settings.check(n)?;
    let mut s = prepared.clone();
    let rx = gate::rx(PI);
    let rz = gate::rz(phi);
    for q in 0..n {
        s.apply_matrix(q, &rx);
        s.apply_matrix(q, &rz);
    }
    inverse.apply(&mut s, &[])?;
    evaluate(&s, &ProductObservable::ground_indicator(n), settings, stream, 0.0)
}

/// Runs the MQC echo for `circuit(params)` at phase `phi`.
pub fn measure_mqc(
    circuit: &Circuit,
    params: &[f64],
    phi: f64,
    settings: &MeasureSettings,
    stream: &SeedStream,
) -> Result<SignalPoint> {
    let inverse = circuit.bind(params)?.inverse()?;
    mqc_point(&circuit.prepare(params)?, &inverse, phi, settings, stream)
}

/// Parity signal on `angles`; setting `k` of repetition `r` draws from
/// `stream.derive("parity", [k, r])`.
pub fn parity_signals(
    state: &StateVector,
    angles: &[f64],
    settings: &MeasureSettings,
    stream: &SeedStream,
    repetition: usize,
) -> Result<SignalTable> {
    let points = angles
        .iter()
        .enumerate()
        .map(|(k, &g)| {
            parity_point(
                state,
                g,
                settings,
                &stream.derive("parity", &[k as u64, repetition as u64]),
            )
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(table(Method::Parity, state.num_qubits(), angles, points, repetition))
}

/// MQC signal on `angles` for the state prepared by `circuit(params)`.
pub fn mqc_signals(
    circuit: &Circuit,
    params: &[f64],
    angles: &[f64],
    settings: &MeasureSettings,
    stream: &SeedStream,
    repetition: usize,
) -> Result<SignalTable> {
    let prepared = circuit.prepare(params)?;
    let inverse = circuit.bind(params)?.inverse()?;
    let points = angles
        .iter()
        .enumerate()
        .map(|(k, &phi)| {
            mqc_point(
                &prepared,
                &inverse,
                phi,
                settings,
                &stream.derive("mqc", &[k as u64, repetition as u64]),
            )
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(table(Method::Mqc, prepared.num_qubits(), angles, points, repetition))
}

fn table(method: Method, n: usize, angles: &[f64], points: Vec<SignalPoint>, repetition: usize) -> SignalTable {
    SignalTable {
        method,
        num_qubits: n,
        angles: angles.to_vec(),
        values: points.iter().map(|p| p.value).collect(),
        stds: points.iter().map(|p| p.std).collect(),
        shots: points.iter().map(|p| p.shots).collect(),
        repetition,
    }
}

/// The noiseless parity signal implied by a coherence value alone:
/// `2 Re(⟨C⟩ e^{−inγ})`. For GHZ-type states this is the whole signal.
pub fn ghz_parity_signal(coherence: Complex64, n: usize, gamma: f64) -> f64 {
    2.0 * (coherence * Complex64::from_polar(1.0, -(n as f64) * gamma)).re
}
