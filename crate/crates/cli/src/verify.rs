//! The invariant suite behind `bellcorr verify`.
//!
//! Each check is a small, deterministic computation with a closed-form or
//! independent expected value. Checks never panic: a library error is
//! reported as a failed check.

use std::f64::consts::PI;

use bellcorr::bell::{
    bell_operator_dense, build_chain_expression, build_chain_hamiltonian, build_chsh_expression,
    build_gisin_expression, build_honeycomb_expression, build_honeycomb_hamiltonian, build_mermin_expression,
    build_svetlichny_expression, classical_bound_chain, ghz_bell_operator_dense, honeycomb_settings,
    lhv_bound_bruteforce, BellExpression, HoneycombLattice, MeasurementAssignment,
};
use bellcorr::measure::{
    extract_coherence_mqc, extract_coherence_parity, mqc_settings, mqc_signals, parity_settings, parity_signals,
    MeasureSettings, ReadoutModel,
};
use bellcorr::qsim::{Angle, Circuit, GateOp, Observable, PauliSum, StateVector};
use bellcorr::rng::SeedStream;
use bellcorr::vqc::parameter_shift_gradient;
use bellcorr::Error;
use rand::Rng;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckOutcome {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl CheckOutcome {
    fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            passed,
            detail: detail.into(),
        }
    }

    fn from_result(name: impl Into<String>, r: bellcorr::Result<(bool, String)>) -> Self {
        match r {
            Ok((passed, detail)) => Self::new(name, passed, detail),
            Err(e) => Self::new(name, false, format!("error: {e}")),
        }
    }
}

/// Runs every check in a fixed order.
pub fn run_checks() -> Vec<CheckOutcome> {
    let mut out = Vec::new();
    out.extend(bound_checks());
    out.extend(operator_checks());
    out.push(gradient_check(20, 5, 1e-6));
    out.push(fourier_check());
    out.extend(readout_checks());
    out
}

fn bound_check(name: &str, expr: &BellExpression, expected: f64) -> CheckOutcome {
    CheckOutcome::from_result(
        name,
        lhv_bound_bruteforce(expr).map(|b| {
            let ok = (b - expected).abs() < 1e-9 && (expr.classical_bound - expected).abs() < 1e-9;
            (
                ok,
                format!("closed form {:.6}, enumeration {b:.6}", expr.classical_bound),
            )
        }),
    )
}

fn bound_checks() -> Vec<CheckOutcome> {
    let mut out = vec![
        bound_check("bounds/chsh", &build_chsh_expression().0, -2.0),
        bound_check("bounds/gisin", &build_gisin_expression().0, -6.0),
    ];
    for (n, delta) in [(3, 2.0), (5, 2.0), (3, 0.5)] {
        let name = format!("bounds/chain n={n} delta={delta}");
        match (build_chain_expression(n, delta, 0.95), classical_bound_chain(n, delta)) {
            (Ok((e, _)), Ok(b)) => out.push(bound_check(&name, &e, b)),
            (Err(e), _) | (_, Err(e)) => out.push(CheckOutcome::new(name, false, format!("error: {e}"))),
        }
    }
    for n in 2..=6 {
        for (label, built) in [
            ("svetlichny", build_svetlichny_expression(n)),
            ("mermin", build_mermin_expression(n)),
        ] {
            let name = format!("bounds/{label} n={n}");
            let expected = if label == "svetlichny" {
                -2f64.powf((n % 2) as f64 / 2.0)
            } else {
                -2f64.powf(((n + 1) % 2) as f64 / 2.0)
            };
            match built {
                Ok((e, _)) => out.push(bound_check(&name, &e, expected)),
                Err(e) => out.push(CheckOutcome::new(name, false, format!("error: {e}"))),
            }
        }
    }
    out
}

/// Compares the Bell operator of `expr` under `meas` with `expected`
/// elementwise.
pub fn check_operator(
    name: &str,
    expr: &BellExpression,
    meas: &MeasurementAssignment,
    expected: &PauliSum,
) -> CheckOutcome {
    CheckOutcome::from_result(
        name,
        (|| {
            let got = bell_operator_dense(expr, meas)?;
            let want = expected.to_dense()?;
            let dev = (got - want).iter().map(|z| z.norm()).fold(0.0, f64::max);
            Ok((dev <= 1e-9, format!("max deviation {dev:.2e}")))
        })(),
    )
}

/// Like [`check_operator`] against `2^{(n−1)/2}(|0…0⟩⟨1…1| + h.c.)`.
pub fn check_ghz_operator(name: &str, expr: &BellExpression, meas: &MeasurementAssignment) -> CheckOutcome {
    CheckOutcome::from_result(
        name,
        (|| {
            let got = bell_operator_dense(expr, meas)?;
            let want = ghz_bell_operator_dense(expr.num_parties)?;
            let dev = (got - want).iter().map(|z| z.norm()).fold(0.0, f64::max);
            Ok((dev <= 1e-9, format!("max deviation {dev:.2e}")))
        })(),
    )
}

fn operator_checks() -> Vec<CheckOutcome> {
    let mut out = Vec::new();
    match HoneycombLattice::brick_wall_rect(2, 3) {
        Ok(lat) => {
            let expr = build_honeycomb_expression(&lat, 0.9);
            let h = build_honeycomb_hamiltonian(&lat, 0.9);
            match (expr, h) {
                (Ok(e), Ok(h)) => out.push(check_operator("operator/honeycomb", &e, &honeycomb_settings(&lat), &h)),
                (Err(e), _) | (_, Err(e)) => out.push(CheckOutcome::new("operator/honeycomb", false, e.to_string())),
            }
        }
        Err(e) => out.push(CheckOutcome::new("operator/honeycomb", false, e.to_string())),
    }
    for n in [3, 5] {
        let name = format!("operator/chain n={n}");
        match (
            build_chain_expression(n, 2.0, 0.95),
            build_chain_hamiltonian(n, 2.0, 0.95),
        ) {
            (Ok((e, m)), Ok(h)) => out.push(check_operator(&name, &e, &m, &h)),
            (Err(e), _) | (_, Err(e)) => out.push(CheckOutcome::new(name, false, e.to_string())),
        }
    }
    for n in 2..=6 {
        for (label, built) in [
            ("svetlichny", build_svetlichny_expression(n)),
            ("mermin", build_mermin_expression(n)),
        ] {
            let name = format!("operator/{label} n={n}");
            match built {
                Ok((e, m)) => out.push(check_ghz_operator(&name, &e, &m)),
                Err(e) => out.push(CheckOutcome::new(name, false, e.to_string())),
            }
        }
    }
    out
}

/// A random circuit over every parameterised gate kind and both entanglers.
/// Slots may be shared by several angles of one gate, never across gates.
pub fn random_circuit(n: usize, depth: usize, stream: &SeedStream) -> (Circuit, Vec<f64>) {
    let mut rng = stream.rng();
    let mut c = Circuit::new(n);
    for _ in 0..depth {
        let q = rng.gen_range(0..n);
        let op = match rng.gen_range(0..6) {
            0 => GateOp::H(q),
            1 => GateOp::Rz(q, c.new_slot()),
            2 => GateOp::Rx(q, c.new_slot()),
            3 => {
                let (t, p, l) = (
                    random_angle(&mut c, &mut rng),
                    random_angle(&mut c, &mut rng),
                    random_angle(&mut c, &mut rng),
                );
                GateOp::u3(q, t, p, l)
            }
            _ if n < 2 => GateOp::H(q),
            k => {
                let mut t = rng.gen_range(0..n - 1);
                if t >= q {
                    t += 1;
                }
                if k == 4 {
                    GateOp::Cz(q, t)
                } else {
                    GateOp::cnot(q, t)
                }
            }
        };
        c.push(op).expect("generated gate is valid");
    }
    let params = (0..c.num_params()).map(|_| rng.gen_range(-PI..PI)).collect();
    (c, params)
}

fn random_angle<R: Rng>(c: &mut Circuit, rng: &mut R) -> Angle {
    if rng.gen_bool(0.7) {
        c.new_slot()
    } else {
        Angle::Fixed(rng.gen_range(-PI..PI))
    }
}

/// A random Hamiltonian of one- and two-body Pauli terms.
pub fn random_hamiltonian(n: usize, terms: usize, stream: &SeedStream) -> PauliSum {
    let mut rng = stream.rng();
    let letters = ['I', 'X', 'Y', 'Z'];
    let mut h = PauliSum::new(n);
    for _ in 0..terms {
        let text: String = (0..n).map(|_| letters[rng.gen_range(0..4)]).collect();
        h.parse_term(rng.gen_range(-1.0..1.0), &text).expect("valid term");
    }
    h
}

/// Largest deviation between parameter-shift and central finite-difference
/// gradients (`h = 1e−5`) over `count` random circuits on up to `max_qubits`
/// qubits.
pub fn gradient_deviation(count: usize, max_qubits: usize, seed: u64) -> bellcorr::Result<f64> {
    let root = SeedStream::new(seed).derive("gradient-check", &[]);
    let mut worst: f64 = 0.0;
    for i in 0..count as u64 {
        let n = 1 + (i as usize % max_qubits);
        let (c, params) = random_circuit(n, 4 * n + 4, &root.derive("circuit", &[i]));
        if c.num_params() == 0 {
            continue;
        }
        let h = random_hamiltonian(n, 2 * n + 1, &root.derive("hamiltonian", &[i]));
        let g = parameter_shift_gradient(&c, &h, &params)?;
        let step = 1e-5;
        for (k, gk) in g.iter().enumerate() {
            let mut p = params.clone();
            p[k] += step;
            let up = h.expectation(&c.prepare(&p)?)?;
            p[k] -= 2.0 * step;
            let down = h.expectation(&c.prepare(&p)?)?;
            worst = worst.max((gk - (up - down) / (2.0 * step)).abs());
        }
    }
    Ok(worst)
}

fn gradient_check(count: usize, max_qubits: usize, tol: f64) -> CheckOutcome {
    CheckOutcome::from_result(
        "gradient/shift-vs-difference",
        gradient_deviation(count, max_qubits, 1)
            .map(|d| (d <= tol, format!("{count} circuits, max deviation {d:.2e}"))),
    )
}

fn fourier_check() -> CheckOutcome {
    CheckOutcome::from_result(
        "fourier/sparse-grid-exactness",
        (|| {
            let root = SeedStream::new(2).derive("fourier-check", &[]);
            let mut worst: f64 = 0.0;
            for n in 2..=7 {
                let (c, p) = random_circuit(n, 6 * n, &root.derive("circuit", &[n as u64]));
                let s = c.prepare(&p)?;
                let settings = MeasureSettings::exact(n);
                let t = parity_signals(&s, &parity_settings(n), &settings, &root, 0)?;
                let direct = s.antidiagonal_coherence();
                worst = worst.max((extract_coherence_parity(&t, n)?.value - direct).norm());
                let t = mqc_signals(&c, &p, &mqc_settings(n), &settings, &root, 0)?;
                worst = worst.max((extract_coherence_mqc(&t, n)?.magnitude - direct.norm()).abs());
            }
            Ok((worst <= 1e-9, format!("max deviation {worst:.2e}")))
        })(),
    )
}

/// Exact-mode ratio of the readout-degraded to the ideal parity and MQC
/// coherences for an `n`-qubit GHZ state with symmetric error `e`.
pub fn degradation_ratios(n: usize, e: f64) -> bellcorr::Result<(f64, f64)> {
    let mut c = Circuit::new(n);
    c.push(GateOp::H(0))?;
    for q in 1..n {
        c.push(GateOp::cnot(q - 1, q))?;
    }
    let s = c.prepare(&[])?;
    let ideal = MeasureSettings::exact(n);
    let noisy = MeasureSettings::exact(n).with_readout(ReadoutModel::symmetric(n, e)?, false);
    let root = SeedStream::new(0);
    let parity = |m: &MeasureSettings| -> bellcorr::Result<f64> {
        Ok(
            extract_coherence_parity(&parity_signals(&s, &parity_settings(n), m, &root, 0)?, n)?
                .value
                .re,
        )
    };
    let mqc = |m: &MeasureSettings| -> bellcorr::Result<f64> {
        Ok(extract_coherence_mqc(&mqc_signals(&c, &[], &mqc_settings(n), m, &root, 0)?, n)?.magnitude)
    };
    Ok((parity(&noisy)? / parity(&ideal)?, mqc(&noisy)? / mqc(&ideal)?))
}

fn readout_checks() -> Vec<CheckOutcome> {
    let e = 0.0085;
    let mut out = Vec::new();
    for n in [4, 8, 12] {
        out.push(CheckOutcome::from_result(
            format!("readout/degradation n={n}"),
            degradation_ratios(n, e).map(|(p, m)| {
                let p_law = (1.0 - 2.0 * e).powi(n as i32);
                let m_law = (1.0 - e).powf(n as f64 / 2.0);
                let ok = (p - p_law).abs() < 1e-9 && (m / m_law - 1.0).abs() < 0.01 && m > p;
                (
                    ok,
                    format!("parity {p:.6} (law {p_law:.6}), mqc {m:.6} (law {m_law:.6})"),
                )
            }),
        ));
    }
    out.push(CheckOutcome::from_result(
        "readout/mitigation-round-trip",
        (|| {
            let n = 6;
            let s = StateVector::ghz(n, PI)?;
            let model = ReadoutModel::new(vec![0.02; n], vec![0.05; n])?;
            let settings = MeasureSettings::shots(n, 20_000).with_readout(model, true);
            let t = parity_signals(&s, &parity_settings(n), &settings, &SeedStream::new(3), 0)?;
            let c = extract_coherence_parity(&t, n)?;
            let z = (c.value.re + 0.5).abs() / c.std;
            Ok((
                z < 3.0,
                format!("Re⟨C⟩ = {:.5} ± {:.5}, {z:.2}σ from −1/2", c.value.re, c.std),
            ))
        })(),
    ));
    let invalid = ReadoutModel::new(vec![0.6], vec![0.5]);
    out.push(CheckOutcome::new(
        "readout/invalid-model-rejected",
        matches!(invalid, Err(Error::InvalidModel(_))),
        "e0 + e1 ≥ 1",
    ));
    out
}
