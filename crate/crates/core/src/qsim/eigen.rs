//! Lowest eigenvalue of an observable.
//!
//! The iterative path is a matrix-free Lanczos recurrence that keeps only a
//! handful of vectors, so it reaches registers where the dense matrix would
//! not fit. Ritz vectors are rebuilt by a second pass of the recurrence when a
//! cycle stalls, and the cycle restarts from that vector.

use num_complex::Complex64;
use rand::Rng;

use super::observable::Observable;
use super::pauli::PauliSum;
use crate::rng::SeedStream;
use crate::{Error, Result};

#[derive(Debug, Clone)]
pub struct LanczosConfig {
    /// Relative residual tolerance `‖Hx − θx‖ ≤ tol·max(1, |θ|)`.
    pub tol: f64,
    /// Cap on the total number of operator applications.
    pub max_iter: usize,
    /// Recurrence length before a restart.
    pub cycle_len: usize,
    pub seed: u64,
}

impl Default for LanczosConfig {
    fn default() -> Self {
        Self {
            tol: 1e-8,
            max_iter: 10_000,
            cycle_len: 400,
            seed: 0x1a2c_2055,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct LanczosOutcome {
    pub energy: f64,
    pub iterations: usize,
    pub restarts: usize,
    pub residual: f64,
}

/// Ground energy with the default solver configuration.
pub fn ground_energy<O: Observable + ?Sized>(h: &O) -> Result<f64> {
    ground_energy_with(h, &LanczosConfig::default()).map(|o| o.energy)
}

pub fn ground_energy_with<O: Observable + ?Sized>(h: &O, cfg: &LanczosConfig) -> Result<LanczosOutcome> {
    let n = h.num_qubits();
    if n == 0 || n > super::MAX_QUBITS {
        return Err(Error::Capacity(format!("{n}-qubit eigenproblem")));
    }
    let dim = 1usize << n;

    let mut rng = SeedStream::new(cfg.seed).derive("lanczos-start", &[n as u64]).rng();
    let mut start: Vec<Complex64> = (0..dim)
        .map(|_| Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5))
        .collect();
    normalize(&mut start);

    let mut total = 0usize;
    let mut restarts = 0usize;
    let last_residual = loop {
        let cycle = run_cycle(h, &start, cfg, &mut total)?;
        if cycle.converged {
            return Ok(LanczosOutcome {
                energy: cycle.theta,
                iterations: total,
                restarts,
                residual: cycle.residual,
            });
        }
        if total >= cfg.max_iter {
            break cycle.residual;
        }
        start = ritz_vector(h, &start, &cycle.alphas, &cycle.betas, &cycle.y);
        total += cycle.y.len();
        restarts += 1;
    };
    Err(Error::NotConverged {
        iterations: total,
        residual: last_residual,
    })
}

struct Cycle {
    alphas: Vec<f64>,
    betas: Vec<f64>,
    theta: f64,
    y: Vec<f64>,
    residual: f64,
    converged: bool,
}

fn run_cycle<O: Observable + ?Sized>(
    h: &O,
    start: &[Complex64],
    cfg: &LanczosConfig,
    total: &mut usize,
) -> Result<Cycle> {
    let dim = start.len();
    let mut prev = vec![Complex64::new(0.0, 0.0); dim];
    let mut cur = start.to_vec();
    let mut w = vec![Complex64::new(0.0, 0.0); dim];
    let mut alphas = Vec::new();
    let mut betas: Vec<f64> = Vec::new();
    let mut best = (f64::INFINITY, Vec::new(), f64::INFINITY);

    for j in 0..cfg.cycle_len {
        if *total >= cfg.max_iter {
            break;
        }
        h.apply(&cur, &mut w);
        *total += 1;
        let alpha = dot(&cur, &w).re;
        if !alpha.is_finite() {
            return Err(Error::NonFinite("Lanczos recurrence".into()));
        }
        let beta_prev = betas.last().copied().unwrap_or(0.0);
        for i in 0..dim {
            w[i] -= cur[i] * alpha + prev[i] * beta_prev;
        }
        let beta = norm(&w);
        alphas.push(alpha);

        let scale = alphas.iter().map(|a| a.abs()).fold(beta, f64::max).max(1.0);
        let breakdown = beta <= 1e-13 * scale;
        if breakdown || j % 4 == 3 || j + 1 == cfg.cycle_len {
            let theta = tridiag_min_eigenvalue(&alphas, &betas);
            let y = tridiag_eigenvector(&alphas, &betas, theta);
            let residual = if breakdown { 0.0 } else { beta * y.last().unwrap().abs() };
            best = (theta, y, residual);
            if residual <= cfg.tol * theta.abs().max(1.0) {
                return Ok(Cycle {
                    alphas,
                    betas,
                    theta: best.0,
                    y: best.1,
                    residual,
                    converged: true,
                });
            }
        }
        if breakdown {
            break;
        }
        betas.push(beta);
        std::mem::swap(&mut prev, &mut cur);
        for i in 0..dim {
            cur[i] = w[i] / beta;
        }
    }
    // The eigenvector has one entry per alpha; drop a trailing beta if the
    // loop exited right after pushing it.
    betas.truncate(alphas.len().saturating_sub(1));
    if best.1.len() != alphas.len() {
        let theta = tridiag_min_eigenvalue(&alphas, &betas);
        let y = tridiag_eigenvector(&alphas, &betas, theta);
        best = (theta, y, best.2);
    }
    Ok(Cycle {
        alphas,
        betas,
        theta: best.0,
        y: best.1,
        residual: best.2,
        converged: false,
    })
}

/// Regenerates the Lanczos basis from `start` and forms `Σ y_k v_k`.
fn ritz_vector<O: Observable + ?Sized>(
    h: &O,
    start: &[Complex64],
    alphas: &[f64],
    betas: &[f64],
    y: &[f64],
) -> Vec<Complex64> {
    let dim = start.len();
    let mut prev = vec![Complex64::new(0.0, 0.0); dim];
    let mut cur = start.to_vec();
    let mut w = vec![Complex64::new(0.0, 0.0); dim];
    let mut x: Vec<Complex64> = cur.iter().map(|c| c * y[0]).collect();
    for k in 1..y.len() {
        h.apply(&cur, &mut w);
        let beta_prev = if k >= 2 { betas[k - 2] } else { 0.0 };
        for i in 0..dim {
            w[i] = (w[i] - cur[i] * alphas[k - 1] - prev[i] * beta_prev) / betas[k - 1];
        }
        std::mem::swap(&mut prev, &mut cur);
        std::mem::swap(&mut cur, &mut w);
        for i in 0..dim {
            x[i] += cur[i] * y[k];
        }
    }
    normalize(&mut x);
    x
}

fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn norm(a: &[Complex64]) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

fn normalize(a: &mut [Complex64]) {
    let n = norm(a);
    for x in a.iter_mut() {
        *x /= n;
    }
}

/// Number of eigenvalues of the tridiagonal matrix strictly below `x`.
fn sturm_count(alphas: &[f64], betas: &[f64], x: f64) -> usize {
    let mut count = 0;
    let mut d = 1.0;
    for (k, &a) in alphas.iter().enumerate() {
        let b2 = if k == 0 { 0.0 } else { betas[k - 1] * betas[k - 1] };
        d = a - x - if k == 0 { 0.0 } else { b2 / d };
        if d == 0.0 {
            d = -f64::EPSILON * (a.abs() + x.abs()).max(f64::MIN_POSITIVE);
        }
        if d < 0.0 {
            count += 1;
        }
    }
    count
}

fn tridiag_min_eigenvalue(alphas: &[f64], betas: &[f64]) -> f64 {
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for (k, &a) in alphas.iter().enumerate() {
        let left = if k == 0 { 0.0 } else { betas[k - 1].abs() };
        let right = betas.get(k).map_or(0.0, |b| b.abs());
        lo = lo.min(a - left - right);
        hi = hi.max(a + left + right);
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if sturm_count(alphas, betas, mid) >= 1 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Inverse iteration with a shift just below `theta`, which keeps the shifted
/// matrix positive definite so the unpivoted solve is stable.
fn tridiag_eigenvector(alphas: &[f64], betas: &[f64], theta: f64) -> Vec<f64> {
    let m = alphas.len();
    let shift = theta - 1e-10 * theta.abs().max(1.0);
    let mut y = vec![1.0; m];
    for _ in 0..3 {
        // Thomas algorithm for (T − shift)·z = y.
        let mut c = vec![0.0; m];
        let mut d = vec![0.0; m];
        let mut denom = alphas[0] - shift;
        c[0] = if m > 1 { betas[0] / denom } else { 0.0 };
        d[0] = y[0] / denom;
        for k in 1..m {
            denom = alphas[k] - shift - betas[k - 1] * c[k - 1];
            c[k] = if k + 1 < m { betas[k] / denom } else { 0.0 };
            d[k] = (y[k] - betas[k - 1] * d[k - 1]) / denom;
        }
        let mut z = vec![0.0; m];
        z[m - 1] = d[m - 1];
        for k in (0..m - 1).rev() {
            z[k] = d[k] - c[k] * z[k + 1];
        }
        let n = z.iter().map(|v| v * v).sum::<f64>().sqrt();
        y = z.into_iter().map(|v| v / n).collect();
    }
    y
}

/// Lowest eigenvalue from a dense Hermitian eigendecomposition (n ≤ 12).
pub fn ground_energy_dense(h: &PauliSum) -> Result<f64> {
    let m = h.to_dense()?;
    let herm_err = (&m - m.adjoint()).iter().map(|c| c.norm()).fold(0.0, f64::max);
    if herm_err > 1e-12 {
        return Err(Error::InvalidArgument(format!(
            "operator is not Hermitian ({herm_err:e})"
        )));
    }
    let evals = m.symmetric_eigenvalues();
    Ok(evals.iter().copied().fold(f64::INFINITY, f64::min))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn xxz(delta: f64) -> PauliSum {
        let c = 4.0 / 3f64.sqrt();
        let mut h = PauliSum::new(2);
        h.parse_term(c, "XX")
            .unwrap()
            .parse_term(c, "YY")
            .unwrap()
            .parse_term(c * delta, "ZZ")
            .unwrap();
        h
    }

    #[test]
    fn chsh_operator_ground() {
        let r2 = 2f64.sqrt();
        let mut h = PauliSum::new(2);
        h.parse_term(r2, "XX").unwrap().parse_term(r2, "ZZ").unwrap();
        let want = -2.0 * r2;
        assert!((ground_energy_dense(&h).unwrap() - want).abs() < 1e-12);
        assert!((ground_energy(&h).unwrap() - want).abs() < 1e-8);
    }

    #[test]
    fn gisin_family_ground() {
        let c = 4.0 / 3f64.sqrt();
        // Closed form: (4/√3)Δ for Δ ≤ −1, −(4/√3)(2+Δ) above.
        for (delta, want) in [(2.0, -c * 4.0), (-1.0, -c), (0.5, -c * 2.5), (-3.0, -3.0 * c)] {
            let h = xxz(delta);
            let d = ground_energy_dense(&h).unwrap();
            let l = ground_energy(&h).unwrap();
            assert!((d - want).abs() < 1e-10, "Δ={delta}: dense {d} vs {want}");
            assert!((l - want).abs() < 1e-8 * want.abs().max(1.0), "Δ={delta}: lanczos {l}");
        }
    }

    #[test]
    fn lanczos_agrees_with_dense_on_random_chain() {
        let mut h = PauliSum::new(8);
        let coeffs = [0.3, -1.1, 0.7, 2.0, -0.4, 0.9, 1.3];
        for (i, &c) in coeffs.iter().enumerate() {
            h.add_two_body(c, i, super::super::Pauli::X, i + 1, super::super::Pauli::X)
                .unwrap();
            h.add_two_body(0.5 * c, i, super::super::Pauli::Y, i + 1, super::super::Pauli::Y)
                .unwrap();
            h.add_two_body(-0.8, i, super::super::Pauli::Z, i + 1, super::super::Pauli::Z)
                .unwrap();
        }
        h.parse_term(0.25, "XIIZIIYI").unwrap();
        let d = ground_energy_dense(&h).unwrap();
        let out = ground_energy_with(&h, &LanczosConfig::default()).unwrap();
        assert!((out.energy - d).abs() <= 1e-8 * d.abs(), "{} vs {d}", out.energy);
    }

    #[test]
    fn short_cycles_restart_and_still_converge() {
        let mut h = PauliSum::new(6);
        for i in 0..5 {
            h.add_two_body(
                1.0 + 0.1 * i as f64,
                i,
                super::super::Pauli::X,
                i + 1,
                super::super::Pauli::X,
            )
            .unwrap();
            h.add_two_body(1.0, i, super::super::Pauli::Z, i + 1, super::super::Pauli::Z)
                .unwrap();
        }
        let cfg = LanczosConfig {
            cycle_len: 12,
            ..Default::default()
        };
        let out = ground_energy_with(&h, &cfg).unwrap();
        let d = ground_energy_dense(&h).unwrap();
        assert!(out.restarts > 0);
        assert!((out.energy - d).abs() <= 1e-8 * d.abs());
    }

    #[test]
    fn iteration_cap_reports_diagnostic() {
        let mut h = PauliSum::new(8);
        for i in 0..7 {
            h.add_two_body(1.0, i, super::super::Pauli::X, i + 1, super::super::Pauli::X)
                .unwrap();
            h.add_two_body(0.7, i, super::super::Pauli::Z, i + 1, super::super::Pauli::Z)
                .unwrap();
        }
        let cfg = LanczosConfig {
            max_iter: 3,
            cycle_len: 3,
            ..Default::default()
        };
        assert!(matches!(ground_energy_with(&h, &cfg), Err(Error::NotConverged { .. })));
    }
}
