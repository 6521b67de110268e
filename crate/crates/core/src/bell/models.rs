//! The concrete inequalities: CHSH, Gisin's elegant inequality, the honeycomb
//! and chain families, and the N-party Svetlichny and Mermin expressions.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::expression::{BellExpression, BlochVector, Correlator, MeasurementAssignment};
use super::lattice::{HoneycombLattice, LinkColor, Sublattice};
use crate::qsim::{Pauli, PauliSum};
use crate::{Error, Result};

/// Largest party count accepted by the N-party builders.
pub const MAX_MULTIPARTITE: usize = 24;

fn check_eps(eps: f64) -> Result<()> {
    if !(-1.0..=1.0).contains(&eps) {
        return Err(Error::InvalidArgument(format!("eps = {eps} outside [-1, 1]")));
    }
    Ok(())
}

fn check_parties(n: usize) -> Result<()> {
    if !(2..=MAX_MULTIPARTITE).contains(&n) {
        return Err(Error::InvalidArgument(format!(
            "party count {n} outside 2..={MAX_MULTIPARTITE}"
        )));
    }
    Ok(())
}

/// CHSH weights `(−1)^{xy}` between parties `a` (settings 0, 1) and `b`.
fn chsh_terms(a: usize, b: usize, j: f64) -> impl Iterator<Item = Correlator> {
    (0..4).map(move |xy| {
        let (x, y) = (xy >> 1, xy & 1);
        Correlator {
            weight: if x & y == 1 { -j } else { j },
            factors: vec![(a, x), (b, y)],
        }
    })
}

fn chsh_a() -> Vec<BlochVector> {
    vec![BlochVector::z(), BlochVector::x()]
}

fn chsh_b() -> Vec<BlochVector> {
    vec![
        BlochVector::new(FRAC_1_SQRT_2, 0.0, FRAC_1_SQRT_2).expect("unit"),
        BlochVector::new(-FRAC_1_SQRT_2, 0.0, FRAC_1_SQRT_2).expect("unit"),
    ]
}

/// CHSH with `A₀ = Z`, `A₁ = X`, `B_{0,1} = (Z ± X)/√2`; the Bell operator is
/// `√2(XX + ZZ)` and the classical bound −2.
pub fn build_chsh_expression() -> (BellExpression, MeasurementAssignment) {
    let expr = BellExpression::sparse("chsh", vec![2, 2], chsh_terms(0, 1, 1.0).collect(), -2.0).expect("valid");
    (expr, MeasurementAssignment::new(vec![chsh_a(), chsh_b()]))
}

/// Coupling `J_τ(ε)` of a honeycomb link: `1 + ε` on red links, `(1 − ε)/2`
/// on blue and green ones.
pub fn honeycomb_coupling(color: LinkColor, eps: f64) -> f64 {
    match color {
        LinkColor::Red => 1.0 + eps,
        LinkColor::Blue | LinkColor::Green => (1.0 - eps) / 2.0,
    }
}

/// One CHSH inequality per link, weighted by `J_τ(ε)`; `β_C = −2 Σ_τ J_τ`.
pub fn build_honeycomb_expression(lattice: &HoneycombLattice, eps: f64) -> Result<BellExpression> {
    check_eps(eps)?;
    lattice.validate()?;
    if lattice.links.is_empty() {
        return Err(Error::InvalidLattice("no links".into()));
    }
    let mut terms = Vec::with_capacity(4 * lattice.links.len());
    let mut total = 0.0;
    for link in &lattice.links {
        let j = honeycomb_coupling(link.color(), eps);
        total += j;
        terms.extend(chsh_terms(link.a(), link.b(), j));
    }
    BellExpression::sparse("honeycomb", vec![2; lattice.num_sites], terms, -2.0 * total)
}

/// CHSH settings on every site according to its sublattice.
pub fn honeycomb_settings(lattice: &HoneycombLattice) -> MeasurementAssignment {
    MeasurementAssignment::new(
        lattice
            .sublattice
            .iter()
            .map(|s| match s {
                Sublattice::A => chsh_a(),
                Sublattice::B => chsh_b(),
            })
            .collect(),
    )
}

/// `H = Σ_τ √2 J_τ(ε) (X_a X_b + Z_a Z_b)`, the Bell operator of
/// [`build_honeycomb_expression`] under [`honeycomb_settings`].
pub fn build_honeycomb_hamiltonian(lattice: &HoneycombLattice, eps: f64) -> Result<PauliSum> {
    check_eps(eps)?;
    lattice.validate()?;
    if lattice.links.is_empty() {
        return Err(Error::InvalidLattice("no links".into()));
    }
    let mut h = PauliSum::new(lattice.num_sites);
    for link in &lattice.links {
        let c = 2f64.sqrt() * honeycomb_coupling(link.color(), eps);
        h.add_two_body(c, link.a(), Pauli::X, link.b(), Pauli::X)?;
        h.add_two_body(c, link.a(), Pauli::Z, link.b(), Pauli::Z)?;
    }
    Ok(h)
}

/// The four tetrahedral directions used by the 4-setting party.
fn tetrahedral() -> Vec<BlochVector> {
    let s = 1.0 / 3f64.sqrt();
    [[1.0, 1.0, 1.0], [1.0, -1.0, -1.0], [-1.0, 1.0, -1.0], [-1.0, -1.0, 1.0]]
        .iter()
        .map(|v| BlochVector::new(s * v[0], s * v[1], s * v[2]).expect("unit"))
        .collect()
}

/// Signs `c[x][y]` of the elegant-inequality correlators `⟨A_x B_y⟩`.
const GISIN_SIGNS: [[f64; 3]; 4] = [[1.0, 1.0, 1.0], [1.0, -1.0, -1.0], [-1.0, 1.0, -1.0], [-1.0, -1.0, 1.0]];

fn gisin_terms(a: usize, b: usize, j: f64, delta: f64) -> impl Iterator<Item = Correlator> {
    (0..12).map(move |k| {
        let (x, y) = (k / 3, k % 3);
        let scale = if y == 2 { delta } else { 1.0 };
        Correlator {
            weight: j * scale * GISIN_SIGNS[x][y],
            factors: vec![(a, x), (b, y)],
        }
    })
}

/// Classical minimum of one Δ-deformed elegant-inequality link.
fn gisin_link_bound(delta: f64) -> f64 {
    -(2.0 * delta.abs() + (delta + 2.0).abs() + (delta - 2.0).abs())
}

/// Gisin's elegant inequality (tetrahedral `A`, orthogonal `B`); classical
/// bound −6, Bell operator `(4/√3)(XX + YY + ZZ)`.
pub fn build_gisin_expression() -> (BellExpression, MeasurementAssignment) {
    let expr = BellExpression::sparse(
        "gisin",
        vec![4, 3],
        gisin_terms(0, 1, 1.0, 1.0).collect(),
        gisin_link_bound(1.0),
    )
    .expect("valid");
    let meas = MeasurementAssignment::new(vec![
        tetrahedral(),
        vec![BlochVector::x(), BlochVector::y(), BlochVector::z()],
    ]);
    (expr, meas)
}

/// Weight of chain link `i` (0-based, between qubits `i` and `i+1`), without
/// the `4/√3` operator scale: `1 + ε` on even links, `1 − ε` on odd ones.
pub fn chain_coupling(link: usize, eps: f64) -> f64 {
    if link % 2 == 0 {
        1.0 + eps
    } else {
        1.0 - eps
    }
}

fn check_chain(n: usize, delta: f64, eps: f64) -> Result<()> {
    check_eps(eps)?;
    if !delta.is_finite() {
        return Err(Error::NonFinite("delta".into()));
    }
    if n < 3 || n % 2 == 0 {
        // With an odd number of links the ε-weights no longer sum to n − 1.
        return Err(Error::InvalidArgument(format!(
            "chain length must be odd and ≥ 3, got {n}"
        )));
    }
    if n > crate::qsim::MAX_QUBITS {
        return Err(Error::Capacity(format!("{n}-site chain")));
    }
    Ok(())
}

/// `β_C = −(n − 1)(2|Δ| + |Δ + 2| + |Δ − 2|)` for the deformed chain.
pub fn classical_bound_chain(n: usize, delta: f64) -> Result<f64> {
    if n < 3 || n % 2 == 0 {
        return Err(Error::InvalidArgument(format!(
            "chain length must be odd and ≥ 3, got {n}"
        )));
    }
    Ok((n - 1) as f64 * gisin_link_bound(delta))
}

/// Chain of Δ-deformed elegant inequalities. Even sites measure the four
/// tetrahedral directions, odd sites `X, Y, Z`; link `i` carries weight
/// `1 ± ε`.
pub fn build_chain_expression(n: usize, delta: f64, eps: f64) -> Result<(BellExpression, MeasurementAssignment)> {
    check_chain(n, delta, eps)?;
    let mut terms = Vec::with_capacity(12 * (n - 1));
    for i in 0..n - 1 {
        let (a, b) = if i % 2 == 0 { (i, i + 1) } else { (i + 1, i) };
        terms.extend(gisin_terms(a, b, chain_coupling(i, eps), delta));
    }
    let settings = (0..n).map(|p| if p % 2 == 0 { 4 } else { 3 }).collect();
    let expr = BellExpression::sparse("chain", settings, terms, classical_bound_chain(n, delta)?)?;
    let meas = MeasurementAssignment::new(
        (0..n)
            .map(|p| {
                if p % 2 == 0 {
                    tetrahedral()
                } else {
                    vec![BlochVector::x(), BlochVector::y(), BlochVector::z()]
                }
            })
            .collect(),
    );
    Ok((expr, meas))
}

/// `H = Σ_i (4/√3) J_i (X_iX_{i+1} + Y_iY_{i+1} + Δ Z_iZ_{i+1})`.
pub fn build_chain_hamiltonian(n: usize, delta: f64, eps: f64) -> Result<PauliSum> {
    check_chain(n, delta, eps)?;
    let scale = 4.0 / 3f64.sqrt();
    let mut h = PauliSum::new(n);
    for i in 0..n - 1 {
        let j = scale * chain_coupling(i, eps);
        h.add_two_body(j, i, Pauli::X, i + 1, Pauli::X)?;
        h.add_two_body(j, i, Pauli::Y, i + 1, Pauli::Y)?;
        if delta != 0.0 {
            h.add_two_body(j * delta, i, Pauli::Z, i + 1, Pauli::Z)?;
        }
    }
    Ok(h)
}

/// Svetlichny expression with weights `2^{−n/2}(−1)^{⌊|x|/2⌋}` and settings
/// in the XY plane at `φ₁ = −π/4n`, `φ₂ = (2n − 1)π/4n`. Its Bell operator is
/// `2^{(n−1)/2}(|0…0⟩⟨1…1| + h.c.)`.
pub fn build_svetlichny_expression(n: usize) -> Result<(BellExpression, MeasurementAssignment)> {
    check_parties(n)?;
    let scale = 2f64.powf(-(n as f64) / 2.0);
    let weights = (0..1usize << n)
        .map(|x| if (x.count_ones() / 2) % 2 == 0 { scale } else { -scale })
        .collect();
    let bound = -2f64.powf((n % 2) as f64 / 2.0);
    let expr = BellExpression::full("svetlichny", n, weights, bound)?;
    let nf = n as f64;
    let phi1 = -PI / (4.0 * nf);
    let phi2 = (2.0 * nf - 1.0) * PI / (4.0 * nf);
    Ok((
        expr,
        MeasurementAssignment::uniform(n, vec![BlochVector::xy(phi1), BlochVector::xy(phi2)]),
    ))
}

/// Mermin expression over even-parity setting tuples with weights
/// `2^{−(n−1)/2}(−1)^{|x|/2}`, settings `X` and `Y`.
pub fn build_mermin_expression(n: usize) -> Result<(BellExpression, MeasurementAssignment)> {
    check_parties(n)?;
    let scale = 2f64.powf(-((n - 1) as f64) / 2.0);
    let weights = (0..1usize << n)
        .map(|x| match x.count_ones() % 4 {
            0 => scale,
            2 => -scale,
            _ => 0.0,
        })
        .collect();
    let bound = -2f64.powf(((n + 1) % 2) as f64 / 2.0);
    let expr = BellExpression::full("mermin", n, weights, bound)?;
    Ok((
        expr,
        MeasurementAssignment::uniform(n, vec![BlochVector::x(), BlochVector::y()]),
    ))
}

/// Dense `2^{(n−1)/2}(|0…0⟩⟨1…1| + |1…1⟩⟨0…0|)`.
pub fn ghz_bell_operator_dense(n: usize) -> Result<DMatrix<Complex64>> {
    if n == 0 || n > 12 {
        return Err(Error::Capacity(format!("dense {n}-party GHZ Bell operator")));
    }
    let dim = 1usize << n;
    let c = Complex64::new(2f64.powf((n as f64 - 1.0) / 2.0), 0.0);
    let mut m = DMatrix::zeros(dim, dim);
    m[(0, dim - 1)] = c;
    m[(dim - 1, 0)] = c;
    Ok(m)
}
