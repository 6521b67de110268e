//! Exhaustive minimisation over deterministic local strategies.

use rayon::prelude::*;

use super::expression::{BellExpression, Terms};
use crate::{Error, Result};

/// Largest total number of (party, setting) outcomes enumerated.
pub const MAX_LHV_BITS: usize = 24;

const CHUNK: u64 = 1 << 12;

/// Exact minimum of `expr` over every assignment of ±1 outcomes to every
/// party and setting.
pub fn lhv_bound_bruteforce(expr: &BellExpression) -> Result<f64> {
    expr.validate()?;
    let bits: usize = expr.settings.iter().sum();
    if bits > MAX_LHV_BITS {
        return Err(Error::Capacity(format!(
            "{bits} outcome bits exceed the brute-force limit of {MAX_LHV_BITS}"
        )));
    }
    match &expr.terms {
        Terms::Sparse(terms) => {
            let offsets: Vec<usize> = expr
                .settings
                .iter()
                .scan(0, |acc, &m| {
                    let o = *acc;
                    *acc += m;
                    Some(o)
                })
                .collect();
            let compiled: Vec<(f64, u32)> = terms
                .iter()
                .filter(|c| c.weight != 0.0)
                .map(|c| {
                    (
                        c.weight,
                        c.factors.iter().fold(0u32, |m, &(p, x)| m | 1 << (offsets[p] + x)),
                    )
                })
                .collect();
            let total = 1u64 << bits;
            let chunks = total.div_ceil(CHUNK);
            let min = (0..chunks)
                .into_par_iter()
                .map(|c| {
                    let end = ((c + 1) * CHUNK).min(total);
                    let mut best = f64::INFINITY;
                    for u in c * CHUNK..end {
                        let u = u as u32;
                        let v: f64 = compiled
                            .iter()
                            .map(|&(w, mask)| if (u & mask).count_ones() % 2 == 0 { w } else { -w })
                            .sum();
                        best = best.min(v);
                    }
                    best
                })
                .reduce(|| f64::INFINITY, f64::min);
            Ok(if compiled.is_empty() { 0.0 } else { min })
        }
        Terms::Full(w) => Ok(full_min(w)),
    }
}

/// Minimises over the four strategies `(a₀, a₁)` of the highest party, then
/// recurses on the contracted weights.
fn full_min(w: &[f64]) -> f64 {
    if w.len() == 1 {
        return w[0];
    }
    let half = w.len() / 2;
    let (lo, hi) = w.split_at(half);
    let mut best = f64::INFINITY;
    for (a0, a1) in [(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)] {
        let next: Vec<f64> = lo.iter().zip(hi).map(|(l, h)| a0 * l + a1 * h).collect();
        best = best.min(full_min(&next));
    }
    best
}
