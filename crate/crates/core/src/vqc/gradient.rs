use rayon::prelude::*;

use std::f64::consts::FRAC_PI_2;

use crate::qsim::{Circuit, GateOp, Observable};
use crate::{Error, Result};

/// Identifies one shifted evaluation, so stochastic evaluators can key their
/// random streams on it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ShiftTag {
    pub slot: usize,
    pub plus: bool,
}

/// Checks that every slot enters exactly one rotation of the form
/// `exp(−iθP/2)`. `RZ`, `RX` and each angle of `U3 = e^{iα}RZ(φ)RY(θ)RZ(λ)`
/// qualify; a slot shared between gates or angles does not.
pub fn check_shift_eligible(circuit: &Circuit, slots: &[usize]) -> Result<()> {
    for &k in slots {
        if k >= circuit.num_params() {
            return Err(Error::InvalidArgument(format!("slot {k} out of range")));
        }
        let users = circuit.gates_using(k);
        let uses: usize = users
            .iter()
            .map(|&g| circuit.ops()[g].slots().iter().filter(|&&s| s == k).count())
            .sum();
        if uses != 1 {
            return Err(Error::UnsupportedGate(format!(
                "slot {k} enters {uses} rotation angles"
            )));
        }
        match circuit.ops()[users[0]] {
            GateOp::Rz(..) | GateOp::Rx(..) | GateOp::U3 { .. } => {}
            ref other => return Err(Error::UnsupportedGate(other.name().to_string())),
        }
    }
    Ok(())
}

/// `∂E/∂θ_k = ½[E(θ_k + π/2) − E(θ_k − π/2)]` for each `k` in `slots`, using
/// `2·|slots|` calls of `energy`. Evaluations run concurrently; the result
/// does not depend on their order.
pub fn shift_gradient<F>(circuit: &Circuit, params: &[f64], slots: &[usize], energy: F) -> Result<Vec<f64>>
where
    F: Fn(&[f64], ShiftTag) -> Result<f64> + Sync,
{
    if params.len() != circuit.num_params() {
        return Err(Error::ParamLength {
            expected: circuit.num_params(),
            got: params.len(),
        });
    }
    check_shift_eligible(circuit, slots)?;
    let evals: Vec<f64> = (0..2 * slots.len())
        .into_par_iter()
        .map(|j| {
            let slot = slots[j / 2];
            let plus = j % 2 == 0;
            let mut p = params.to_vec();
            p[slot] += if plus { FRAC_PI_2 } else { -FRAC_PI_2 };
            energy(&p, ShiftTag { slot, plus })
        })
        .collect::<Result<_>>()?;
    Ok(evals.chunks(2).map(|e| 0.5 * (e[0] - e[1])).collect())
}

/// Exact parameter-shift gradient of `⟨ψ(θ)|h|ψ(θ)⟩` over every slot.
pub fn parameter_shift_gradient<O: Observable + ?Sized>(circuit: &Circuit, h: &O, params: &[f64]) -> Result<Vec<f64>> {
    let slots: Vec<usize> = (0..circuit.num_params()).collect();
    shift_gradient(circuit, params, &slots, |p, _| h.expectation(&circuit.prepare(p)?))
}

/// The same gradient as [`parameter_shift_gradient`], restricted to `slots`,
/// evaluated by one reverse sweep over the circuit (adjoint differentiation):
/// a handful of statevector passes instead of `2·|slots|` full simulations.
/// Exact expectations only; sampled estimators keep the shift rule.
pub fn adjoint_gradient<O: Observable + ?Sized>(
    circuit: &Circuit,
    h: &O,
    params: &[f64],
    slots: &[usize],
) -> Result<Vec<f64>> {
    if params.len() != circuit.num_params() {
        return Err(Error::ParamLength {
            expected: circuit.num_params(),
            got: params.len(),
        });
    }
    check_shift_eligible(circuit, slots)?;
    if h.num_qubits() != circuit.num_qubits() {
        return Err(Error::QubitMismatch {
            expected: circuit.num_qubits(),
            got: h.num_qubits(),
        });
    }
    let mut wanted = vec![false; circuit.num_params()];
    for &k in slots {
        wanted[k] = true;
    }
    let mut grad = vec![0.0; circuit.num_params()];

    // ψ walks back through the circuit; λ = (gates after the cursor)† · h · ψ_final.
    let mut psi = circuit.prepare(params)?;
    let mut lambda = psi.clone();
    h.apply(psi.amplitudes(), lambda.amplitudes_mut());
    for op in circuit.ops().iter().rev() {
        let inverse = op.bind(params)?.inverse()?;
        psi.apply_bound(&inverse, &[])?;
        for (which, angle) in op.angles().iter().enumerate() {
            match angle.slot() {
                Some(k) if wanted[k] => {
                    let d = op
                        .angle_derivative(params, which)?
                        .ok_or_else(|| Error::UnsupportedGate(op.name().to_string()))?;
                    let mut moved = psi.clone();
                    moved.apply_matrix(op.targets()[0], &d);
                    grad[k] = 2.0 * lambda.inner(&moved)?.re;
                }
                _ => {}
            }
        }
        lambda.apply_bound(&inverse, &[])?;
    }
    Ok(slots.iter().map(|&k| grad[k]).collect())
}
