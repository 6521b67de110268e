use super::gate::{Angle, GateOp};
use super::state::StateVector;
use crate::{Error, Result};

/// An ordered gate program over `num_qubits` qubits with `num_params`
/// parameter slots.
#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    num_qubits: usize,
    num_params: usize,
    ops: Vec<GateOp>,
}

impl Circuit {
    pub fn new(num_qubits: usize) -> Self {
        Self {
            num_qubits,
            num_params: 0,
            ops: Vec::new(),
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn num_params(&self) -> usize {
        self.num_params
    }

    pub fn ops(&self) -> &[GateOp] {
        &self.ops
    }

    /// Reserves a new parameter slot.
    pub fn new_slot(&mut self) -> Angle {
        self.num_params += 1;
        Angle::Slot(self.num_params - 1)
    }

    pub fn push(&mut self, op: GateOp) -> Result<&mut Self> {
        op.validate(self.num_qubits)?;
        for k in op.slots() {
            if k >= self.num_params {
                return Err(Error::InvalidArgument(format!(
                    "slot {k} used but only {} reserved",
                    self.num_params
                )));
            }
        }
        self.ops.push(op);
        Ok(self)
    }

    pub fn extend<I: IntoIterator<Item = GateOp>>(&mut self, ops: I) -> Result<&mut Self> {
        for op in ops {
            self.push(op)?;
        }
        Ok(self)
    }

    /// Checks that every slot is read by at least one gate.
    pub fn validate(&self) -> Result<()> {
        let mut used = vec![false; self.num_params];
        for op in &self.ops {
            op.validate(self.num_qubits)?;
            for k in op.slots() {
                used[k] = true;
            }
        }
        match used.iter().position(|u| !u) {
            Some(k) => Err(Error::UnusedSlot(k)),
            None => Ok(()),
        }
    }

    /// Indices of the gates that read slot `k`.
    pub fn gates_using(&self, k: usize) -> Vec<usize> {
        self.ops
            .iter()
            .enumerate()
            .filter(|(_, op)| op.slots().contains(&k))
            .map(|(i, _)| i)
            .collect()
    }

    /// Circuit with every slot replaced by its value.
    pub fn bind(&self, params: &[f64]) -> Result<Circuit> {
        self.check_params(params)?;
        let ops = self.ops.iter().map(|op| op.bind(params)).collect::<Result<_>>()?;
        Ok(Circuit {
            num_qubits: self.num_qubits,
            num_params: 0,
            ops,
        })
    }

    /// `U†` of a fully bound circuit.
    pub fn inverse(&self) -> Result<Circuit> {
        let ops = self.ops.iter().rev().map(GateOp::inverse).collect::<Result<_>>()?;
        Ok(Circuit {
            num_qubits: self.num_qubits,
            num_params: 0,
            ops,
        })
    }

    /// Appends the gates of `other`, which must not read any slot.
    pub fn append_fixed(&mut self, other: &Circuit) -> Result<()> {
        if other.num_qubits != self.num_qubits {
            return Err(Error::QubitMismatch {
                expected: self.num_qubits,
                got: other.num_qubits,
            });
        }
        if other.num_params != 0 {
            return Err(Error::InvalidArgument("appended circuit must be bound".into()));
        }
        self.ops.extend_from_slice(&other.ops);
        Ok(())
    }

    fn check_params(&self, params: &[f64]) -> Result<()> {
        if params.len() != self.num_params {
            return Err(Error::ParamLength {
                expected: self.num_params,
                got: params.len(),
            });
        }
        Ok(())
    }

    /// Applies the gates in order to `state`.
    pub fn apply(&self, state: &mut StateVector, params: &[f64]) -> Result<()> {
        self.check_params(params)?;
        state.check_same(self.num_qubits)?;
        for op in &self.ops {
            state.apply_bound(op, params)?;
        }
        Ok(())
    }

    /// `U(θ)|0…0⟩`.
    pub fn prepare(&self, params: &[f64]) -> Result<StateVector> {
        let mut s = StateVector::new(self.num_qubits)?;
        self.apply(&mut s, params)?;
        Ok(s)
    }
}

/// Runs `circuit` on a copy of `state`.
pub fn run_circuit(state: &StateVector, circuit: &Circuit, params: &[f64]) -> Result<StateVector> {
    let mut out = state.clone();
    circuit.apply(&mut out, params)?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;
    use std::f64::consts::{FRAC_1_SQRT_2, PI};

    #[test]
    fn empty_circuit_is_identity() {
        let mut s = StateVector::new(2).unwrap();
        s.apply_gate(&GateOp::u3(1, 0.3, 0.2, 0.1), None).unwrap();
        let out = run_circuit(&s, &Circuit::new(2), &[]).unwrap();
        assert_eq!(out, s);
    }

    #[test]
    fn bell_pair() {
        let mut c = Circuit::new(2);
        c.extend([GateOp::H(0), GateOp::cnot(0, 1)]).unwrap();
        let s = c.prepare(&[]).unwrap();
        let a = s.amplitudes();
        assert!((a[0].re - FRAC_1_SQRT_2).abs() < 1e-15 && (a[3].re - FRAC_1_SQRT_2).abs() < 1e-15);
        assert!(a[1].norm() < 1e-15 && a[2].norm() < 1e-15);
    }

    #[test]
    fn h_rz_h_flips_up_to_phase() {
        // H·RZ(π)·H = [[0, −i], [−i, 0]]: |0⟩ ↦ −i|1⟩.
        let mut c = Circuit::new(1);
        let t = c.new_slot();
        c.extend([GateOp::H(0), GateOp::Rz(0, t), GateOp::H(0)]).unwrap();
        let s = c.prepare(&[PI]).unwrap();
        assert!(s.amplitudes()[0].norm() < 1e-15);
        assert!((s.amplitudes()[1] - Complex64::new(0.0, -1.0)).norm() < 1e-15);
    }

    #[test]
    fn mismatches_are_errors() {
        let mut c = Circuit::new(2);
        let t = c.new_slot();
        c.push(GateOp::Rx(0, t)).unwrap();
        assert!(matches!(
            c.prepare(&[]),
            Err(Error::ParamLength { expected: 1, got: 0 })
        ));
        let s3 = StateVector::new(3).unwrap();
        assert!(matches!(run_circuit(&s3, &c, &[0.1]), Err(Error::QubitMismatch { .. })));
        assert!(c.push(GateOp::Rx(0, Angle::Slot(4))).is_err());
        c.new_slot();
        assert!(matches!(c.validate(), Err(Error::UnusedSlot(1))));
    }

    #[test]
    fn inverse_undoes_circuit() {
        let mut c = Circuit::new(3);
        let slots: Vec<_> = (0..4).map(|_| c.new_slot()).collect();
        c.extend([
            GateOp::H(0),
            GateOp::u3(1, slots[0], slots[1], slots[2]),
            GateOp::cnot(0, 2),
            GateOp::Rz(2, slots[3]),
            GateOp::Cz(1, 2),
            GateOp::Rx(0, 0.3.into()),
        ])
        .unwrap();
        let params = [0.4, -1.2, 2.2, 0.8];
        let bound = c.bind(&params).unwrap();
        let mut s = StateVector::new(3).unwrap();
        s.apply_gate(&GateOp::u3(0, 1.0, 0.5, 0.2), None).unwrap();
        let orig = s.clone();
        bound.apply(&mut s, &[]).unwrap();
        bound.inverse().unwrap().apply(&mut s, &[]).unwrap();
        for (a, b) in s.amplitudes().iter().zip(orig.amplitudes()) {
            assert!((a - b).norm() < 1e-12);
        }
    }
}
