// Shared proptest strategies; included by the integration test files.
#![allow(dead_code)]

use bellcorr::qsim::{Angle, Circuit, GateOp, PauliSum};
use proptest::prelude::*;

/// A gate recipe: kind, first qubit, offset to the second qubit, three angles.
pub type Recipe = (u8, usize, usize, [f64; 3]);

pub fn recipes(max_len: usize) -> impl Strategy<Value = Vec<Recipe>> {
    prop::collection::vec(
        (0u8..6, 0usize..64, 1usize..64, prop::array::uniform3(-3.2f64..3.2)),
        1..max_len,
    )
}

/// Builds a circuit on `n` qubits in which every rotation angle is a slot,
/// returning the circuit and the parameter values.
pub fn circuit_from(n: usize, recipe: &[Recipe]) -> (Circuit, Vec<f64>) {
    let mut c = Circuit::new(n);
    let mut params = Vec::new();
    let mut slot = |c: &mut Circuit, v: f64| -> Angle {
        params.push(v);
        c.new_slot()
    };
    for &(kind, q, off, a) in recipe {
        let q = q % n;
        let t = (q + 1 + off % (n.max(2) - 1)) % n;
        let op = match kind {
            0 => GateOp::H(q),
            1 => GateOp::Rz(q, slot(&mut c, a[0])),
            2 => GateOp::Rx(q, slot(&mut c, a[0])),
            3 => {
                let (x, y, z) = (slot(&mut c, a[0]), slot(&mut c, a[1]), slot(&mut c, a[2]));
                GateOp::U3 {
                    qubit: q,
                    theta: x,
                    phi: y,
                    lambda: z,
                }
            }
            _ if n < 2 => GateOp::H(q),
            4 => GateOp::Cz(q, t),
            _ => GateOp::cnot(q, t),
        };
        c.push(op).unwrap();
    }
    (c, params)
}

pub fn pauli_sums(n: usize, max_terms: usize) -> impl Strategy<Value = PauliSum> {
    prop::collection::vec((prop::collection::vec(0u8..4, n), -2.0f64..2.0), 1..max_terms).prop_map(move |terms| {
        let mut h = PauliSum::new(n);
        for (letters, c) in terms {
            let s: String = letters.iter().map(|&l| ['I', 'X', 'Y', 'Z'][l as usize]).collect();
            h.parse_term(c, &s).unwrap();
        }
        h
    })
}
