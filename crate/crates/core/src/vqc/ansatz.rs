use std::f64::consts::FRAC_PI_2;
use std::ops::Range;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::bell::{HoneycombLattice, LinkColor};
use crate::qsim::{Circuit, GateOp};
use crate::rng::SeedStream;
use crate::{Error, Result};

/// Largest hierarchical phase: two new qubits per phase, 24 qubits in total.
pub const MAX_PHASE: usize = 12;

/// Structural description of an ansatz circuit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum AnsatzSpec {
    /// Three blocks (red, blue, green links), each a Hadamard layer followed by
    /// a `CNOT·RZ(θ)·CNOT` on every link of the block's colour.
    Honeycomb { lattice: HoneycombLattice },
    /// Layers of `U3(π/2, 0, λ)` on every qubit followed by two staggered CZ
    /// layers.
    Chain { num_qubits: usize, layers: usize },
    /// The GHZ ladder of sub-circuits `1..=phase`.
    Hierarchical { phase: usize },
}

impl AnsatzSpec {
    pub fn build(&self) -> Result<Circuit> {
        match self {
            AnsatzSpec::Honeycomb { lattice } => build_honeycomb_ansatz(lattice),
            AnsatzSpec::Chain { num_qubits, layers } => build_chain_ansatz(*num_qubits, *layers),
            AnsatzSpec::Hierarchical { phase } => build_hierarchical_ansatz(*phase),
        }
    }

    pub fn num_qubits(&self) -> usize {
        match self {
            AnsatzSpec::Honeycomb { lattice } => lattice.num_sites,
            AnsatzSpec::Chain { num_qubits, .. } => *num_qubits,
            AnsatzSpec::Hierarchical { phase } => 2 * phase,
        }
    }
}

/// How the first parameter vector is chosen.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Init {
    /// Every parameter equal to one.
    #[default]
    Ones,
    /// Independent uniform draws from `[0, 2π)`.
    Random,
}

impl Init {
    pub fn params(self, count: usize, stream: &SeedStream) -> Vec<f64> {
        match self {
            Init::Ones => vec![1.0; count],
            Init::Random => {
                let mut rng = stream.rng();
                (0..count).map(|_| rng.gen_range(0.0..std::f64::consts::TAU)).collect()
            }
        }
    }
}

/// One `RZ` slot per link, in red, blue, green order. Controls sit on the
/// A sublattice and the rotation on the B site.
pub fn build_honeycomb_ansatz(lattice: &HoneycombLattice) -> Result<Circuit> {
    lattice.validate()?;
    if lattice.links.is_empty() {
        return Err(Error::InvalidLattice("no links".into()));
    }
    let mut c = Circuit::new(lattice.num_sites);
    for color in LinkColor::ALL {
        c.extend((0..lattice.num_sites).map(GateOp::H))?;
        for link in lattice.links_of(color) {
            let slot = c.new_slot();
            c.extend([
                GateOp::cnot(link.a(), link.b()),
                GateOp::Rz(link.b(), slot),
                GateOp::cnot(link.a(), link.b()),
            ])?;
        }
    }
    Ok(c)
}

/// `layers · n` parameters: each layer is `U3(π/2, 0, λ_q)` on every qubit,
/// then CZ on pairs `(0,1), (2,3), …`, then on `(1,2), (3,4), …`.
pub fn build_chain_ansatz(n: usize, layers: usize) -> Result<Circuit> {
    if n < 2 || layers == 0 {
        return Err(Error::InvalidArgument(format!(
            "chain ansatz needs n ≥ 2 and layers ≥ 1, got n={n}, layers={layers}"
        )));
    }
    let mut c = Circuit::new(n);
    for _ in 0..layers {
        for q in 0..n {
            let slot = c.new_slot();
            c.push(GateOp::u3(q, FRAC_PI_2, 0.0, slot))?;
        }
        for start in [0, 1] {
            for q in (start..n - 1).step_by(2) {
                c.push(GateOp::Cz(q, q + 1))?;
            }
        }
    }
    Ok(c)
}

fn push_u3(c: &mut Circuit, q: usize) -> Result<()> {
    let (t, p, l) = (c.new_slot(), c.new_slot(), c.new_slot());
    c.push(GateOp::u3(q, t, p, l))?;
    Ok(())
}

/// Sub-circuits `1..=phase` of the GHZ ladder on `2·phase` qubits.
///
/// Sub-circuit 1 is `U3` on qubits 0 and 1 and `CNOT(0 → 1)`. Sub-circuit
/// `j ≥ 2` adds qubits `2j−2` and `2j−1`, each with its own `U3` followed by
/// a CNOT from the previous qubit in the ladder. Every sub-circuit owns six
/// consecutive slots, see [`hierarchical_slots`].
pub fn build_hierarchical_ansatz(phase: usize) -> Result<Circuit> {
    if !(1..=MAX_PHASE).contains(&phase) {
        return Err(Error::InvalidArgument(format!("phase {phase} outside 1..={MAX_PHASE}")));
    }
    let mut c = Circuit::new(2 * phase);
    push_u3(&mut c, 0)?;
    push_u3(&mut c, 1)?;
    c.push(GateOp::cnot(0, 1))?;
    for j in 2..=phase {
        for q in [2 * j - 2, 2 * j - 1] {
            push_u3(&mut c, q)?;
            c.push(GateOp::cnot(q - 1, q))?;
        }
    }
    Ok(c)
}

/// Parameter slots owned by hierarchical sub-circuit `j`.
pub fn hierarchical_slots(j: usize) -> Range<usize> {
    6 * (j - 1)..6 * j
}
