use serde::{Deserialize, Serialize};

use super::ansatz::{build_hierarchical_ansatz, hierarchical_slots, MAX_PHASE};
use super::estimator::EnergyEstimator;
use super::train::{train_slots, TrainConfig, TrainRecord};
use crate::bell::{certify_depth, DepthCertificate};
use crate::rng::SeedStream;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HierarchicalConfig {
    /// Last layer-wise phase; the register grows to `2·max_phase` qubits.
    pub max_phase: usize,
    /// Iterations of the final joint phase over all parameters (0 skips it).
    #[serde(default)]
    pub joint_iters: usize,
    pub train: TrainConfig,
}

/// Outcome of one phase, certified on its final parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseSummary {
    pub phase: usize,
    pub num_qubits: usize,
    pub energy: f64,
    pub energy_std: f64,
    pub certificate: DepthCertificate,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HierarchicalOutcome {
    pub records: Vec<TrainRecord>,
    pub phases: Vec<PhaseSummary>,
    pub params: Vec<f64>,
}

/// Layer-wise training of the GHZ ladder.
///
/// Phase `j` adds sub-circuit `j` and optimises only its six parameters
/// against the `2j`-qubit operator returned by `estimator_for`; earlier
/// parameters are frozen. An optional joint phase `max_phase + 1` then trains
/// everything. After every phase a fresh energy estimate is turned into a
/// [`DepthCertificate`].
pub fn hierarchical_train<F>(config: &HierarchicalConfig, estimator_for: F) -> Result<HierarchicalOutcome>
where
    F: Fn(usize) -> Result<Box<dyn EnergyEstimator>>,
{
    if !(1..=MAX_PHASE).contains(&config.max_phase) {
        return Err(Error::InvalidArgument(format!(
            "max_phase {} outside 1..={MAX_PHASE}",
            config.max_phase
        )));
    }
    let root = SeedStream::new(config.train.seed);
    let mut params: Vec<f64> = Vec::new();
    let mut records = Vec::new();
    let mut phases = Vec::new();

    let mut run_phase = |phase: usize,
                         circuit_phase: usize,
                         trainable: Vec<usize>,
                         iters: usize,
                         params: &mut Vec<f64>|
     -> Result<()> {
        let circuit = build_hierarchical_ansatz(circuit_phase)?;
        let n = circuit.num_qubits();
        let estimator = estimator_for(n)?;
        if estimator.num_qubits() != n {
            return Err(Error::QubitMismatch {
                expected: n,
                got: estimator.num_qubits(),
            });
        }
        let mut cfg = config.train.clone();
        cfg.max_iters = iters;
        let out = train_slots(&circuit, params.clone(), &trainable, estimator.as_ref(), &cfg, phase)?;
        *params = out.params;
        let check = estimator.estimate(&circuit, params, &root.derive("certify", &[phase as u64]))?;
        phases.push(PhaseSummary {
            phase,
            num_qubits: n,
            energy: check.energy,
            energy_std: check.energy_std,
            certificate: certify_depth(n, check.energy, check.energy_std)?,
        });
        records.extend(out.records);
        Ok(())
    };

    for phase in 1..=config.max_phase {
        let slots: Vec<usize> = hierarchical_slots(phase).collect();
        let fresh = config
            .train
            .init
            .params(slots.len(), &root.derive("init", &[phase as u64]));
        params.extend(fresh);
        run_phase(phase, phase, slots, config.train.max_iters, &mut params)?;
    }
    if config.joint_iters > 0 {
        let all: Vec<usize> = (0..params.len()).collect();
        run_phase(
            config.max_phase + 1,
            config.max_phase,
            all,
            config.joint_iters,
            &mut params,
        )?;
    }
    Ok(HierarchicalOutcome {
        records,
        phases,
        params,
    })
}
