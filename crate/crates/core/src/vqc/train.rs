use serde::{Deserialize, Serialize};

use super::adam::OptimizerState;
use super::ansatz::{AnsatzSpec, Init};
use super::estimator::{EnergyEstimator, Estimate, ExactEstimator, PauliShotEstimator};
use super::gradient::shift_gradient;
use crate::qsim::{Circuit, PauliSum};
use crate::rng::SeedStream;
use crate::{Error, Result};

/// How energies are evaluated during training.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    #[default]
    Exact,
    Shots,
}

fn default_max_iters() -> usize {
    200
}
fn default_learning_rate() -> f64 {
    0.1
}
fn default_shots() -> usize {
    1000
}
fn default_revert_tolerance() -> f64 {
    0.0
}
fn default_patience() -> usize {
    5
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrainConfig {
    #[serde(default = "default_max_iters")]
    pub max_iters: usize,
    #[serde(default = "default_learning_rate")]
    pub learning_rate: f64,
    #[serde(default)]
    pub mode: Mode,
    /// Shots per energy evaluation in shot mode.
    #[serde(default = "default_shots")]
    pub shots: usize,
    pub seed: u64,
    #[serde(default)]
    pub init: Init,
    /// Exact mode only: a step raising the energy by more than this is undone
    /// and the learning rate halved.
    #[serde(default = "default_revert_tolerance")]
    pub revert_tolerance: f64,
    /// Stop once `energy < early_stop_bound − 3σ` holds for `patience`
    /// consecutive iterations.
    #[serde(default)]
    pub early_stop_bound: Option<f64>,
    #[serde(default = "default_patience")]
    pub patience: usize,
}

impl TrainConfig {
    pub fn new(seed: u64) -> Self {
        Self {
            max_iters: default_max_iters(),
            learning_rate: default_learning_rate(),
            mode: Mode::Exact,
            shots: default_shots(),
            seed,
            init: Init::Ones,
            revert_tolerance: default_revert_tolerance(),
            early_stop_bound: None,
            patience: default_patience(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.learning_rate.is_finite() && self.learning_rate > 0.0) {
            return Err(Error::InvalidArgument(format!("learning rate {}", self.learning_rate)));
        }
        if self.mode == Mode::Shots && self.shots < 2 {
            return Err(Error::InvalidArgument("shot mode needs at least 2 shots".into()));
        }
        if self.revert_tolerance.is_nan() || self.revert_tolerance < 0.0 {
            return Err(Error::InvalidArgument("revert tolerance must be ≥ 0".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainRecord {
    pub phase: usize,
    pub iteration: usize,
    pub energy: f64,
    pub energy_std: f64,
    /// Shots spent in this iteration, gradient included.
    pub shots_used: usize,
    pub learning_rate: f64,
    pub grad_norm: f64,
    /// Whether the step was undone by the descent guard.
    pub reverted: bool,
    pub params_snapshot: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrainOutcome {
    pub records: Vec<TrainRecord>,
    pub params: Vec<f64>,
    pub energy: f64,
    pub energy_std: f64,
}

/// The estimator selected by `config.mode` for a Pauli-sum Hamiltonian.
pub fn estimator_for(h: &PauliSum, config: &TrainConfig) -> Result<Box<dyn EnergyEstimator>> {
    Ok(match config.mode {
        Mode::Exact => Box::new(ExactEstimator::new(h.clone())),
        Mode::Shots => Box::new(PauliShotEstimator::new(h, config.shots)?),
    })
}

/// Trains `ansatz` against `h` from the configured initial point.
pub fn train(ansatz: &AnsatzSpec, h: &PauliSum, config: &TrainConfig) -> Result<TrainOutcome> {
    let circuit = ansatz.build()?;
    if circuit.num_qubits() != h.num_qubits() {
        return Err(Error::QubitMismatch {
            expected: circuit.num_qubits(),
            got: h.num_qubits(),
        });
    }
    let estimator = estimator_for(h, config)?;
    let init = config
        .init
        .params(circuit.num_params(), &SeedStream::new(config.seed).derive("init", &[]));
    let slots: Vec<usize> = (0..circuit.num_params()).collect();
    train_slots(&circuit, init, &slots, estimator.as_ref(), config, 0)
}

/// Optimises the parameters listed in `trainable`; all others stay fixed.
/// Records start at iteration 0 (the initial point) and are tagged `phase`.
pub fn train_slots(
    circuit: &Circuit,
    mut params: Vec<f64>,
    trainable: &[usize],
    estimator: &dyn EnergyEstimator,
    config: &TrainConfig,
    phase: usize,
) -> Result<TrainOutcome> {
    config.validate()?;
    if params.len() != circuit.num_params() {
        return Err(Error::ParamLength {
            expected: circuit.num_params(),
            got: params.len(),
        });
    }
    let root = SeedStream::new(config.seed).derive("train", &[phase as u64]);
    let exact = estimator.is_exact();
    let evaluate = |p: &[f64], it: usize| -> Result<Estimate> {
        let e = estimator.estimate(circuit, p, &root.derive("energy", &[it as u64]))?;
        if !e.energy.is_finite() {
            return Err(Error::NonFinite(format!("energy at iteration {it}")));
        }
        Ok(e)
    };

    let mut current = evaluate(&params, 0)?;
    let mut adam = OptimizerState::new(trainable.len(), config.learning_rate);
    let mut records = vec![TrainRecord {
        phase,
        iteration: 0,
        energy: current.energy,
        energy_std: current.energy_std,
        shots_used: current.shots,
        learning_rate: adam.learning_rate,
        grad_norm: 0.0,
        reverted: false,
        params_snapshot: params.clone(),
    }];
    let mut streak = 0;

    for it in 1..=config.max_iters {
        let grad_stream = root.derive("gradient", &[it as u64]);
        let shift_shots = std::sync::atomic::AtomicUsize::new(0);
        let grad = match estimator.analytic_gradient(circuit, &params, trainable) {
            Some(g) => g?,
            None => shift_gradient(circuit, &params, trainable, |p, tag| {
                let e = estimator.estimate(
                    circuit,
                    p,
                    &grad_stream.derive("shift", &[tag.slot as u64, tag.plus as u64]),
                )?;
                shift_shots.fetch_add(e.shots, std::sync::atomic::Ordering::Relaxed);
                Ok(e.energy)
            })?,
        };
        let grad_norm = grad.iter().map(|g| g * g).sum::<f64>().sqrt();

        let saved = (params.clone(), adam.learning_rate);
        let mut sub: Vec<f64> = trainable.iter().map(|&k| params[k]).collect();
        adam.step(&grad, &mut sub)?;
        for (&k, v) in trainable.iter().zip(sub) {
            params[k] = v;
        }
        let mut proposal = evaluate(&params, it)?;
        let mut reverted = false;
        if exact && proposal.energy > current.energy + config.revert_tolerance {
            // Restoring the old moments would replay the same momentum-driven
            // step at a smaller scale, which can ascend forever; restart Adam
            // from the fresh gradient instead.
            params = saved.0;
            adam = OptimizerState::new(trainable.len(), saved.1 * 0.5);
            proposal = Estimate {
                shots: proposal.shots,
                ..current
            };
            reverted = true;
        }
        current = Estimate { shots: 0, ..proposal };
        records.push(TrainRecord {
            phase,
            iteration: it,
            energy: proposal.energy,
            energy_std: proposal.energy_std,
            shots_used: shift_shots.into_inner() + proposal.shots,
            learning_rate: adam.learning_rate,
            grad_norm,
            reverted,
            params_snapshot: params.clone(),
        });

        if let Some(bound) = config.early_stop_bound {
            if current.energy < bound - 3.0 * current.energy_std {
                streak += 1;
                if streak >= config.patience {
                    break;
                }
            } else {
                streak = 0;
            }
        }
    }
    Ok(TrainOutcome {
        records,
        params,
        energy: current.energy,
        energy_std: current.energy_std,
    })
}
