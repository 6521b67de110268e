//! Experiment configuration files.
//!
//! A config is a single JSON object. Unknown keys anywhere are rejected, so a
//! misspelled physics parameter can never silently fall back to a default.
//!
//! ```json
//! {
//!   "schema_version": 1,
//!   "seed": 11,
//!   "model": {"kind": "chain", "n": 11, "delta": 2.0, "eps": 0.95},
//!   "ansatz": {"layers": 12},
//!   "train": {"max_iters": 400}
//! }
//! ```

use std::path::{Path, PathBuf};

use anyhow::Context;
use bellcorr::bell::HoneycombLattice;
use bellcorr::measure::ReadoutModel;
use bellcorr::vqc::{Init, Mode};
use serde::{Deserialize, Serialize};

use crate::ConfigError;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub schema_version: u32,
    /// Master seed for every random stream. Required unless `--seed` is given.
    #[serde(default)]
    pub seed: Option<u64>,
    pub model: ModelConfig,
    #[serde(default)]
    pub mode: Mode,
    #[serde(default)]
    pub ansatz: AnsatzConfig,
    #[serde(default)]
    pub train: TrainSection,
    #[serde(default)]
    pub measure: MeasureSection,
    /// Output directory; `--out` takes precedence.
    #[serde(default)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ModelConfig {
    /// Bipartite honeycomb lattice with the `ε`-weighted two-setting
    /// expression. Exactly one of `lattice` (a JSON file, relative to the
    /// config) or `brick_wall` must be given.
    Honeycomb {
        #[serde(default)]
        lattice: Option<PathBuf>,
        #[serde(default)]
        brick_wall: Option<BrickWall>,
        eps: f64,
    },
    /// Odd-length chain with alternating link weights `1 ± ε`.
    Chain {
        n: usize,
        delta: f64,
        eps: f64,
    },
    /// `n`-party Svetlichny expression, whose Bell operator is the GHZ
    /// coherence operator `H_B(n)`.
    Svetlichny {
        n: usize,
    },
    Chsh,
    Gisin,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BrickWall {
    pub rows: Vec<usize>,
    #[serde(default)]
    pub parity: usize,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnsatzConfig {
    /// Chain-ansatz layers (chain, CHSH and Gisin models).
    #[serde(default)]
    pub layers: Option<usize>,
    #[serde(default)]
    pub init: Option<Init>,
    /// Last layer-wise phase of the GHZ ladder (Svetlichny); defaults to `n/2`.
    #[serde(default)]
    pub max_phase: Option<usize>,
    #[serde(default)]
    pub joint_iters: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TrainSection {
    pub max_iters: usize,
    pub learning_rate: f64,
    /// Shots per energy evaluation in shot mode.
    pub shots: usize,
    pub revert_tolerance: f64,
    /// Stop early once the energy is `3σ` below the classical bound for
    /// `patience` consecutive iterations.
    pub early_stop: bool,
    pub patience: usize,
}

impl Default for TrainSection {
    fn default() -> Self {
        let d = bellcorr::vqc::TrainConfig::new(0);
        Self {
            max_iters: d.max_iters,
            learning_rate: d.learning_rate,
            shots: d.shots,
            revert_tolerance: d.revert_tolerance,
            early_stop: false,
            patience: d.patience,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MeasureMethod {
    Parity,
    Mqc,
    SinusoidFit,
    All,
}

impl MeasureMethod {
    pub fn parity(self) -> bool {
        matches!(self, Self::Parity | Self::All)
    }
    pub fn mqc(self) -> bool {
        matches!(self, Self::Mqc | Self::All)
    }
    pub fn fit(self) -> bool {
        matches!(self, Self::SinusoidFit | Self::All)
    }
}

/// Where error bars come from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ErrorBars {
    /// Per-setting binomial errors propagated through the extraction.
    #[default]
    Binomial,
    /// Spread of independent pipeline repetitions.
    Repetitions,
}

/// Which state the measurement pipelines are run on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StateSource {
    /// The GHZ ladder at its ideal point, `(|0…0⟩ − |1…1⟩)/√2`.
    #[default]
    Ideal,
    /// The GHZ ladder after layer-wise training.
    Trained,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReadoutSpec {
    /// Symmetric error on every qubit; alternative to `e0`/`e1`.
    #[serde(default)]
    pub e: Option<f64>,
    #[serde(default)]
    pub e0: Option<Vec<f64>>,
    #[serde(default)]
    pub e1: Option<Vec<f64>>,
}

impl ReadoutSpec {
    pub fn model(&self, n: usize) -> anyhow::Result<ReadoutModel> {
        match (self.e, &self.e0, &self.e1) {
            (Some(e), None, None) => Ok(ReadoutModel::symmetric(n, e)?),
            (None, Some(e0), Some(e1)) => Ok(ReadoutModel::new(e0.clone(), e1.clone())?),
            _ => Err(ConfigError::new("readout needs either `e` or both `e0` and `e1`").into()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct MeasureSection {
    pub method: MeasureMethod,
    pub state: StateSource,
    /// Shots per setting; defaults to the per-size schedule.
    pub shots: Option<usize>,
    pub readout: Option<ReadoutSpec>,
    pub mitigate: bool,
    pub repetitions: usize,
    pub error_bars: ErrorBars,
    /// Parity grid size for the sinusoid fit; defaults to `10n + 1`.
    pub fit_points: Option<usize>,
}

impl Default for MeasureSection {
    fn default() -> Self {
        Self {
            method: MeasureMethod::All,
            state: StateSource::Ideal,
            shots: None,
            readout: None,
            mitigate: false,
            repetitions: 1,
            error_bars: ErrorBars::Binomial,
            fit_points: None,
        }
    }
}

/// A config together with the directory its relative paths refer to.
#[derive(Debug, Clone)]
pub struct LoadedConfig {
    pub config: ExperimentConfig,
    pub base_dir: PathBuf,
}

impl LoadedConfig {
    pub fn from_path(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError::new(format!("cannot read config {}: {e}", path.display())))?;
        let base_dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Self::from_str(&text, base_dir).with_context(|| format!("in config {}", path.display()))
    }

    pub fn from_str(text: &str, base_dir: PathBuf) -> anyhow::Result<Self> {
        let config: ExperimentConfig =
            serde_json::from_str(text).map_err(|e| ConfigError::new(format!("malformed config: {e}")))?;
        if config.schema_version != SCHEMA_VERSION {
            return Err(ConfigError::new(format!(
                "schema_version {} is not supported (expected {SCHEMA_VERSION})",
                config.schema_version
            ))
            .into());
        }
        Ok(Self { config, base_dir })
    }

    pub fn from_config(config: ExperimentConfig) -> Self {
        Self {
            config,
            base_dir: PathBuf::new(),
        }
    }

    pub fn seed(&self) -> anyhow::Result<u64> {
        self.config
            .seed
            .ok_or_else(|| ConfigError::new("no seed: set `seed` in the config or pass --seed").into())
    }

    pub fn lattice(&self) -> anyhow::Result<HoneycombLattice> {
        let ModelConfig::Honeycomb {
            lattice, brick_wall, ..
        } = &self.config.model
        else {
            return Err(ConfigError::new("model has no lattice").into());
        };
        match (lattice, brick_wall) {
            (Some(path), None) => {
                let path = self.base_dir.join(path);
                let text = std::fs::read_to_string(&path)
                    .map_err(|e| ConfigError::new(format!("cannot read lattice {}: {e}", path.display())))?;
                Ok(HoneycombLattice::from_json(&text)?)
            }
            (None, Some(b)) => Ok(HoneycombLattice::brick_wall(&b.rows, b.parity)?),
            _ => Err(ConfigError::new("honeycomb model needs exactly one of `lattice` and `brick_wall`").into()),
        }
    }
}
