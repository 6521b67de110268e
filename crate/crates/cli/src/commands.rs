use std::f64::consts::FRAC_PI_2;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use anyhow::Context;
use bellcorr::bell::{
    bell_operator_pauli, build_chain_expression, build_chain_hamiltonian, build_chsh_expression,
    build_gisin_expression, build_honeycomb_expression, build_honeycomb_hamiltonian, build_svetlichny_expression,
    certify_depth, k_nonlocal_bound, lhv_bound_bruteforce, BellExpression, DepthCertificate, GhzBellOperator,
    MAX_LHV_BITS,
};
use bellcorr::measure::{
    combine_repetitions, extract_coherence_fit, extract_coherence_mqc, extract_coherence_parity, mqc_settings,
    mqc_signals, parity_grid, parity_settings, parity_signals, shots_schedule, with_parity_phase, write_signals_csv,
    CoherenceEstimate, CoherenceReport, MeasureSettings, ParityEnergyEstimator, SignalTable,
};
use bellcorr::qsim::{ground_energy, Circuit, PauliSum, MAX_QUBITS};
use bellcorr::rng::SeedStream;
use bellcorr::vqc::{
    build_hierarchical_ansatz, hierarchical_train, train, write_trajectory, AnsatzSpec, EnergyEstimator,
    ExactEstimator, HierarchicalConfig, Init, Mode, PhaseSummary, TrainConfig, TrajectoryHeader,
};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::config::{ErrorBars, LoadedConfig, ModelConfig, StateSource};
use crate::manifest::{now_ms, RunManifest, MANIFEST_FILE};
use crate::verify::{run_checks, CheckOutcome};
use crate::{ConfigError, RunOptions, VerificationFailed};

/// Layers used for the chain ansatz when the config does not say.
pub const DEFAULT_CHAIN_LAYERS: usize = 12;

/// Largest register for which `train` reports the exact ground energy.
const GROUND_REPORT_MAX_QUBITS: usize = 20;

/// Collects artifacts written during a run and finishes with a manifest.
struct Outputs<'a> {
    opts: &'a RunOptions,
    files: Vec<String>,
    started: u128,
}

impl<'a> Outputs<'a> {
    fn new(opts: &'a RunOptions) -> anyhow::Result<Self> {
        std::fs::create_dir_all(&opts.out).with_context(|| format!("creating {}", opts.out.display()))?;
        Ok(Self {
            opts,
            files: Vec::new(),
            started: now_ms(),
        })
    }

    fn write(
        &mut self,
        name: &str,
        body: impl FnOnce(&mut BufWriter<File>) -> anyhow::Result<()>,
    ) -> anyhow::Result<()> {
        let path = self.opts.out.join(name);
        let mut w = BufWriter::new(File::create(&path).with_context(|| format!("creating {}", path.display()))?);
        body(&mut w)?;
        w.flush()?;
        self.files.push(name.to_string());
        Ok(())
    }

    fn json<T: Serialize>(&mut self, name: &str, value: &T) -> anyhow::Result<()> {
        self.write(name, |w| {
            serde_json::to_writer_pretty(&mut *w, value)?;
            writeln!(w)?;
            Ok(())
        })
    }

    fn finish(self, command: &str, cfg: Option<&LoadedConfig>) -> anyhow::Result<RunManifest> {
        let manifest = RunManifest::build(
            &self.opts.out,
            command,
            cfg.map(|c| &c.config),
            self.started,
            &self.files,
        )?;
        let path = self.opts.out.join(MANIFEST_FILE);
        let mut w = BufWriter::new(File::create(&path)?);
        serde_json::to_writer_pretty(&mut w, &manifest)?;
        writeln!(w)?;
        w.flush()?;
        Ok(manifest)
    }
}

/// A Bell expression with the metadata needed to train against it.
struct Model {
    name: &'static str,
    num_parties: usize,
    expression: BellExpression,
}

fn build_model(cfg: &LoadedConfig) -> anyhow::Result<Model> {
    let (name, expression) = match &cfg.config.model {
        ModelConfig::Honeycomb { eps, .. } => ("honeycomb", build_honeycomb_expression(&cfg.lattice()?, *eps)?),
        ModelConfig::Chain { n, delta, eps } => ("chain", build_chain_expression(*n, *delta, *eps)?.0),
        ModelConfig::Svetlichny { n } => ("svetlichny", build_svetlichny_expression(*n)?.0),
        ModelConfig::Chsh => ("chsh", build_chsh_expression().0),
        ModelConfig::Gisin => ("gisin", build_gisin_expression().0),
    };
    Ok(Model {
        name,
        num_parties: expression.num_parties,
        expression,
    })
}

/// Pauli-sum Bell operator of a non-GHZ model.
fn pauli_hamiltonian(cfg: &LoadedConfig) -> anyhow::Result<PauliSum> {
    Ok(match &cfg.config.model {
        ModelConfig::Honeycomb { eps, .. } => build_honeycomb_hamiltonian(&cfg.lattice()?, *eps)?,
        ModelConfig::Chain { n, delta, eps } => build_chain_hamiltonian(*n, *delta, *eps)?,
        ModelConfig::Chsh => {
            let (e, m) = build_chsh_expression();
            bell_operator_pauli(&e, &m)?
        }
        ModelConfig::Gisin => {
            let (e, m) = build_gisin_expression();
            bell_operator_pauli(&e, &m)?
        }
        ModelConfig::Svetlichny { .. } => unreachable!("the GHZ operator is not built as a Pauli sum"),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KBound {
    pub k: usize,
    pub bound: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundsReport {
    pub model: String,
    pub num_parties: usize,
    pub settings_per_party: Vec<usize>,
    pub classical_bound: f64,
    /// Exhaustive minimum over deterministic strategies, when feasible.
    pub bruteforce: Option<f64>,
    pub bruteforce_agrees: Option<bool>,
    /// k-nonlocal bounds of the GHZ-type operator (Svetlichny model only).
    pub k_bounds: Vec<KBound>,
}

/// `β_C` of the configured model, confirmed by enumeration when the
/// strategy space has at most `2^24` points, and the k-nonlocal bounds.
pub fn cmd_bounds(cfg: &LoadedConfig, opts: &RunOptions) -> anyhow::Result<BoundsReport> {
    let mut out = Outputs::new(opts)?;
    let model = build_model(cfg)?;
    let e = &model.expression;
    let bits: usize = e.settings.iter().sum();
    let bruteforce = if bits <= MAX_LHV_BITS {
        Some(lhv_bound_bruteforce(e)?)
    } else {
        None
    };
    let k_bounds = match cfg.config.model {
        ModelConfig::Svetlichny { n } => (1..n)
            .map(|k| {
                Ok(KBound {
                    k,
                    bound: k_nonlocal_bound(n, k)?,
                })
            })
            .collect::<bellcorr::Result<Vec<_>>>()?,
        _ => Vec::new(),
    };
    let report = BoundsReport {
        model: model.name.into(),
        num_parties: model.num_parties,
        settings_per_party: e.settings.clone(),
        classical_bound: e.classical_bound,
        bruteforce,
        bruteforce_agrees: bruteforce.map(|b| (b - e.classical_bound).abs() <= 1e-9 * e.classical_bound.abs().max(1.0)),
        k_bounds,
    };
    opts.say(format!("model {} with {} parties", report.model, report.num_parties));
    opts.say(format!("classical bound {:.6}", report.classical_bound));
    match report.bruteforce {
        Some(b) => opts.say(format!("brute-force LHV minimum {b:.6}")),
        None => opts.say(format!("brute force skipped: {bits} strategy bits > {MAX_LHV_BITS}")),
    }
    for kb in &report.k_bounds {
        opts.say(format!("k = {:2}: {:.6}", kb.k, kb.bound));
    }
    out.json("bounds.json", &report)?;
    out.finish("bounds", Some(cfg))?;
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainSummary {
    pub model: String,
    pub num_qubits: usize,
    pub num_params: usize,
    pub mode: Mode,
    pub seed: u64,
    /// Trajectory records written, including the starting point of each phase.
    pub records: usize,
    pub initial_energy: f64,
    pub energy: f64,
    pub energy_std: f64,
    pub classical_bound: f64,
    /// `energy < classical_bound`.
    pub violation: bool,
    /// `(β_C − E)/σ_E`; absent in exact mode.
    pub sigma_margin: Option<f64>,
    pub ground_energy: Option<f64>,
    /// Per-phase certificates of layer-wise training.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub phases: Vec<PhaseSummary>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct ParamsFile {
    ansatz: String,
    num_qubits: usize,
    params: Vec<f64>,
}

fn train_config(cfg: &LoadedConfig, early_stop_bound: f64, default_init: Init) -> anyhow::Result<TrainConfig> {
    let t = &cfg.config.train;
    let tc = TrainConfig {
        max_iters: t.max_iters,
        learning_rate: t.learning_rate,
        mode: cfg.config.mode,
        shots: t.shots,
        seed: cfg.seed()?,
        init: cfg.config.ansatz.init.unwrap_or(default_init),
        revert_tolerance: t.revert_tolerance,
        early_stop_bound: t.early_stop.then_some(early_stop_bound),
        patience: t.patience,
    };
    tc.validate().map_err(|e| ConfigError::new(e.to_string()))?;
    Ok(tc)
}

fn ghz_register(cfg: &LoadedConfig) -> anyhow::Result<usize> {
    match cfg.config.model {
        ModelConfig::Svetlichny { n } if n >= 2 && n % 2 == 0 && n <= 2 * bellcorr::vqc::MAX_PHASE => Ok(n),
        ModelConfig::Svetlichny { n } => Err(ConfigError::new(format!(
            "the GHZ ladder needs an even register of 2..={} qubits, got {n}",
            2 * bellcorr::vqc::MAX_PHASE
        ))
        .into()),
        _ => Err(ConfigError::new("this command needs the svetlichny model").into()),
    }
}

/// Per-setting shots for measuring an `n`-qubit register.
fn measure_shots(cfg: &LoadedConfig, n: usize) -> anyhow::Result<usize> {
    match cfg.config.measure.shots {
        Some(0) => Err(ConfigError::new("measure.shots must be positive").into()),
        Some(s) => Ok(s),
        None => shots_schedule(n).map_err(|e| ConfigError::new(e.to_string()).into()),
    }
}

fn measure_settings(cfg: &LoadedConfig, n: usize) -> anyhow::Result<MeasureSettings> {
    let m = &cfg.config.measure;
    let mut s = match cfg.config.mode {
        Mode::Exact => MeasureSettings::exact(n),
        Mode::Shots => MeasureSettings::shots(n, measure_shots(cfg, n)?),
    };
    if let Some(r) = &m.readout {
        s = s.with_readout(r.model(n)?, m.mitigate);
    }
    Ok(s)
}

/// Energy estimator for `H_B(n)` in the configured mode: exact expectation,
/// or the parity pipeline with the training shot budget per setting.
fn ghz_estimator(cfg: &LoadedConfig, n: usize) -> anyhow::Result<Box<dyn EnergyEstimator>> {
    Ok(match cfg.config.mode {
        Mode::Exact => Box::new(ExactEstimator::new(GhzBellOperator::new(n))),
        Mode::Shots => {
            let mut s = MeasureSettings::shots(n, cfg.config.train.shots);
            if let Some(r) = &cfg.config.measure.readout {
                s = s.with_readout(r.model(n)?, cfg.config.measure.mitigate);
            }
            Box::new(ParityEnergyEstimator::new(n, s)?)
        }
    })
}

fn hierarchical_config(cfg: &LoadedConfig, n: usize) -> anyhow::Result<HierarchicalConfig> {
    let max_phase = cfg.config.ansatz.max_phase.unwrap_or(n / 2);
    if max_phase == 0 || 2 * max_phase > n {
        return Err(ConfigError::new(format!("max_phase {max_phase} does not fit {n} qubits")).into());
    }
    let bound = build_svetlichny_expression(2 * max_phase)?.0.classical_bound;
    Ok(HierarchicalConfig {
        max_phase,
        joint_iters: cfg.config.ansatz.joint_iters,
        train: train_config(cfg, bound, Init::Ones)?,
    })
}

fn run_hierarchical(cfg: &LoadedConfig, n: usize) -> anyhow::Result<bellcorr::vqc::HierarchicalOutcome> {
    let hc = hierarchical_config(cfg, n)?;
    let fallback = |m: usize| ghz_estimator(cfg, m).map_err(|e| bellcorr::Error::InvalidArgument(e.to_string()));
    Ok(hierarchical_train(&hc, fallback)?)
}

/// Trains the model's ansatz and writes `trajectory.jsonl`, `params.json`
/// and `summary.json`.
///
/// Honeycomb models use the three-block ansatz on their lattice; chain, CHSH
/// and Gisin models the layered chain ansatz; the Svetlichny model the GHZ
/// ladder, trained phase by phase.
pub fn cmd_train(cfg: &LoadedConfig, opts: &RunOptions) -> anyhow::Result<TrainSummary> {
    let model = build_model(cfg)?;
    let seed = cfg.seed()?;
    let beta = model.expression.classical_bound;
    let (spec_name, n, records, params, energy, energy_std, phases, ground) = match &cfg.config.model {
        ModelConfig::Svetlichny { .. } => {
            let n = ghz_register(cfg)?;
            let out = run_hierarchical(cfg, n)?;
            let last = out.phases.last().expect("at least one phase");
            if last.num_qubits != n {
                return Err(ConfigError::new(format!(
                    "training stops at {} qubits but the model has {n}",
                    last.num_qubits
                ))
                .into());
            }
            let (energy, std) = (last.energy, last.energy_std);
            (
                "hierarchical".to_string(),
                n,
                out.records,
                out.params,
                energy,
                std,
                out.phases,
                None,
            )
        }
        other => {
            let h = pauli_hamiltonian(cfg)?;
            let n = h.num_qubits();
            if n > MAX_QUBITS {
                return Err(
                    bellcorr::Error::Capacity(format!("{n} qubits exceeds the {MAX_QUBITS}-qubit simulator")).into(),
                );
            }
            let (spec, default_init) = match other {
                ModelConfig::Honeycomb { .. } => (
                    AnsatzSpec::Honeycomb {
                        lattice: cfg.lattice()?,
                    },
                    Init::Ones,
                ),
                _ => (
                    AnsatzSpec::Chain {
                        num_qubits: n,
                        layers: cfg.config.ansatz.layers.unwrap_or(DEFAULT_CHAIN_LAYERS),
                    },
                    Init::Ones,
                ),
            };
            let tc = train_config(cfg, beta, default_init)?;
            let out = train(&spec, &h, &tc)?;
            let ground = if n <= GROUND_REPORT_MAX_QUBITS {
                Some(ground_energy(&h)?)
            } else {
                None
            };
            let name = match spec {
                AnsatzSpec::Honeycomb { .. } => "honeycomb",
                _ => "chain",
            };
            (
                name.to_string(),
                n,
                out.records,
                out.params,
                out.energy,
                out.energy_std,
                Vec::new(),
                ground,
            )
        }
    };

    let mut files = Outputs::new(opts)?;
    let header = TrajectoryHeader::new(
        spec_name.clone(),
        n,
        params.len(),
        match cfg.config.mode {
            Mode::Exact => "exact",
            Mode::Shots => "shots",
        },
        seed,
    );
    files.write("trajectory.jsonl", |w| Ok(write_trajectory(w, &header, &records)?))?;
    files.json(
        "params.json",
        &ParamsFile {
            ansatz: spec_name,
            num_qubits: n,
            params: params.clone(),
        },
    )?;
    let summary = TrainSummary {
        model: model.name.into(),
        num_qubits: n,
        num_params: params.len(),
        mode: cfg.config.mode,
        seed,
        records: records.len(),
        initial_energy: records.first().map(|r| r.energy).unwrap_or(energy),
        energy,
        energy_std,
        classical_bound: beta,
        violation: energy < beta,
        sigma_margin: (energy_std > 0.0).then(|| (beta - energy) / energy_std),
        ground_energy: ground,
        phases,
    };
    opts.say(format!(
        "{}: E = {:.6} ± {:.6} after {} records (β_C = {:.6}, violation: {})",
        summary.model, summary.energy, summary.energy_std, summary.records, beta, summary.violation
    ));
    if let Some(m) = summary.sigma_margin {
        opts.say(format!("margin {m:.2} σ below the classical bound"));
    }
    if let Some(g) = summary.ground_energy {
        opts.say(format!("ground energy {g:.6}"));
    }
    for p in &summary.phases {
        opts.say(format!(
            "phase {:2} ({:2} qubits): E = {:.6}, certified depth {}",
            p.phase, p.num_qubits, p.energy, p.certificate.certified_depth
        ));
    }
    files.json("summary.json", &summary)?;
    files.finish("train", Some(cfg))?;
    Ok(summary)
}

/// Parameters of the GHZ ladder that prepare `(|0…0⟩ − |1…1⟩)/√2`.
pub fn ideal_ladder_params(phase: usize) -> Vec<f64> {
    let mut p = vec![0.0; 6 * phase];
    p[0] = FRAC_PI_2;
    p[1] = std::f64::consts::PI;
    p
}

/// The state the measurement pipelines run on.
fn ladder_state(cfg: &LoadedConfig, n: usize) -> anyhow::Result<(Circuit, Vec<f64>)> {
    let circuit = build_hierarchical_ansatz(n / 2)?;
    let params = match cfg.config.measure.state {
        StateSource::Ideal => ideal_ladder_params(n / 2),
        StateSource::Trained => {
            if cfg.config.ansatz.max_phase.is_some_and(|p| 2 * p != n) {
                return Err(ConfigError::new("measuring a trained state needs max_phase = n/2").into());
            }
            run_hierarchical(cfg, n)?.params
        }
    };
    Ok((circuit, params))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasureSummary {
    pub num_qubits: usize,
    pub mode: Mode,
    pub state: StateSource,
    /// `⟨C⟩` read directly from the simulated amplitudes.
    pub direct_coherence: Complex64,
    pub direct_energy: f64,
    pub report: CoherenceReport,
}

fn average_binomial(ests: &[CoherenceEstimate]) -> anyhow::Result<CoherenceEstimate> {
    let r = ests.len() as f64;
    let mut avg = combine_repetitions(ests)?;
    avg.std = ests.iter().map(|e| e.std * e.std).sum::<f64>().sqrt() / r;
    if avg.energy.is_some() {
        let stds: Vec<f64> = ests.iter().filter_map(|e| e.energy_std).collect();
        avg.energy_std = Some(stds.iter().map(|s| s * s).sum::<f64>().sqrt() / r);
    }
    Ok(avg)
}

fn combine(ests: &[CoherenceEstimate], bars: ErrorBars) -> anyhow::Result<CoherenceEstimate> {
    match (ests.len(), bars) {
        (1, _) => Ok(ests[0].clone()),
        (_, ErrorBars::Repetitions) => Ok(combine_repetitions(ests)?),
        (_, ErrorBars::Binomial) => average_binomial(ests),
    }
}

/// Runs the parity, MQC and/or sinusoid-fit pipelines on the GHZ-ladder state
/// and writes `signals.csv`, `coherence.json` and `summary.json`.
pub fn cmd_measure(cfg: &LoadedConfig, opts: &RunOptions) -> anyhow::Result<MeasureSummary> {
    let n = ghz_register(cfg)?;
    let m = &cfg.config.measure;
    if m.repetitions == 0 {
        return Err(ConfigError::new("measure.repetitions must be ≥ 1").into());
    }
    let settings = measure_settings(cfg, n)?;
    let root = SeedStream::new(cfg.seed()?).derive("measure", &[]);
    let (circuit, params) = ladder_state(cfg, n)?;
    let state = circuit.prepare(&params)?;
    let direct = state.antidiagonal_coherence();

    let mut tables: Vec<SignalTable> = Vec::new();
    let (mut parity, mut mqc, mut fit) = (Vec::new(), Vec::new(), Vec::new());
    let fit_grid = parity_grid(m.fit_points.unwrap_or(10 * n + 1));
    for rep in 0..m.repetitions {
        if m.method.parity() || m.method.mqc() {
            let t = parity_signals(&state, &parity_settings(n), &settings, &root.derive("sparse", &[]), rep)?;
            parity.push(extract_coherence_parity(&t, n)?);
            tables.push(t);
        }
        if m.method.mqc() {
            let t = mqc_signals(
                &circuit,
                &params,
                &mqc_settings(n),
                &settings,
                &root.derive("mqc", &[]),
                rep,
            )?;
            let magnitude = extract_coherence_mqc(&t, n)?;
            mqc.push(with_parity_phase(
                &magnitude,
                parity.last().expect("parity measured first"),
            )?);
            tables.push(t);
        }
        if m.method.fit() {
            let t = parity_signals(&state, &fit_grid, &settings, &root.derive("dense", &[]), rep)?;
            fit.push(extract_coherence_fit(&t, n)?);
            tables.push(t);
        }
    }
    let mut estimates = Vec::new();
    for group in [&parity, &mqc, &fit] {
        if !group.is_empty() {
            estimates.push(combine(group, m.error_bars)?);
        }
    }
    let report = CoherenceReport::new(n, estimates).with_certificate()?;
    let summary = MeasureSummary {
        num_qubits: n,
        mode: cfg.config.mode,
        state: m.state,
        direct_coherence: direct,
        direct_energy: GhzBellOperator::energy_from_coherence(n, direct),
        report,
    };
    opts.say(format!("direct ⟨C⟩ = {:.6} {:+.6}i", direct.re, direct.im));
    for e in &summary.report.estimates {
        opts.say(format!(
            "{:>12}: ⟨C⟩ = {:.6} {:+.6}i  |⟨C⟩| = {:.6} ± {:.6}{}",
            e.method.as_str(),
            e.value.re,
            e.value.im,
            e.magnitude,
            e.std,
            e.warning.as_deref().map(|w| format!("  [{w}]")).unwrap_or_default()
        ));
    }
    let mut files = Outputs::new(opts)?;
    files.write("signals.csv", |w| Ok(write_signals_csv(w, &tables)?))?;
    files.write("coherence.json", |w| Ok(summary.report.write_json(w)?))?;
    files.json("summary.json", &summary)?;
    files.finish("measure", Some(cfg))?;
    Ok(summary)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DepthReport {
    pub mode: Mode,
    pub state: StateSource,
    pub certificate: DepthCertificate,
}

/// Estimates `⟨H_B(n)⟩` on the GHZ-ladder state (exactly, or with the parity
/// pipeline in shot mode) and certifies the Bell-correlation depth.
pub fn cmd_depth(cfg: &LoadedConfig, opts: &RunOptions) -> anyhow::Result<DepthReport> {
    let n = ghz_register(cfg)?;
    let (circuit, params) = ladder_state(cfg, n)?;
    let stream = SeedStream::new(cfg.seed()?).derive("depth", &[]);
    let estimate = match cfg.config.mode {
        Mode::Exact => ExactEstimator::new(GhzBellOperator::new(n)).estimate(&circuit, &params, &stream)?,
        Mode::Shots => {
            ParityEnergyEstimator::new(n, measure_settings(cfg, n)?)?.estimate(&circuit, &params, &stream)?
        }
    };
    let certificate = certify_depth(n, estimate.energy, estimate.energy_std)?;
    opts.say(format!(
        "E = {:.6} ± {:.6} on {n} qubits: certified depth {}",
        certificate.energy, certificate.energy_std, certificate.certified_depth
    ));
    let report = DepthReport {
        mode: cfg.config.mode,
        state: cfg.config.measure.state,
        certificate,
    };
    let mut files = Outputs::new(opts)?;
    files.json("depth.json", &report)?;
    files.finish("depth", Some(cfg))?;
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub passed: usize,
    pub failed: usize,
    pub checks: Vec<CheckOutcome>,
}

/// Runs the built-in invariant suite and writes `verify.json`. Fails with
/// [`VerificationFailed`] when any check does not hold.
pub fn cmd_verify(opts: &RunOptions) -> anyhow::Result<VerifyReport> {
    let checks = run_checks();
    for c in &checks {
        opts.say(format!(
            "{} {:<40} {}",
            if c.passed { "PASS" } else { "FAIL" },
            c.name,
            c.detail
        ));
    }
    let failed: Vec<String> = checks.iter().filter(|c| !c.passed).map(|c| c.name.clone()).collect();
    let report = VerifyReport {
        passed: checks.len() - failed.len(),
        failed: failed.len(),
        checks,
    };
    let mut files = Outputs::new(opts)?;
    files.json("verify.json", &report)?;
    files.finish("verify", None)?;
    if failed.is_empty() {
        Ok(report)
    } else {
        Err(VerificationFailed { failed }.into())
    }
}

/// Applies `--seed`, `--mode` and `--out` on top of a loaded config and
/// returns the output directory to use.
pub fn apply_overrides(
    cfg: &mut LoadedConfig,
    seed: Option<u64>,
    mode: Option<Mode>,
    out: Option<&Path>,
) -> std::path::PathBuf {
    if let Some(s) = seed {
        cfg.config.seed = Some(s);
    }
    if let Some(m) = mode {
        cfg.config.mode = m;
    }
    match out {
        Some(p) => p.to_path_buf(),
        None => cfg
            .config
            .output
            .as_ref()
            .map(|p| cfg.base_dir.join(p))
            .unwrap_or_else(|| "bellcorr-out".into()),
    }
}
