use std::path::PathBuf;
use std::process::ExitCode;

use bellcorr::vqc::Mode;
use bellcorr_cli::commands::apply_overrides;
use bellcorr_cli::{
    cmd_bounds, cmd_depth, cmd_measure, cmd_train, cmd_verify, exit_code, ConfigError, LoadedConfig, RunOptions,
};
use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(
    name = "bellcorr",
    version,
    about = "Detect Bell correlations in simulated variational circuits"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Experiment config (JSON).
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output directory for artifacts and the run manifest.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Master seed; overrides the config.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Evaluation mode; overrides the config.
    #[arg(long, global = true, value_enum)]
    mode: Option<ModeArg>,

    /// Print nothing on success.
    #[arg(long, global = true)]
    quiet: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Classical and k-nonlocal bounds of the configured model.
    Bounds,
    /// Train the model's variational circuit.
    Train,
    /// Run the parity / MQC measurement pipelines on a GHZ-ladder state.
    Measure,
    /// Certify the Bell-correlation depth of a GHZ-ladder state.
    Depth,
    /// Run the built-in invariant suite.
    Verify,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Exact,
    Shots,
}

fn run(cli: Cli) -> anyhow::Result<()> {
    let mode = cli.mode.map(|m| match m {
        ModeArg::Exact => Mode::Exact,
        ModeArg::Shots => Mode::Shots,
    });
    if let Command::Verify = cli.command {
        let opts = RunOptions {
            out: cli.out.unwrap_or_else(|| "bellcorr-out".into()),
            quiet: cli.quiet,
        };
        cmd_verify(&opts)?;
        return Ok(());
    }
    let path = cli
        .config
        .ok_or_else(|| ConfigError::new("--config is required for this command"))?;
    let mut cfg = LoadedConfig::from_path(&path)?;
    let out = apply_overrides(&mut cfg, cli.seed, mode, cli.out.as_deref());
    let opts = RunOptions { out, quiet: cli.quiet };
    match cli.command {
        Command::Bounds => cmd_bounds(&cfg, &opts).map(drop),
        Command::Train => cmd_train(&cfg, &opts).map(drop),
        Command::Measure => cmd_measure(&cfg, &opts).map(drop),
        Command::Depth => cmd_depth(&cfg, &opts).map(drop),
        Command::Verify => unreachable!(),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e) as u8)
        }
    }
}
