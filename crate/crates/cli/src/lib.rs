//! Library behind the `bellcorr` binary: configuration, the five
//! subcommands, run manifests and the built-in verification suite.
//!
//! Every `cmd_*` function takes a loaded config and [`RunOptions`], writes
//! its artifacts plus a `manifest.json` into the output directory, and
//! returns the report it printed.

use std::fmt;
use std::path::PathBuf;

pub mod commands;
pub mod config;
pub mod manifest;
pub mod verify;

pub use commands::{cmd_bounds, cmd_depth, cmd_measure, cmd_train, cmd_verify};
pub use config::{ExperimentConfig, LoadedConfig};
pub use manifest::RunManifest;

/// Exit code for success.
pub const EXIT_OK: i32 = 0;
/// Exit code for an unreadable, malformed or physically invalid config.
pub const EXIT_CONFIG: i32 = 2;
/// Exit code when a request exceeds simulator or enumeration capacity.
pub const EXIT_CAPACITY: i32 = 3;
/// Exit code when `verify` finds a failing check.
pub const EXIT_VERIFY: i32 = 4;

/// The configuration cannot be used as written.
#[derive(Debug)]
pub struct ConfigError(pub String);

impl ConfigError {
    pub fn new(msg: impl Into<String>) -> Self {
        Self(msg.into())
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "configuration error: {}", self.0)
    }
}

impl std::error::Error for ConfigError {}

/// At least one verification check failed.
#[derive(Debug)]
pub struct VerificationFailed {
    pub failed: Vec<String>,
}

impl fmt::Display for VerificationFailed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} verification check(s) failed: {}",
            self.failed.len(),
            self.failed.join(", ")
        )
    }
}

impl std::error::Error for VerificationFailed {}

/// Maps an error to the process exit code.
pub fn exit_code(err: &anyhow::Error) -> i32 {
    use bellcorr::Error as E;
    for cause in err.chain() {
        if cause.is::<VerificationFailed>() {
            return EXIT_VERIFY;
        }
        if cause.is::<ConfigError>() || cause.is::<serde_json::Error>() {
            return EXIT_CONFIG;
        }
        if let Some(e) = cause.downcast_ref::<E>() {
            return match e {
                E::Capacity(_) => EXIT_CAPACITY,
                E::InvalidLattice(_)
                | E::InvalidModel(_)
                | E::InvalidArgument(_)
                | E::SettingsMismatch(_)
                | E::QubitMismatch { .. }
                | E::Json(_) => EXIT_CONFIG,
                _ => 1,
            };
        }
    }
    1
}

/// Command-line overrides and output handling shared by all subcommands.
#[derive(Debug, Clone)]
pub struct RunOptions {
    pub out: PathBuf,
    pub quiet: bool,
}

impl RunOptions {
    pub fn new(out: impl Into<PathBuf>) -> Self {
        Self {
            out: out.into(),
            quiet: true,
        }
    }

    pub(crate) fn say(&self, line: impl AsRef<str>) {
        if !self.quiet {
            println!("{}", line.as_ref());
        }
    }
}
