use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::{bail, Context};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::config::ExperimentConfig;

pub const MANIFEST_SCHEMA: &str = "bellcorr.manifest";
pub const MANIFEST_FILE: &str = "manifest.json";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManifestEntry {
    /// Relative to the output directory.
    pub path: String,
    pub bytes: u64,
    pub sha256: String,
}

/// What a run was asked to do and what it wrote. Everything except the two
/// timestamps is a deterministic function of the config.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub schema: String,
    pub artifact_version: String,
    pub command: String,
    pub config_sha256: String,
    pub seed: Option<u64>,
    pub started_unix_ms: u128,
    pub finished_unix_ms: u128,
    pub files: Vec<ManifestEntry>,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

/// Hash of the effective config (after command-line overrides).
pub fn config_hash(config: &ExperimentConfig) -> String {
    sha256_hex(&serde_json::to_vec(config).expect("config serialises"))
}

pub(crate) fn now_ms() -> u128 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_millis())
        .unwrap_or(0)
}

impl RunManifest {
    pub(crate) fn build(
        dir: &Path,
        command: &str,
        config: Option<&ExperimentConfig>,
        started_unix_ms: u128,
        files: &[String],
    ) -> anyhow::Result<Self> {
        let files = files
            .iter()
            .map(|name| {
                let bytes = std::fs::read(dir.join(name)).with_context(|| format!("reading back {name}"))?;
                Ok(ManifestEntry {
                    path: name.clone(),
                    bytes: bytes.len() as u64,
                    sha256: sha256_hex(&bytes),
                })
            })
            .collect::<anyhow::Result<Vec<_>>>()?;
        Ok(Self {
            schema: MANIFEST_SCHEMA.into(),
            artifact_version: env!("CARGO_PKG_VERSION").into(),
            command: command.into(),
            config_sha256: config.map(config_hash).unwrap_or_default(),
            seed: config.and_then(|c| c.seed),
            started_unix_ms,
            finished_unix_ms: now_ms(),
            files,
        })
    }

    /// Reads `dir/manifest.json` and checks that every listed file exists
    /// with the recorded size and hash.
    pub fn load_and_check(dir: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(dir.join(MANIFEST_FILE))?;
        let m: Self = serde_json::from_str(&text)?;
        if m.schema != MANIFEST_SCHEMA {
            bail!("not a run manifest: schema {}", m.schema);
        }
        for f in &m.files {
            let bytes =
                std::fs::read(dir.join(&f.path)).with_context(|| format!("manifest lists missing {}", f.path))?;
            if bytes.len() as u64 != f.bytes || sha256_hex(&bytes) != f.sha256 {
                bail!("{} does not match its manifest entry", f.path);
            }
        }
        Ok(m)
    }
}
