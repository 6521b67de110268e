use std::io::Write;

use serde::{Deserialize, Serialize};

use super::extract::CoherenceEstimate;
use crate::bell::{certify_depth, DepthCertificate};
use crate::Result;

pub const REPORT_SCHEMA: &str = "bellcorr.coherence";
pub const REPORT_VERSION: u32 = 1;

/// Everything one measurement run concluded about a state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoherenceReport {
    pub schema: String,
    pub version: u32,
    pub num_qubits: usize,
    pub estimates: Vec<CoherenceEstimate>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<DepthCertificate>,
}

impl CoherenceReport {
    pub fn new(num_qubits: usize, estimates: Vec<CoherenceEstimate>) -> Self {
        Self {
            schema: REPORT_SCHEMA.to_string(),
            version: REPORT_VERSION,
            num_qubits,
            estimates,
            certificate: None,
        }
    }

    /// Certifies depth from the first estimate that carries an energy.
    pub fn with_certificate(mut self) -> Result<Self> {
        if let Some(e) = self.estimates.iter().find(|e| e.energy.is_some()) {
            self.certificate = Some(certify_depth(
                self.num_qubits,
                e.energy.unwrap_or_default(),
                e.energy_std.unwrap_or_default(),
            )?);
        }
        Ok(self)
    }

    pub fn write_json<W: Write>(&self, mut w: W) -> Result<()> {
        serde_json::to_writer_pretty(&mut w, self)?;
        writeln!(w)?;
        Ok(())
    }
}
