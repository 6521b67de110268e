use super::extract::extract_coherence_parity;
use super::pipeline::{parity_signals, MeasureSettings};
use super::signals::parity_settings;
use crate::qsim::Circuit;
use crate::rng::SeedStream;
use crate::vqc::{EnergyEstimator, Estimate, Mode};
use crate::{Error, Result};

/// Estimates `⟨H_B(N)⟩` the way the hardware does: a parity signal on the
/// `N + 1` sparse angles, Fourier-extracted to `⟨C⟩`.
///
/// In exact mode without readout error this coincides with
/// [`ExactEstimator`](crate::vqc::ExactEstimator) over
/// [`GhzBellOperator`](crate::bell::GhzBellOperator) to rounding.
#[derive(Debug, Clone)]
pub struct ParityEnergyEstimator {
    num_qubits: usize,
    settings: MeasureSettings,
}

impl ParityEnergyEstimator {
    pub fn new(num_qubits: usize, settings: MeasureSettings) -> Result<Self> {
        if num_qubits < 2 {
            return Err(Error::InvalidArgument("a parity signal needs at least 2 qubits".into()));
        }
        settings.readout.check_qubits(num_qubits)?;
        Ok(Self { num_qubits, settings })
    }

    pub fn settings(&self) -> &MeasureSettings {
        &self.settings
    }
}

impl EnergyEstimator for ParityEnergyEstimator {
    fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    fn estimate(&self, circuit: &Circuit, params: &[f64], stream: &SeedStream) -> Result<Estimate> {
        if circuit.num_qubits() != self.num_qubits {
            return Err(Error::QubitMismatch {
                expected: self.num_qubits,
                got: circuit.num_qubits(),
            });
        }
        let state = circuit.prepare(params)?;
        let angles = parity_settings(self.num_qubits);
        let table = parity_signals(&state, &angles, &self.settings, stream, 0)?;
        let c = extract_coherence_parity(&table, self.num_qubits)?;
        Ok(Estimate {
            energy: c.energy.unwrap_or(f64::NAN),
            energy_std: c.energy_std.unwrap_or(0.0),
            shots: table.shots.iter().sum(),
        })
    }

    fn is_exact(&self) -> bool {
        self.settings.mode == Mode::Exact
    }
}
