use std::f64::consts::PI;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Which measurement produced a signal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Parity,
    Mqc,
    SinusoidFit,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::Parity => "parity",
            Method::Mqc => "mqc",
            Method::SinusoidFit => "sinusoid_fit",
        }
    }
}

/// Measured values on a grid of analysis angles.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SignalTable {
    pub method: Method,
    pub num_qubits: usize,
    pub angles: Vec<f64>,
    pub values: Vec<f64>,
    pub stds: Vec<f64>,
    pub shots: Vec<usize>,
    /// Index of the pipeline repetition that produced this table.
    pub repetition: usize,
}

impl SignalTable {
    pub fn validate(&self) -> Result<()> {
        let k = self.angles.len();
        if self.values.len() != k || self.stds.len() != k || self.shots.len() != k {
            return Err(Error::SettingsMismatch("signal columns have different lengths".into()));
        }
        let range = match self.method {
            Method::Mqc => 0.0..=1.0,
            _ => -1.0..=1.0,
        };
        for (i, (&v, &s)) in self.values.iter().zip(&self.stds).enumerate() {
            if !v.is_finite() || !s.is_finite() || s < 0.0 {
                return Err(Error::SignalsInconsistent(format!("entry {i}: value {v}, std {s}")));
            }
            // Mitigated values may leave the physical range by shot noise.
            let slack = 5.0 * s + 1e-9;
            if v < range.start() - slack || v > range.end() + slack {
                return Err(Error::SignalsInconsistent(format!(
                    "entry {i}: value {v} outside {range:?}"
                )));
            }
        }
        Ok(())
    }

    /// Appends rows `method,angle,value,std,shots,repetition`.
    pub fn write_csv_rows<W: Write>(&self, mut w: W) -> Result<()> {
        for i in 0..self.angles.len() {
            writeln!(
                w,
                "{},{},{},{},{},{}",
                self.method.as_str(),
                self.angles[i],
                self.values[i],
                self.stds[i],
                self.shots[i],
                self.repetition
            )?;
        }
        Ok(())
    }
}

pub const CSV_HEADER: &str = "method,angle,value,std,shots,repetition";

/// Writes several tables as one CSV document.
pub fn write_signals_csv<W: Write>(mut w: W, tables: &[SignalTable]) -> Result<()> {
    writeln!(w, "{CSV_HEADER}")?;
    for t in tables {
        t.write_csv_rows(&mut w)?;
    }
    Ok(())
}

/// `γ_k = −π/2 + πk/(n+1)`, `k = 0…n`.
pub fn parity_settings(n: usize) -> Vec<f64> {
    parity_grid(n + 1)
}

/// `γ_k = −π/2 + πk/N_s`, `k = 0…N_s−1`. Any `N_s ≥ n + 1` extracts the
/// frequency-`n` component without aliasing.
pub fn parity_grid(points: usize) -> Vec<f64> {
    (0..points).map(|k| -PI / 2.0 + PI * k as f64 / points as f64).collect()
}

/// `φ_j = πj/(n+1)`, `j = 0…2n+1`.
pub fn mqc_settings(n: usize) -> Vec<f64> {
    (0..2 * n + 2).map(|j| PI * j as f64 / (n + 1) as f64).collect()
}

/// Shots per setting used for `n = 2, 4, …, 24` qubits.
pub fn shots_schedule(n: usize) -> Result<usize> {
    const TABLE: [usize; 12] = [
        900, 1500, 2400, 3600, 5000, 7200, 9600, 12000, 15000, 20000, 25000, 30000,
    ];
    if !(2..=24).contains(&n) || n % 2 == 1 {
        return Err(Error::InvalidArgument(format!(
            "no default shot count for {n} qubits; set shots explicitly"
        )));
    }
    Ok(TABLE[n / 2 - 1])
}
