use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use super::train::TrainRecord;
use crate::{Error, Result};

pub const TRAJECTORY_SCHEMA: &str = "bellcorr.trajectory";
pub const TRAJECTORY_VERSION: u32 = 1;

/// First line of a trajectory file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryHeader {
    pub schema: String,
    pub version: u32,
    pub ansatz: String,
    pub num_qubits: usize,
    pub num_params: usize,
    pub mode: String,
    pub seed: u64,
}

impl TrajectoryHeader {
    pub fn new(
        ansatz: impl Into<String>,
        num_qubits: usize,
        num_params: usize,
        mode: impl Into<String>,
        seed: u64,
    ) -> Self {
        Self {
            schema: TRAJECTORY_SCHEMA.into(),
            version: TRAJECTORY_VERSION,
            ansatz: ansatz.into(),
            num_qubits,
            num_params,
            mode: mode.into(),
            seed,
        }
    }
}

/// JSON Lines: the header, then one record per line.
pub fn write_trajectory<W: Write>(mut w: W, header: &TrajectoryHeader, records: &[TrainRecord]) -> Result<()> {
    serde_json::to_writer(&mut w, header)?;
    writeln!(w)?;
    for r in records {
        serde_json::to_writer(&mut w, r)?;
        writeln!(w)?;
    }
    Ok(())
}

pub fn read_trajectory<R: BufRead>(r: R) -> Result<(TrajectoryHeader, Vec<TrainRecord>)> {
    let mut lines = r.lines();
    let first = lines
        .next()
        .ok_or_else(|| Error::InvalidArgument("empty trajectory".into()))??;
    let header: TrajectoryHeader = serde_json::from_str(&first)?;
    if header.schema != TRAJECTORY_SCHEMA || header.version != TRAJECTORY_VERSION {
        return Err(Error::InvalidArgument(format!(
            "unsupported trajectory schema {} v{}",
            header.schema, header.version
        )));
    }
    let mut records = Vec::new();
    for line in lines {
        let line = line?;
        if !line.trim().is_empty() {
            records.push(serde_json::from_str(&line)?);
        }
    }
    Ok((header, records))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let rec = TrainRecord {
            phase: 0,
            iteration: 3,
            energy: -1.25,
            energy_std: 0.0,
            shots_used: 0,
            learning_rate: 0.1,
            grad_norm: 0.5,
            reverted: false,
            params_snapshot: vec![0.1, 0.2],
        };
        let header = TrajectoryHeader::new("chain", 2, 2, "exact", 9);
        let mut buf = Vec::new();
        write_trajectory(&mut buf, &header, std::slice::from_ref(&rec)).unwrap();
        let (h, r) = read_trajectory(&buf[..]).unwrap();
        assert_eq!(h, header);
        assert_eq!(r, vec![rec]);
    }
}
