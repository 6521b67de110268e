//! Emulated hardware readout of the antidiagonal coherence: parity
//! oscillations, multiple-quantum coherences, readout errors and their
//! mitigation, and Fourier or least-squares extraction.

mod estimator;
mod extract;
mod pipeline;
mod readout;
mod report;
mod signals;

pub use estimator::ParityEnergyEstimator;
pub use extract::{
    combine_repetitions, extract_coherence_fit, extract_coherence_mqc, extract_coherence_parity, sinusoid_fit,
    with_parity_phase, CoherenceEstimate, SinusoidFit,
};
pub use pipeline::{
    ghz_parity_signal, measure_mqc, measure_parity, mqc_point, mqc_signals, parity_point, parity_signals,
    MeasureSettings, SignalPoint,
};
pub use readout::{apply_readout_error, mitigate_readout, ProductObservable, ReadoutModel};
pub use report::{CoherenceReport, REPORT_SCHEMA, REPORT_VERSION};
pub use signals::{
    mqc_settings, parity_grid, parity_settings, shots_schedule, write_signals_csv, Method, SignalTable, CSV_HEADER,
};
