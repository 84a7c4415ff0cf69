//! Simulation of OFDM radar with sub-Nyquist ADC sampling.
//!
//! Three transmit schemes are modelled on one frequency-domain frame model:
//!
//! - conventional full-rate OFDM radar ([`Mode::Full`]),
//! - sub-Nyquist sampling OFDM with random symbols in every sub-band
//!   ([`Mode::Sns`]), unfolded without mismatch cancellation,
//! - sub-Nyquist sampling OFDM with a time-frequency phase-coded waveform
//!   ([`Mode::PcSns`]), where all sub-bands carry the same symbols multiplied
//!   by orthogonal phase codes.
//!
//! The pipeline is `waveform` → `channel` → `receiver` (fold / unfold) →
//! `rdproc` (range-Doppler map, peaks, noise floor). The `harness` module wires
//! it end to end from a TOML experiment file.

pub mod channel;
pub mod error;
pub mod harness;
pub mod matrix;
pub mod params;
pub mod rdproc;
pub mod receiver;
pub mod waveform;

pub use num_complex;

pub use channel::{apply_channel, synth_time_domain, target_matrix, SampleStream, Target, TargetScenario};
pub use error::{Error, Result};
pub use matrix::SymbolMatrix;
pub use params::{derive_metrics, unambiguous_limits, CodeConfig, RadarMetrics, RadarParams};
pub use rdproc::{
    compare_noise_floors, detect_peaks, predict_ambiguities, range_doppler_map, PeakReport,
    RangeDopplerMap, Window,
};
pub use receiver::{fold_frequency, fold_time, unfold, FoldedFrame, Mode, UnfoldedFrame};
pub use waveform::{
    assemble_pc_frame, assemble_sns_frame, code_interference_matrix, freq_code_block,
    gen_symbols, time_code, Constellation, PhaseCodeSet,
};
