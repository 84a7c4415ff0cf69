//! Config-driven experiment runner.

pub mod config;
pub mod experiment;
pub mod plots;
pub mod presets;
pub mod sweep;

pub use config::{ExperimentConfig, ReceiverPath};
pub use experiment::{run_experiment, simulate, write_outputs, ExperimentReport, Simulation, Summary};
pub use presets::preset;
pub use sweep::{run_sweep, SweepReport, SweepSpec};
