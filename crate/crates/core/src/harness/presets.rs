//! Built-in experiment configurations.

use num_complex::Complex64;

use super::config::{
    DetectionConfig, ExperimentConfig, OutputConfig, RunConfig, ScenarioConfig, Seeds, SweepConfig, SCHEMA_VERSION,
};
use crate::channel::Target;
use crate::error::{Error, FieldError, Result};
use crate::params::{CodeConfig, RadarParams};
use crate::rdproc::Window;
use crate::receiver::Mode;
use crate::waveform::Constellation;

pub const NAMES: [&str; 3] = ["table1-sim", "fig7-scenario", "lsweep-sim"];

/// Noise variance per frequency-domain sample used by the presets. With a
/// unit-amplitude target as the 0 dBm reference this is a −20 dBm noise level.
pub const PRESET_NOISE_POWER: f64 = 0.01;

pub fn describe(name: &str) -> Option<&'static str> {
    match name {
        "table1-sim" => Some("full-rate OFDM radar, 2048 x 256 at 77 GHz, one target at 16 m / 10 m/s"),
        "fig7-scenario" => Some("PC-SNS with L_c = L_s = 4 (L = 16) on the same frame and target"),
        "lsweep-sim" => Some("SNS with three static targets (2.5 m, 5.3 m, 9.9 m), 10 symbols at 60.98 GHz, sweep L = 2..16"),
        _ => None,
    }
}

fn base(name: &str, mode: Mode, code: CodeConfig, params: RadarParams, targets: Vec<Target>) -> ExperimentConfig {
    ExperimentConfig {
        schema_version: SCHEMA_VERSION,
        name: name.to_string(),
        mode,
        window: Window::None,
        constellation: Constellation::Qpsk,
        params,
        code,
        scenario: ScenarioConfig { noise_power: PRESET_NOISE_POWER, targets },
        seeds: Seeds::default(),
        detection: DetectionConfig::default(),
        output: OutputConfig { dir: format!("out/{name}").into(), csv: true, plots: true, report: true, frames: false },
        run: RunConfig::default(),
        sweep: None,
    }
}

pub fn preset(name: &str) -> Result<ExperimentConfig> {
    let target = Target::new(16.0, 10.0);
    match name {
        "table1-sim" => Ok(base(name, Mode::Full, CodeConfig::UNCODED, RadarParams::automotive_77ghz(), vec![target])),
        "fig7-scenario" => Ok(base(name, Mode::PcSns, CodeConfig { l_c: 4, l_s: 4 }, RadarParams::automotive_77ghz(), vec![target])),
        "lsweep-sim" => {
            let targets = vec![
                Target::new(2.5, 0.0),
                Target::new(5.3, 0.0),
                Target::new(9.9, 0.0).with_amplitude(Complex64::new(0.5, 0.0)),
            ];
            let mut cfg = base(name, Mode::Sns, CodeConfig { l_c: 2, l_s: 1 }, RadarParams::indoor_61ghz(), targets);
            cfg.sweep = Some(SweepConfig { over: "L=2,4,8,16".into() });
            Ok(cfg)
        }
        other => Err(Error::InvalidConfig(vec![FieldError::new(
            "preset",
            format!("unknown preset `{other}`, expected one of {}", NAMES.join(", ")),
        )])),
    }
}
