//! TOML experiment configuration.
//!
//! ```toml
//! schema_version = 1
//! name = "fig7-scenario"
//! mode = "pc-sns"          # full | sns | pc-sns
//! window = "none"          # none | hann
//! constellation = "qpsk"   # qpsk | qam16
//!
//! [params]
//! n_subcarriers = 2048
//! n_symbols = 256
//! subcarrier_spacing_hz = 488281.25
//! carrier_freq_hz = 77e9
//! cp_duration_s = 5.12e-7
//! speed_of_light_mps = 3e8
//!
//! [code]
//! l_c = 4
//! l_s = 4
//!
//! [scenario]
//! noise_power = 0.01
//! [[scenario.targets]]
//! range_m = 16.0
//! velocity_mps = 10.0
//! amplitude = [1.0, 0.0]
//!
//! [seeds]
//! symbols = 1
//! noise = 2
//!
//! [detection]
//! threshold_db = -15.0
//! guard_bins = 3
//!
//! [output]
//! dir = "out/fig7-scenario"
//! csv = true
//! plots = true
//! report = true
//! frames = false
//!
//! [run]
//! workers = 0              # 0 = one per core
//! receiver = "frequency"   # frequency | time
//!
//! [sweep]                  # optional, used by the `sweep` command
//! over = "L=2,4,8,16"
//! ```
//!
//! For SNS the fold factor is `l_c · l_s`; only PC-SNS distinguishes the two.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::channel::{Target, TargetScenario};
use crate::error::{Error, FieldError, Result};
use crate::params::{CodeConfig, RadarParams};
use crate::rdproc::Window;
use crate::receiver::Mode;
use crate::waveform::Constellation;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub schema_version: u32,
    pub name: String,
    pub mode: Mode,
    #[serde(default)]
    pub window: Window,
    #[serde(default)]
    pub constellation: Constellation,
    pub params: RadarParams,
    pub code: CodeConfig,
    pub scenario: ScenarioConfig,
    #[serde(default)]
    pub seeds: Seeds,
    #[serde(default)]
    pub detection: DetectionConfig,
    pub output: OutputConfig,
    #[serde(default)]
    pub run: RunConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepConfig>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub noise_power: f64,
    #[serde(default)]
    pub targets: Vec<Target>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Seeds {
    pub symbols: u64,
    pub noise: u64,
}

impl Default for Seeds {
    fn default() -> Self {
        Self { symbols: 1, noise: 2 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DetectionConfig {
    pub threshold_db: f64,
    pub guard_bins: usize,
}

impl Default for DetectionConfig {
    fn default() -> Self {
        Self { threshold_db: -15.0, guard_bins: 3 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    pub dir: PathBuf,
    #[serde(default = "yes")]
    pub csv: bool,
    #[serde(default = "yes")]
    pub plots: bool,
    #[serde(default = "yes")]
    pub report: bool,
    /// Also dump the transmit, received, folded and unfolded frames and the map in binary form.
    #[serde(default)]
    pub frames: bool,
}

fn yes() -> bool {
    true
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReceiverPath {
    /// Fold by summing sub-band blocks of the frequency-domain frame.
    #[default]
    Frequency,
    /// Synthesize time-domain samples and decimate them.
    Time,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub workers: usize,
    #[serde(default)]
    pub receiver: ReceiverPath,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub over: String,
}

impl ExperimentConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text).map_err(|e| Error::ConfigParse(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml_str(&text)
    }

    pub fn to_toml_string(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::ConfigParse(e.to_string()))
    }

    /// Fold factor seen by the receiver.
    pub fn fold_factor(&self) -> usize {
        self.code.l()
    }

    /// Code whose ambiguity grid the waveform produces: only PC-SNS replicates peaks.
    pub fn ambiguity_code(&self) -> CodeConfig {
        match self.mode {
            Mode::PcSns => self.code,
            Mode::Full | Mode::Sns => CodeConfig::UNCODED,
        }
    }

    pub fn target_scenario(&self) -> TargetScenario {
        TargetScenario {
            targets: self.scenario.targets.clone(),
            noise_power: self.scenario.noise_power,
            noise_seed: self.seeds.noise,
        }
    }

    /// Checks every field and reports all problems at once.
    pub fn validate(&self) -> Result<()> {
        let mut errs = Vec::new();
        let mut push = |field: &str, msg: String| errs.push(FieldError::new(field, msg));

        if self.schema_version != SCHEMA_VERSION {
            push("schema_version", format!("expected {SCHEMA_VERSION}, found {}", self.schema_version));
        }
        if self.name.trim().is_empty() {
            push("name", "must not be empty".into());
        }
        let params_ok = match self.params.validate() {
            Ok(()) => true,
            Err(e) => {
                push("params", e.to_string());
                false
            }
        };
        if self.code.l_c == 0 || self.code.l_s == 0 {
            push("code", "l_c and l_s must be at least 1".into());
        } else if params_ok {
            let l = self.code.l();
            match self.mode {
                Mode::Full => {
                    if l != 1 {
                        push("code", format!("full mode requires l_c = l_s = 1, found {}x{}", self.code.l_c, self.code.l_s));
                    }
                }
                Mode::PcSns => {
                    if let Err(e) = self.code.validate_for(&self.params) {
                        push("code", e.to_string());
                    }
                }
                Mode::Sns => {
                    if !self.params.n_subcarriers.is_multiple_of(l) || (l > 1 && l >= self.params.n_subcarriers) {
                        push("code", format!("L = {l} must be a proper divisor of N_c = {}", self.params.n_subcarriers));
                    }
                }
            }
        }
        if !(self.scenario.noise_power.is_finite() && self.scenario.noise_power >= 0.0) {
            push("scenario.noise_power", "must be finite and non-negative".into());
        }
        for (i, t) in self.scenario.targets.iter().enumerate() {
            if let Err(e) = t.validate() {
                push(&format!("scenario.targets[{i}]"), e.to_string());
            }
        }
        if !(self.detection.threshold_db < 0.0) {
            push("detection.threshold_db", format!("must be negative, found {}", self.detection.threshold_db));
        }
        if self.output.dir.as_os_str().is_empty() {
            push("output.dir", "must not be empty".into());
        }
        if self.run.receiver == ReceiverPath::Time && params_ok {
            self.validate_time_path(&mut push);
        }
        if let Some(sweep) = &self.sweep {
            if let Err(e) = crate::harness::sweep::SweepSpec::parse(&sweep.over) {
                push("sweep.over", e.to_string());
            }
        }
        if errs.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidConfig(errs))
        }
    }

    fn validate_time_path(&self, push: &mut impl FnMut(&str, String)) {
        let cp = match self.params.cp_samples() {
            Ok(cp) => cp,
            Err(e) => return push("params.cp_duration_s", e.to_string()),
        };
        let rate = self.params.bandwidth();
        for (i, t) in self.scenario.targets.iter().enumerate() {
            let d = t.delay(self.params.speed_of_light) * rate;
            if (d - d.round()).abs() > 1e-6 {
                push(&format!("scenario.targets[{i}].range_m"), format!("time receiver needs an integer-sample delay, got {d} samples"));
            } else if d.round() as usize > cp {
                push(&format!("scenario.targets[{i}].range_m"), format!("delay of {d} samples exceeds the {cp}-sample cyclic prefix"));
            }
        }
    }
}
