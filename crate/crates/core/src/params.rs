//! OFDM numerology and the radar figures of merit derived from it.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// SI value of the speed of light in m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// OFDM frame numerology.
///
/// The bare symbol duration is not stored: it is always `1 / subcarrier_spacing`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadarParams {
    pub n_subcarriers: usize,
    pub n_symbols: usize,
    #[serde(rename = "subcarrier_spacing_hz")]
    pub subcarrier_spacing: f64,
    #[serde(rename = "carrier_freq_hz")]
    pub carrier_freq: f64,
    #[serde(rename = "cp_duration_s")]
    pub cp_duration: f64,
    #[serde(rename = "speed_of_light_mps", default = "default_c")]
    pub speed_of_light: f64,
}

fn default_c() -> f64 {
    SPEED_OF_LIGHT
}

impl RadarParams {
    pub fn new(
        n_subcarriers: usize,
        n_symbols: usize,
        subcarrier_spacing: f64,
        carrier_freq: f64,
        cp_duration: f64,
    ) -> Result<Self> {
        let params = Self {
            n_subcarriers,
            n_symbols,
            subcarrier_spacing,
            carrier_freq,
            cp_duration,
            speed_of_light: SPEED_OF_LIGHT,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn with_speed_of_light(mut self, c: f64) -> Result<Self> {
        self.speed_of_light = c;
        self.validate()?;
        Ok(self)
    }

    /// Simulation numerology: 2048 subcarriers, 256 symbols, 1 GHz at 77 GHz,
    /// CP of a quarter symbol (T_s = 2.56 us), and c = 3e8 m/s so that the
    /// rounded resolution figures (15 cm, 307.2 m) come out exactly.
    pub fn automotive_77ghz() -> Self {
        let spacing = 1e9 / 2048.0;
        Self {
            n_subcarriers: 2048,
            n_symbols: 256,
            subcarrier_spacing: spacing,
            carrier_freq: 77e9,
            cp_duration: 0.25 / spacing,
            speed_of_light: 3e8,
        }
    }

    /// Measurement numerology: like [`RadarParams::automotive_77ghz`] but ten symbols
    /// at a 60.98 GHz carrier.
    pub fn indoor_61ghz() -> Self {
        Self { n_symbols: 10, carrier_freq: 60.98e9, ..Self::automotive_77ghz() }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |field, reason: &str| Err(Error::InvalidParam { field, reason: reason.to_string() });
        if self.n_subcarriers < 2 {
            return bad("n_subcarriers", "must be at least 2");
        }
        if self.n_symbols < 1 {
            return bad("n_symbols", "must be at least 1");
        }
        if !(self.subcarrier_spacing.is_finite() && self.subcarrier_spacing > 0.0) {
            return bad("subcarrier_spacing", "must be finite and positive");
        }
        if !(self.carrier_freq.is_finite() && self.carrier_freq > 0.0) {
            return bad("carrier_freq", "must be finite and positive");
        }
        if !(self.cp_duration.is_finite() && self.cp_duration >= 0.0) {
            return bad("cp_duration", "must be finite and non-negative");
        }
        if !(self.speed_of_light.is_finite() && self.speed_of_light > 0.0) {
            return bad("speed_of_light", "must be finite and positive");
        }
        Ok(())
    }

    /// T_sym = 1 / Δf.
    pub fn symbol_duration(&self) -> f64 {
        1.0 / self.subcarrier_spacing
    }

    /// T_s = T_sym + T_CP.
    pub fn total_symbol_duration(&self) -> f64 {
        self.symbol_duration() + self.cp_duration
    }

    /// B = N_c · Δf, also the full-rate complex sample rate.
    pub fn bandwidth(&self) -> f64 {
        self.n_subcarriers as f64 * self.subcarrier_spacing
    }

    /// Cyclic prefix length in full-rate samples. Fails unless `T_CP · B` is an integer.
    pub fn cp_samples(&self) -> Result<usize> {
        let samples = self.cp_duration * self.bandwidth();
        let rounded = samples.round();
        if (samples - rounded).abs() > 1e-6 * rounded.max(1.0) {
            return Err(Error::NonIntegralCp { samples });
        }
        Ok(rounded as usize)
    }
}

/// Figures of merit of a conventional full-rate OFDM radar.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadarMetrics {
    pub bandwidth: f64,
    pub range_resolution: f64,
    pub r_max: f64,
    pub velocity_resolution: f64,
    /// Half-span of the Doppler axis; velocities live in `[-v_max, +v_max)`.
    pub v_max: f64,
    pub wavelength: f64,
}

pub fn derive_metrics(params: &RadarParams) -> RadarMetrics {
    let c = params.speed_of_light;
    let bandwidth = params.bandwidth();
    let wavelength = c / params.carrier_freq;
    let t_s = params.total_symbol_duration();
    RadarMetrics {
        bandwidth,
        range_resolution: c / (2.0 * bandwidth),
        r_max: c / (2.0 * params.subcarrier_spacing),
        velocity_resolution: wavelength / (2.0 * params.n_symbols as f64 * t_s),
        v_max: wavelength / (4.0 * t_s),
        wavelength,
    }
}

/// Split of the `L` sub-bands into `l_c` frequency codes and `l_s` time codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CodeConfig {
    pub l_c: usize,
    pub l_s: usize,
}

impl CodeConfig {
    pub const UNCODED: CodeConfig = CodeConfig { l_c: 1, l_s: 1 };

    pub fn new(l_c: usize, l_s: usize) -> Result<Self> {
        if l_c == 0 {
            return Err(Error::InvalidParam { field: "l_c", reason: "must be at least 1".into() });
        }
        if l_s == 0 {
            return Err(Error::InvalidParam { field: "l_s", reason: "must be at least 1".into() });
        }
        Ok(Self { l_c, l_s })
    }

    /// Total number of sub-bands, `L = L_c · L_s`.
    pub fn l(&self) -> usize {
        self.l_c * self.l_s
    }

    /// Rows per sub-band block, `N_c / L`.
    pub fn block_rows(&self, params: &RadarParams) -> usize {
        params.n_subcarriers / self.l()
    }

    /// Checks that the code fits the frame: `L | N_c`, `L < N_c` unless
    /// uncoded, and `L_s | N_s` so every time code completes whole periods.
    pub fn validate_for(&self, params: &RadarParams) -> Result<()> {
        Self::new(self.l_c, self.l_s)?;
        let l = self.l();
        if !params.n_subcarriers.is_multiple_of(l) {
            return Err(Error::Divisibility { what: "L = L_c·L_s must divide N_c", value: params.n_subcarriers, divisor: l });
        }
        if l > 1 && l >= params.n_subcarriers {
            return Err(Error::InvalidParam {
                field: "l_c",
                reason: format!("L = {l} must be a proper divisor of N_c = {}", params.n_subcarriers),
            });
        }
        if !params.n_symbols.is_multiple_of(self.l_s) {
            return Err(Error::Divisibility { what: "L_s must divide N_s", value: params.n_symbols, divisor: self.l_s });
        }
        Ok(())
    }
}

/// Unambiguous range and velocity half-span after coding: `(r_max / L_c, v_max / L_s)`.
pub fn unambiguous_limits(metrics: &RadarMetrics, code: &CodeConfig) -> (f64, f64) {
    (metrics.r_max / code.l_c as f64, metrics.v_max / code.l_s as f64)
}
