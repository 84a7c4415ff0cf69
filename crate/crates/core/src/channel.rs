//! Multi-target delay/Doppler channel with additive white Gaussian noise.
//!
//! The frequency-domain path ([`apply_channel`]) is the simulation model:
//! `S = C ⊙ X + W` with no range migration and no inter-carrier interference.
//! The time-domain path ([`synth_time_domain`] + [`apply_channel_time`]) only
//! exists to show that physical decimation produces the same folding; it
//! accepts integer-sample delays that fit inside the cyclic prefix.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::SymbolMatrix;
use crate::params::{derive_metrics, RadarMetrics, RadarParams};

/// A point target. Positive velocity produces a positive Doppler shift.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Target {
    #[serde(rename = "range_m")]
    pub range: f64,
    #[serde(rename = "velocity_mps")]
    pub velocity: f64,
    /// Complex attenuation as `[re, im]`.
    #[serde(default = "unit_amplitude")]
    pub amplitude: Complex64,
}

fn unit_amplitude() -> Complex64 {
    Complex64::new(1.0, 0.0)
}

impl Target {
    pub fn new(range: f64, velocity: f64) -> Self {
        Self { range, velocity, amplitude: unit_amplitude() }
    }

    pub fn with_amplitude(mut self, amplitude: Complex64) -> Self {
        self.amplitude = amplitude;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.range.is_finite() && self.range >= 0.0) {
            return Err(Error::InvalidParam { field: "range", reason: "must be finite and non-negative".into() });
        }
        if !self.velocity.is_finite() {
            return Err(Error::InvalidParam { field: "velocity", reason: "must be finite".into() });
        }
        let a = self.amplitude.norm();
        if !(a.is_finite() && a > 0.0) {
            return Err(Error::InvalidParam { field: "amplitude", reason: "magnitude must be finite and non-zero".into() });
        }
        Ok(())
    }

    /// Round-trip delay τ = 2r / c.
    pub fn delay(&self, c: f64) -> f64 {
        2.0 * self.range / c
    }

    /// Doppler shift f_D = 2v / λ.
    pub fn doppler(&self, wavelength: f64) -> f64 {
        2.0 * self.velocity / wavelength
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct TargetScenario {
    pub targets: Vec<Target>,
    /// Variance of each complex frequency-domain noise sample.
    pub noise_power: f64,
    pub noise_seed: u64,
}

impl TargetScenario {
    pub fn noiseless(targets: Vec<Target>) -> Self {
        Self { targets, noise_power: 0.0, noise_seed: 0 }
    }

    pub fn validate(&self) -> Result<()> {
        for t in &self.targets {
            t.validate()?;
        }
        if !(self.noise_power.is_finite() && self.noise_power >= 0.0) {
            return Err(Error::InvalidParam { field: "noise_power", reason: "must be finite and non-negative".into() });
        }
        Ok(())
    }
}

/// e^{j2π x} with x reduced to [0, 1) before scaling.
fn turn(x: f64) -> Complex64 {
    Complex64::from_polar(1.0, TAU * x.rem_euclid(1.0))
}

/// Target information matrix `X = R·A·Vᵀ`:
/// `X[m, n] = Σ_k α_k · e^{−j2π m Δf τ_k} · e^{+j2π n f_D,k T_s}` for
/// `m = 1..N_c`, `n = 1..N_s`.
pub fn target_matrix(scenario: &TargetScenario, params: &RadarParams, metrics: &RadarMetrics) -> SymbolMatrix {
    let (nc, ns) = (params.n_subcarriers, params.n_symbols);
    let t_s = params.total_symbol_duration();
    let mut x = SymbolMatrix::zeros(nc, ns);
    for target in &scenario.targets {
        let range_step = params.subcarrier_spacing * target.delay(params.speed_of_light);
        let doppler_step = target.doppler(metrics.wavelength) * t_s;
        let range_vec: Vec<Complex64> = (1..=nc).map(|m| turn(-(m as f64) * range_step)).collect();
        for n in 0..ns {
            let v = target.amplitude * turn((n + 1) as f64 * doppler_step);
            for (xm, r) in x.col_mut(n).iter_mut().zip(&range_vec) {
                *xm += r * v;
            }
        }
    }
    x
}

/// Circularly-symmetric complex Gaussian noise with variance `power` per entry.
pub fn complex_noise(rows: usize, cols: usize, power: f64, seed: u64) -> SymbolMatrix {
    let mut w = SymbolMatrix::zeros(rows, cols);
    if power > 0.0 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let sigma = (power / 2.0).sqrt();
        for z in w.as_mut_slice() {
            let re: f64 = StandardNormal.sample(&mut rng);
            let im: f64 = StandardNormal.sample(&mut rng);
            *z = Complex64::new(sigma * re, sigma * im);
        }
    }
    w
}

/// Received frequency-domain frame `S = C ⊙ X + W`.
pub fn apply_channel(tx: &SymbolMatrix, scenario: &TargetScenario, params: &RadarParams) -> Result<SymbolMatrix> {
    params.validate()?;
    scenario.validate()?;
    tx.ensure_dims(params.n_subcarriers, params.n_symbols)?;
    let metrics = derive_metrics(params);
    let x = target_matrix(scenario, params, &metrics);
    let s = tx.hadamard(&x)?;
    if scenario.noise_power > 0.0 {
        let w = complex_noise(tx.rows(), tx.cols(), scenario.noise_power, scenario.noise_seed);
        s.add(&w)
    } else {
        Ok(s)
    }
}

/// Full-rate complex baseband samples of a frame.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleStream {
    pub samples: Vec<Complex64>,
    pub sample_rate: f64,
    pub cp_len: usize,
    pub body_len: usize,
    pub n_symbols: usize,
}

impl SampleStream {
    pub fn symbol_len(&self) -> usize {
        self.cp_len + self.body_len
    }

    /// The `n`-th (0-based) symbol body with its cyclic prefix removed.
    pub fn body(&self, n: usize) -> &[Complex64] {
        let start = n * self.symbol_len() + self.cp_len;
        &self.samples[start..start + self.body_len]
    }

    pub(crate) fn check_layout(&self, params: &RadarParams) -> Result<()> {
        if self.body_len != params.n_subcarriers || self.n_symbols != params.n_symbols {
            return Err(Error::Layout(format!(
                "stream has {} symbols of {} samples, parameters expect {} of {}",
                self.n_symbols, self.body_len, params.n_symbols, params.n_subcarriers
            )));
        }
        if self.samples.len() != self.n_symbols * self.symbol_len() {
            return Err(Error::Layout(format!(
                "stream length {} differs from {} symbols x {} samples",
                self.samples.len(),
                self.n_symbols,
                self.symbol_len()
            )));
        }
        Ok(())
    }
}

/// Per-symbol inverse DFT (unnormalised) plus cyclic prefix.
///
/// Subcarrier `m` (1-based) sits on DFT bin `m mod N_c`, so a delay of `d`
/// samples multiplies subcarrier `m` by exactly e^{−j2π m d / N_c}.
pub fn synth_time_domain(tx: &SymbolMatrix, params: &RadarParams) -> Result<SampleStream> {
    params.validate()?;
    tx.ensure_dims(params.n_subcarriers, params.n_symbols)?;
    let nc = params.n_subcarriers;
    let cp_len = params.cp_samples()?;
    let ifft = FftPlanner::new().plan_fft_inverse(nc);
    let mut samples = Vec::with_capacity(params.n_symbols * (cp_len + nc));
    let mut body = vec![Complex64::new(0.0, 0.0); nc];
    for n in 0..params.n_symbols {
        for (i, z) in tx.col(n).iter().enumerate() {
            body[(i + 1) % nc] = *z;
        }
        ifft.process(&mut body);
        samples.extend_from_slice(&body[nc - cp_len..]);
        samples.extend_from_slice(&body);
    }
    Ok(SampleStream { samples, sample_rate: params.bandwidth(), cp_len, body_len: nc, n_symbols: params.n_symbols })
}

/// Time-domain channel: integer-sample delays, one Doppler phase per symbol,
/// and white noise of variance `N_c · σ²` per sample (σ² per subcarrier
/// after demodulation).
pub fn apply_channel_time(stream: &SampleStream, scenario: &TargetScenario, params: &RadarParams) -> Result<SampleStream> {
    params.validate()?;
    scenario.validate()?;
    stream.check_layout(params)?;
    let metrics = derive_metrics(params);
    let t_s = params.total_symbol_duration();
    let sym_len = stream.symbol_len();
    let mut out = vec![Complex64::new(0.0, 0.0); stream.samples.len()];
    for target in &scenario.targets {
        let exact = target.delay(params.speed_of_light) * stream.sample_rate;
        let delay = exact.round();
        if (exact - delay).abs() > 1e-6 {
            return Err(Error::Unsupported(format!(
                "time-domain channel needs integer-sample delays, target at {} m is {exact} samples",
                target.range
            )));
        }
        let delay = delay as usize;
        if delay > stream.cp_len {
            return Err(Error::Unsupported(format!(
                "delay of {delay} samples exceeds the {}-sample cyclic prefix",
                stream.cp_len
            )));
        }
        let doppler_step = target.doppler(metrics.wavelength) * t_s;
        for (k, y) in out.iter_mut().enumerate().skip(delay) {
            let n = k / sym_len + 1;
            *y += target.amplitude * turn(n as f64 * doppler_step) * stream.samples[k - delay];
        }
    }
    if scenario.noise_power > 0.0 {
        let noise = complex_noise(out.len(), 1, scenario.noise_power * params.n_subcarriers as f64, scenario.noise_seed);
        for (y, w) in out.iter_mut().zip(noise.iter()) {
            *y += w;
        }
    }
    Ok(SampleStream { samples: out, ..stream.clone() })
}
