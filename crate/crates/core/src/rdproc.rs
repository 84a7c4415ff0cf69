//! Range-Doppler processing, peak detection and noise-floor measurement.
//!
//! Transform conventions: unnormalised inverse DFT over subcarriers (row `i`
//! is range `i·Δr`) and unnormalised forward DFT over symbols, FFT-shifted so
//! that column `j` holds Doppler bin `j − ⌊N_s/2⌋`. A noiseless unit target on
//! the grid therefore peaks at `(N_c·N_s)²` in power. All dB figures are
//! relative to the map maximum.
//!
//! Map CSV: header `range_bin,doppler_bin,range_m,velocity_mps,power`, one line
//! per cell in row-major order, linear power. Map binary (little endian):
//! magic `PCSNSRDM`, `u32` version 1, `u64` rows, `u64` cols, `f64` range
//! resolution, `f64` velocity resolution, then `rows·cols` `f64` powers in
//! row-major order.

use std::f64::consts::TAU;
use std::io::{Read, Write};

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::channel::Target;
use crate::error::{Error, Result};
use crate::matrix::{read_exact, read_f64, read_u32, read_u64, SymbolMatrix};
use crate::params::{CodeConfig, RadarMetrics, RadarParams};

pub const MAP_MAGIC: &[u8; 8] = b"PCSNSRDM";
const MAP_VERSION: u32 = 1;

/// Floor applied to every dB value so that exact zeros stay finite.
pub const DB_FLOOR: f64 = -300.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Window {
    #[default]
    None,
    Hann,
}

impl Window {
    /// Symmetric window coefficients of length `n`.
    pub fn coefficients(&self, n: usize) -> Vec<f64> {
        match self {
            Window::None => vec![1.0; n],
            Window::Hann if n <= 1 => vec![1.0; n],
            Window::Hann => (0..n).map(|k| 0.5 - 0.5 * (TAU * k as f64 / (n - 1) as f64).cos()).collect(),
        }
    }
}

impl std::str::FromStr for Window {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "none" | "rect" | "rectangular" => Ok(Window::None),
            "hann" | "hanning" => Ok(Window::Hann),
            other => Err(Error::InvalidParam { field: "window", reason: format!("unknown window {other:?}") }),
        }
    }
}

pub fn to_db(ratio: f64) -> f64 {
    if ratio > 0.0 {
        (10.0 * ratio.log10()).max(DB_FLOOR)
    } else {
        DB_FLOOR
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RangeDopplerMap {
    rows: usize,
    cols: usize,
    power: Vec<f64>,
    range_axis: Vec<f64>,
    velocity_axis: Vec<f64>,
    normalization: f64,
    range_resolution: f64,
    velocity_resolution: f64,
}

impl RangeDopplerMap {
    /// Wraps row-major linear power values.
    pub fn from_power(
        rows: usize,
        cols: usize,
        power: Vec<f64>,
        range_resolution: f64,
        velocity_resolution: f64,
    ) -> Result<Self> {
        if power.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: format!("{} cells", rows * cols),
                actual: format!("{} cells", power.len()),
            });
        }
        if let Some(bad) = power.iter().find(|p| !(p.is_finite() && **p >= 0.0)) {
            return Err(Error::Format(format!("map power must be finite and non-negative, found {bad}")));
        }
        let normalization = power.iter().copied().fold(0.0, f64::max);
        let half = (cols / 2) as f64;
        Ok(Self {
            rows,
            cols,
            range_axis: (0..rows).map(|i| i as f64 * range_resolution).collect(),
            velocity_axis: (0..cols).map(|j| (j as f64 - half) * velocity_resolution).collect(),
            power,
            normalization,
            range_resolution,
            velocity_resolution,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn power(&self) -> &[f64] {
        &self.power
    }

    pub fn at(&self, row: usize, col: usize) -> f64 {
        self.power[row * self.cols + col]
    }

    pub fn range_axis(&self) -> &[f64] {
        &self.range_axis
    }

    pub fn velocity_axis(&self) -> &[f64] {
        &self.velocity_axis
    }

    /// Maximum cell power, the 0 dB reference.
    pub fn normalization(&self) -> f64 {
        self.normalization
    }

    pub fn range_resolution(&self) -> f64 {
        self.range_resolution
    }

    pub fn velocity_resolution(&self) -> f64 {
        self.velocity_resolution
    }

    pub fn total_power(&self) -> f64 {
        self.power.iter().sum()
    }

    pub fn db(&self, row: usize, col: usize) -> f64 {
        if self.normalization > 0.0 {
            to_db(self.at(row, col) / self.normalization)
        } else {
            DB_FLOOR
        }
    }

    /// Position and power of the global maximum (first in row-major order on ties).
    pub fn argmax(&self) -> (usize, usize, f64) {
        let mut best = (0, 0.0);
        for (k, &p) in self.power.iter().enumerate() {
            if p > best.1 {
                best = (k, p);
            }
        }
        (best.0 / self.cols, best.0 % self.cols, best.1)
    }

    /// Column holding velocity `v` (rounded to the nearest bin, wrapped).
    pub fn velocity_to_col(&self, v: f64) -> usize {
        let col = (v / self.velocity_resolution).round() as i64 + (self.cols / 2) as i64;
        col.rem_euclid(self.cols as i64) as usize
    }

    /// Row holding range `r` (rounded to the nearest bin, wrapped).
    pub fn range_to_row(&self, r: f64) -> usize {
        ((r / self.range_resolution).round() as i64).rem_euclid(self.rows as i64) as usize
    }

    /// Power along range at a fixed Doppler column.
    pub fn range_profile(&self, col: usize) -> Vec<f64> {
        (0..self.rows).map(|r| self.at(r, col)).collect()
    }

    /// Power along Doppler at a fixed range row.
    pub fn doppler_profile(&self, row: usize) -> Vec<f64> {
        self.power[row * self.cols..(row + 1) * self.cols].to_vec()
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "range_bin,doppler_bin,range_m,velocity_mps,power")?;
        let half = (self.cols / 2) as i64;
        for r in 0..self.rows {
            for c in 0..self.cols {
                writeln!(
                    w,
                    "{r},{},{},{},{}",
                    c as i64 - half,
                    self.range_axis[r],
                    self.velocity_axis[c],
                    self.at(r, c)
                )?;
            }
        }
        Ok(())
    }

    /// Reads the CSV written by [`RangeDopplerMap::write_csv`].
    pub fn read_csv<R: Read>(mut r: R, range_resolution: f64, velocity_resolution: f64) -> Result<Self> {
        let mut text = String::new();
        r.read_to_string(&mut text).map_err(|e| Error::Format(e.to_string()))?;
        let mut lines = text.lines();
        if lines.next() != Some("range_bin,doppler_bin,range_m,velocity_mps,power") {
            return Err(Error::Format("unexpected map CSV header".into()));
        }
        let mut cells = Vec::new();
        let (mut rows, mut min_bin, mut max_bin) = (0usize, i64::MAX, i64::MIN);
        for (n, line) in lines.enumerate() {
            let fields: Vec<&str> = line.split(',').collect();
            let bad = || Error::Format(format!("malformed map CSV line {}", n + 2));
            if fields.len() != 5 {
                return Err(bad());
            }
            let row: usize = fields[0].parse().map_err(|_| bad())?;
            let bin: i64 = fields[1].parse().map_err(|_| bad())?;
            let p: f64 = fields[4].parse().map_err(|_| bad())?;
            rows = rows.max(row + 1);
            min_bin = min_bin.min(bin);
            max_bin = max_bin.max(bin);
            cells.push(p);
        }
        if cells.is_empty() {
            return Err(Error::EmptyMap);
        }
        let cols = (max_bin - min_bin + 1) as usize;
        Self::from_power(rows, cols, cells, range_resolution, velocity_resolution)
    }

    pub fn write_binary<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        w.write_all(MAP_MAGIC)?;
        w.write_all(&MAP_VERSION.to_le_bytes())?;
        w.write_all(&(self.rows as u64).to_le_bytes())?;
        w.write_all(&(self.cols as u64).to_le_bytes())?;
        w.write_all(&self.range_resolution.to_le_bytes())?;
        w.write_all(&self.velocity_resolution.to_le_bytes())?;
        for p in &self.power {
            w.write_all(&p.to_le_bytes())?;
        }
        Ok(())
    }

    pub fn read_binary<R: Read>(mut r: R) -> Result<Self> {
        let mut magic = [0u8; 8];
        read_exact(&mut r, &mut magic)?;
        if &magic != MAP_MAGIC {
            return Err(Error::Format("bad range-Doppler map magic".into()));
        }
        let version = read_u32(&mut r)?;
        if version != MAP_VERSION {
            return Err(Error::Format(format!("unsupported map format version {version}")));
        }
        let rows = read_u64(&mut r)? as usize;
        let cols = read_u64(&mut r)? as usize;
        let dr = read_f64(&mut r)?;
        let dv = read_f64(&mut r)?;
        let mut power = Vec::with_capacity(rows * cols);
        for _ in 0..rows * cols {
            power.push(read_f64(&mut r)?);
        }
        Self::from_power(rows, cols, power, dr, dv)
    }
}

/// 2-D periodogram of an unfolded (or full-rate demodulated) frame.
pub fn range_doppler_map(d: &SymbolMatrix, params: &RadarParams, window: Window) -> Result<RangeDopplerMap> {
    params.validate()?;
    let (nc, ns) = (params.n_subcarriers, params.n_symbols);
    d.ensure_dims(nc, ns)?;
    let metrics = crate::params::derive_metrics(params);
    let mut planner = FftPlanner::new();
    let ifft = planner.plan_fft_inverse(nc);
    let fft = planner.plan_fft_forward(ns);
    let w_range = window.coefficients(nc);
    let w_doppler = window.coefficients(ns);

    let mut cols = d.as_slice().to_vec();
    cols.par_chunks_mut(nc).for_each_init(
        || vec![Complex64::new(0.0, 0.0); ifft.get_inplace_scratch_len()],
        |scratch, col| {
            for (z, w) in col.iter_mut().zip(&w_range) {
                *z *= w;
            }
            ifft.process_with_scratch(col, scratch);
        },
    );

    let half = ns / 2;
    let mut power = vec![0.0; nc * ns];
    power.par_chunks_mut(ns).enumerate().for_each_init(
        || (vec![Complex64::new(0.0, 0.0); ns], vec![Complex64::new(0.0, 0.0); fft.get_inplace_scratch_len()]),
        |(buf, scratch), (row, out)| {
            for (n, z) in buf.iter_mut().enumerate() {
                *z = cols[n * nc + row] * w_doppler[n];
            }
            fft.process_with_scratch(buf, scratch);
            for (j, p) in out.iter_mut().enumerate() {
                let k = (j + ns - half) % ns;
                *p = buf[k].norm_sqr();
            }
        },
    );
    RangeDopplerMap::from_power(nc, ns, power, metrics.range_resolution, metrics.velocity_resolution)
}

/// One predicted peak position of a coded target.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PredictedPeak {
    pub range: f64,
    pub velocity: f64,
    /// Range offset index `p ∈ 0..L_c`.
    pub range_shift: usize,
    /// Velocity offset index `q ∈ 0..L_s`.
    pub velocity_shift: usize,
}

/// Wraps a velocity into `[−v_max, +v_max)`.
pub fn wrap_velocity(v: f64, v_max: f64) -> f64 {
    (v + v_max).rem_euclid(2.0 * v_max) - v_max
}

/// The `L_c × L_s` grid of positions at which a coded target appears:
/// ranges `r + p·r_max/L_c` modulo `r_max` and velocities
/// `v + q·2v_max/L_s` wrapped into `[−v_max, +v_max)`. Entry `(0, 0)` is the
/// true target.
pub fn predict_ambiguities(target: &Target, code: &CodeConfig, metrics: &RadarMetrics) -> Vec<PredictedPeak> {
    let mut out = Vec::with_capacity(code.l());
    for p in 0..code.l_c {
        for q in 0..code.l_s {
            let range = (target.range + p as f64 * metrics.r_max / code.l_c as f64).rem_euclid(metrics.r_max);
            let velocity =
                wrap_velocity(target.velocity + q as f64 * 2.0 * metrics.v_max / code.l_s as f64, metrics.v_max);
            out.push(PredictedPeak { range, velocity, range_shift: p, velocity_shift: q });
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Peak {
    pub range_bin: usize,
    /// Signed Doppler bin (column minus `⌊N_s/2⌋`).
    pub doppler_bin: i64,
    pub range: f64,
    pub velocity: f64,
    pub power_db: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PeakReport {
    /// Sorted by descending power.
    pub peaks: Vec<Peak>,
    /// Mean linear power outside every peak's guard box, in dB relative to the maximum.
    pub noise_floor_db: f64,
    pub detection_threshold_db: f64,
    pub guard_bins: usize,
    /// Strongest peak over the strongest cell outside all guard boxes, in dB.
    pub pslr_db: f64,
}

impl PeakReport {
    pub fn count_above(&self, threshold_db: f64) -> usize {
        self.peaks.iter().filter(|p| p.power_db >= threshold_db).count()
    }

    /// Peak-to-noise-floor ratio of the strongest peak.
    pub fn snr_db(&self) -> f64 {
        -self.noise_floor_db
    }
}

fn circ_dist(a: usize, b: usize, n: usize) -> usize {
    let d = a.abs_diff(b);
    d.min(n - d)
}

/// Local maxima above `threshold_db` with greedy non-maximum suppression over
/// a `±guard` box (both axes wrap around), plus the noise floor over every cell
/// outside the guard boxes of the accepted peaks.
pub fn detect_peaks(map: &RangeDopplerMap, threshold_db: f64, guard: usize) -> Result<PeakReport> {
    if map.rows == 0 || map.cols == 0 {
        return Err(Error::EmptyMap);
    }
    if !(threshold_db < 0.0) {
        return Err(Error::InvalidParam { field: "threshold_db", reason: format!("must be negative, got {threshold_db}") });
    }
    let (rows, cols) = (map.rows, map.cols);
    let max = map.normalization;
    if max <= 0.0 {
        return Ok(PeakReport {
            peaks: Vec::new(),
            noise_floor_db: DB_FLOOR,
            detection_threshold_db: threshold_db,
            guard_bins: guard,
            pslr_db: 0.0,
        });
    }
    let cut = max * 10f64.powf(threshold_db / 10.0);
    let gr = guard.min((rows - 1) / 2) as i64;
    let gc = guard.min((cols - 1) / 2) as i64;
    let is_local_max = |r: usize, c: usize| {
        let p = map.at(r, c);
        let here = r * cols + c;
        for dr in -gr..=gr {
            let rr = (r as i64 + dr).rem_euclid(rows as i64) as usize;
            for dc in -gc..=gc {
                let cc = (c as i64 + dc).rem_euclid(cols as i64) as usize;
                let q = map.at(rr, cc);
                let there = rr * cols + cc;
                // Ties go to the earlier cell in row-major order.
                if q > p || (q == p && there < here) {
                    return false;
                }
            }
        }
        true
    };

    let mut candidates: Vec<(usize, usize, f64)> = (0..rows)
        .into_par_iter()
        .flat_map_iter(|r| {
            (0..cols).filter_map(move |c| {
                let p = map.at(r, c);
                (p >= cut && is_local_max(r, c)).then_some((r, c, p))
            })
        })
        .collect();
    candidates.sort_by(|a, b| b.2.total_cmp(&a.2).then((a.0, a.1).cmp(&(b.0, b.1))));

    let mut accepted: Vec<(usize, usize, f64)> = Vec::new();
    for cand in candidates {
        let clash = accepted.iter().any(|a| {
            circ_dist(a.0, cand.0, rows) <= guard && circ_dist(a.1, cand.1, cols) <= guard
        });
        if !clash {
            accepted.push(cand);
        }
    }

    let mut masked = vec![false; rows * cols];
    for &(r, c, _) in &accepted {
        for dr in -gr..=gr {
            let rr = (r as i64 + dr).rem_euclid(rows as i64) as usize;
            for dc in -gc..=gc {
                let cc = (c as i64 + dc).rem_euclid(cols as i64) as usize;
                masked[rr * cols + cc] = true;
            }
        }
    }
    let (mut sum, mut count, mut side) = (0.0, 0usize, 0.0f64);
    for (p, m) in map.power.iter().zip(&masked) {
        if !m {
            sum += p;
            count += 1;
            side = side.max(*p);
        }
    }
    let noise_floor_db = if count == 0 { DB_FLOOR } else { to_db(sum / count as f64 / max) };
    let pslr_db = if side > 0.0 { -to_db(side / max) } else { -DB_FLOOR };

    let half = (cols / 2) as i64;
    let peaks = accepted
        .into_iter()
        .map(|(r, c, p)| Peak {
            range_bin: r,
            doppler_bin: c as i64 - half,
            range: map.range_axis[r],
            velocity: map.velocity_axis[c],
            power_db: to_db(p / max),
        })
        .collect();
    Ok(PeakReport { peaks, noise_floor_db, detection_threshold_db: threshold_db, guard_bins: guard, pslr_db })
}

/// `noise_floor_db(a) − noise_floor_db(b)`.
pub fn compare_noise_floors(a: &PeakReport, b: &PeakReport) -> f64 {
    a.noise_floor_db - b.noise_floor_db
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{apply_channel, TargetScenario};
    use crate::params::derive_metrics;
    use crate::receiver::{fold_frequency, unfold, Mode};
    use crate::waveform::{assemble_sns_frame, gen_symbols, Constellation};

    fn params(nc: usize, ns: usize) -> RadarParams {
        RadarParams { n_subcarriers: nc, n_symbols: ns, ..RadarParams::automotive_77ghz() }
    }

    fn full_map(p: &RadarParams, sc: &TargetScenario, window: Window) -> RangeDopplerMap {
        let tx = gen_symbols(1, Constellation::Qpsk, p.n_subcarriers, p.n_symbols).unwrap();
        let s = apply_channel(&tx, sc, p).unwrap();
        let d = unfold(&fold_frequency(&s, 1, Mode::Full).unwrap(), &tx).unwrap();
        range_doppler_map(&d.d, p, window).unwrap()
    }

    fn on_bin(p: &RadarParams, row: usize, dbin: i64) -> Target {
        let m = derive_metrics(p);
        Target::new(row as f64 * m.range_resolution, dbin as f64 * m.velocity_resolution)
    }

    #[test]
    fn zero_frame_gives_zero_map() {
        let p = params(32, 8);
        let map = range_doppler_map(&SymbolMatrix::zeros(32, 8), &p, Window::None).unwrap();
        assert!(map.power().iter().all(|&x| x == 0.0));
        let rep = detect_peaks(&map, -15.0, 3).unwrap();
        assert!(rep.peaks.is_empty());
        assert_eq!(rep.noise_floor_db, DB_FLOOR);
    }

    #[test]
    fn on_bin_target_is_argmax_exact_with_full_gain() {
        let p = params(128, 32);
        let sc = TargetScenario::noiseless(vec![on_bin(&p, 37, -5)]);
        let map = full_map(&p, &sc, Window::None);
        let (r, c, pw) = map.argmax();
        assert_eq!((r, c), (37, 16 - 5));
        assert!((pw.sqrt() / (128.0 * 32.0) - 1.0).abs() < 1e-9);
        let rep = detect_peaks(&map, -15.0, 3).unwrap();
        assert_eq!(rep.peaks.len(), 1);
        assert!(rep.noise_floor_db <= -200.0, "{}", rep.noise_floor_db);
        assert_eq!(rep.peaks[0].doppler_bin, -5);
    }

    #[test]
    fn parseval() {
        let p = params(64, 16);
        let d = gen_symbols(5, Constellation::Qam16, 64, 16).unwrap();
        let map = range_doppler_map(&d, &p, Window::None).unwrap();
        let want = 64.0 * 16.0 * d.frobenius_norm_sqr();
        assert!((map.total_power() / want - 1.0).abs() < 1e-9);
    }

    #[test]
    fn hann_keeps_peak_position() {
        let p = params(128, 32);
        let sc = TargetScenario::noiseless(vec![Target::new(7.77 * 4.8, 130.0)]);
        let a = full_map(&p, &sc, Window::None).argmax();
        let b = full_map(&p, &sc, Window::Hann).argmax();
        assert!(a.0.abs_diff(b.0) <= 1 && a.1.abs_diff(b.1) <= 1, "{a:?} vs {b:?}");
    }

    #[test]
    fn hann_coefficients() {
        let w = Window::Hann.coefficients(5);
        let want = [0.0, 0.5, 1.0, 0.5, 0.0];
        for (a, b) in w.iter().zip(want) {
            assert!((a - b).abs() < 1e-15);
        }
        assert_eq!(Window::Hann.coefficients(1), vec![1.0]);
        assert_eq!("HANN".parse::<Window>().unwrap(), Window::Hann);
    }

    #[test]
    fn automotive_axis_arithmetic() {
        let p = RadarParams::automotive_77ghz();
        let sc = TargetScenario::noiseless(vec![Target::new(16.0, 10.0)]);
        let map = full_map(&p, &sc, Window::None);
        let (r, c, _) = map.argmax();
        let m = derive_metrics(&p);
        assert_eq!(r, (16.0 / m.range_resolution).round() as usize);
        assert_eq!(c as i64 - 128, (10.0 / m.velocity_resolution).round() as i64);
        assert_eq!(r, 107);
        assert_eq!(c, 131);
    }

    #[test]
    fn processing_gain_sets_noise_floor() {
        let p = params(256, 64);
        let sigma2 = 0.5;
        let sc = TargetScenario { targets: vec![on_bin(&p, 40, 3)], noise_power: sigma2, noise_seed: 4 };
        let rep = detect_peaks(&full_map(&p, &sc, Window::None), -15.0, 3).unwrap();
        let want = -10.0 * (256.0 * 64.0 / sigma2).log10();
        assert!((rep.noise_floor_db - want).abs() < 1.0, "{} vs {want}", rep.noise_floor_db);
        assert!(rep.snr_db() > 0.0);
    }

    #[test]
    fn sns_mismatch_floor() {
        // Residual terms C_j ⊘ C_i ⊙ X_j of L − 1 foreign blocks spread evenly
        // over the map: floor = (L − 1)·N_c·N_s / (N_c·N_s)².
        let p = params(256, 64);
        for l in [2usize, 4, 8] {
            let tx = assemble_sns_frame(10 + l as u64, Constellation::Qpsk, &p, l).unwrap();
            let s = apply_channel(&tx, &TargetScenario::noiseless(vec![on_bin(&p, 21, 2)]), &p).unwrap();
            let d = unfold(&fold_frequency(&s, l, Mode::Sns).unwrap(), &tx).unwrap();
            let rep = detect_peaks(&range_doppler_map(&d.d, &p, Window::None).unwrap(), -15.0, 3).unwrap();
            let want = 10.0 * ((l - 1) as f64 / (256.0 * 64.0)).log10();
            assert_eq!(rep.count_above(-3.0), 1);
            assert!((rep.noise_floor_db - want).abs() < 1.5, "L = {l}: {} vs {want}", rep.noise_floor_db);
        }
    }

    #[test]
    fn ambiguity_grid_automotive() {
        let m = derive_metrics(&RadarParams::automotive_77ghz());
        let cfg = CodeConfig::new(4, 4).unwrap();
        let pred = predict_ambiguities(&Target::new(16.0, 10.0), &cfg, &m);
        assert_eq!(pred.len(), 16);
        let mut ranges: Vec<f64> = pred.iter().map(|p| p.range).collect();
        ranges.dedup_by(|a, b| (*a - *b).abs() < 1e-9);
        for (r, want) in ranges.iter().zip([16.0, 92.8, 169.6, 246.4]) {
            assert!((r - want).abs() < 1e-9);
        }
        let v: Vec<f64> = pred[..4].iter().map(|p| p.velocity).collect();
        for pair in [(0, 1), (1, 2)] {
            let step = (v[pair.1] - v[pair.0]).rem_euclid(2.0 * m.v_max);
            assert!((step - 190.25).abs() < 0.05, "{step}");
        }
        assert!(pred.iter().all(|p| p.velocity >= -m.v_max && p.velocity < m.v_max));
        assert_eq!((pred[0].range, pred[0].velocity), (16.0, 10.0));
        let single = predict_ambiguities(&Target::new(16.0, 10.0), &CodeConfig::UNCODED, &m);
        assert_eq!(single.len(), 1);
    }

    #[test]
    fn wrap_velocity_is_signed_interval() {
        assert_eq!(wrap_velocity(10.0, 100.0), 10.0);
        assert_eq!(wrap_velocity(100.0, 100.0), -100.0);
        assert!((wrap_velocity(250.0, 100.0) - 50.0).abs() < 1e-12);
        assert!((wrap_velocity(-130.0, 100.0) - 70.0).abs() < 1e-12);
    }

    #[test]
    fn peaks_respect_guard_and_threshold() {
        let mut power = vec![0.01; 16 * 16];
        power[3 * 16 + 3] = 1.0;
        power[3 * 16 + 5] = 0.9; // inside the guard box of the first
        power[10 * 16 + 12] = 0.5;
        power[14 * 16 + 1] = 0.02; // below threshold
        let map = RangeDopplerMap::from_power(16, 16, power, 1.0, 1.0).unwrap();
        let rep = detect_peaks(&map, -10.0, 2).unwrap();
        assert_eq!(rep.peaks.len(), 2);
        assert_eq!(rep.peaks[0].range_bin, 3);
        assert_eq!(rep.peaks[1].range_bin, 10);
        assert!((rep.peaks[1].power_db - to_db(0.5)).abs() < 1e-12);
        assert!(rep.pslr_db > 0.0);
        assert!(detect_peaks(&map, 0.0, 2).is_err());
        let empty = RangeDopplerMap::from_power(0, 0, vec![], 1.0, 1.0).unwrap();
        assert!(matches!(detect_peaks(&empty, -3.0, 1), Err(Error::EmptyMap)));
    }

    #[test]
    fn peak_on_edge_wraps() {
        let mut power = vec![0.0; 8 * 8];
        power[0] = 1.0;
        power[7 * 8 + 7] = 0.8;
        let map = RangeDopplerMap::from_power(8, 8, power, 1.0, 1.0).unwrap();
        assert_eq!(detect_peaks(&map, -3.0, 1).unwrap().peaks.len(), 1);
    }

    #[test]
    fn compare_identical_is_zero() {
        let map = RangeDopplerMap::from_power(4, 4, (0..16).map(|x| x as f64).collect(), 1.0, 1.0).unwrap();
        let rep = detect_peaks(&map, -3.0, 0).unwrap();
        assert_eq!(compare_noise_floors(&rep, &rep), 0.0);
    }

    #[test]
    fn map_binary_and_csv_round_trip() {
        let p = params(16, 4);
        let map = range_doppler_map(&gen_symbols(2, Constellation::Qpsk, 16, 4).unwrap(), &p, Window::Hann).unwrap();
        let mut bin = Vec::new();
        map.write_binary(&mut bin).unwrap();
        assert_eq!(RangeDopplerMap::read_binary(bin.as_slice()).unwrap(), map);
        let mut csv = Vec::new();
        map.write_csv(&mut csv).unwrap();
        let back = RangeDopplerMap::read_csv(csv.as_slice(), map.range_resolution(), map.velocity_resolution()).unwrap();
        assert_eq!(back.power(), map.power());
        bin[0] = b'X';
        assert!(RangeDopplerMap::read_binary(bin.as_slice()).is_err());
    }
}
