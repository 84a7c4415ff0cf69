//! Sub-Nyquist receive chain: spectral folding and per-block unfolding.

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::channel::SampleStream;
use crate::error::{Error, Result};
use crate::matrix::SymbolMatrix;
use crate::params::RadarParams;

/// Transmit and receive scheme.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub enum Mode {
    /// Full-rate OFDM radar, no folding.
    #[serde(rename = "full")]
    Full,
    /// Sub-Nyquist sampling with independent random sub-bands.
    #[serde(rename = "sns")]
    Sns,
    /// Sub-Nyquist sampling with time-frequency phase-coded sub-bands.
    #[default]
    #[serde(rename = "pc-sns")]
    PcSns,
}

impl Mode {
    pub fn as_str(&self) -> &'static str {
        match self {
            Mode::Full => "full",
            Mode::Sns => "sns",
            Mode::PcSns => "pc-sns",
        }
    }
}

impl std::fmt::Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "full" | "ofdm" => Ok(Mode::Full),
            "sns" => Ok(Mode::Sns),
            "pc-sns" | "pcsns" | "pc_sns" => Ok(Mode::PcSns),
            other => Err(Error::InvalidParam { field: "mode", reason: format!("unknown mode {other:?}") }),
        }
    }
}

/// The `N_c/L × N_s` matrix seen by a receiver sampling at `B/L`.
#[derive(Debug, Clone, PartialEq)]
pub struct FoldedFrame {
    pub z: SymbolMatrix,
    pub l: usize,
    pub mode: Mode,
}

/// `L` per-block estimates `D_i = Z ⊘ C_i` stacked back to `N_c × N_s`.
#[derive(Debug, Clone, PartialEq)]
pub struct UnfoldedFrame {
    pub d: SymbolMatrix,
    pub l: usize,
}

impl UnfoldedFrame {
    pub fn block(&self, i: usize) -> SymbolMatrix {
        let rows = self.d.rows() / self.l;
        self.d.row_block(i * rows, rows)
    }
}

/// Smallest divisor magnitude accepted by [`unfold`].
pub const MIN_DIVISOR: f64 = 1e-6;

fn check_fold(n_rows: usize, l: usize, mode: Mode) -> Result<usize> {
    if l == 0 || !n_rows.is_multiple_of(l) {
        return Err(Error::Divisibility { what: "L must divide N_c", value: n_rows, divisor: l });
    }
    if mode == Mode::Full && l != 1 {
        return Err(Error::InvalidParam { field: "l", reason: format!("full-rate mode does not fold (got L = {l})") });
    }
    Ok(n_rows / l)
}

/// Literal block sum `Z = Σ_{i} S[i·M .. (i+1)·M, :]`, `M = N_c / L`.
pub fn fold_frequency(s: &SymbolMatrix, l: usize, mode: Mode) -> Result<FoldedFrame> {
    let m = check_fold(s.rows(), l, mode)?;
    let mut z = SymbolMatrix::zeros(m, s.cols());
    for c in 0..s.cols() {
        let src = s.col(c);
        let dst = z.col_mut(c);
        for block in src.chunks_exact(m) {
            for (acc, v) in dst.iter_mut().zip(block) {
                *acc += v;
            }
        }
    }
    Ok(FoldedFrame { z, l, mode })
}

/// Physical decimation: strip each cyclic prefix, keep every `L`-th sample and
/// take an `N_c/L`-point DFT scaled by `L/N_c`.
///
/// Row `r` of the result is DFT bin `(r + 1) mod M`, matching the subcarrier
/// layout of [`crate::channel::synth_time_domain`].
pub fn fold_time(stream: &SampleStream, l: usize, params: &RadarParams, mode: Mode) -> Result<FoldedFrame> {
    stream.check_layout(params)?;
    let m = check_fold(stream.body_len, l, mode)?;
    let fft = FftPlanner::new().plan_fft_forward(m);
    let scale = 1.0 / m as f64;
    let mut z = SymbolMatrix::zeros(m, stream.n_symbols);
    let mut buf = vec![Complex64::new(0.0, 0.0); m];
    for n in 0..stream.n_symbols {
        for (dst, src) in buf.iter_mut().zip(stream.body(n).iter().step_by(l)) {
            *dst = *src;
        }
        fft.process(&mut buf);
        for (r, out) in z.col_mut(n).iter_mut().enumerate() {
            *out = buf[(r + 1) % m] * scale;
        }
    }
    Ok(FoldedFrame { z, l, mode })
}

/// Divide the folded frame by each transmitted block: `D_i = Z ⊘ C_i` in
/// transmit block order. The same operation serves SNS and PC-SNS.
pub fn unfold(folded: &FoldedFrame, tx: &SymbolMatrix) -> Result<UnfoldedFrame> {
    let (m, ns) = folded.z.dims();
    let l = folded.l;
    tx.ensure_dims(m * l, ns)?;
    if let Some((row, col, magnitude)) = tx.min_abs() {
        if magnitude < MIN_DIVISOR {
            return Err(Error::NearZeroDivisor { row, col, magnitude });
        }
    }
    let mut d = SymbolMatrix::zeros(m * l, ns);
    for c in 0..ns {
        let z = folded.z.col(c);
        let t = tx.col(c);
        for (i, out) in d.col_mut(c).iter_mut().enumerate() {
            *out = z[i % m] / t[i];
        }
    }
    Ok(UnfoldedFrame { d, l })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{apply_channel, apply_channel_time, synth_time_domain, target_matrix, Target, TargetScenario};
    use crate::params::{derive_metrics, CodeConfig};
    use crate::waveform::{
        assemble_pc_frame, assemble_sns_frame, code_interference_matrix, gen_symbols, Constellation, PhaseCodeSet,
    };
    use proptest::prelude::*;

    fn params(nc: usize, ns: usize) -> RadarParams {
        RadarParams { n_subcarriers: nc, n_symbols: ns, ..RadarParams::automotive_77ghz() }
    }

    fn pc_frame(p: &RadarParams, cfg: CodeConfig, seed: u64) -> (SymbolMatrix, PhaseCodeSet) {
        let codes = PhaseCodeSet::new(cfg, p).unwrap();
        let sub = gen_symbols(seed, Constellation::Qpsk, codes.block_rows(), p.n_symbols).unwrap();
        (assemble_pc_frame(&sub, &codes).unwrap(), codes)
    }

    #[test]
    fn single_subcarrier_aliases_to_row_mod_m() {
        let mut s = SymbolMatrix::zeros(16, 2);
        s[(13, 1)] = Complex64::new(2.0, -1.0);
        let f = fold_frequency(&s, 4, Mode::Sns).unwrap();
        assert_eq!(f.z.dims(), (4, 2));
        for r in 0..4 {
            let want = if r == 1 { Complex64::new(2.0, -1.0) } else { Complex64::new(0.0, 0.0) };
            assert_eq!(f.z[(r, 1)], want);
            assert_eq!(f.z[(r, 0)], Complex64::new(0.0, 0.0));
        }
    }

    #[test]
    fn fold_matches_scalar_loop() {
        let s = gen_symbols(9, Constellation::Qam16, 24, 3).unwrap();
        let f = fold_frequency(&s, 3, Mode::Sns).unwrap();
        for r in 0..8 {
            for c in 0..3 {
                let want = s[(r, c)] + s[(r + 8, c)] + s[(r + 16, c)];
                assert!((f.z[(r, c)] - want).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn fold_rejects_bad_factor() {
        let s = SymbolMatrix::zeros(12, 2);
        assert!(matches!(fold_frequency(&s, 5, Mode::Sns), Err(Error::Divisibility { .. })));
        assert!(matches!(fold_frequency(&s, 0, Mode::Sns), Err(Error::Divisibility { .. })));
        assert!(fold_frequency(&s, 2, Mode::Full).is_err());
        assert!(fold_frequency(&s, 1, Mode::Full).is_ok());
    }

    #[test]
    fn full_rate_unfold_recovers_target_matrix() {
        let p = params(64, 8);
        let tx = gen_symbols(1, Constellation::Qam16, 64, 8).unwrap();
        let sc = TargetScenario::noiseless(vec![Target::new(33.0, 12.0), Target::new(7.0, -80.0)]);
        let s = apply_channel(&tx, &sc, &p).unwrap();
        let d = unfold(&fold_frequency(&s, 1, Mode::Full).unwrap(), &tx).unwrap();
        let x = target_matrix(&sc, &p, &derive_metrics(&p));
        assert!(d.d.max_abs_diff(&x).unwrap() < 1e-12);
    }

    #[test]
    fn sns_unfold_scalar_oracle() {
        let p = params(8, 2);
        let tx = assemble_sns_frame(3, Constellation::Qpsk, &p, 2).unwrap();
        let sc = TargetScenario::noiseless(vec![Target::new(5.0, 20.0)]);
        let s = apply_channel(&tx, &sc, &p).unwrap();
        let d = unfold(&fold_frequency(&s, 2, Mode::Sns).unwrap(), &tx).unwrap();
        for c in 0..2 {
            for i in 0..8 {
                let z = s[(i % 4, c)] + s[(i % 4 + 4, c)];
                assert!((d.d[(i, c)] - z / tx[(i, c)]).norm() < 1e-13);
            }
        }
        assert_eq!(d.block(1), d.d.row_block(4, 4));
    }

    #[test]
    fn unfold_equals_target_times_code_interference_when_block_periodic() {
        // A static-range target at the origin gives identical rows in X.
        let p = params(64, 8);
        let cfg = CodeConfig::new(4, 2).unwrap();
        let (tx, codes) = pc_frame(&p, cfg, 11);
        let sc = TargetScenario::noiseless(vec![Target::new(0.0, 37.0)]);
        let s = apply_channel(&tx, &sc, &p).unwrap();
        let d = unfold(&fold_frequency(&s, 8, Mode::PcSns).unwrap(), &tx).unwrap();
        let x = target_matrix(&sc, &p, &derive_metrics(&p));
        for a in 1..=4 {
            for b in 1..=2 {
                let i = codes.block_index(a, b);
                let y = code_interference_matrix(&codes, a, b).unwrap();
                let want = x.row_block(i * 8, 8).hadamard(&y).unwrap();
                assert!(d.block(i).max_abs_diff(&want).unwrap() < 1e-11);
            }
        }
    }

    #[test]
    fn unfold_general_identity() {
        // D_ab = Σ_pq (C_pq ⊘ C_ab) ⊙ X_pq for arbitrary range.
        let p = params(64, 8);
        let cfg = CodeConfig::new(2, 2).unwrap();
        let (tx, codes) = pc_frame(&p, cfg, 12);
        let sc = TargetScenario::noiseless(vec![Target::new(21.7, -15.0), Target::new(3.3, 60.0)]);
        let s = apply_channel(&tx, &sc, &p).unwrap();
        let d = unfold(&fold_frequency(&s, 4, Mode::PcSns).unwrap(), &tx).unwrap();
        let x = target_matrix(&sc, &p, &derive_metrics(&p));
        let rows = 16;
        for ab in 0..4 {
            let c_ab = tx.row_block(ab * rows, rows);
            let mut want = SymbolMatrix::zeros(rows, 8);
            for pq in 0..4 {
                let ratio = tx.row_block(pq * rows, rows).hadamard_div(&c_ab).unwrap();
                want = want.add(&ratio.hadamard(&x.row_block(pq * rows, rows)).unwrap()).unwrap();
            }
            assert!(d.block(ab).max_abs_diff(&want).unwrap() < 1e-11);
        }
        assert_eq!(codes.config().l(), 4);
    }

    #[test]
    fn unfold_rejects_zero_divisor_and_bad_shape() {
        let mut tx = SymbolMatrix::filled(8, 2, Complex64::new(1.0, 0.0));
        tx[(5, 1)] = Complex64::new(1e-9, 0.0);
        let f = fold_frequency(&tx, 2, Mode::Sns).unwrap();
        assert!(matches!(unfold(&f, &tx), Err(Error::NearZeroDivisor { row: 5, col: 1, .. })));
        let other = SymbolMatrix::filled(12, 2, Complex64::new(1.0, 0.0));
        assert!(matches!(unfold(&f, &other), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn time_domain_fold_matches_frequency_fold() {
        let p = params(64, 8);
        let metrics = derive_metrics(&p);
        let cfg = CodeConfig::new(2, 2).unwrap();
        let (tx, _) = pc_frame(&p, cfg, 13);
        let targets = vec![
            Target::new(3.0 * metrics.range_resolution, 25.0),
            Target::new(11.0 * metrics.range_resolution, -70.0).with_amplitude(Complex64::new(0.2, 0.4)),
        ];
        let sc = TargetScenario::noiseless(targets);
        let stream = apply_channel_time(&synth_time_domain(&tx, &p).unwrap(), &sc, &p).unwrap();
        let s = apply_channel(&tx, &sc, &p).unwrap();
        for l in [1, 2, 4, 8] {
            let mode = if l == 1 { Mode::Full } else { Mode::PcSns };
            let zt = fold_time(&stream, l, &p, mode).unwrap();
            let zf = fold_frequency(&s, l, mode).unwrap();
            assert!(zt.z.max_abs_diff(&zf.z).unwrap() < 1e-10, "L = {l}");
        }
    }

    #[test]
    fn folded_noise_variance_scales_with_l() {
        let p = params(256, 64);
        let tx = SymbolMatrix::zeros(256, 64);
        let sc = TargetScenario { targets: vec![], noise_power: 0.5, noise_seed: 21 };
        let s = apply_channel(&tx, &sc, &p).unwrap();
        let stream = apply_channel_time(&synth_time_domain(&tx, &p).unwrap(), &sc, &p).unwrap();
        for l in [2, 4, 8] {
            let m = 256 / l;
            for z in [fold_frequency(&s, l, Mode::Sns).unwrap(), fold_time(&stream, l, &p, Mode::Sns).unwrap()] {
                let var = z.z.frobenius_norm_sqr() / (m * 64) as f64;
                assert!((var / (0.5 * l as f64) - 1.0).abs() < 0.1, "L = {l}: {var}");
            }
        }
    }

    #[test]
    fn mode_parsing() {
        assert_eq!("PC-SNS".parse::<Mode>().unwrap(), Mode::PcSns);
        assert_eq!("full".parse::<Mode>().unwrap(), Mode::Full);
        assert!("fmcw".parse::<Mode>().is_err());
        assert_eq!(Mode::Sns.to_string(), "sns");
    }

    proptest! {
        #[test]
        fn fold_is_linear(seed in 0u64..1000, k in -3.0f64..3.0) {
            let a = gen_symbols(seed, Constellation::Qpsk, 32, 4).unwrap();
            let b = gen_symbols(seed + 1, Constellation::Qam16, 32, 4).unwrap();
            let kc = Complex64::new(k, 0.5);
            let lhs = fold_frequency(&a.scale(kc).add(&b).unwrap(), 4, Mode::Sns).unwrap().z;
            let rhs = fold_frequency(&a, 4, Mode::Sns).unwrap().z.scale(kc)
                .add(&fold_frequency(&b, 4, Mode::Sns).unwrap().z).unwrap();
            prop_assert!(lhs.max_abs_diff(&rhs).unwrap() < 1e-12);
        }
    }
}
