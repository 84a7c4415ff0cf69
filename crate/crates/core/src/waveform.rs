//! Modulation symbols, time/frequency phase codes and transmit frame assembly.
//!
//! Phase formulas keep 1-based subcarrier, symbol and code indices: row `r`
//! of a block is subcarrier `m = r + 1`, column `c` is symbol `n = c + 1`.
//!
//! Symbols come from ChaCha8 (`rand_chacha::ChaCha8Rng::seed_from_u64`), drawn
//! in column-major order with `random_range(0..4)` per QPSK symbol and two
//! such draws (in-phase first) per 16-QAM symbol.

use std::f64::consts::{FRAC_1_SQRT_2, TAU};
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::SymbolMatrix;
use crate::params::{CodeConfig, RadarParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Constellation {
    /// Unit-modulus QPSK at odd multiples of π/4.
    #[default]
    Qpsk,
    /// Square 16-QAM normalised to unit average power. Unfolding divides by
    /// the symbols, so the inner points amplify folded noise.
    Qam16,
}

impl FromStr for Constellation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "qpsk" => Ok(Self::Qpsk),
            "qam16" | "16qam" => Ok(Self::Qam16),
            _ => Err(Error::UnknownConstellation(s.to_string())),
        }
    }
}

impl fmt::Display for Constellation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Qpsk => "qpsk",
            Self::Qam16 => "qam16",
        })
    }
}

pub const QPSK_POINTS: [Complex64; 4] = [
    Complex64::new(FRAC_1_SQRT_2, FRAC_1_SQRT_2),
    Complex64::new(-FRAC_1_SQRT_2, FRAC_1_SQRT_2),
    Complex64::new(-FRAC_1_SQRT_2, -FRAC_1_SQRT_2),
    Complex64::new(FRAC_1_SQRT_2, -FRAC_1_SQRT_2),
];

const QAM16_LEVELS: [f64; 4] = [-3.0, -1.0, 1.0, 3.0];

/// Deterministic symbol matrix; the same seed gives the same matrix bit for bit.
pub fn gen_symbols(seed: u64, constellation: Constellation, rows: usize, cols: usize) -> Result<SymbolMatrix> {
    if rows == 0 || cols == 0 {
        return Err(Error::InvalidParam { field: "rows/cols", reason: "symbol matrix must be non-empty".into() });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let scale = 1.0 / 10f64.sqrt();
    let data = (0..rows * cols)
        .map(|_| match constellation {
            Constellation::Qpsk => QPSK_POINTS[rng.random_range(0..4)],
            Constellation::Qam16 => {
                let i = QAM16_LEVELS[rng.random_range(0..4)];
                let q = QAM16_LEVELS[rng.random_range(0..4)];
                Complex64::new(i * scale, q * scale)
            }
        })
        .collect();
    SymbolMatrix::from_col_major(rows, cols, data)
}

/// e^{j2π k / period} with the numerator reduced first so the phase stays exact.
fn root_of_unity(k: usize, period: usize) -> Complex64 {
    Complex64::from_polar(1.0, TAU * (k % period) as f64 / period as f64)
}

fn check_index(what: &'static str, index: usize, max: usize) -> Result<()> {
    if index == 0 || index > max {
        return Err(Error::IndexOutOfRange { what, index, max });
    }
    Ok(())
}

/// Time-domain code `Q_q`: entry at symbol `n` is e^{j2π q n / L_s}, the same on every row.
pub fn time_code(q: usize, cfg: &CodeConfig, params: &RadarParams) -> Result<SymbolMatrix> {
    cfg.validate_for(params)?;
    check_index("time code q", q, cfg.l_s)?;
    Ok(time_code_unchecked(q, cfg.l_s, cfg.block_rows(params), params.n_symbols))
}

fn time_code_unchecked(q: usize, l_s: usize, rows: usize, cols: usize) -> SymbolMatrix {
    SymbolMatrix::from_fn(rows, cols, |_, c| root_of_unity(q * (c + 1), l_s))
}

/// Frequency-domain code block `P_p^(q) = φ_p^{q−1} · P_p^(1)`.
///
/// `P_p^(1)` has e^{j2π p m / L_c} on row `m` and `φ_p = e^{j2π p (N_c/L) / L_c}`,
/// so the product equals e^{j2π p ((q−1)·N_c/L + m) / L_c}: one phase ramp
/// running continuously through the `L_s` blocks of code `p`.
pub fn freq_code_block(p: usize, q: usize, cfg: &CodeConfig, params: &RadarParams) -> Result<SymbolMatrix> {
    cfg.validate_for(params)?;
    check_index("frequency code p", p, cfg.l_c)?;
    check_index("frequency block q", q, cfg.l_s)?;
    Ok(freq_code_block_unchecked(p, q, cfg.l_c, cfg.block_rows(params), params.n_symbols))
}

fn freq_code_block_unchecked(p: usize, q: usize, l_c: usize, rows: usize, cols: usize) -> SymbolMatrix {
    let offset = (q - 1) * rows;
    SymbolMatrix::from_fn(rows, cols, |r, _| root_of_unity(p * (offset + r + 1), l_c))
}

/// All `L_s` time codes and `L_c · L_s` frequency code blocks for one frame shape.
#[derive(Debug, Clone)]
pub struct PhaseCodeSet {
    config: CodeConfig,
    block_rows: usize,
    n_symbols: usize,
    time_codes: Vec<SymbolMatrix>,
    freq_blocks: Vec<SymbolMatrix>,
}

impl PhaseCodeSet {
    pub fn new(config: CodeConfig, params: &RadarParams) -> Result<Self> {
        config.validate_for(params)?;
        let block_rows = config.block_rows(params);
        let n_symbols = params.n_symbols;
        let time_codes = (1..=config.l_s)
            .map(|q| time_code_unchecked(q, config.l_s, block_rows, n_symbols))
            .collect();
        let mut freq_blocks = Vec::with_capacity(config.l());
        for p in 1..=config.l_c {
            for q in 1..=config.l_s {
                freq_blocks.push(freq_code_block_unchecked(p, q, config.l_c, block_rows, n_symbols));
            }
        }
        Ok(Self { config, block_rows, n_symbols, time_codes, freq_blocks })
    }

    pub fn config(&self) -> CodeConfig {
        self.config
    }

    /// `N_c / L`.
    pub fn block_rows(&self) -> usize {
        self.block_rows
    }

    pub fn n_symbols(&self) -> usize {
        self.n_symbols
    }

    /// Position of block `C_pq` in the transmit frame (0-based); `q` runs fastest.
    pub fn block_index(&self, p: usize, q: usize) -> usize {
        (p - 1) * self.config.l_s + (q - 1)
    }

    pub fn time(&self, q: usize) -> Result<&SymbolMatrix> {
        check_index("time code q", q, self.config.l_s)?;
        Ok(&self.time_codes[q - 1])
    }

    pub fn freq_block(&self, p: usize, q: usize) -> Result<&SymbolMatrix> {
        check_index("frequency code p", p, self.config.l_c)?;
        check_index("frequency block q", q, self.config.l_s)?;
        Ok(&self.freq_blocks[self.block_index(p, q)])
    }

    /// The full frequency code `P_p` (`N_c/L_c` rows): its `L_s` blocks stacked.
    pub fn freq_code(&self, p: usize) -> Result<SymbolMatrix> {
        check_index("frequency code p", p, self.config.l_c)?;
        let blocks: Vec<_> = (1..=self.config.l_s).map(|q| self.freq_blocks[self.block_index(p, q)].clone()).collect();
        SymbolMatrix::vstack(&blocks)
    }

    /// `P_p^(q) ⊙ Q_q`, the code carried by block `C_pq`.
    pub fn code_product(&self, p: usize, q: usize) -> Result<SymbolMatrix> {
        self.freq_block(p, q)?.hadamard(self.time(q)?)
    }

    /// `Σ_{p,q} P_p^(q) ⊙ Q_q`.
    pub fn code_sum(&self) -> SymbolMatrix {
        let mut acc = SymbolMatrix::zeros(self.block_rows, self.n_symbols);
        for p in 1..=self.config.l_c {
            for q in 1..=self.config.l_s {
                let term = self.code_product(p, q).expect("indices in range");
                acc = acc.add(&term).expect("same shape");
            }
        }
        acc
    }
}

/// Phase-coded frame: `C_pq = C_sub ⊙ P_p^(q) ⊙ Q_q`, stacked `C_11, C_12, …, C_{L_c L_s}`.
pub fn assemble_pc_frame(c_sub: &SymbolMatrix, codes: &PhaseCodeSet) -> Result<SymbolMatrix> {
    c_sub.ensure_dims(codes.block_rows, codes.n_symbols)?;
    let cfg = codes.config;
    let mut blocks = Vec::with_capacity(cfg.l());
    for p in 1..=cfg.l_c {
        for q in 1..=cfg.l_s {
            blocks.push(c_sub.hadamard(&codes.code_product(p, q)?)?);
        }
    }
    SymbolMatrix::vstack(&blocks)
}

/// Full-band random frame for sub-Nyquist sampling without phase codes: the
/// `L` sub-bands carry independent symbols.
pub fn assemble_sns_frame(
    seed: u64,
    constellation: Constellation,
    params: &RadarParams,
    l: usize,
) -> Result<SymbolMatrix> {
    params.validate()?;
    if l == 0 || !params.n_subcarriers.is_multiple_of(l) {
        return Err(Error::Divisibility { what: "L must divide N_c", value: params.n_subcarriers, divisor: l });
    }
    gen_symbols(seed, constellation, params.n_subcarriers, params.n_symbols)
}

/// `Σ_{p,q} C_pq ⊘ C_ab`, summed term by term. The shared `C_sub` cancels in
/// every ratio, so only the code products enter.
pub fn code_interference_matrix(codes: &PhaseCodeSet, a: usize, b: usize) -> Result<SymbolMatrix> {
    let reference = codes.code_product(a, b)?;
    let cfg = codes.config;
    let mut acc = SymbolMatrix::zeros(codes.block_rows, codes.n_symbols);
    for p in 1..=cfg.l_c {
        for q in 1..=cfg.l_s {
            acc = acc.add(&codes.code_product(p, q)?.hadamard_div(&reference)?)?;
        }
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn params(nc: usize, ns: usize) -> RadarParams {
        RadarParams { n_subcarriers: nc, n_symbols: ns, ..RadarParams::automotive_77ghz() }
    }

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    #[test]
    fn symbols_are_deterministic() {
        let a = gen_symbols(7, Constellation::Qpsk, 4, 4).unwrap();
        let b = gen_symbols(7, Constellation::Qpsk, 4, 4).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, gen_symbols(8, Constellation::Qpsk, 4, 4).unwrap());
    }

    #[test]
    fn qpsk_points_only() {
        let m = gen_symbols(3, Constellation::Qpsk, 16, 16).unwrap();
        for z in m.iter() {
            let ok = (0..4).any(|k| close(*z, Complex64::from_polar(1.0, TAU / 8.0 * (2 * k + 1) as f64), 1e-12));
            assert!(ok, "{z} is not a QPSK point");
        }
    }

    #[test]
    fn qpsk_is_uniform() {
        // Chi-square with 3 dof: mean 3, sd √6; 4σ bound = 3 + 4·√6 ≈ 12.8.
        let m = gen_symbols(7, Constellation::Qpsk, 512, 256).unwrap();
        let mut counts = [0usize; 4];
        for z in m.iter() {
            let k = QPSK_POINTS.iter().position(|p| p == z).unwrap();
            counts[k] += 1;
        }
        let expected = (512 * 256) as f64 / 4.0;
        let chi2: f64 = counts.iter().map(|&n| (n as f64 - expected).powi(2) / expected).sum();
        assert!(chi2 < 3.0 + 4.0 * 6f64.sqrt(), "chi2 = {chi2}, counts = {counts:?}");
    }

    #[test]
    fn qam16_magnitudes() {
        let m = gen_symbols(1, Constellation::Qam16, 64, 64).unwrap();
        let min = m.min_abs().unwrap().2;
        assert!(min >= 1.0 / 10f64.sqrt() - 1e-12);
        let power = m.frobenius_norm_sqr() / (64.0 * 64.0);
        assert!((power - 1.0).abs() < 0.05, "average power {power}");
    }

    #[test]
    fn constellation_parsing() {
        assert_eq!("QPSK".parse::<Constellation>().unwrap(), Constellation::Qpsk);
        assert_eq!("qam16".parse::<Constellation>().unwrap(), Constellation::Qam16);
        assert!(matches!("bpsk".parse::<Constellation>(), Err(Error::UnknownConstellation(_))));
        assert!(gen_symbols(1, Constellation::Qpsk, 0, 3).is_err());
    }

    #[test]
    fn time_code_examples() {
        let p = params(16, 8);
        let cfg = CodeConfig::new(1, 4).unwrap();
        let all_ones = time_code(4, &cfg, &p).unwrap();
        assert!(all_ones.iter().all(|z| close(*z, c(1.0, 0.0), 1e-12)));

        let q1 = time_code(1, &cfg, &p).unwrap();
        let cycle = [c(0.0, 1.0), c(-1.0, 0.0), c(0.0, -1.0), c(1.0, 0.0)];
        for n in 0..8 {
            for r in 0..q1.rows() {
                assert!(close(q1[(r, n)], cycle[n % 4], 1e-12));
            }
        }

        let cfg2 = CodeConfig::new(1, 2).unwrap();
        let alt = time_code(1, &cfg2, &p).unwrap();
        for n in 0..8 {
            let want = if n % 2 == 0 { -1.0 } else { 1.0 };
            assert!(close(alt[(0, n)], c(want, 0.0), 1e-12));
        }
        assert!(matches!(time_code(5, &cfg, &p), Err(Error::IndexOutOfRange { .. })));
        assert!(time_code(0, &cfg, &p).is_err());
    }

    #[test]
    fn freq_code_examples() {
        let p = params(8, 2);
        let cfg = CodeConfig::new(2, 1).unwrap();
        let b = freq_code_block(1, 1, &cfg, &p).unwrap();
        assert_eq!(b.rows(), 4);
        for (r, want) in [-1.0, 1.0, -1.0, 1.0].iter().enumerate() {
            assert!(close(b[(r, 0)], c(*want, 0.0), 1e-12));
            assert!(close(b[(r, 1)], c(*want, 0.0), 1e-12));
        }
        let ones = freq_code_block(2, 1, &cfg, &p).unwrap();
        assert!(ones.iter().all(|z| close(*z, c(1.0, 0.0), 1e-12)));
        assert!(freq_code_block(3, 1, &cfg, &p).is_err());
        assert!(freq_code_block(1, 2, &cfg, &p).is_err());
    }

    #[test]
    fn freq_blocks_follow_phi_recurrence() {
        // P_p^(q) = φ_p^{q−1} · P_p^(1) with φ_p = e^{j2π p (N_c/L)/L_c}.
        let p = params(96, 6);
        let cfg = CodeConfig::new(4, 3).unwrap();
        let m = cfg.block_rows(&p);
        for pp in 1..=4 {
            let first = freq_code_block(pp, 1, &cfg, &p).unwrap();
            let phi = Complex64::from_polar(1.0, TAU * (pp * m) as f64 / 4.0);
            for q in 1..=3 {
                let block = freq_code_block(pp, q, &cfg, &p).unwrap();
                let expect = first.scale(phi.powi(q as i32 - 1));
                assert!(block.max_abs_diff(&expect).unwrap() < 1e-12);
            }
        }
    }

    #[test]
    fn stacked_freq_code_is_one_ramp() {
        let p = params(64, 4);
        let cfg = CodeConfig::new(4, 2).unwrap();
        let set = PhaseCodeSet::new(cfg, &p).unwrap();
        for pp in 1..=4 {
            let full = set.freq_code(pp).unwrap();
            assert_eq!(full.rows(), 16);
            for r in 0..16 {
                let m = (r + 1) as f64;
                let want = Complex64::from_polar(1.0, TAU * pp as f64 * m / 4.0);
                assert!(close(full[(r, 1)], want, 1e-12));
            }
        }
    }

    #[test]
    fn pc_frame_uncoded_is_identity() {
        let p = params(8, 3);
        let set = PhaseCodeSet::new(CodeConfig::UNCODED, &p).unwrap();
        let sub = gen_symbols(5, Constellation::Qpsk, 8, 3).unwrap();
        assert!(assemble_pc_frame(&sub, &set).unwrap().max_abs_diff(&sub).unwrap() < 1e-15);
    }

    #[test]
    fn pc_frame_hand_evaluated_4x1() {
        // L_c = 2, L_s = 1, N_c = 4: block p = 1 rows e^{jπm} for m = 1, 2,
        // block p = 2 rows e^{j2πm} = 1.
        let p = params(4, 1);
        let set = PhaseCodeSet::new(CodeConfig::new(2, 1).unwrap(), &p).unwrap();
        let sub = SymbolMatrix::filled(2, 1, c(1.0, 0.0));
        let frame = assemble_pc_frame(&sub, &set).unwrap();
        let expect = [-1.0, 1.0, 1.0, 1.0];
        for (r, want) in expect.iter().enumerate() {
            assert!(close(frame[(r, 0)], c(*want, 0.0), 1e-12), "row {r}: {}", frame[(r, 0)]);
        }
    }

    #[test]
    fn pc_frame_block_layout() {
        let p = params(32, 4);
        let set = PhaseCodeSet::new(CodeConfig::new(2, 2).unwrap(), &p).unwrap();
        let sub = gen_symbols(9, Constellation::Qpsk, 8, 4).unwrap();
        let frame = assemble_pc_frame(&sub, &set).unwrap();
        for pp in 1..=2 {
            for q in 1..=2 {
                let start = ((pp - 1) * 2 + q - 1) * 8;
                let block = frame.row_block(start, 8);
                let expect = sub.hadamard(&set.code_product(pp, q).unwrap()).unwrap();
                assert!(block.max_abs_diff(&expect).unwrap() < 1e-15);
            }
        }
        assert!(frame.iter().all(|z| (z.norm() - 1.0).abs() < 1e-12));
        let wrong = gen_symbols(9, Constellation::Qpsk, 4, 4).unwrap();
        assert!(matches!(assemble_pc_frame(&wrong, &set), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn sns_frame_properties() {
        let p = params(64, 32);
        let a = assemble_sns_frame(11, Constellation::Qpsk, &p, 2).unwrap();
        assert_eq!(a, assemble_sns_frame(11, Constellation::Qpsk, &p, 2).unwrap());
        assert_eq!(
            assemble_sns_frame(11, Constellation::Qpsk, &p, 1).unwrap(),
            gen_symbols(11, Constellation::Qpsk, 64, 32).unwrap()
        );
        // Blocks of 32×32 = 1024 entries are uncorrelated.
        let b1 = a.row_block(0, 32);
        let b2 = a.row_block(32, 32);
        let corr: Complex64 = b1.iter().zip(b2.iter()).map(|(x, y)| x * y.conj()).sum();
        assert!(corr.norm() / 1024.0 < 0.1);
        assert!(assemble_sns_frame(11, Constellation::Qpsk, &p, 3).is_err());
    }

    #[test]
    fn interference_uncoded_is_ones() {
        let p = params(8, 2);
        let set = PhaseCodeSet::new(CodeConfig::UNCODED, &p).unwrap();
        let y = code_interference_matrix(&set, 1, 1).unwrap();
        assert!(y.iter().all(|z| close(*z, c(1.0, 0.0), 1e-15)));
    }

    #[test]
    fn interference_matches_scalar_double_loop() {
        let p = params(8, 4);
        let cfg = CodeConfig::new(2, 2).unwrap();
        let set = PhaseCodeSet::new(cfg, &p).unwrap();
        let m_rows = 2;
        // Independent scalar evaluation of the code on block (p, q), row m, symbol n.
        let code = |pp: usize, q: usize, m: usize, n: usize| {
            let global = (q - 1) * m_rows + m;
            Complex64::from_polar(1.0, TAU * (pp * global) as f64 / 2.0)
                * Complex64::from_polar(1.0, TAU * (q * n) as f64 / 2.0)
        };
        for a in 1..=2 {
            for b in 1..=2 {
                let y = code_interference_matrix(&set, a, b).unwrap();
                for r in 0..m_rows {
                    for col in 0..4 {
                        let mut sum = c(0.0, 0.0);
                        for pp in 1..=2 {
                            for q in 1..=2 {
                                sum += code(pp, q, r + 1, col + 1) / code(a, b, r + 1, col + 1);
                            }
                        }
                        assert!(close(y[(r, col)], sum, 1e-12));
                    }
                }
            }
        }
    }

    fn valid_configs() -> impl Strategy<Value = (usize, usize, usize, usize)> {
        // (N_c, N_s, L_c, L_s) with L_c·L_s | N_c, L_s | N_s and L_c | N_c/L.
        (0usize..3, 0usize..3, 1usize..4, 0usize..3).prop_map(|(lc_pow, ls_pow, extra, ns_mul)| {
            let l_c = 1 << lc_pow;
            let l_s = 1 << ls_pow;
            let nc = l_c * l_s * l_c * (1 << extra);
            let ns = l_s * (ns_mul + 1);
            (nc, ns, l_c, l_s)
        })
    }

    proptest! {
        #[test]
        fn codes_are_unit_modulus_and_recurrent((nc, ns, l_c, l_s) in valid_configs()) {
            let p = params(nc, ns);
            let cfg = CodeConfig::new(l_c, l_s).unwrap();
            let set = PhaseCodeSet::new(cfg, &p).unwrap();
            let p1 = set.freq_code(1).unwrap();
            let q1 = set.time(1).unwrap();
            for pp in 1..=l_c {
                let code = set.freq_code(pp).unwrap();
                prop_assert!(code.iter().all(|z| (z.norm() - 1.0).abs() < 1e-12));
                if pp > 1 {
                    let rec = set.freq_code(pp - 1).unwrap().hadamard(&p1).unwrap();
                    prop_assert!(code.max_abs_diff(&rec).unwrap() < 1e-12);
                }
                // P_{L_c + p} evaluated straight from the ramp formula.
                let shifted = SymbolMatrix::from_fn(code.rows(), ns, |r, _| {
                    Complex64::from_polar(1.0, TAU * ((l_c + pp) * (r + 1)) as f64 / l_c as f64)
                });
                prop_assert!(code.max_abs_diff(&shifted).unwrap() < 1e-9);
            }
            for q in 1..=l_s {
                let code = set.time(q).unwrap();
                if q > 1 {
                    let rec = set.time(q - 1).unwrap().hadamard(q1).unwrap();
                    prop_assert!(code.max_abs_diff(&rec).unwrap() < 1e-12);
                }
                let shifted = SymbolMatrix::from_fn(code.rows(), ns, |_, col| {
                    Complex64::from_polar(1.0, TAU * ((l_s + q) * (col + 1)) as f64 / l_s as f64)
                });
                prop_assert!(code.max_abs_diff(&shifted).unwrap() < 1e-9);
            }
        }

        #[test]
        fn interference_is_block_independent((nc, ns, l_c, l_s) in valid_configs()) {
            let p = params(nc, ns);
            let set = PhaseCodeSet::new(CodeConfig::new(l_c, l_s).unwrap(), &p).unwrap();
            let reference = code_interference_matrix(&set, 1, 1).unwrap();
            prop_assert!(reference.max_abs_diff(&set.code_sum()).unwrap() < 1e-9);
            for a in 1..=l_c {
                for b in 1..=l_s {
                    let y = code_interference_matrix(&set, a, b).unwrap();
                    prop_assert!(y.max_abs_diff(&reference).unwrap() < 1e-9);
                }
            }
        }

        #[test]
        fn frames_have_safe_divisors(seed in any::<u64>(), qam in any::<bool>()) {
            let p = params(32, 4);
            let constellation = if qam { Constellation::Qam16 } else { Constellation::Qpsk };
            let set = PhaseCodeSet::new(CodeConfig::new(2, 2).unwrap(), &p).unwrap();
            let sub = gen_symbols(seed, constellation, 8, 4).unwrap();
            let frame = assemble_pc_frame(&sub, &set).unwrap();
            let min = frame.min_abs().unwrap().2;
            if qam {
                prop_assert!(min >= 1.0 / 10f64.sqrt() - 1e-12);
            } else {
                prop_assert!((min - 1.0).abs() < 1e-12);
            }
        }
    }
}
