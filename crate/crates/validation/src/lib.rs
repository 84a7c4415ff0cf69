//! Helpers shared by the acceptance checks: Monte-Carlo noise-floor averaging,
//! replica matching against predicted positions, and pass/fail bookkeeping.

use std::panic::{catch_unwind, AssertUnwindSafe};

use rayon::prelude::*;

use pcsns::harness::{simulate, ExperimentConfig};
use pcsns::rdproc::{Peak, PredictedPeak};
use pcsns::Result;

/// Outcome of one acceptance criterion.
#[derive(Debug, Clone)]
pub struct Verdict {
    pub id: u32,
    pub title: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl Verdict {
    pub fn line(&self) -> String {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        format!("[{tag}] criterion {}: {} | {}", self.id, self.title, self.detail)
    }
}

/// Runs `check`, turning a panic or error into a failed verdict.
pub fn evaluate(id: u32, title: &'static str, check: impl FnOnce() -> Result<(bool, String)>) -> Verdict {
    match catch_unwind(AssertUnwindSafe(check)) {
        Ok(Ok((passed, detail))) => Verdict { id, title, passed, detail },
        Ok(Err(e)) => Verdict { id, title, passed: false, detail: format!("error: {e}") },
        Err(p) => {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            Verdict { id, title, passed: false, detail: format!("panic: {msg}") }
        }
    }
}

/// Noise floor (dB relative to the map maximum) for each noise seed.
pub fn noise_floors(cfg: &ExperimentConfig, seeds: &[u64]) -> Result<Vec<f64>> {
    seeds
        .par_iter()
        .map(|&s| {
            let mut c = cfg.clone();
            c.seeds.noise = s;
            simulate(&c).map(|sim| sim.summary.noise_floor_db)
        })
        .collect()
}

pub fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

fn circ_dist(a: i64, b: i64, n: i64) -> i64 {
    let d = (a - b).rem_euclid(n);
    d.min(n - d)
}

/// Grid cell (range row, Doppler column) nearest to a predicted position.
pub fn predicted_cell(p: &PredictedPeak, range_res: f64, vel_res: f64, rows: usize, cols: usize) -> (i64, i64) {
    let r = ((p.range / range_res).round() as i64).rem_euclid(rows as i64);
    let c = ((p.velocity / vel_res).round() as i64 + (cols / 2) as i64).rem_euclid(cols as i64);
    (r, c)
}

/// True when `peak` lies within `tol` bins of `cell` on both (wrapping) axes.
pub fn near(peak: &Peak, cell: (i64, i64), rows: usize, cols: usize, tol: i64) -> bool {
    let col = peak.doppler_bin + (cols / 2) as i64;
    circ_dist(peak.range_bin as i64, cell.0, rows as i64) <= tol && circ_dist(col, cell.1, cols as i64) <= tol
}
