//! Parameter sweeps over the fold factor or explicit `(L_c, L_s)` splits.
//!
//! Syntax: `L=2,4,8,16` or `code=16x1,8x2,4x4`. For an `L` sweep in PC-SNS
//! mode the time-code share is `L_s = gcd(base L_s, L)`; SNS folds by `L`
//! directly.

use std::fs;
use std::io::Write;
use std::path::PathBuf;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::ExperimentConfig;
use super::experiment::{run_experiment, Summary};
use crate::error::{Error, FieldError, Result};
use crate::params::CodeConfig;
use crate::receiver::Mode;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SweepSpec {
    FoldFactors(Vec<usize>),
    Codes(Vec<CodeConfig>),
}

fn bad(msg: impl Into<String>) -> Error {
    Error::InvalidConfig(vec![FieldError::new("sweep", msg)])
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

impl SweepSpec {
    pub fn parse(text: &str) -> Result<Self> {
        let (key, values) = text.split_once('=').ok_or_else(|| bad(format!("expected `L=...` or `code=...`, got `{text}`")))?;
        let items: Vec<&str> = values.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
        if items.is_empty() {
            return Err(bad("sweep list is empty"));
        }
        match key.trim() {
            "L" | "l" => items
                .iter()
                .map(|s| s.parse::<usize>().ok().filter(|l| *l > 0).ok_or_else(|| bad(format!("`{s}` is not a positive integer"))))
                .collect::<Result<_>>()
                .map(SweepSpec::FoldFactors),
            "code" | "codes" => items
                .iter()
                .map(|s| {
                    let parsed = s.split_once(['x', 'X']).and_then(|(a, b)| Some((a.parse().ok()?, b.parse().ok()?)));
                    match parsed {
                        Some((l_c, l_s)) => CodeConfig::new(l_c, l_s),
                        None => Err(bad(format!("`{s}` is not of the form L_cxL_s"))),
                    }
                })
                .collect::<Result<_>>()
                .map(SweepSpec::Codes),
            other => Err(bad(format!("unknown sweep key `{other}`"))),
        }
    }

    /// Code split for each sweep point given the base configuration.
    pub fn codes(&self, base: &ExperimentConfig) -> Vec<CodeConfig> {
        match self {
            SweepSpec::Codes(c) => c.clone(),
            SweepSpec::FoldFactors(ls) => ls
                .iter()
                .map(|&l| match base.mode {
                    Mode::PcSns => {
                        let l_s = gcd(base.code.l_s, l).max(1);
                        CodeConfig { l_c: l / l_s, l_s }
                    }
                    Mode::Sns | Mode::Full => CodeConfig { l_c: l, l_s: 1 },
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub label: String,
    pub l_c: usize,
    pub l_s: usize,
    pub l: usize,
    pub r_u_m: f64,
    pub v_u_mps: f64,
    pub noise_floor_db: f64,
    pub peak_count: usize,
    pub peaks_above_3db: usize,
}

#[derive(Debug, Clone)]
pub struct SweepReport {
    pub rows: Vec<SweepRow>,
    pub summaries: Vec<Summary>,
    pub table: Option<PathBuf>,
}

pub fn point_label(code: &CodeConfig) -> String {
    format!("L{}_{}x{}", code.l(), code.l_c, code.l_s)
}

/// Per-point configurations. Every point is validated before any runs; all
/// problems are reported together.
pub fn expand(base: &ExperimentConfig, spec: &SweepSpec) -> Result<Vec<ExperimentConfig>> {
    let mut errs = Vec::new();
    let mut points = Vec::new();
    for (i, code) in spec.codes(base).into_iter().enumerate() {
        let label = point_label(&code);
        let mut cfg = base.clone();
        cfg.code = code;
        cfg.name = format!("{}-{label}", base.name);
        cfg.output.dir = base.output.dir.join(&label);
        cfg.sweep = None;
        match cfg.validate() {
            Ok(()) => points.push(cfg),
            Err(Error::InvalidConfig(list)) => {
                errs.extend(list.into_iter().map(|e| FieldError::new(format!("sweep[{i}] ({label}).{}", e.field), e.message)))
            }
            Err(e) => errs.push(FieldError::new(format!("sweep[{i}] ({label})"), e.to_string())),
        }
    }
    if errs.is_empty() {
        Ok(points)
    } else {
        Err(Error::InvalidConfig(errs))
    }
}

/// Runs every point (in parallel, `base.run.workers` threads, 0 = one per
/// core) and writes `sweep.csv` into the base output directory when CSV output
/// is enabled.
pub fn run_sweep(base: &ExperimentConfig, spec: &SweepSpec) -> Result<SweepReport> {
    base.validate()?;
    let points = expand(base, spec)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(base.run.workers)
        .build()
        .map_err(|e| Error::Unsupported(format!("cannot start worker pool: {e}")))?;
    let reports = pool.install(|| points.par_iter().map(run_experiment).collect::<Result<Vec<_>>>())?;
    let summaries: Vec<Summary> = reports.into_iter().map(|r| r.summary).collect();
    let rows: Vec<SweepRow> = points
        .iter()
        .zip(&summaries)
        .map(|(cfg, s)| SweepRow {
            label: point_label(&cfg.code),
            l_c: cfg.code.l_c,
            l_s: cfg.code.l_s,
            l: cfg.code.l(),
            r_u_m: s.r_u_m,
            v_u_mps: s.v_u_mps,
            noise_floor_db: s.noise_floor_db,
            peak_count: s.peak_count,
            peaks_above_3db: s.peaks_above_3db,
        })
        .collect();
    let table = if base.output.csv {
        let dir = &base.output.dir;
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        let path = dir.join("sweep.csv");
        let mut text = Vec::new();
        writeln!(text, "label,l_c,l_s,l,r_u_m,v_u_mps,noise_floor_db,peak_count,peaks_above_3db").unwrap();
        for r in &rows {
            writeln!(
                text,
                "{},{},{},{},{},{},{},{},{}",
                r.label, r.l_c, r.l_s, r.l, r.r_u_m, r.v_u_mps, r.noise_floor_db, r.peak_count, r.peaks_above_3db
            )
            .unwrap();
        }
        fs::write(&path, text).map_err(|e| Error::io(&path, e))?;
        Some(path)
    } else {
        None
    };
    Ok(SweepReport { rows, summaries, table })
}
