//! End-to-end pipeline: generate, assemble, propagate, fold, unfold, map, detect.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::config::{ExperimentConfig, ReceiverPath};
use super::plots;
use crate::channel::{apply_channel, apply_channel_time, synth_time_domain};
use crate::error::{Error, Result};
use crate::matrix::SymbolMatrix;
use crate::params::{derive_metrics, unambiguous_limits, RadarMetrics};
use crate::rdproc::{
    detect_peaks, predict_ambiguities, range_doppler_map, to_db, Peak, PeakReport, PredictedPeak, RangeDopplerMap,
    Window,
};
use crate::receiver::{fold_frequency, fold_time, unfold, FoldedFrame, Mode, UnfoldedFrame};
use crate::waveform::{assemble_pc_frame, assemble_sns_frame, gen_symbols, Constellation, PhaseCodeSet};

/// Machine-readable result of one run (written as `summary.toml`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub name: String,
    pub mode: Mode,
    pub window: Window,
    pub constellation: Constellation,
    pub l_c: usize,
    pub l_s: usize,
    pub fold_factor: usize,
    pub range_resolution_m: f64,
    pub velocity_resolution_mps: f64,
    pub r_max_m: f64,
    pub v_max_mps: f64,
    /// Unambiguous range after coding.
    pub r_u_m: f64,
    /// Unambiguous velocity half-span after coding (the span is `±v_u`).
    pub v_u_mps: f64,
    pub noise_floor_db: f64,
    pub pslr_db: f64,
    pub peak_count: usize,
    pub peaks_above_3db: usize,
    pub map_max_power: f64,
    pub peaks: Vec<Peak>,
    pub predicted: Vec<PredictedPeak>,
}

/// Everything a run produces in memory.
#[derive(Debug, Clone)]
pub struct Simulation {
    pub metrics: RadarMetrics,
    pub tx: SymbolMatrix,
    /// Frequency-domain received frame; absent when the time-domain receiver is used.
    pub received: Option<SymbolMatrix>,
    pub folded: FoldedFrame,
    pub unfolded: UnfoldedFrame,
    pub map: RangeDopplerMap,
    pub peaks: PeakReport,
    pub summary: Summary,
}

#[derive(Debug, Clone)]
pub struct ExperimentReport {
    pub summary: Summary,
    pub peaks: PeakReport,
    pub files: Vec<PathBuf>,
}

/// Transmit frame for the configured mode.
pub fn transmit_frame(cfg: &ExperimentConfig) -> Result<SymbolMatrix> {
    let p = &cfg.params;
    match cfg.mode {
        Mode::Full => gen_symbols(cfg.seeds.symbols, cfg.constellation, p.n_subcarriers, p.n_symbols),
        Mode::Sns => assemble_sns_frame(cfg.seeds.symbols, cfg.constellation, p, cfg.fold_factor()),
        Mode::PcSns => {
            let codes = PhaseCodeSet::new(cfg.code, p)?;
            let sub = gen_symbols(cfg.seeds.symbols, cfg.constellation, codes.block_rows(), p.n_symbols)?;
            assemble_pc_frame(&sub, &codes)
        }
    }
}

/// Runs the pipeline without touching the file system.
pub fn simulate(cfg: &ExperimentConfig) -> Result<Simulation> {
    cfg.validate()?;
    let p = &cfg.params;
    let metrics = derive_metrics(p);
    let scenario = cfg.target_scenario();
    let l = cfg.fold_factor();
    let tx = transmit_frame(cfg)?;
    let (received, folded) = match cfg.run.receiver {
        ReceiverPath::Frequency => {
            let s = apply_channel(&tx, &scenario, p)?;
            let z = fold_frequency(&s, l, cfg.mode)?;
            (Some(s), z)
        }
        ReceiverPath::Time => {
            let stream = apply_channel_time(&synth_time_domain(&tx, p)?, &scenario, p)?;
            (None, fold_time(&stream, l, p, cfg.mode)?)
        }
    };
    let unfolded = unfold(&folded, &tx)?;
    let map = range_doppler_map(&unfolded.d, p, cfg.window)?;
    let peaks = detect_peaks(&map, cfg.detection.threshold_db, cfg.detection.guard_bins)?;

    let amb = cfg.ambiguity_code();
    let (r_u, v_u) = unambiguous_limits(&metrics, &amb);
    let predicted = cfg.scenario.targets.iter().flat_map(|t| predict_ambiguities(t, &amb, &metrics)).collect();
    let summary = Summary {
        name: cfg.name.clone(),
        mode: cfg.mode,
        window: cfg.window,
        constellation: cfg.constellation,
        l_c: cfg.code.l_c,
        l_s: cfg.code.l_s,
        fold_factor: l,
        range_resolution_m: metrics.range_resolution,
        velocity_resolution_mps: metrics.velocity_resolution,
        r_max_m: metrics.r_max,
        v_max_mps: metrics.v_max,
        r_u_m: r_u,
        v_u_mps: v_u,
        noise_floor_db: peaks.noise_floor_db,
        pslr_db: peaks.pslr_db,
        peak_count: peaks.peaks.len(),
        peaks_above_3db: peaks.count_above(-3.0),
        map_max_power: map.normalization(),
        peaks: peaks.peaks.clone(),
        predicted,
    };
    Ok(Simulation { metrics, tx, received, folded, unfolded, map, peaks, summary })
}

/// Runs the pipeline and writes the enabled outputs under `cfg.output.dir`.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    let sim = simulate(cfg)?;
    let files = write_outputs(cfg, &sim)?;
    Ok(ExperimentReport { summary: sim.summary, peaks: sim.peaks, files })
}

/// Map cell used for the profile slices: the first target's bin, or the map maximum.
pub fn reference_cell(cfg: &ExperimentConfig, map: &RangeDopplerMap) -> (usize, usize) {
    match cfg.scenario.targets.first() {
        Some(t) => (map.range_to_row(t.range), map.velocity_to_col(t.velocity)),
        None => {
            let (r, c, _) = map.argmax();
            (r, c)
        }
    }
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path).map(BufWriter::new).map_err(|e| Error::io(path, e))
}

fn write_with(path: &Path, f: impl FnOnce(&mut BufWriter<File>) -> std::io::Result<()>) -> Result<()> {
    let mut w = create(path)?;
    f(&mut w).and_then(|_| w.flush()).map_err(|e| Error::io(path, e))
}

/// Writes the files enabled in `cfg.output` for a finished simulation.
pub fn write_outputs(cfg: &ExperimentConfig, sim: &Simulation) -> Result<Vec<PathBuf>> {
    let out = &cfg.output;
    if !(out.csv || out.plots || out.report || out.frames) {
        return Ok(Vec::new());
    }
    let dir = &out.dir;
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut files = Vec::new();
    let map = &sim.map;
    let norm = map.normalization();
    let rel = |p: f64| if norm > 0.0 { to_db(p / norm) } else { to_db(0.0) };
    let (ref_row, ref_col) = reference_cell(cfg, map);

    if out.csv {
        let path = dir.join("parameters.csv");
        write_with(&path, |w| write_parameters(w, cfg, &sim.metrics, ref_row, ref_col))?;
        files.push(path);

        let path = dir.join("range_profile.csv");
        write_with(&path, |w| {
            writeln!(w, "range_bin,range_m,power,power_db")?;
            for (r, p) in map.range_profile(ref_col).into_iter().enumerate() {
                writeln!(w, "{r},{},{p},{}", map.range_axis()[r], rel(p))?;
            }
            Ok(())
        })?;
        files.push(path);

        let path = dir.join("doppler_profile.csv");
        let half = (map.cols() / 2) as i64;
        write_with(&path, |w| {
            writeln!(w, "doppler_bin,velocity_mps,power,power_db")?;
            for (c, p) in map.doppler_profile(ref_row).into_iter().enumerate() {
                writeln!(w, "{},{},{p},{}", c as i64 - half, map.velocity_axis()[c], rel(p))?;
            }
            Ok(())
        })?;
        files.push(path);

        let path = dir.join("peaks.csv");
        write_with(&path, |w| {
            writeln!(w, "rank,range_bin,doppler_bin,range_m,velocity_mps,power_db")?;
            for (i, pk) in sim.peaks.peaks.iter().enumerate() {
                writeln!(w, "{},{},{},{},{},{}", i + 1, pk.range_bin, pk.doppler_bin, pk.range, pk.velocity, pk.power_db)?;
            }
            Ok(())
        })?;
        files.push(path);

        let path = dir.join("map.csv");
        write_with(&path, |w| map.write_csv(w))?;
        files.push(path);
    }
    if out.report {
        let path = dir.join("summary.toml");
        let text = toml::to_string(&sim.summary).map_err(|e| Error::Format(e.to_string()))?;
        fs::write(&path, text).map_err(|e| Error::io(&path, e))?;
        files.push(path);
    }
    if out.plots {
        files.extend(plots::emit_plots(dir, map, &sim.peaks, ref_row, ref_col)?);
    }
    if out.frames {
        let mut frames: Vec<(&str, &SymbolMatrix)> =
            vec![("tx.cmx", &sim.tx), ("folded.cmx", &sim.folded.z), ("unfolded.cmx", &sim.unfolded.d)];
        if let Some(s) = &sim.received {
            frames.push(("rx.cmx", s));
        }
        for (name, m) in frames {
            let path = dir.join(name);
            write_with(&path, |w| m.write_binary(w))?;
            files.push(path);
        }
        let path = dir.join("map.rdm");
        write_with(&path, |w| map.write_binary(w))?;
        files.push(path);
    }
    Ok(files)
}

fn write_parameters(
    w: &mut impl Write,
    cfg: &ExperimentConfig,
    m: &RadarMetrics,
    ref_row: usize,
    ref_col: usize,
) -> std::io::Result<()> {
    let p = &cfg.params;
    let amb = cfg.ambiguity_code();
    writeln!(w, "key,value")?;
    let rows: Vec<(&str, String)> = vec![
        ("name", cfg.name.clone()),
        ("mode", cfg.mode.to_string()),
        ("window", format!("{:?}", cfg.window).to_lowercase()),
        ("constellation", cfg.constellation.to_string()),
        ("n_subcarriers", p.n_subcarriers.to_string()),
        ("n_symbols", p.n_symbols.to_string()),
        ("subcarrier_spacing_hz", p.subcarrier_spacing.to_string()),
        ("carrier_freq_hz", p.carrier_freq.to_string()),
        ("cp_duration_s", p.cp_duration.to_string()),
        ("speed_of_light_mps", p.speed_of_light.to_string()),
        ("l_c", cfg.code.l_c.to_string()),
        ("l_s", cfg.code.l_s.to_string()),
        ("ambiguity_l_c", amb.l_c.to_string()),
        ("ambiguity_l_s", amb.l_s.to_string()),
        ("range_resolution_m", m.range_resolution.to_string()),
        ("velocity_resolution_mps", m.velocity_resolution.to_string()),
        ("r_max_m", m.r_max.to_string()),
        ("v_max_mps", m.v_max.to_string()),
        ("noise_power", cfg.scenario.noise_power.to_string()),
        ("symbol_seed", cfg.seeds.symbols.to_string()),
        ("noise_seed", cfg.seeds.noise.to_string()),
        ("threshold_db", cfg.detection.threshold_db.to_string()),
        ("guard_bins", cfg.detection.guard_bins.to_string()),
        ("profile_range_bin", ref_row.to_string()),
        ("profile_doppler_column", ref_col.to_string()),
    ];
    for (k, v) in rows {
        writeln!(w, "{k},{v}")?;
    }
    Ok(())
}
