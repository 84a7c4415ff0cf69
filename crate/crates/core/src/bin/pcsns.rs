//! Command-line front end for the simulator.
//!
//! Exit codes: 0 success, 1 configuration or usage error, 2 runtime failure.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use pcsns::harness::{presets, run_experiment, run_sweep, ExperimentConfig, SweepSpec};
use pcsns::{Error, Mode};

#[derive(Parser)]
#[command(name = "pcsns", version, about = "Sub-Nyquist OFDM radar simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one experiment from a TOML file or `preset:NAME`.
    Run {
        config: String,
        #[command(flatten)]
        overrides: Overrides,
    },
    /// Run a sweep over fold factors (`L=2,4,8,16`) or code splits (`code=16x1,4x4`).
    Sweep {
        config: String,
        /// Sweep list; defaults to the config's `[sweep] over`.
        #[arg(long)]
        over: Option<String>,
        #[command(flatten)]
        overrides: Overrides,
    },
    /// List the built-in presets, or print one as TOML.
    Presets {
        /// Print this preset's configuration.
        #[arg(long)]
        show: Option<String>,
    },
    /// Check a configuration without running it.
    Validate { config: String },
}

#[derive(Args)]
struct Overrides {
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Transmit scheme: full, sns or pc-sns.
    #[arg(long)]
    mode: Option<Mode>,
    /// Noise seed.
    #[arg(long)]
    noise_seed: Option<u64>,
    /// Symbol seed.
    #[arg(long)]
    symbol_seed: Option<u64>,
    /// Worker threads for sweeps (0 = one per core).
    #[arg(long)]
    workers: Option<usize>,
    /// Skip the SVG plots.
    #[arg(long)]
    no_plots: bool,
}

impl Overrides {
    fn apply(&self, cfg: &mut ExperimentConfig) {
        if let Some(out) = &self.out {
            cfg.output.dir = out.clone();
        }
        if let Some(mode) = self.mode {
            cfg.mode = mode;
        }
        if let Some(s) = self.noise_seed {
            cfg.seeds.noise = s;
        }
        if let Some(s) = self.symbol_seed {
            cfg.seeds.symbols = s;
        }
        if let Some(w) = self.workers {
            cfg.run.workers = w;
        }
        if self.no_plots {
            cfg.output.plots = false;
        }
    }
}

fn load(spec: &str) -> pcsns::Result<ExperimentConfig> {
    match spec.strip_prefix("preset:") {
        Some(name) => presets::preset(name),
        None => ExperimentConfig::from_file(spec),
    }
}

fn fmt_db(v: f64) -> String {
    format!("{v:.2} dB")
}

fn run(cli: Cli) -> pcsns::Result<()> {
    match cli.command {
        Command::Run { config, overrides } => {
            let mut cfg = load(&config)?;
            overrides.apply(&mut cfg);
            cfg.validate()?;
            let rep = run_experiment(&cfg)?;
            let s = &rep.summary;
            println!("experiment   {}", s.name);
            println!("mode         {} (L_c = {}, L_s = {}, L = {})", s.mode, s.l_c, s.l_s, s.fold_factor);
            println!("r_u          {} m", s.r_u_m);
            println!("v_u          +/-{} m/s", s.v_u_mps);
            println!("noise floor  {}", fmt_db(s.noise_floor_db));
            println!("peaks        {} detected, {} above -3 dB", s.peak_count, s.peaks_above_3db);
            for p in s.peaks.iter().take(20) {
                println!("  {:>9.3} m  {:>9.3} m/s  {}", p.range, p.velocity, fmt_db(p.power_db));
            }
            if !rep.files.is_empty() {
                println!("wrote {} files to {}", rep.files.len(), cfg.output.dir.display());
            }
        }
        Command::Sweep { config, over, overrides } => {
            let mut cfg = load(&config)?;
            overrides.apply(&mut cfg);
            let over = over.or_else(|| cfg.sweep.as_ref().map(|s| s.over.clone())).ok_or_else(|| {
                Error::InvalidConfig(vec![pcsns::error::FieldError::new("sweep", "no --over given and no [sweep] section")])
            })?;
            let spec = SweepSpec::parse(&over)?;
            let rep = run_sweep(&cfg, &spec)?;
            println!("{:<12} {:>4} {:>4} {:>10} {:>12} {:>12} {:>7}", "point", "L_c", "L_s", "r_u (m)", "v_u (m/s)", "floor (dB)", "peaks");
            for r in &rep.rows {
                println!(
                    "{:<12} {:>4} {:>4} {:>10.3} {:>12.3} {:>12.2} {:>7}",
                    r.label, r.l_c, r.l_s, r.r_u_m, r.v_u_mps, r.noise_floor_db, r.peak_count
                );
            }
            if let Some(t) = rep.table {
                println!("wrote {}", t.display());
            }
        }
        Command::Presets { show } => match show {
            Some(name) => print!("{}", presets::preset(&name)?.to_toml_string()?),
            None => {
                for name in presets::NAMES {
                    println!("{name:<15} {}", presets::describe(name).unwrap_or(""));
                }
            }
        },
        Command::Validate { config } => {
            let cfg = load(&config)?;
            cfg.validate()?;
            println!("{config}: ok ({}, L = {})", cfg.mode, cfg.fold_factor());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_config_error() { 1 } else { 2 })
        }
    }
}
