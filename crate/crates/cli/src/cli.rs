use std::ffi::OsString;
use std::fs;
use std::path::PathBuf;

use bubble_core::analysis::{detect_crashes, run_sweep, summarize};
use bubble_core::model::simulate;
use clap::{Args, Parser, Subcommand};

use crate::config::{parse_seeds, FileConfig, Mode, RunConfig, RunMode, SeedList};
use crate::csv_io::{write_crashes_csv, write_trajectory_csv};
use crate::error::CliError;
use crate::summary::{write_summary_json, RunSummary, SweepSummary, VERSION};
use crate::svg::{plot_sweep, plot_trajectory};

pub const TRAJECTORY_CSV: &str = "trajectory.csv";
pub const CRASHES_CSV: &str = "crashes.csv";
pub const SUMMARY_JSON: &str = "summary.json";
pub const TRAJECTORY_SVG: &str = "trajectory.svg";
pub const SWEEP_JSON: &str = "sweep.json";
pub const SWEEP_SVG: &str = "sweep.svg";

#[derive(Debug, Parser)]
#[command(
    name = "bubblesim",
    version,
    about = "Simulate the cubic-momentum bubble/crash market model"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// One run: trajectory CSV, crash list CSV, JSON summary, optional SVG plot.
    Simulate(RunArgs),
    /// Matched-seed sweep over one parameter: JSON grid, optional SVG plot.
    Sweep(RunArgs),
    /// `simulate` with the baseline parameters and every output, plot included.
    Baseline(RunArgs),
}

#[derive(Debug, Args)]
struct RunArgs {
    /// Flat JSON config file; flags override its values.
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Inclusive range `A..B` or list `s1,s2,...` (sweep only).
    #[arg(long, value_name = "A..B")]
    seeds: Option<String>,
    /// Output directory, created if missing.
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
    /// Also emit an SVG plot.
    #[arg(long)]
    plot: bool,
    /// Swept parameter: b, r, lambda (or any other scalar parameter).
    #[arg(long)]
    axis: Option<String>,
    /// Comma-separated, strictly increasing sweep values.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    values: Option<Vec<f64>>,

    /// Number of periods T.
    #[arg(long = "T", value_name = "T")]
    periods: Option<usize>,
    /// Tick size.
    #[arg(long, allow_hyphen_values = true)]
    d: Option<f64>,
    /// Momentum decay rate.
    #[arg(long, allow_hyphen_values = true)]
    r: Option<f64>,
    /// Baseline trading intensity Λ.
    #[arg(long, allow_hyphen_values = true)]
    lambda: Option<f64>,
    /// Intensity sensitivity to momentum.
    #[arg(long, allow_hyphen_values = true)]
    k: Option<f64>,
    /// Cubic scale.
    #[arg(long, allow_hyphen_values = true)]
    h: Option<f64>,
    /// Lowest cubic root.
    #[arg(long, allow_hyphen_values = true)]
    a: Option<f64>,
    /// Middle cubic root (crash threshold).
    #[arg(long, allow_hyphen_values = true)]
    b: Option<f64>,
    /// Highest cubic root.
    #[arg(long, allow_hyphen_values = true)]
    c: Option<f64>,
    #[arg(long = "log-p0", allow_hyphen_values = true)]
    log_p0: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    x0: Option<f64>,

    /// Momentum level whose up-crossing opens a crash episode (default: b).
    #[arg(long, allow_hyphen_values = true)]
    threshold: Option<f64>,
    #[arg(long = "peak-window")]
    peak_window: Option<usize>,
    /// Minimum peak-to-trough drop of a crash (default: 5 d).
    #[arg(long = "min-drawdown", allow_hyphen_values = true)]
    min_drawdown: Option<f64>,
}

impl RunArgs {
    fn overrides(&self) -> Result<FileConfig, CliError> {
        let seeds = match &self.seeds {
            Some(s) => Some(SeedList::List(parse_seeds(s)?)),
            None => None,
        };
        Ok(FileConfig {
            periods: self.periods,
            d: self.d,
            r: self.r,
            lambda: self.lambda,
            k: self.k,
            h: self.h,
            a: self.a,
            b: self.b,
            c: self.c,
            log_p0: self.log_p0,
            x0: self.x0,
            seed: self.seed,
            seeds,
            threshold: self.threshold,
            peak_window: self.peak_window,
            min_drawdown: self.min_drawdown,
            axis: self.axis.clone(),
            values: self.values.clone(),
            out: self.out.clone(),
            plot: self.plot.then_some(true),
        })
    }
}

/// Builds the effective configuration from `--config` plus flags.
fn parse_config(args: &RunArgs, mode: Mode) -> Result<RunConfig, CliError> {
    let file = match &args.config {
        Some(path) => FileConfig::load(path)?,
        None => FileConfig::default(),
    };
    RunConfig::resolve(&file.overlay(args.overrides()?), mode)
}

/// Entry point; returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("bubblesim: {e}");
            e.exit_code()
        }
    }
}

fn execute(command: Command) -> Result<(), CliError> {
    match command {
        Command::Simulate(args) => run_simulate(parse_config(&args, Mode::Simulate)?),
        Command::Baseline(args) => {
            let mut cfg = parse_config(&args, Mode::Simulate)?;
            cfg.plot = true;
            run_simulate(cfg)
        }
        Command::Sweep(args) => run_sweep_cmd(parse_config(&args, Mode::Sweep)?),
    }
}

fn prepare_out_dir(cfg: &RunConfig) -> Result<(), CliError> {
    fs::create_dir_all(&cfg.out_dir).map_err(|e| CliError::io(&cfg.out_dir, e))
}

fn run_simulate(cfg: RunConfig) -> Result<(), CliError> {
    let RunMode::Simulate { seed } = cfg.mode else {
        unreachable!("simulate mode")
    };
    prepare_out_dir(&cfg)?;
    let traj = simulate(&cfg.params, seed)?;
    let events = detect_crashes(&traj, &cfg.crash)?;
    let stats = summarize(&traj, &cfg.crash)?;

    write_trajectory_csv(&traj, &cfg.out_dir.join(TRAJECTORY_CSV))?;
    write_crashes_csv(&events, &cfg.out_dir.join(CRASHES_CSV))?;
    let effective = cfg.effective();
    write_summary_json(
        &RunSummary {
            config: &effective,
            seed,
            stats: &stats,
            version: VERSION,
        },
        &cfg.out_dir.join(SUMMARY_JSON),
    )?;
    if cfg.plot {
        plot_trajectory(&traj, &cfg.out_dir.join(TRAJECTORY_SVG))?;
    }
    eprintln!(
        "seed {seed}: peak log-price {}, {} trades, {} crashes -> {}",
        stats.peak_log_price,
        stats.total_trades,
        stats.n_crashes,
        cfg.out_dir.display()
    );
    Ok(())
}

fn run_sweep_cmd(cfg: RunConfig) -> Result<(), CliError> {
    let RunMode::Sweep(spec) = &cfg.mode else {
        unreachable!("sweep mode")
    };
    prepare_out_dir(&cfg)?;
    let result = run_sweep(spec, &cfg.crash)?;
    let effective = cfg.effective();
    write_summary_json(
        &SweepSummary {
            config: &effective,
            seed: &spec.seeds,
            sweep: &result,
            version: VERSION,
        },
        &cfg.out_dir.join(SWEEP_JSON),
    )?;
    if cfg.plot {
        plot_sweep(&result, &cfg.out_dir.join(SWEEP_SVG))?;
    }
    for s in &result.summaries {
        let med = |q: Option<&bubble_core::analysis::Quartiles>| {
            q.map_or("n/a".to_string(), |q| q.median.to_string())
        };
        eprintln!(
            "{} = {}: median peak {}, median trades {}, median crashes {} ({} ok, {} failed)",
            spec.axis,
            s.value,
            med(s.peak_log_price.as_ref()),
            med(s.total_trades.as_ref()),
            med(s.n_crashes.as_ref()),
            s.n_ok,
            s.n_failed
        );
    }
    Ok(())
}
