//! Scenario-driven command line front end.
//!
//! Each experiment kind is a subcommand with flag-configurable parameters;
//! `run <FILE>` executes a declarative scenario file instead. Every run
//! writes CSV data, plotdata curves, and a machine-readable `summary.json`
//! whose checks mirror the acceptance suite. The process exits nonzero when
//! any check fails.

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use clap::{Parser, Subcommand};

use qlitho_cli::runner::{run_scenario, RunOptions};
use qlitho_cli::scenario::{self, Scenario};

#[derive(Debug, Parser)]
#[command(
    name = "qlitho",
    about = "Multiphoton interference patterns and absorption rates for quantized 2D optical fields",
    version
)]
struct Cli {
    /// Output directory for data files and the run summary
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,

    /// Replace every random seed in the scenario
    #[arg(long, global = true)]
    seed_override: Option<u64>,

    /// Multiply every check tolerance (exploratory runs)
    #[arg(long, global = true, default_value_t = 1.0)]
    tolerance_scale: f64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run a scenario file (TOML, or JSON with a .json extension)
    Run { file: PathBuf },
    /// NOON vs classical absorption patterns, peak ratio, and fringe periods
    NoonCompare(scenario::NoonCompareParams),
    /// Normalized peak/total rate trade-off curves for the Gaussian state
    GaussianTradeoff(scenario::GaussianTradeoffParams),
    /// Jointly Gaussian absorption spot against its closed form
    GaussianPattern(scenario::GaussianPatternParams),
    /// Biphoton double-slit far-field coincidence pattern
    DoubleSlitAngular(scenario::DoubleSlitAngularParams),
    /// Coincidence rate versus biphoton coherence length
    DoubleSlitAlphaScan(scenario::DoubleSlitAlphaScanParams),
    /// Random-parameter audit of the N-photon rate ceiling
    BoundAudit(scenario::BoundAuditParams),
    /// Geometric-factor curve and rotation-invariance audit
    RotationAudit(scenario::RotationAuditParams),
    /// Discrete-absorber bin model convergence study
    AbsorberConvergence(scenario::AbsorberConvergenceParams),
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run() {
        Ok(all_pass) => {
            if all_pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            }
        }
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::FAILURE
        }
    }
}

fn run() -> Result<bool> {
    let cli = Cli::parse();
    let scenario = match cli.command {
        Command::Run { file } => Scenario::load(&file)?,
        Command::NoonCompare(p) => Scenario::NoonCompare(p),
        Command::GaussianTradeoff(p) => Scenario::GaussianTradeoff(p),
        Command::GaussianPattern(p) => Scenario::GaussianPattern(p),
        Command::DoubleSlitAngular(p) => Scenario::DoubleSlitAngular(p),
        Command::DoubleSlitAlphaScan(p) => Scenario::DoubleSlitAlphaScan(p),
        Command::BoundAudit(p) => Scenario::BoundAudit(p),
        Command::RotationAudit(p) => Scenario::RotationAudit(p),
        Command::AbsorberConvergence(p) => Scenario::AbsorberConvergence(p),
    };
    let opts = RunOptions {
        out_dir: cli.out,
        seed_override: cli.seed_override,
        tolerance_scale: cli.tolerance_scale,
    };
    let summary = run_scenario(&scenario, &opts)?;
    summary.print_checks();
    println!(
        "{}: {} checks, {} -> {}",
        summary.kind,
        summary.checks.len(),
        if summary.all_pass {
            "all passed"
        } else {
            "FAILURES"
        },
        opts.out_dir.join("summary.json").display()
    );
    Ok(summary.all_pass)
}
