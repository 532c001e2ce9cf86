//! `anchorplan`: batch CLI emitting plot-ready CSV/JSON artifacts for anchor
//! deployment planning. Exit codes: 0 success, 2 validation, 3
//! infeasible/no-coverage, 4 numeric failure.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use anchorplan::cli::{cmd_feasibility, cmd_field, cmd_fit, cmd_optimize, cmd_simulate};
use anchorplan::config::ScenarioConfig;
use anchorplan::Result;

#[derive(Parser)]
#[command(
    name = "anchorplan",
    version,
    about = "Seafloor anchor-cluster deployment planning for AUV navigation"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct RunArgs {
    /// Scenario JSON; omitted means the built-in reference scenario.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory (created if missing).
    #[arg(long)]
    out: PathBuf,
    /// Override simulation.master_seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Override traversal.step_m.
    #[arg(long = "step-m")]
    step_m: Option<f64>,
}

#[derive(Subcommand)]
enum Command {
    /// Expected-CRLB field of one cluster on the traversal grid.
    Field(RunArgs),
    /// Sweep anchors-per-cluster candidates over the lambda1 grid.
    Optimize(RunArgs),
    /// Maximum serviceable region side versus total anchors.
    Feasibility(RunArgs),
    /// Seeded Monte Carlo voyages across the plan.
    Simulate(RunArgs),
    /// Fit divergence coefficients from a delta_p,variance_m2 CSV.
    Fit {
        /// Input error-series CSV.
        #[arg(long)]
        input: PathBuf,
        /// Output directory (created if missing).
        #[arg(long)]
        out: PathBuf,
    },
}

fn load(args: &RunArgs) -> Result<ScenarioConfig> {
    let mut cfg = match &args.config {
        Some(path) => ScenarioConfig::from_path(path)?,
        None => ScenarioConfig::default(),
    };
    if let Some(seed) = args.seed {
        cfg.simulation.master_seed = seed;
    }
    if let Some(step) = args.step_m {
        cfg.traversal.step_m = step;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn run() -> Result<()> {
    let cli = Cli::parse();
    match &cli.command {
        Command::Field(args) => cmd_field(&load(args)?, &args.out),
        Command::Optimize(args) => cmd_optimize(&load(args)?, &args.out),
        Command::Feasibility(args) => cmd_feasibility(&load(args)?, &args.out),
        Command::Simulate(args) => cmd_simulate(&load(args)?, &args.out),
        Command::Fit { input, out } => cmd_fit(input, out),
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
