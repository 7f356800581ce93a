//! `slh`: validation, distances, oracle cross-checks and convergence
//! experiments for SLH models.
//!
//! Exit status: 0 success, 2 parse or usage error, 3 validation failure,
//! 4 numerical breakdown. Failures print a JSON error record on stderr.

mod commands;
mod failure;
mod inputs;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

use failure::{Failure, Outcome};

#[derive(Debug, Parser)]
#[command(name = "slh", version, about = "SLH model validation and convergence experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    options: Options,
}

#[derive(Clone, Copy, Debug, Subcommand)]
pub enum Command {
    /// Check unitarity of S and Hermiticity of H for a model document.
    Validate,
    /// Distance between the unitaries of models `a` and `b` on a state.
    Distance,
    /// Compare the semigroup distance with the collision-model integrator.
    OracleCheck,
    /// Strong-squeezing family indexed by the squeezing strength.
    Squeezing,
    /// Faraday-rotation family.
    Faraday,
    /// Local asymptotic normality family.
    Lan,
    /// Virtual-rotation family with `δφ = φ₀/k`.
    VirtualWork,
}

#[derive(Clone, Debug, Args)]
pub struct Options {
    /// JSON input document.
    #[arg(long, global = true)]
    pub input: Option<PathBuf>,
    /// Result file; a `.config.json` sidecar is written next to it. Defaults to stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Time horizon. Defaults to the horizon of the input state, or 1.
    #[arg(long, global = true)]
    pub t: Option<f64>,
    /// Comma-separated family indices, strictly increasing.
    #[arg(long, global = true, value_delimiter = ',')]
    pub ks: Vec<f64>,
    /// Cross-check the smallest index with the collision integrator.
    #[arg(long, global = true)]
    pub oracle: bool,
    /// Collision integrator step (implies --oracle).
    #[arg(long, global = true)]
    pub oracle_dt: Option<f64>,
    /// Fock levels per channel in each slice (implies --oracle).
    #[arg(long, global = true)]
    pub oracle_dnoise: Option<usize>,
    /// Tolerance for unitarity and Hermiticity checks.
    #[arg(long, global = true, default_value_t = 1e-9)]
    pub tol: f64,
}

fn configure_threads() -> Outcome<()> {
    let Ok(raw) = std::env::var("SLH_NUM_THREADS") else {
        return Ok(());
    };
    let threads: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Failure::usage(format!("SLH_NUM_THREADS must be a positive integer, got {raw:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| Failure::usage(format!("thread pool: {e}")))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            let f = Failure::usage(e.kind().to_string());
            eprintln!("{}", f.record());
            return ExitCode::from(f.status);
        }
    };
    if !(cli.options.tol > 0.0 && cli.options.tol.is_finite()) {
        let f = Failure::usage(format!("--tol must be positive, got {}", cli.options.tol));
        eprintln!("{}", f.record());
        return ExitCode::from(f.status);
    }
    match configure_threads().and_then(|_| commands::run(cli.command, &cli.options)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("{}", f.record());
            ExitCode::from(f.status)
        }
    }
}
