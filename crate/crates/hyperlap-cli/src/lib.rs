//! Command-line front end: argument definitions, dispatch and exit codes.

pub mod commands;
pub mod output;
pub use hyperlap::verify;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use hyperlap::Error;
use serde::Serialize;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_CONVERGENCE: i32 = 3;
pub const EXIT_STOCHASTIC: i32 = 4;

/// Environment variable capping the worker thread count.
pub const THREADS_ENV: &str = "HYPERLAP_THREADS";

#[derive(Debug, Parser)]
#[command(name = "hyperlap", version, about = "Spectral experiments on weighted hypergraphs")]
pub struct Cli {
    /// Base seed; every randomized component derives its own stream from it.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Directory receiving the JSON and CSV artifacts.
    #[arg(long, short, global = true, default_value = ".")]
    pub out: PathBuf,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Procedural minimizers and their discrepancy ratios.
    Spectral(SpectralArgs),
    /// Deterministic or noisy diffusion from a starting measure.
    Diffuse(DiffuseArgs),
    /// Sweep cut, exhaustive expansion and the Cheeger sandwich.
    Cut(CutArgs),
    /// Small-set expansion from k minimizers.
    Sse(SseArgs),
    /// Multi-way partition from k minimizers.
    Multiway(MultiwayArgs),
    /// Sparsest cut with demand pairs.
    Demands(DemandsArgs),
    /// Closed-form checks on the built-in reference hypergraphs.
    VerifyExamples,
}

/// Where the minimizer vectors come from.
#[derive(Clone, Debug, Args, Serialize)]
pub struct MinimizerArgs {
    /// Exhaustive oracle (at most 8 vertices).
    #[arg(long, conflicts_with_all = ["sdp", "vectors"])]
    pub oracle: bool,
    /// SDP relaxation with Gaussian rounding.
    #[arg(long, conflicts_with = "vectors")]
    pub sdp: bool,
    /// CSV of vectors in weighted space, one column per vector after a leading vertex column.
    #[arg(long)]
    pub vectors: Option<PathBuf>,
    /// Rounding trials per SDP solve.
    #[arg(long, default_value_t = hyperlap::spectral::ROUNDING_TRIALS)]
    pub trials: usize,
    /// Subgradient iterations per SDP restart.
    #[arg(long, default_value_t = 50_000)]
    pub sdp_iterations: usize,
    #[arg(long, default_value_t = 5)]
    pub sdp_restarts: usize,
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct SpectralArgs {
    pub file: PathBuf,
    #[arg(long, default_value_t = 2)]
    pub k: usize,
    #[command(flatten)]
    pub source: MinimizerArgs,
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct DiffuseArgs {
    pub file: PathBuf,
    #[arg(long, default_value_t = 5.0)]
    pub horizon: f64,
    #[arg(long, default_value_t = 0.01)]
    pub step: f64,
    /// Noise rate; zero gives the deterministic process.
    #[arg(long, default_value_t = 0.0)]
    pub eta: f64,
    /// Starting measure as comma-separated values; defaults to a unit mass on vertex 0.
    #[arg(long, value_delimiter = ',', conflicts_with = "slow_start")]
    pub start: Option<Vec<f64>>,
    /// Start from the slowly mixing distribution built from the second minimizer.
    #[arg(long)]
    pub slow_start: bool,
    /// ℓ₁ distance used for the mixing time and the cut precondition.
    #[arg(long, default_value_t = 0.01)]
    pub delta: f64,
    /// Also sweep the final state for a cut.
    #[arg(long)]
    pub cut: bool,
    #[command(flatten)]
    pub source: MinimizerArgs,
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct CutArgs {
    pub file: PathBuf,
    /// Vector (weighted space, comma-separated) to sweep instead of the second minimizer.
    #[arg(long, value_delimiter = ',')]
    pub vector: Option<Vec<f64>>,
    #[command(flatten)]
    pub source: MinimizerArgs,
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct SseArgs {
    pub file: PathBuf,
    #[arg(long)]
    pub k: usize,
    #[arg(long, default_value_t = 0.99)]
    pub beta: f64,
    /// Target failure probability δ of the round budget.
    #[arg(long, default_value_t = 0.01)]
    pub failure_probability: f64,
    #[command(flatten)]
    pub source: MinimizerArgs,
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct MultiwayArgs {
    pub file: PathBuf,
    #[arg(long)]
    pub k: usize,
    #[arg(long)]
    pub eps: f64,
    #[command(flatten)]
    pub source: MinimizerArgs,
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct DemandsArgs {
    pub file: PathBuf,
    /// Lines `source sink amount`.
    #[arg(long)]
    pub demands: PathBuf,
    /// Gaussian projections swept.
    #[arg(long, default_value_t = 16)]
    pub projections: usize,
    #[arg(long, default_value_t = 2)]
    pub restarts: usize,
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Convergence { .. } | Error::Divergence { .. } => EXIT_CONVERGENCE,
        Error::StochasticFailure { .. } => EXIT_STOCHASTIC,
        _ => EXIT_USAGE,
    }
}

/// Applies `HYPERLAP_THREADS` to the global pool. A second call is a no-op.
pub fn configure_threads() -> Result<(), String> {
    let Ok(raw) = std::env::var(THREADS_ENV) else { return Ok(()) };
    let n: usize = raw.trim().parse().map_err(|_| format!("{THREADS_ENV}={raw:?} is not a thread count"))?;
    if n == 0 {
        return Err(format!("{THREADS_ENV} must be positive"));
    }
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

/// Runs a parsed command line and returns the process exit code. Reports go to stdout,
/// diagnostics to stderr.
pub fn run(cli: Cli) -> i32 {
    if let Err(msg) = configure_threads() {
        eprintln!("error: {msg}");
        return EXIT_USAGE;
    }
    match commands::dispatch(&cli) {
        Ok(outcome) => {
            println!("{}", serde_json::to_string_pretty(&outcome.report).unwrap_or_default());
            for line in &outcome.diagnostics {
                eprintln!("{line}");
            }
            if outcome.passed {
                EXIT_OK
            } else {
                EXIT_VERIFY
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}
