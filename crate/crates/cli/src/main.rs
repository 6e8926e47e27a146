//! `stochmap` — run simulations, λ sweeps, and tail fits of the capped
//! random affine wealth/opinion map from a JSON config, emitting CSV
//! histograms and JSON summaries that are byte-identical across runs with
//! the same config and seed.

mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::CommonArgs;

const EXIT_CONFIG: u8 = 2;
const EXIT_IO: u8 = 3;

/// Errors split by exit code: 2 for config/validation, 3 for I/O.
#[derive(Debug)]
pub enum CliError {
    Config(String),
    Io(String),
}

impl CliError {
    /// Core-library errors surface as validation failures.
    fn from_validation(e: stochmap::Error) -> Self {
        CliError::Config(e.to_string())
    }
}

#[derive(Parser)]
#[command(
    name = "stochmap",
    version,
    about = "Monte Carlo engine and analytics for a capped random affine wealth/opinion map",
    after_help = "\
CONFIG (JSON, unknown keys rejected):
  regime.tag          skewed_independent | skewed_coupled | power_law | opinion | gibrat
  regime.lambda       savings/conviction parameter in [0, 1] (omit for gibrat or populations)
  regime.n            additive exponent, power_law only (-100 <= n <= 0)
  plan.seed           required u64
  plan.burn_in        default 10000        plan.samples   default 100000
  plan.stride         default 1            plan.replicas  default 1
  population.size     optional agent count
  population.scheme   {kind: constant, value} | {kind: uniform_random, lo, hi}
                      | {kind: deterministic_ramp, lambda_max}
  analytics.histogram_bins  default 100
  analytics.binning         linear (default) | log
  analytics.fit_method      hill (default) | loglog_regression
  analytics.xmin_quantile   default 0.9 (or analytics.xmin_fixed)
  analytics.sweep           {grid_start, grid_stop, grid_step, lyapunov_draws (default 1e7)}
  output.dir                default \"out\"  output.samples_file  optional

Exit codes: 0 success, 2 config/validation error, 3 I/O error."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct RunArgs {
    /// Path to the JSON run configuration.
    #[arg(long)]
    config: PathBuf,
    /// Override the config seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory (overrides output.dir).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads (0 = auto).
    #[arg(long, default_value_t = 0)]
    threads: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Run the configured regime and write hist.csv + summary.json.
    Simulate(RunArgs),
    /// Sweep λ over a grid and write sweep.csv + sweep.json.
    Sweep(RunArgs),
    /// Fit a power-law tail to a file of samples (one per line); writes
    /// fit.json and prints it.
    Fit {
        /// Samples file, one value per line.
        input: PathBuf,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Print a closed-form reference value with its formula.
    Oracle {
        /// One of: mean_skewed, variance_independent, variance_coupled,
        /// mean_power, tail_exponent, mean_log_one_plus_eps,
        /// critical_lambda.
        name: String,
        /// Positional numeric parameters for the named value.
        #[arg(allow_negative_numbers = true)]
        params: Vec<f64>,
    },
}

fn configure(run: &RunArgs) -> Result<CommonArgs, CliError> {
    stochmap::configure_threads(run.threads)
        .map_err(|e| CliError::Config(format!("--threads: {e}")))?;
    Ok(CommonArgs {
        config: run.config.clone(),
        seed: run.seed,
        out: run.out.clone(),
    })
}

fn run() -> Result<(), CliError> {
    match Cli::parse().command {
        Command::Simulate(run) => commands::cmd_simulate(&configure(&run)?),
        Command::Sweep(run) => commands::cmd_sweep(&configure(&run)?),
        Command::Fit { input, run } => commands::cmd_fit(&configure(&run)?, &input),
        Command::Oracle { name, params } => commands::cmd_oracle(&name, &params),
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Config(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_CONFIG)
        }
        Err(CliError::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_IO)
        }
    }
}
