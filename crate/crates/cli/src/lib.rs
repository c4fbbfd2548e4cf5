//! Config-driven front end that runs the decoherence experiments of
//! `subdeco-core` and writes CSV/JSON artifacts.

pub mod config;
pub mod error;
pub mod experiments;
pub mod output;

use std::path::PathBuf;

use clap::Parser;

pub use config::{Experiment, RunConfig};
pub use error::CliError;
pub use experiments::RunOutcome;

#[derive(Debug, Parser)]
#[command(name = "subdeco", version, about = "Phonon decoherence experiments for quantum-dot registers")]
pub struct Cli {
    /// Experiment to run.
    #[arg(value_enum)]
    pub experiment: Experiment,
    /// JSON run configuration.
    #[arg(long)]
    pub config: PathBuf,
    /// Output directory; overrides `output_dir` from the config.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Worker threads (default: all cores).
    #[arg(long)]
    pub threads: Option<usize>,
    /// Seed for randomised checks.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

/// Loads and validates the config, then runs the experiment on a dedicated
/// thread pool.
pub fn run(cli: &Cli) -> Result<RunOutcome, CliError> {
    let mut config = RunConfig::load(&cli.config)?;
    config.validate(cli.experiment)?;
    config.experiment = Some(cli.experiment);
    if cli.threads == Some(0) {
        return Err(CliError::Config("--threads must be at least 1".into()));
    }
    let out = cli
        .out
        .clone()
        .or_else(|| config.output_dir.clone())
        .unwrap_or_else(|| PathBuf::from("."));
    let out_dir = output::prepare_dir(&out)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.threads.unwrap_or(0))
        .build()
        .map_err(|e| CliError::Io(format!("thread pool: {e}")))?;
    let ctx = experiments::Context {
        config: &config,
        seed: cli.seed,
        out_dir: &out_dir,
    };
    pool.install(|| experiments::run(cli.experiment, &ctx))
}
