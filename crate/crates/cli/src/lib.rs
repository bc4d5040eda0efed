//! Experiment driver for `mobsum-core`: config parsing, command execution,
//! and atomic CSV/JSON artifacts with a checksummed manifest.

pub mod commands;
pub mod config;
pub mod output;

use std::io;
use std::path::{Path, PathBuf};

use thiserror::Error;

pub use config::{load_config, parse_config, CommandKind, Experiment, ExperimentConfig};
use output::{sha256_hex, unix_now, ArtifactSet, RunManifest};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("usage error: {0}")]
    Usage(String),
    #[error("resource guard: {0}")]
    Resource(String),
    #[error("I/O error: {0}")]
    Io(#[from] io::Error),
    #[error("internal consistency failure: {0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Internal(_) => 1,
            CliError::Config(_) | CliError::Usage(_) | CliError::Io(_) => 2,
            CliError::Resource(_) => 3,
        }
    }
}

#[derive(Clone, Debug)]
pub struct RunOptions {
    pub config: PathBuf,
    pub out: PathBuf,
    pub mu_cache: Option<PathBuf>,
    /// Overrides the config's thread count.
    pub threads: Option<usize>,
}

#[derive(Debug)]
pub struct Outcome {
    pub summary: Vec<String>,
    pub failures: Vec<String>,
    pub outputs: Vec<PathBuf>,
}

impl Outcome {
    pub fn exit_code(&self) -> i32 {
        if self.failures.is_empty() {
            0
        } else {
            1
        }
    }
}

#[cfg(feature = "parallel")]
fn with_threads<T: Send>(threads: usize, job: impl FnOnce() -> T + Send) -> Result<T, CliError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| CliError::Resource(format!("thread pool: {e}")))?;
    Ok(pool.install(job))
}

#[cfg(not(feature = "parallel"))]
fn with_threads<T: Send>(_threads: usize, job: impl FnOnce() -> T + Send) -> Result<T, CliError> {
    Ok(job())
}

/// Runs one parsed experiment without touching the filesystem (apart from
/// the optional Möbius cache).
pub fn execute(cfg: &ExperimentConfig, mu_cache: Option<&Path>) -> Result<commands::CommandOutput, CliError> {
    match &cfg.experiment {
        Experiment::VerifySpectral(c) => commands::verify_spectral(c),
        Experiment::SumScan(c) => commands::sum_scan(c, mu_cache),
        Experiment::WeilCheck(c) => commands::weil_check(c),
        Experiment::BszReport(c) => commands::bsz_report(c, mu_cache),
        Experiment::MobiusCheck(c) => commands::mobius_check(c),
    }
}

/// Loads the config, runs the command on a pool of the requested size and
/// commits the artifacts plus `manifest.json` into `opts.out`.
pub fn run(kind: CommandKind, opts: &RunOptions) -> Result<Outcome, CliError> {
    let started = unix_now();
    let (cfg, raw) = load_config(&opts.config, kind)?;
    let threads = opts.threads.unwrap_or(cfg.threads);
    if threads == 0 {
        return Err(CliError::Usage("--threads must be at least 1".into()));
    }
    let mu_cache = opts.mu_cache.as_deref();
    let result = with_threads(threads, || execute(&cfg, mu_cache))??;

    let mut artifacts = ArtifactSet::new(&opts.out);
    for (name, bytes) in result.files {
        artifacts.add(&name, bytes);
    }
    let manifest = RunManifest {
        tool: env!("CARGO_PKG_NAME"),
        version: env!("CARGO_PKG_VERSION"),
        command: kind.name(),
        config_sha256: sha256_hex(&raw),
        threads,
        started_unix: started,
        finished_unix: started,
        outputs: Vec::new(),
    };
    let outputs = artifacts.commit(manifest)?;
    Ok(Outcome {
        summary: result.summary,
        failures: result.failures,
        outputs,
    })
}
