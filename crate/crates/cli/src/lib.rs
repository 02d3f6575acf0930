//! Command-line driver for the barrier lab.
//!
//! Every subcommand reads a scenario file, writes its artifacts under the
//! output directory and prints a summary. Exit codes: 0 success, 1 bad
//! configuration or I/O, 2 a numerical guard tripped, 64 usage error.

pub mod commands;
pub mod config;
pub mod output;
pub mod source;

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use thiserror::Error;

use config::{parse_times, ConfigError, RunConfig};

pub const EXIT_CONFIG: i32 = 1;
pub const EXIT_NUMERICAL: i32 = 2;
pub const EXIT_USAGE: i32 = 64;

/// Environment variable fixing the size of the worker pool.
pub const THREADS_VAR: &str = "BARRIER_THREADS";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Config { path: PathBuf, source: ConfigError },
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] barrierlab_core::Error),
    #[error("{THREADS_VAR}: {0}")]
    Threads(String),
}

impl CliError {
    pub fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.to_path_buf(),
            source,
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Core(e) if e.is_numerical_guard() => EXIT_NUMERICAL,
            _ => EXIT_CONFIG,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "barrierlab", version, about = "Wave packets above a rectangular barrier")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Closed-form amplitudes over the momentum sweep.
    Amplitudes(Common),
    /// Stationary-phase delays and peak trajectories.
    Spm(Common),
    /// Synthesized snapshots for one packet source.
    Evolve(Common),
    /// Truncated bounce series and its individual terms.
    Series(Common),
    /// Crank-Nicolson snapshots.
    Oracle(Common),
    /// Crank-Nicolson against the synthesized packet.
    Compare(Common),
    /// Unitarity, probability partition and norm drift.
    Conservation(Common),
}

#[derive(Debug, Args)]
struct Common {
    /// Scenario file (`key = value` lines).
    #[arg(long)]
    config: PathBuf,
    /// Comma-separated snapshot times, overriding the file.
    #[arg(long)]
    times: Option<String>,
    /// Number of bounce terms, overriding the file.
    #[arg(long)]
    terms: Option<usize>,
    /// Output directory, overriding the file.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Packet source: closed, incoming, reflected, series[:N] or term:F:N.
    #[arg(long)]
    source: Option<String>,
}

impl Common {
    fn load(&self) -> Result<RunConfig, CliError> {
        let text = std::fs::read_to_string(&self.config).map_err(|e| CliError::io(&self.config, e))?;
        let mut config = config::parse(&text).map_err(|source| CliError::Config {
            path: self.config.clone(),
            source,
        })?;
        if let Some(times) = &self.times {
            config.scenario.times =
                parse_times(times).ok_or_else(|| CliError::Usage(format!("--times: cannot parse `{times}`")))?;
        }
        if let Some(terms) = self.terms {
            config.scenario.series_terms = terms;
        }
        if let Some(out) = &self.out {
            config.out_dir = out.clone();
        }
        if let Some(spec) = &self.source {
            config.source = source::parse_source(spec, config.scenario.series_terms)
                .ok_or_else(|| CliError::Usage(format!("--source: unknown source `{spec}`")))?;
        }
        config.scenario.validate()?;
        Ok(config)
    }
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(value) = std::env::var(THREADS_VAR) else {
        return Ok(());
    };
    let threads: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&n| n >= 1)
        .ok_or_else(|| CliError::Threads(format!("expected a positive integer, got `{value}`")))?;
    // A second call in the same process finds the pool already built.
    if rayon::ThreadPoolBuilder::new().num_threads(threads).build_global().is_err() {
        log::debug!("worker pool already initialised");
    }
    Ok(())
}

fn dispatch(command: Command) -> Result<String, CliError> {
    configure_threads()?;
    match command {
        Command::Amplitudes(c) => commands::amplitudes(&c.load()?),
        Command::Spm(c) => commands::spm(&c.load()?),
        Command::Evolve(c) => commands::evolve(&c.load()?),
        Command::Series(c) => commands::series(&c.load()?),
        Command::Oracle(c) => commands::oracle(&c.load()?),
        Command::Compare(c) => commands::compare_solvers(&c.load()?),
        Command::Conservation(c) => commands::conservation(&c.load()?),
    }
}

/// Runs one invocation and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { 0 };
        }
    };
    match dispatch(cli.command) {
        Ok(summary) => {
            print!("{summary}");
            0
        }
        Err(e) => {
            eprintln!("barrierlab: {e}");
            e.exit_code()
        }
    }
}
