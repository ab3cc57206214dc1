//! Command-line runner for muntzlab checks.
//!
//! Every subcommand writes a [`report::CheckReport`] as JSON (to `--json` or
//! stdout) and optionally plot rows to `--csv`. Exit codes: 0 when the check
//! passes, 2 when it fails, 1 on input errors.

use std::path::Path;
use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;
use thiserror::Error;

pub mod args;
pub mod commands;
pub mod report;
pub mod suite;

use args::{Cli, Command};
use report::{CheckReport, ReportBody, Status, TOOL_VERSION};

pub const SEED_ENV: &str = "MUNTZLAB_SEED";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {message}")]
    Input { path: String, message: String },

    #[error("{path}: {source}")]
    Spec { path: String, source: muntzlab::Error },

    #[error("invalid argument: {0}")]
    Argument(String),

    #[error(transparent)]
    Core(#[from] muntzlab::Error),

    #[error("cannot write {path}: {message}")]
    Output { path: String, message: String },

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

impl CliError {
    pub(crate) fn spec(path: &Path, source: muntzlab::Error) -> Self {
        CliError::Spec {
            path: path.display().to_string(),
            source,
        }
    }
}

/// The `--seed` value unless `MUNTZLAB_SEED` is set.
pub fn effective_seed(flag: u64, env: Option<&str>) -> Result<u64, CliError> {
    match env {
        Some(text) => text
            .trim()
            .parse()
            .map_err(|_| CliError::Argument(format!("{SEED_ENV} must be an unsigned integer, got {text:?}"))),
        None => Ok(flag),
    }
}

/// Runs one parsed command and assembles its report and CSV rows.
pub fn execute(command: &Command, seed: u64) -> Result<(CheckReport, Vec<report::CsvRow>), CliError> {
    let start = Instant::now();
    let outcome = match command {
        Command::Spectrum(a) => commands::spectrum(a),
        Command::Decoupling(a) => commands::decoupling(a, seed),
        Command::Kernel(a) => commands::kernel(a),
        Command::Bernstein(a) => commands::bernstein(a, seed),
        Command::Embedding(a) => commands::embedding(a, seed),
        Command::Classify(a) => commands::classify(a),
        Command::Schur(a) => commands::schur(a),
        Command::All(a) => suite::all(a.trials, seed),
    }?;
    let report = CheckReport {
        body: ReportBody {
            check_name: command.name().to_string(),
            tool_version: TOOL_VERSION.to_string(),
            seed,
            input_digests: outcome.input_digests,
            parameters: outcome.parameters,
            results: outcome.results,
            status: outcome.status.unwrap_or(Status::Pass),
        },
        wall_time_ms: start.elapsed().as_millis() as u64,
    };
    Ok((report, outcome.rows))
}

fn run_command(cli: &Cli) -> Result<Status, CliError> {
    let out = cli.command.output();
    let env = std::env::var(SEED_ENV).ok();
    let seed = effective_seed(out.seed, env.as_deref())?;
    let (report, rows) = execute(&cli.command, seed)?;
    if let Some(path) = &out.csv {
        report::write_csv(path, &rows)?;
    }
    match &out.json {
        Some(path) => report::write_json(path, &report)?,
        None => println!("{}", report.to_json()?),
    }
    eprintln!(
        "{}: {} ({} ms)",
        report.body.check_name,
        match report.body.status {
            Status::Pass => "pass",
            Status::Fail => "FAIL",
        },
        report.wall_time_ms
    );
    Ok(report.body.status)
}

/// Parses `args` and runs the command, returning the process exit code.
pub fn run<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run_command(&cli) {
        Ok(Status::Pass) => ExitCode::SUCCESS,
        Ok(Status::Fail) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
