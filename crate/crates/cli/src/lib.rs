//! Command-line front end: `eval`, `table`, `sweep`, `pitfall`, `verify`
//! and `demo`. [`run`] does all the work and reports the exit code, so the
//! binary only has to print.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::Parser;
use serde_json::Value;
use thiserror::Error;

mod args;
mod commands;
mod demo;

pub use args::{Cli, Command, RArg};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Domain(String),
    #[error("cannot write {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Domain(_) | CliError::Io { .. } => 1,
        }
    }

    pub(crate) fn domain(e: impl std::fmt::Display) -> Self {
        CliError::Domain(e.to_string())
    }
}

/// A rendered command result: text, its JSON twin, and optional CSV rows.
pub(crate) struct Report {
    pub text: String,
    pub json: Value,
    pub csv: Option<Csv>,
}

pub(crate) struct Csv {
    pub path: PathBuf,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Parses `args` (program name first) and executes the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.render().to_string();
            let (stdout, stderr) = if code == 0 {
                (rendered, String::new())
            } else {
                (String::new(), rendered)
            };
            return Outcome { code, stdout, stderr };
        }
    };
    let json = cli.json;
    match execute(cli).and_then(|report| {
        if let Some(csv) = &report.csv {
            write_csv(csv)?;
        }
        Ok(report)
    }) {
        Ok(report) => {
            let stdout = if json {
                let mut s = serde_json::to_string_pretty(&report.json).expect("JSON values serialize");
                s.push('\n');
                s
            } else {
                report.text
            };
            Outcome {
                code: 0,
                stdout,
                stderr: String::new(),
            }
        }
        Err(e) => Outcome {
            code: e.exit_code(),
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        },
    }
}

fn execute(cli: Cli) -> Result<Report, CliError> {
    let digits = cli.digits.map(usize::from);
    match cli.command {
        Command::Eval { query } => {
            let text = match query {
                Some(q) => q,
                None => {
                    let mut buf = String::new();
                    std::io::Read::read_to_string(&mut std::io::stdin(), &mut buf)
                        .map_err(|e| CliError::Usage(format!("cannot read stdin: {e}")))?;
                    buf
                }
            };
            if text.trim().is_empty() {
                return Err(CliError::Usage("no query given on the command line or stdin".into()));
            }
            commands::eval(&text, digits.unwrap_or(5))
        }
        Command::Table { id, r, scale, csv } => commands::table(id, r, scale, csv, digits),
        Command::Sweep { query, r, range, csv } => {
            let rs = match range {
                Some(range) => commands::parse_range(&range)?,
                None => r,
            };
            commands::sweep(&query, &rs, csv, digits.unwrap_or(5))
        }
        Command::Pitfall { r } => commands::pitfall(r, digits.unwrap_or(5)),
        Command::Verify {
            query,
            seed,
            n,
            r,
            regime,
            mode,
            workers,
        } => {
            let workers = workers.map_or_else(
                || std::thread::available_parallelism().map_or(1, |n| n.get()),
                |w| w as usize,
            );
            commands::verify(&query, seed, n, r, regime, mode, workers, digits.unwrap_or(5))
        }
        Command::Demo => demo::demo(digits.unwrap_or(5)),
    }
}

fn write_csv(csv: &Csv) -> Result<(), CliError> {
    let io = |path: &Path, source: std::io::Error| CliError::Io {
        path: path.to_path_buf(),
        source,
    };
    let mut w = csv::Writer::from_path(&csv.path).map_err(|e| io(&csv.path, e.into()))?;
    w.write_record(&csv.header).map_err(|e| io(&csv.path, e.into()))?;
    for row in &csv.rows {
        w.write_record(row).map_err(|e| io(&csv.path, e.into()))?;
    }
    w.flush().map_err(|e| io(&csv.path, e))
}
