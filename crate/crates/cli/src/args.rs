use std::path::PathBuf;

use clap::{Parser, Subcommand};
use twochild_core::montecarlo::SamplingMode;
use twochild_core::ratfunc::{parse_rational, Rational};
use twochild_core::RegimeKind;

/// A value of `r` together with the text it was written as.
#[derive(Clone, Debug, PartialEq)]
pub struct RArg {
    pub text: String,
    pub value: Rational,
}

fn parse_r(s: &str) -> Result<RArg, String> {
    let value = parse_rational(s.trim()).map_err(|e| e.to_string())?;
    Ok(RArg {
        text: s.trim().to_string(),
        value,
    })
}

fn parse_regime(s: &str) -> Result<RegimeKind, String> {
    s.parse()
}

fn parse_mode(s: &str) -> Result<SamplingMode, String> {
    s.parse()
}

#[derive(Parser, Debug)]
#[command(name = "twochild", version, about = "Exact probabilities for two-child family puzzles")]
pub struct Cli {
    /// Print machine-readable JSON instead of text
    #[arg(long, global = true)]
    pub json: bool,

    /// Decimal places (default 5; 4 for numeric joint tables)
    #[arg(long, global = true, value_name = "N", value_parser = clap::value_parser!(u8).range(0..=40))]
    pub digits: Option<u8>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Evaluate a query (read from stdin when omitted)
    Eval { query: Option<String> },

    /// Render one of the seven reference tables
    Table {
        #[arg(value_parser = clap::value_parser!(u8).range(1..=7))]
        id: u8,
        /// Evaluate the cells at this prevalence (p/q or decimal)
        #[arg(long, value_parser = parse_r)]
        r: Option<RArg>,
        /// Show expected counts in this many families
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        scale: Option<u64>,
        #[arg(long, value_name = "PATH")]
        csv: Option<PathBuf>,
    },

    /// Evaluate a query at several values of r
    Sweep {
        query: String,
        /// Comma-separated values of r
        #[arg(long, value_delimiter = ',', value_parser = parse_r, required_unless_present = "range", conflicts_with = "range")]
        r: Vec<RArg>,
        /// Evenly spaced values from START to END inclusive
        #[arg(long, num_args = 3, value_names = ["START", "END", "STEPS"])]
        range: Option<Vec<String>>,
        #[arg(long, value_name = "PATH")]
        csv: Option<PathBuf>,
    },

    /// Compare the correct unique-name table with the flawed chain-rule one
    Pitfall {
        #[arg(long, value_parser = parse_r)]
        r: Option<RArg>,
    },

    /// Check a conditional probability against a seeded simulation
    Verify {
        query: String,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Number of simulated families
        #[arg(long, default_value_t = 1_000_000, value_parser = clap::value_parser!(u64).range(1..))]
        n: u64,
        #[arg(long, value_parser = parse_r)]
        r: Option<RArg>,
        #[arg(long, value_parser = parse_regime)]
        regime: Option<RegimeKind>,
        #[arg(long, value_parser = parse_mode, default_value = "direct")]
        mode: SamplingMode,
        /// Worker threads (defaults to the available parallelism)
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..=1024))]
        workers: Option<u64>,
    },

    /// Walk through the classic questions and the named-girl variant
    Demo,
}
