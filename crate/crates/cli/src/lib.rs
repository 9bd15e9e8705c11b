//! Command-line front end for `lcbound-core`.
//!
//! Subcommands evaluate the counting-rule bound for explicit specs or
//! network shapes, tabulate P1/P2 comparisons and figure grids, print the
//! blow-up ledger, and run the randomized agreement harness.

pub mod commands;
pub mod record;
pub mod spec_file;

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;
use thiserror::Error;

use lcbound_core::nn::NnError;
use lcbound_core::BoundError;

pub use record::ResultRecord;
pub use spec_file::SpecFile;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFICATION: i32 = 1;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_CAP: i32 = 3;
pub const EXIT_IO: i32 = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ErrorKind {
    Verification,
    Validation,
    CapExceeded,
    Io,
}

impl ErrorKind {
    pub fn exit_code(self) -> i32 {
        match self {
            ErrorKind::Verification => EXIT_VERIFICATION,
            ErrorKind::Validation => EXIT_VALIDATION,
            ErrorKind::CapExceeded => EXIT_CAP,
            ErrorKind::Io => EXIT_IO,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("{code}: {message}")]
pub struct CliError {
    pub kind: ErrorKind,
    pub code: &'static str,
    pub message: String,
}

impl CliError {
    pub fn validation(code: &'static str, message: impl Into<String>) -> Self {
        CliError {
            kind: ErrorKind::Validation,
            code,
            message: message.into(),
        }
    }

    pub fn io(message: impl Into<String>) -> Self {
        CliError {
            kind: ErrorKind::Io,
            code: "Io",
            message: message.into(),
        }
    }

    /// One-line JSON object written to stderr.
    pub fn to_json(&self) -> String {
        json!({"error": self.code, "message": self.message}).to_string()
    }
}

impl From<BoundError> for CliError {
    fn from(e: BoundError) -> Self {
        let kind = match e {
            BoundError::ShelfCapExceeded { .. } => ErrorKind::CapExceeded,
            _ => ErrorKind::Validation,
        };
        CliError {
            kind,
            code: e.code(),
            message: e.to_string(),
        }
    }
}

impl From<NnError> for CliError {
    fn from(e: NnError) -> Self {
        match e {
            NnError::Bound(inner) => inner.into(),
            NnError::InternalInconsistency { .. } => CliError {
                kind: ErrorKind::Verification,
                code: e.code(),
                message: e.to_string(),
            },
            other => CliError::validation(other.code(), other.to_string()),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Activation {
    Exp,
    Swish,
    Tanh,
    Poly,
    Custom,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum PointArg {
    #[value(name = "P1", alias = "p1")]
    P1,
    #[value(name = "P2", alias = "p2")]
    P2,
}

#[derive(Debug, Parser)]
#[command(
    name = "lcbound",
    version,
    about = "Exact upper bounds for local learning coefficients"
)]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Write output here instead of standard output.
    #[arg(long, global = true, value_name = "FILE")]
    pub out: Option<PathBuf>,
    /// Seed for randomized commands.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Largest H - H* scanned by `compare`.
    #[arg(long = "scan-max", global = true)]
    pub scan_max: Option<u64>,
    #[command(subcommand)]
    pub command: Command,
}

/// A spec file, or the same fields given inline.
#[derive(Debug, Clone, Args)]
pub struct SpecSource {
    /// JSON spec file (`-` for standard input).
    pub spec: Option<PathBuf>,
    #[arg(long, allow_negative_numbers = true)]
    pub r: Option<i64>,
    #[arg(long, allow_negative_numbers = true)]
    pub alpha: Option<i64>,
    #[arg(long, allow_negative_numbers = true)]
    pub beta: Option<i64>,
    /// Shelves as `m:n` pairs, e.g. `1:1,3:1,5:1`.
    #[arg(long, allow_hyphen_values = true)]
    pub shelves: Option<String>,
    /// Infinite tail after the listed shelves.
    #[arg(long, value_parser = ["exp", "swish", "odd", "arithmetic"])]
    pub tail: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    pub tail_start: Option<i64>,
    #[arg(long, allow_negative_numbers = true)]
    pub tail_step: Option<i64>,
    /// Inventory of each tail shelf (default 1).
    #[arg(long, allow_negative_numbers = true)]
    pub tail_n: Option<i64>,
}

#[derive(Debug, Clone, Args)]
pub struct NetworkArgs {
    #[arg(long = "N")]
    pub inputs: u64,
    #[arg(long = "H")]
    pub hidden: u64,
    #[arg(long = "M")]
    pub outputs: u64,
    #[arg(long = "Hstar")]
    pub true_hidden: u64,
    #[arg(long, value_enum)]
    pub activation: Activation,
    /// Comma-separated exponents for `poly` and `custom`.
    #[arg(long, value_delimiter = ',')]
    pub exponents: Option<Vec<u64>>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate the bound for a spec.
    Bound(SpecSource),
    /// Bound at P1 or P2 for a three-layer network.
    NnBound {
        #[command(flatten)]
        network: NetworkArgs,
        #[arg(long, value_enum)]
        point: PointArg,
    },
    /// Tabulate P1 against P2 over H - H* = 1..scan-max.
    Compare {
        #[arg(long = "N", default_value_t = 1)]
        inputs: u64,
        #[arg(long = "M")]
        outputs: u64,
        #[arg(long = "Hstar")]
        true_hidden: u64,
        #[arg(long, value_enum)]
        activation: Activation,
        #[arg(long, value_delimiter = ',')]
        exponents: Option<Vec<u64>>,
    },
    /// Grid of P1/P2 bounds for exp, swish and tanh.
    Figure {
        #[arg(long = "Hstar", default_value_t = 2)]
        true_hidden: u64,
        #[arg(long = "N", default_value_t = 1)]
        inputs: u64,
        #[arg(long = "M-list", value_delimiter = ',', default_value = "1,2,3,4,5")]
        outputs: Vec<u64>,
        /// Largest H (default H* + 40).
        #[arg(long = "H-max")]
        hidden_max: Option<u64>,
    },
    /// Blow-up candidates for a spec.
    Ledger(SpecSource),
    /// Randomized agreement check of the bound, oracle and ledger.
    Verify {
        #[arg(long, default_value_t = 500)]
        cases: usize,
        #[arg(long, default_value_t = 6)]
        max_shelves: usize,
    },
}

/// What a command produced and how the process should exit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub body: String,
    pub failure: Option<CliError>,
}

impl Outcome {
    pub fn ok(body: String) -> Self {
        Outcome {
            body,
            failure: None,
        }
    }
}

pub fn execute(cli: &Cli) -> Result<Outcome, CliError> {
    commands::dispatch(cli)
}

/// Runs a parsed command line, writing output and errors; returns the exit code.
pub fn run(cli: &Cli) -> i32 {
    let outcome = execute(cli).and_then(|outcome| {
        match &cli.out {
            Some(path) => fs::write(path, &outcome.body)
                .map_err(|e| CliError::io(format!("cannot write {}: {e}", path.display())))?,
            None => {
                let mut stdout = io::stdout().lock();
                stdout
                    .write_all(outcome.body.as_bytes())
                    .and_then(|_| stdout.flush())
                    .map_err(|e| CliError::io(format!("cannot write output: {e}")))?
            }
        }
        Ok(outcome)
    });
    let failure = match outcome {
        Ok(Outcome { failure: None, .. }) => return EXIT_OK,
        Ok(Outcome {
            failure: Some(f), ..
        }) => f,
        Err(e) => e,
    };
    eprintln!("{}", failure.to_json());
    failure.kind.exit_code()
}
