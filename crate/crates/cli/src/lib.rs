//! The `epr` command-line tool.
//!
//! [`run`] executes one parsed [`RunConfig`] and returns the process exit
//! code: 0 on success, 1 for invalid input (the diagnostic names the field),
//! 2 for numerical failures (the diagnostic names the operation).

mod commands;
mod inputs;

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use thiserror::Error;

pub use inputs::{load_observable, load_state};

#[derive(Debug, Clone, Parser)]
#[command(name = "epr", version, about = "Analyze EPR states of bipartite quantum systems")]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,

    /// Write the result here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    /// Relative commutator threshold for EPR and algebra-membership tests.
    #[arg(long = "tol-commutator", global = true)]
    pub tol_commutator: Option<f64>,

    /// Seed for randomized constructions.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// States are JSON files or one of `bohm2`, `maximal-d<k>`, `epr-group-<spec>`
/// (e.g. `epr-group-2x3`). Observables are JSON files or `pauli-x|y|z`.
#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Schmidt spectrum and multiplicities of a state.
    Analyze {
        #[arg(long)]
        state: String,
    },
    /// Whether a state is EPR for the given observables on the second factor.
    CheckEpr {
        #[arg(long)]
        state: String,
        #[arg(long = "obs", required = true)]
        obs: Vec<String>,
    },
    /// Build a state from weights, multiplicities and random blocks.
    Construct {
        #[arg(long, value_delimiter = ',', required = true)]
        lambdas: Vec<f64>,
        #[arg(long, value_delimiter = ',', required = true)]
        mults: Vec<usize>,
        #[arg(long)]
        dim1: Option<usize>,
        #[arg(long)]
        dim2: Option<usize>,
    },
    /// The first-factor observable predicted by one on the second factor.
    Predict {
        #[arg(long)]
        state: String,
        #[arg(long)]
        obs: String,
    },
    /// Joint distribution of A on the first factor and B on the second.
    Measure {
        #[arg(long)]
        state: String,
        /// Exactly two: A, then B.
        #[arg(long = "obs", required = true, num_args = 1)]
        obs: Vec<String>,
    },
    /// Perfect correlation tables: the spin pair, or position and momentum on a group.
    Bohm {
        #[arg(long)]
        group: Option<String>,
    },
    /// EPR states for position and momentum on a group with an internal spin.
    SpinExample {
        #[arg(long, default_value = "2")]
        group: String,
        #[arg(long = "spin-dim", default_value_t = 2)]
        spin_dim: usize,
        /// Density matrices in the observable schema; defaults to the maximally
        /// mixed state and one seeded random state.
        #[arg(long = "rho")]
        rho: Vec<String>,
    },
    /// Convergence of the renormalized grid pairing to the L² product.
    Limit {
        #[arg(long, value_delimiter = ',', default_value = "101,401,1601")]
        ns: Vec<usize>,
        #[arg(long, default_value = "gauss")]
        f: String,
        #[arg(long, default_value = "gauss")]
        g: String,
    },
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid `{field}`: {message}")]
    Validation { field: String, message: String },
    #[error("{operation} failed: {message}")]
    Numerical { operation: String, message: String },
}

impl CliError {
    pub fn invalid(field: &str, message: impl ToString) -> Self {
        CliError::Validation {
            field: field.into(),
            message: message.to_string(),
        }
    }

    /// Numerical core errors are attributed to `operation`, the rest to `field`.
    pub fn from_core(err: epr_core::Error, field: &str, operation: &str) -> Self {
        if err.is_numerical() {
            CliError::Numerical {
                operation: operation.into(),
                message: err.to_string(),
            }
        } else {
            CliError::invalid(field, err)
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation { .. } => 1,
            CliError::Numerical { .. } => 2,
        }
    }
}

/// Runs the command and writes its output; diagnostics go to standard error.
pub fn run(config: &RunConfig) -> i32 {
    let result = commands::execute(config).and_then(|text| write_output(config, &text));
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

/// The rendered output of a command, without writing it anywhere.
pub fn render(config: &RunConfig) -> Result<String, CliError> {
    commands::execute(config)
}

fn write_output(config: &RunConfig, text: &str) -> Result<(), CliError> {
    match &config.out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError::invalid("out", format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}
