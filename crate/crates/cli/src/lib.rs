//! File formats, generation and batch auditing behind the `latesched` binary.

pub mod generate;
pub mod instance_file;
pub mod report;
pub mod run;

use std::fmt;
use std::path::PathBuf;

use thiserror::Error;

pub use generate::{gen_random, BadParams, GenParams};
pub use instance_file::{parse_instance, InstanceFile, ParsedInstance, SchemaError};
pub use report::{ReportRow, Status};
pub use run::{compare_corpus, resolve, solve, CompareOutcome, Resolved, Settings, SolveOutput};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, clap::ValueEnum)]
pub enum Scenario {
    /// Plain maximum lateness.
    P0,
    /// Maximum lateness with a common deadline.
    Deadline,
    /// Lateness/makespan frontier.
    Pareto,
    /// Machine non-availability window.
    Mna,
    /// Operator non-availability window.
    Ona,
}

impl Scenario {
    pub fn as_str(self) -> &'static str {
        match self {
            Scenario::P0 => "p0",
            Scenario::Deadline => "deadline",
            Scenario::Pareto => "pareto",
            Scenario::Mna => "mna",
            Scenario::Ona => "ona",
        }
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

pub mod exit {
    pub const SUCCESS: i32 = 0;
    pub const FAILURE: i32 = 1;
    pub const INFEASIBLE: i32 = 2;
    pub const GUESS_BUDGET: i32 = 3;
    pub const SCHEMA: i32 = 4;
    pub const RATIO_VIOLATION: i32 = 5;
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Schema { path: PathBuf, source: SchemaError },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{0}")]
    Usage(String),
    #[error("no schedule meets the deadline")]
    Infeasible,
    #[error(transparent)]
    Solver(#[from] latesched_core::Error),
    #[error(transparent)]
    Generate(#[from] BadParams),
    #[error("{0} instance(s) exceed the approximation ratio")]
    RatioViolation(usize),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Schema { .. } => exit::SCHEMA,
            CliError::Infeasible => exit::INFEASIBLE,
            CliError::Solver(latesched_core::Error::GuessBudgetExceeded { .. }) => {
                exit::GUESS_BUDGET
            }
            CliError::RatioViolation(_) => exit::RATIO_VIOLATION,
            _ => exit::FAILURE,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>) -> impl FnOnce(std::io::Error) -> CliError {
        let path = path.into();
        move |source| CliError::Io { path, source }
    }
}
