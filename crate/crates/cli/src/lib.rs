//! Batch front end: parses algebroid files, runs the checkers, builds
//! truncations and runs the identity suites, producing deterministic text or
//! JSON reports.

pub mod commands;
pub mod input;
pub mod report;

use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use commands::run;
pub use input::{parse_input, ParsedInput};
pub use report::{CheckEntry, JobReport, Status};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Window(String),
    #[error("{0}")]
    Internal(String),
}

impl From<vertex_algebroid::error::Error> for CliError {
    fn from(e: vertex_algebroid::error::Error) -> Self {
        use vertex_algebroid::error::Error as E;
        match e {
            E::Window(m) => CliError::Window(m),
            E::Internal(m) => CliError::Internal(m),
            E::Input(m) => CliError::Input(m),
            other => CliError::Internal(other.to_string()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Check,
    Build,
    Twist,
    Verify,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Text,
    Json,
}

/// One invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JobSpec {
    pub command: Command,
    pub input: PathBuf,
    /// Degrees `0..=max_degree` in units of `1/T`.
    pub max_degree: i64,
    pub fiber: usize,
    /// Jacobi indices range over `-grid..=grid`; a negative value gives an
    /// empty grid.
    pub grid: i64,
    pub format: Format,
    pub seed: u64,
    /// Grids with more points than this are sampled.
    pub sample_limit: usize,
    pub dump_basis: bool,
}

impl JobSpec {
    pub fn new(command: Command, input: impl Into<PathBuf>, max_degree: i64) -> Self {
        Self {
            command,
            input: input.into(),
            max_degree,
            fiber: 0,
            grid: 2,
            format: Format::Text,
            seed: 0,
            sample_limit: 729,
            dump_basis: false,
        }
    }
}

/// Runs the job and renders the report in the requested format.
pub fn execute(job: &JobSpec) -> (String, i32) {
    let report = run(job);
    let text = match job.format {
        Format::Text => report.render_text(),
        Format::Json => report.to_json(),
    };
    (text, report.exit_code)
}
