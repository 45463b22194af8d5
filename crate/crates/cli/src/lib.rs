//! Command-line front end for `ergotime`: vector specs, per-query reports and
//! verification sweeps.

pub mod cli;
pub mod commands;
pub mod spec;
pub mod verify;

use std::fmt;

/// Process exit codes.
pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Clone)]
pub enum CliError {
    /// Bad input or a violated precondition.
    Input(String),
    /// A theorem hypothesis does not hold for the given input.
    Hypothesis(String),
    /// A theorem-backed check failed; points at an implementation bug.
    Check(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) | CliError::Hypothesis(_) => EXIT_USAGE,
            CliError::Check(_) => EXIT_CHECK_FAILED,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(m) => write!(f, "error: {m}"),
            CliError::Hypothesis(m) => write!(f, "error: hypothesis violated: {m}"),
            CliError::Check(m) => write!(f, "check failed: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<ergotime::Error> for CliError {
    fn from(e: ergotime::Error) -> Self {
        match e {
            ergotime::Error::PropositionViolation(_) => CliError::Check(e.to_string()),
            ergotime::Error::Hypothesis(m) => CliError::Hypothesis(m),
            _ => CliError::Input(e.to_string()),
        }
    }
}
