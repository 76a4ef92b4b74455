//! CLI-level errors, split by exit code: parse and contract problems exit
//! with 2, detected invariant violations with 1.

use std::fmt;

#[derive(Debug)]
pub enum CliError {
    /// Malformed input or a misused operation; exit code 2.
    Parse(String),
    /// A mathematical check failed on valid input; exit code 1.
    Invariant(String),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Invariant(_) => 1,
            CliError::Parse(_) | CliError::Io(_) => 2,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Parse(m) => write!(f, "error: {m}"),
            CliError::Invariant(m) => write!(f, "invariant violation: {m}"),
            CliError::Io(m) => write!(f, "io error: {m}"),
        }
    }
}

impl From<liemod::Error> for CliError {
    fn from(e: liemod::Error) -> CliError {
        match e {
            liemod::Error::JacobiViolation { .. } | liemod::Error::NotFlat { .. } => {
                CliError::Invariant(e.to_string())
            }
            liemod::Error::InvariantViolation(_) => CliError::Invariant(e.to_string()),
            other => CliError::Parse(other.to_string()),
        }
    }
}
