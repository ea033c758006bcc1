use thiserror::Error;

use crate::expr::ParseError;

/// Failures surfaced by the command line, each with its exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Parse(#[from] ParseError),
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Library(#[from] altbase::Error),
    #[error("i/o error: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        use altbase::Error as E;
        match self {
            CliError::Parse(_) | CliError::Usage(_) => 2,
            CliError::Library(E::SingularSystem { .. } | E::TruncationTooShallow { .. }) => 4,
            CliError::Library(E::SearchTooLarge { .. }) => 5,
            CliError::Library(_) => 3,
            CliError::Io(_) => 1,
        }
    }
}
