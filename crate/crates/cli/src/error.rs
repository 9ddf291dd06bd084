use std::io;

use thiserror::Error;

pub type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] bcp_core::Error),
    #[error("prime cache {path}: {field}: {detail}")]
    Cache { path: String, field: &'static str, detail: String },
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] io::Error),
}

impl CliError {
    /// The reader of our output went away; not worth reporting.
    pub fn is_broken_pipe(&self) -> bool {
        let io = match self {
            CliError::Io(e) => Some(e),
            CliError::Csv(e) => match e.kind() {
                csv::ErrorKind::Io(e) => Some(e),
                _ => None,
            },
            _ => None,
        };
        io.is_some_and(|e| e.kind() == io::ErrorKind::BrokenPipe)
    }

    /// 2 for bad input, 1 for everything that failed while running.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Core(e) => match e {
                bcp_core::Error::Domain { .. }
                | bcp_core::Error::RhoDomain { .. }
                | bcp_core::Error::Capacity { .. }
                | bcp_core::Error::NotCoprime { .. }
                | bcp_core::Error::NotPrime(_)
                | bcp_core::Error::Precondition(_) => 2,
                bcp_core::Error::Empty(_) => 1,
            },
            _ => 1,
        }
    }
}
