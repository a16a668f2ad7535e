use ciwb_core::Error;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("{0}")]
    Io(#[from] std::io::Error),
    #[error("bad argument: {0}")]
    Argument(String),
    #[error(transparent)]
    Core(#[from] Error),
}

impl CliError {
    /// 2 for unreadable input or bad arguments, 3 for exhausted budgets, 1 otherwise.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Parse(_) | CliError::Io(_) | CliError::Argument(_) => 2,
            CliError::Core(Error::Parse { .. } | Error::InvalidRing(_) | Error::UnknownVariable(_) | Error::Fixture(_)) => 2,
            CliError::Core(e) if e.is_resource_limit() => 3,
            _ => 1,
        }
    }
}
