use thiserror::Error;

use crate::parser::ParseError;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Precondition(#[from] umbra_core::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Parse(_) | CliError::Usage(_) => 2,
            CliError::Precondition(_) => 3,
        }
    }
}
