use std::io;
use std::path::PathBuf;

use pend_nf_core::{DomainError, DynamicsError};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("cannot write {}: {source}", path.display())]
    Output { path: PathBuf, source: io::Error },
    #[error(transparent)]
    Domain(#[from] DomainError),
    #[error(transparent)]
    Dynamics(#[from] DynamicsError),
    #[error("{0} of {1} checks failed")]
    ChecksFailed(usize, usize),
}

impl CliError {
    pub fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }

    /// 1 for failed verification, 2 for everything the caller can fix.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::ChecksFailed(..) => 1,
            _ => 2,
        }
    }
}
