use std::path::PathBuf;

use qcollide::ErrorKind;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid configuration: {0}")]
    Validation(String),

    #[error(transparent)]
    Core(#[from] qcollide::Error),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{}: {source}", path.display())]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },

    #[error("self-check failed: {0}")]
    SelfCheck(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Parse(_) => 2,
            CliError::Validation(_) => 3,
            CliError::Core(e) => match e.kind() {
                ErrorKind::Argument => 3,
                ErrorKind::Convergence => 4,
                ErrorKind::Resource => 5,
                ErrorKind::Numerical => 6,
            },
            CliError::SelfCheck(_) => 6,
            CliError::Io { .. } | CliError::Csv { .. } => 1,
        }
    }
}
