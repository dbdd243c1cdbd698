use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Coarse classification used by front ends to choose exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Argument,
    Numerical,
    Convergence,
    Resource,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("parameter out of domain: {0}")]
    Domain(String),

    #[error("numerical consistency violated: {0}")]
    Numerical(String),

    #[error("fit outside the linear-response regime: {0}; try a smaller temperature difference")]
    Regime(String),

    #[error(
        "no steady state after {steps} collisions (last window: max |dJ_h| = {last_max_delta:e}, \
         mean J_h = {last_mean_hot:e}, mean J_c = {last_mean_cold:e})"
    )]
    Convergence {
        steps: usize,
        last_max_delta: f64,
        last_mean_hot: f64,
        last_mean_cold: f64,
    },

    #[error("resource limit: {0}")]
    ResourceLimit(String),
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::InvalidArgument(_) | Error::DimensionMismatch { .. } | Error::Domain(_) => {
                ErrorKind::Argument
            }
            Error::Numerical(_) | Error::Regime(_) => ErrorKind::Numerical,
            Error::Convergence { .. } => ErrorKind::Convergence,
            Error::ResourceLimit(_) => ErrorKind::Resource,
        }
    }

    pub(crate) fn at_step(self, step: usize) -> Error {
        match self {
            Error::Numerical(msg) => Error::Numerical(format!("collision {step}: {msg}")),
            other => other,
        }
    }
}
