use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid function: {0}")]
    InvalidFunction(String),

    #[error("dimension d = {0} is not supported")]
    UnsupportedDimension(usize),

    #[error("operator build failed: {0}")]
    BuildFailure(String),

    #[error("contract violation: {0}")]
    ContractViolation(String),

    #[error("dense solver failed: {0}")]
    Solver(String),

    #[error("rung R = {cutoff}: {source}")]
    Rung {
        cutoff: f64,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid_param(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}

pub(crate) fn check_dim(d: usize) -> Result<()> {
    if (1..=3).contains(&d) {
        Ok(())
    } else {
        Err(Error::UnsupportedDimension(d))
    }
}
