use thiserror::Error;

use crate::coeffs::LpError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("series shorter than memory: {len} observations with memory {memory}")]
    SeriesShorterThanMemory { len: usize, memory: usize },

    #[error("window exceeds sequence: tau = {tau} for a sequence of length {len}")]
    WindowExceedsSequence { tau: usize, len: usize },

    #[error("window too large: n = {n} training points with tau = {tau}")]
    WindowTooLarge { n: usize, tau: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("size guard exceeded: {0}")]
    SizeGuard(String),

    #[error("data error: {0}")]
    Data(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Lp(#[from] LpError),
}

impl Error {
    /// True for errors caused by the input data rather than by the configuration.
    pub fn is_data_error(&self) -> bool {
        matches!(self, Error::Data(_) | Error::Io(_))
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
}
