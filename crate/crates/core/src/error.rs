use thiserror::Error;

use crate::ncpoly::ParseError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Every failure the engine can report.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("cap-exceeded: size {requested} is above the configured cap {cap}")]
    CapExceeded { requested: usize, cap: usize },

    #[error("dimension-mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("invalid-partition: {0}")]
    InvalidPartition(String),

    #[error("crossing: interleaved union is not noncrossing")]
    Crossing,

    #[error("odd-size: {0} is not even")]
    OddSize(usize),

    #[error("non-invertible: leading entry is zero")]
    NonInvertible,

    #[error("zero-trace: compression parameter must be nonzero")]
    ZeroTrace,

    #[error("not-even: variable has a nonvanishing odd cumulant")]
    NotEven,

    #[error("bad-index: variable index {index} out of range for {len} variables")]
    BadIndex { index: usize, len: usize },

    #[error("unknown-distribution: {0}")]
    UnknownDistribution(String),

    #[error("precondition: {0}")]
    Precondition(String),

    #[error("inconsistent: {0}")]
    Inconsistent(String),

    #[error(transparent)]
    Parse(#[from] ParseError),
}

impl Error {
    /// Short machine-readable tag, identical to the prefix of the display form.
    pub fn code(&self) -> &'static str {
        match self {
            Error::CapExceeded { .. } => "cap-exceeded",
            Error::DimensionMismatch { .. } => "dimension-mismatch",
            Error::InvalidPartition(_) => "invalid-partition",
            Error::Crossing => "crossing",
            Error::OddSize(_) => "odd-size",
            Error::NonInvertible => "non-invertible",
            Error::ZeroTrace => "zero-trace",
            Error::NotEven => "not-even",
            Error::BadIndex { .. } => "bad-index",
            Error::UnknownDistribution(_) => "unknown-distribution",
            Error::Precondition(_) => "precondition",
            Error::Inconsistent(_) => "inconsistent",
            Error::Parse(e) => e.code(),
        }
    }
}

pub(crate) fn check_dims(left: usize, right: usize) -> Result<()> {
    if left == right {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { left, right })
    }
}
