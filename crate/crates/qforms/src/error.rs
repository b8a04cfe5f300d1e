use crate::series::SeriesError;
use thiserror::Error;

/// Crate-wide error. Every variant carries a machine-readable reason string
/// through its `Display` form.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error("invalid argument: {0}")]
    Invalid(String),
    #[error("r = {0} is not in the coset N/2 + Z")]
    NotInCoset(String),
    #[error("even M required")]
    OddM,
    #[error("singular system: {0}")]
    SingularSystem(String),
    #[error("determinant ratio is not constant up to the truncation")]
    NonConstantRatio,
    #[error("Hankel determinant vanished")]
    ZeroDeterminant,
    #[error("residual is not zero: {0}")]
    ResidualNonzero(String),
    #[error("numerical failure: {0}")]
    Numeric(String),
    #[error("periodic sequence has nonzero mean value")]
    MeanValueNonzero,
    #[error("root-of-unity route unavailable: {0}")]
    RouteUnavailable(String),
    #[error("io: {0}")]
    Io(String),
    #[error("cache version mismatch: found {found}, expected {expected}")]
    VersionMismatch { found: u16, expected: u16 },
    #[error("cache checksum mismatch")]
    Checksum,
}

pub type Result<T> = std::result::Result<T, Error>;
