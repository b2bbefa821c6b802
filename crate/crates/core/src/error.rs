use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("point set is empty")]
    EmptyPointSet,

    #[error("points {first} and {second} coincide (distance {distance:e})")]
    CoincidentPoints {
        first: usize,
        second: usize,
        distance: f64,
    },

    #[error("point {index} lies outside the domain")]
    OutsideDomain { index: usize },

    #[error("non-finite value at index {index}")]
    NonFinite { index: usize },

    /// `pivot` is 1-based, following the LAPACK `potrf` convention.
    #[error("matrix is not positive definite (pivot {pivot}, value {value:e})")]
    NotPositiveDefinite { pivot: usize, value: f64 },

    #[error("rescaling denominator vanished at {point:?} (value {value:e})")]
    DenominatorVanished { point: Vec<f64>, value: f64 },

    #[error("fit failed for {kernel} with eps = {epsilon}: {source}")]
    Fit {
        kernel: String,
        epsilon: f64,
        #[source]
        source: Box<Error>,
    },

    #[error("patch {patch} (local n = {n_local}, cond = {cond:e}) failed: {source}")]
    PatchFit {
        patch: usize,
        n_local: usize,
        cond: f64,
        #[source]
        source: Box<Error>,
    },

    #[error("data point {index} is not covered by any patch")]
    Uncovered { index: usize },

    #[error("every evaluation point was flagged")]
    AllFlagged,

    #[error("csv: {0}")]
    Csv(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl From<csv::Error> for Error {
    fn from(err: csv::Error) -> Self {
        Error::Csv(err.to_string())
    }
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Csv(err.to_string())
    }
}

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
