use thiserror::Error;

/// Errors raised by the operator calculus and the fixture harness.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("non-finite coordinate at index {index}")]
    NonFinite { index: usize },

    #[error("empty point: dimension must be positive")]
    EmptyPoint,

    #[error("operator is not monotone: {0}")]
    NotMonotone(String),

    #[error("resolvent is not firmly nonexpansive (defect {defect:e})")]
    NotFirmlyNonexpansive { defect: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("operation requires paramonotone operators: {0}")]
    NotParamonotone(String),

    #[error("orthogonality hypothesis failed (defect {defect:e} > {tol:e})")]
    NotOrthogonal { defect: f64, tol: f64 },

    #[error("scaled resolvent unavailable for {0}")]
    ScaledResolventUnavailable(String),

    #[error("inconsistent halfspace intersection in Haugazeau step")]
    InconsistentHalfspaces,

    #[error("oracle failure: {0}")]
    Oracle(String),

    #[error("unknown fixture `{0}`")]
    UnknownFixture(String),

    #[error("suite `{suite}` is not applicable to fixture `{fixture}`: {reason}")]
    SuiteNotApplicable {
        suite: String,
        fixture: String,
        reason: String,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// True for errors caused by bad user input (unknown names, malformed
    /// arguments) rather than by a failed computation.
    pub fn is_usage(&self) -> bool {
        matches!(
            self,
            Error::UnknownFixture(_)
                | Error::SuiteNotApplicable { .. }
                | Error::InvalidArgument(_)
                | Error::DimensionMismatch { .. }
                | Error::NonFinite { .. }
                | Error::EmptyPoint
                | Error::Json(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
