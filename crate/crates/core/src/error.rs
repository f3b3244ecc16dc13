use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("requested window [{req_lo}, {req_hi}] exceeds truncation window [{lo}, {hi}]")]
    WindowExceedsTruncation { req_lo: i64, req_hi: i64, lo: i64, hi: i64 },
    #[error("degree violation: {0}")]
    DegreeViolation(String),
    #[error("object {0} has no designated strict unit")]
    MissingUnit(String),
    #[error("category already carries strict units")]
    AlreadyUnital,
    #[error("truncation too small: {0}")]
    TruncationTooSmall(String),
    #[error("unbounded input: {0}")]
    UnboundedInput(String),
    #[error("map is not a chain map: {0}")]
    NotAChainMap(String),
    #[error("element is not a cycle: {0}")]
    NotACycle(String),
    #[error("trace has wrong degree: {0}")]
    DegreeMismatch(String),
    #[error("identity violated: {0}")]
    IdentityViolated(String),
    #[error("invalid input: {0}")]
    Input(String),
}

pub type Result<T> = std::result::Result<T, Error>;
