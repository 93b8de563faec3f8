use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("integer overflow during exact elimination")]
    Overflow,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid level {level}: {reason}")]
    InvalidLevel { level: u64, reason: &'static str },
    #[error("division by zero in Q(zeta_{0})")]
    DivisionByZero(u64),
    #[error("{t} is not coprime to the level {level}")]
    NotCoprime { t: i64, level: u64 },
    #[error("incompatible levels {0} and {1}")]
    IncompatibleLevels(u64, u64),
    #[error("{ell} does not divide the level {level}")]
    PrimeNotDividing { ell: u64, level: u64 },
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("coset ({c}, {d}) is outside S^0 at level {level}")]
    NotInS0 { c: i64, d: i64, level: u64 },
    #[error("no S^0-supported preimage for a homology class at level {0}")]
    NoPreimage(u64),
    #[error("cusp subset is not a union of cusp classes: {0}")]
    InvalidCuspSubset(String),
    #[error("matrix is not in Gamma_0({level}): {detail}")]
    NotInGamma0 { level: u64, detail: String },
    #[error("{0} does not divide the lower-left entry")]
    NotDivisible(u64),
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("place matching failed: {0}")]
    PlaceMatching(String),
    #[error("unverified relation rejected: {0}")]
    FalseRelation(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
