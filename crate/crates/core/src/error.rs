use thiserror::Error;

/// Errors raised by the toolkit. Each variant names the violated invariant.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not Hermitian (max asymmetry {0:e})")]
    NotHermitian(f64),

    #[error("matrix is not positive semidefinite (min eigenvalue {0:e})")]
    NotPsd(f64),

    #[error("trace is not 1 (got {0})")]
    BadTrace(f64),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimMismatch { expected: usize, got: usize },

    #[error("problem too large: {0}")]
    TooLarge(String),

    #[error("overlap {0} outside [0, 1]")]
    BadOverlap(f64),

    #[error("bad parameters: {0}")]
    BadParams(String),

    #[error("leaked pattern has zero prior probability")]
    ZeroMass,

    #[error("row marginal is not uniform (max deviation {0:e})")]
    NonUniformPrior(f64),

    #[error("outcome {0:?} has zero probability")]
    ZeroMassOutcome(String),

    #[error("residual ensemble has {0} keys, expected 2")]
    NotBinaryResidual(usize),

    #[error("seed has {got} bits, expected {expected}")]
    BadSeedLength { expected: usize, got: usize },

    #[error("bad shape: {0}")]
    BadShape(String),

    #[error("value {0} out of range: {1}")]
    BadRange(f64, String),

    #[error("invalid distribution: {0}")]
    BadDistribution(String),

    #[error("invalid POVM: {0}")]
    BadPovm(String),

    #[error("parse error: {0}")]
    ParseError(String),

    #[error("csv: {0}")]
    Csv(String),
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Csv(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
