use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is not Hermitian (max |A - A^dagger| = {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("dimension mismatch in {context}: expected {expected}, found {found}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("invalid density matrix: {0}")]
    InvalidState(String),

    #[error("invalid probability distribution: {0}")]
    InvalidDistribution(String),

    #[error("probability {0} outside [0, 1]")]
    ProbabilityOutOfRange(f64),

    #[error("observable has a degenerate spectrum; maximal overlap is undefined")]
    DegenerateObservable,

    #[error("conditioning outcome {outcome} has probability {probability:e}")]
    ZeroProbabilityOutcome { outcome: usize, probability: f64 },

    #[error("invalid spin: {0}")]
    InvalidSpin(String),

    #[error("invalid configuration for `{field}`: {message}")]
    InvalidConfig {
        field: &'static str,
        message: String,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("malformed scan output: {0}")]
    Parse(String),
}
