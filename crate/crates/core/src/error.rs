use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("coordinate index {index} out of range for ambient dimension {dim}")]
    CoordinateOutOfRange { index: usize, dim: usize },

    #[error("invalid radius: {0}")]
    InvalidRadius(String),

    #[error("invalid box side [{lower}, {upper}]")]
    InvalidBox { lower: f64, upper: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("failed to parse expression at byte {offset}: {message}")]
    Parse { offset: usize, message: String },

    #[error("unknown groupoid {0:?}")]
    UnknownGroupoid(String),

    #[error("arrows are not composable: source and target differ by {gap:e}")]
    NotComposable { gap: f64 },

    #[error("sections live over different groupoids ({left} vs {right})")]
    GroupoidMismatch { left: String, right: String },

    #[error("coefficient of term {term} has no known support box")]
    MissingSupport { term: usize },

    #[error("density support {support:?} is not inside the integration cube of side {side}")]
    SupportExceedsBox { support: Vec<(f64, f64)>, side: f64 },

    #[error("germs have different base points (distance {distance:e})")]
    BasePointMismatch { distance: f64 },

    #[error("source probe failed: {0}")]
    ProbeFailed(String),

    #[error("operation requires a point base, found base dimension {0}")]
    NotPointBase(usize),
}
