use thiserror::Error;

/// Errors raised anywhere in the geometry pipeline.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("dimension {0} outside the supported range 2..=16")]
    DimensionOutOfRange(usize),

    #[error("intrinsic dimension {0} exceeds the supported maximum of 16")]
    DimensionTooHigh(usize),

    #[error("operation needs intrinsic dimension at least {needed}, curve has {found}")]
    DimensionTooLow { needed: usize, found: usize },

    #[error("operation needs odd intrinsic dimension, curve has {0}")]
    EvenDimension(usize),

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("first input vector has norm below tolerance")]
    DegenerateInput,

    #[error("too few samples: need at least {needed}, got {found}")]
    TooFewSamples { needed: usize, found: usize },

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("vector field returned a non-finite value at s = {s}")]
    NonFiniteField { s: f64 },

    #[error("point is off the manifold (relative deviation {deviation:.3e})")]
    OffManifold { deviation: f64 },

    #[error("field and curve are defined on different grids")]
    GridMismatch,

    #[error("transport seed is not tangent (relative normal component {deviation:.3e})")]
    NonTangentSeed { deviation: f64 },

    #[error("curve is stationary near t = {t} (speed below 1e-10)")]
    DegenerateCurve { t: f64 },

    #[error("accumulated arclength is not monotone")]
    NonMonotoneLength,

    #[error("bad parameters: {0}")]
    BadParams(String),

    #[error("curvature k{index} is degenerate on {fraction:.2}% of interior nodes")]
    DegenerateCurvature { index: usize, fraction: f64 },

    #[error("curve is not a helix: {0}")]
    NotAHelix(String),

    #[error("not applicable: {0}")]
    Inapplicable(String),

    #[error("invalid space form '{0}'")]
    InvalidSpaceForm(String),

    #[error("{0}")]
    Format(String),

    #[error("I/O error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}
