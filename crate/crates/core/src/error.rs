use thiserror::Error;

/// Errors shared across the library.
///
/// Domain outcomes (a negative minor, a violated Plücker relation, an
/// unstable polynomial) are *not* errors; they are reported through
/// certificate enums. `Error` covers precondition violations, size caps,
/// and malformed input.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("index out of range: {0}")]
    IndexOutOfRange(String),

    #[error("unsupported degree: {0}")]
    UnsupportedDegree(String),

    #[error("operation requires a nonzero polynomial")]
    ZeroPolynomial,

    #[error("operation not defined for this input: {0}")]
    Domain(String),

    #[error("size cap exceeded: {0}")]
    SizeCap(String),

    #[error("matrix columns are not linearly independent; not a Grassmannian point")]
    NotAPoint,

    #[error("polynomial is not homogeneous")]
    NotHomogeneous,

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("generation failed: {0}")]
    Generation(String),

    #[error("non-finite value encountered in numeric computation")]
    NonFinite,

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
