use thiserror::Error;

/// Errors raised by the algebraic engine.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u32),

    #[error("invalid generator `{name}`: {reason}")]
    InvalidGenerator { name: String, reason: String },

    #[error("duplicate generator name `{0}`")]
    DuplicateGenerator(String),

    #[error("degree {degree} exceeds truncation {truncation}")]
    TruncationExceeded { degree: usize, truncation: usize },

    #[error("elements belong to different algebras")]
    AlgebraMismatch,

    #[error("coefficient rings differ: {0} vs {1}")]
    RingMismatch(String, String),

    #[error("homology in degree {degree} is not determined by a complex truncated at {truncation}")]
    TruncationBoundary { degree: usize, truncation: usize },

    #[error("matrix shape mismatch: {0}")]
    Shape(String),

    #[error("unknown space model `{0}`")]
    UnknownModel(String),

    #[error("model `{model}` has no presentation over {ring}")]
    UnsupportedRing { model: String, ring: String },

    #[error("unknown spectrum `{0}`")]
    UnknownSpectrum(String),

    #[error("Euler class has odd degree {0}")]
    OddEulerClass(usize),

    #[error("torsion in the homology of {0}; the spectral sequence argument does not apply")]
    TorsionDetected(String),

    #[error("{0}")]
    Precondition(String),

    #[error("size bound exceeded: {0}")]
    SizeBound(String),

    #[error("invalid semilattice: {0}")]
    InvalidSemilattice(String),

    #[error("invalid diagram: {0}")]
    InvalidDiagram(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
