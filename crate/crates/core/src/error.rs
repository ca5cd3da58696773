use thiserror::Error;

use crate::diagram::Space;

/// Errors raised while building or validating a diagram.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DiagramError {
    #[error("half-edge {0} reused")]
    HalfEdgeReused(u64),
    #[error("dangling half-edge {0}")]
    Dangling(u64),
    #[error("pairing has fixed point {0}")]
    FixedPoint(u64),
    #[error("mixed space: {0}")]
    MixedSpace(&'static str),
    #[error("space mismatch: expected {expected:?}, found {found:?}")]
    SpaceMismatch { expected: Space, found: Space },
    #[error("wheel size must be even and positive, got {0}")]
    WheelSize(usize),
}

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Diagram(#[from] DiagramError),
    #[error("resource cutoff exceeded: {0}")]
    Resource(String),
    #[error("grading mismatch: {0}")]
    Grading(String),
    #[error("invalid Lie algebra data: {0}")]
    Lie(String),
    #[error("invalid rational {0:?}")]
    Rational(String),
    #[error("malformed input: {0}")]
    Format(String),
    #[error("{0}")]
    Unsupported(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Short machine-readable tag, stable across releases.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Diagram(_) => "invalid_diagram",
            Error::Resource(_) => "resource_cutoff",
            Error::Grading(_) => "grading_mismatch",
            Error::Lie(_) => "invalid_lie_algebra",
            Error::Rational(_) | Error::Format(_) => "malformed_input",
            Error::Unsupported(_) => "unsupported",
            Error::Io(_) => "io",
        }
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Format(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
