use thiserror::Error;

/// Errors raised by the algebra, geometry and solver routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum SedError {
    #[error("level mismatch: {left} vs {right}")]
    LevelMismatch { left: u32, right: u32 },

    #[error("expected a level-{expected} element, got level {actual}")]
    WrongLevel { expected: u32, actual: u32 },

    #[error("coefficient count {len} does not match 2^{level}")]
    CoefficientCount { level: u32, len: usize },

    #[error("zero element is not classified")]
    ZeroElement,

    #[error("not a zero divisor")]
    NotZeroDivisor,

    #[error("not on the D2 = 0 locus")]
    NotOnLocus,

    #[error("invalid frame: {0}")]
    InvalidFrame(String),

    #[error("fiber degenerate: step too large or v2 parallel to new v1")]
    FiberDegenerate,

    #[error("fiber angle undefined")]
    FiberAngleUndefined,

    #[error("singular system: rank {rank} of {size}; dependent rows {dependent:?}")]
    SingularSystem {
        rank: usize,
        size: usize,
        /// Minimal dependent row sets, 1-based.
        dependent: Vec<Vec<usize>>,
    },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for SedError {
    fn from(e: std::io::Error) -> Self {
        SedError::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, SedError>;
