use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("block sizes {blocks:?} do not sum to {expected}")]
    BlockMismatch { blocks: Vec<usize>, expected: usize },

    #[error("index ({row}, {col}) out of range for {rows}x{cols} matrix")]
    IndexOutOfRange {
        row: usize,
        col: usize,
        rows: usize,
        cols: usize,
    },

    #[error("duplicate or unsorted index {0}")]
    DuplicateIndex(usize),

    #[error("shape mismatch: expected {expected:?}, found {found:?}")]
    ShapeMismatch {
        expected: (usize, usize),
        found: (usize, usize),
    },

    #[error("invalid range: {0}")]
    InvalidRange(String),

    #[error("degenerate sample: {0}")]
    DegenerateSample(String),

    #[error("invalid family: {0}")]
    InvalidFamily(String),

    #[error("generator {index} is not homogeneous of degree {degree}")]
    NotHomogeneous { index: usize, degree: usize },

    #[error("numerator and denominator are linearly dependent")]
    DependentPair,

    #[error("numerator degree {numerator} differs from denominator degree {denominator}")]
    DegreeMismatch { numerator: usize, denominator: usize },

    #[error("lambda and mu are both zero")]
    BothZero,

    #[error("log power {0} exceeds the supported maximum")]
    LogPowerOverflow(u32),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("configuration error: {0}")]
    Config(String),
}
