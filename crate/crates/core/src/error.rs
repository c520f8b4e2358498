use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("image is {width}x{height}; at least 3x3 is required")]
    ImageTooSmall { width: usize, height: usize },

    #[error("pixel buffer holds {got} values, expected {expected} for {width}x{height}")]
    BufferSize {
        width: usize,
        height: usize,
        expected: usize,
        got: usize,
    },

    #[error("structuring element side must be odd and >= 1, got {0}")]
    EvenStructuringElement(usize),

    #[error("kernel coefficients must be finite")]
    NonFiniteKernel,

    #[error("fusion weights must be non-negative and sum to 1 (sum = {sum})")]
    InvalidWeights { sum: f64 },

    #[error("invalid configuration: {0}")]
    BadConfig(String),

    #[error("invalid {family} level {level}: {reason}")]
    BadLevel {
        family: &'static str,
        level: f64,
        reason: &'static str,
    },

    #[error("degenerate input: {0}")]
    DegenerateInput(&'static str),

    #[error("{degenerate} of {total} bootstrap resamples were degenerate")]
    DegenerateResamples { degenerate: usize, total: usize },

    #[error("no input images")]
    EmptyInput,

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("missing file {}", .0.display())]
    MissingFile(PathBuf),

    #[error("failed to decode {}: {message}", path.display())]
    Decode { path: PathBuf, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
