use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("cyclotron frequency must be positive, got {0}")]
    NonPositiveFrequency(f64),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("level n = {0} is not supported; polynomial solutions start at n = 1")]
    UnsupportedLevel(u32),

    #[error("free series did not converge within {terms} terms")]
    SeriesNotConverged { terms: usize },

    #[error("frequency constraint degenerates when b = 0 and D·a = 0")]
    DegenerateConstraint,

    #[error("frequency constraint has no positive real root")]
    NoPositiveRoot,

    #[error("no sign change of the truncation residual in [{lo}, {hi}]")]
    EmptyBracket { lo: f64, hi: f64 },

    #[error("invalid bracket [{lo}, {hi}]")]
    InvalidBracket { lo: f64, hi: f64 },

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("grid too coarse: eigenvalue {index} moved by {change:e} under refinement (tolerance {tolerance:e})")]
    GridTooCoarse {
        index: usize,
        change: f64,
        tolerance: f64,
    },

    #[error("frequency is not quantized: truncation residual {residual:e}")]
    NotQuantized { residual: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
