use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {left_rows}x{left_cols} times {right_rows}x{right_cols}")]
    DimensionMismatch {
        left_rows: usize,
        left_cols: usize,
        right_rows: usize,
        right_cols: usize,
    },

    #[error("operation requires a square matrix, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix entry ({row}, {col}) is not finite")]
    NonFinite { row: usize, col: usize },

    #[error("eigenvalue iteration did not converge after {sweeps} sweeps ({source_desc})")]
    Convergence { sweeps: usize, source_desc: String },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("spectrum is empty")]
    EmptySpectrum,

    #[error("bin grids differ: {left} bins vs {right} bins")]
    GridMismatch { left: usize, right: usize },

    #[error("both omega distributions lie entirely below epsilon = {epsilon:e}; distance is undefined")]
    DegenerateOmega { epsilon: f64 },

    #[error("spectrum has zero spectral radius")]
    ZeroRadius,

    #[error("dataset {path}: {message}")]
    Dataset { path: PathBuf, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}
