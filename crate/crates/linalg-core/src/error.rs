use thiserror::Error;

/// Failures reported by the linear-algebra layer.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum LinalgError {
    #[error("entry count {len} does not match a {rows}x{cols} matrix")]
    ShapeMismatch { rows: usize, cols: usize, len: usize },

    #[error("expected a square matrix, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("matrix is not Hermitian (max deviation {0:.3e})")]
    NotHermitian(f64),

    #[error("matrix is not unitary (max deviation {0:.3e})")]
    NotUnitary(f64),

    #[error("vectors are not orthonormal (max deviation {0:.3e})")]
    NotOrthonormal(f64),

    #[error("subsystem index {index} out of range for {count} subsystems")]
    InvalidSubsystem { index: usize, count: usize },

    #[error("subsystem {0} listed more than once")]
    RepeatedSubsystem(usize),

    #[error("state has norm {0:.3e}, cannot normalise")]
    ZeroNorm(f64),

    #[error("eigen/singular value decomposition did not converge")]
    NoConvergence,
}

pub type Result<T> = std::result::Result<T, LinalgError>;
