use cs_engine::CsError;
use interface_analysis::AnalysisError;
use linalg_core::LinalgError;
use ls_engine::LsError;

#[derive(Debug, thiserror::Error)]
pub enum IoError {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("environment dimension {0} outside 1..=4")]
    EnvDim(usize),
    #[error("leakage parameter {0} outside [0, 1]")]
    InvalidXi(f64),
    #[error("input state has squared norm {0}")]
    InputNotNormalized(f64),
    #[error("system Hamiltonian has off-diagonal magnitude {0:.3e} in the analysis basis")]
    NonDiagonalHamiltonian(f64),
    #[error("need at least {needed} interface uses, got {got}")]
    TooFewUses { needed: usize, got: usize },
    #[error(transparent)]
    Ls(#[from] LsError),
    #[error(transparent)]
    Cs(#[from] CsError),
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

pub type Result<T> = std::result::Result<T, IoError>;
