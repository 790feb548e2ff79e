use interface_analysis::AnalysisError;
use linalg_core::LinalgError;
use ls_engine::LsError;

#[derive(Debug, thiserror::Error)]
pub enum CsError {
    #[error("interface unitary is not exploitable")]
    NotExploitable,
    #[error("at least two interface uses are needed, got {0}")]
    TooFewUses(usize),
    #[error("input amplitudes have squared norm {0}, expected 1")]
    InputNotNormalized(f64),
    #[error("step vectors lost orthonormality (defect {0:.3e})")]
    Degenerate(f64),
    #[error("system Hamiltonian is not diagonal in the analysis basis")]
    NonDiagonalHamiltonian,
    #[error("{off} off durations given for {uses} interface uses")]
    WaitCount { off: usize, uses: usize },
    #[error(transparent)]
    Sequence(#[from] LsError),
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

pub type Result<T> = std::result::Result<T, CsError>;
