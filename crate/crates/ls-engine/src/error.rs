use interface_analysis::AnalysisError;
use linalg_core::LinalgError;

#[derive(Debug, thiserror::Error)]
pub enum LsError {
    #[error("interface unitary is not in block form in the analysis basis")]
    NotInUStar,
    #[error("interface unitary is not exploitable")]
    NotExploitable,
    #[error("beta = {0} leaves no transferable amplitude")]
    BetaSaturated(f64),
    #[error("input amplitudes have squared norm {0}, expected 1")]
    InputNotNormalized(f64),
    #[error("{0} registers exceed the simulator limit of {1}")]
    TooManyRegisters(usize, usize),
    #[error("invalid step: {0}")]
    InvalidStep(String),
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

pub type Result<T> = std::result::Result<T, LsError>;
