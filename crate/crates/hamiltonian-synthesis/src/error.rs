use interface_analysis::AnalysisError;
use linalg_core::LinalgError;

#[derive(Debug, thiserror::Error)]
pub enum SynthesisError {
    #[error("{0} is not Hermitian (defect {1:.3e})")]
    NotHermitian(&'static str, f64),
    #[error("{0} has shape {1}x{2}")]
    WrongShape(&'static str, usize, usize),
    #[error("negative duration {0}")]
    NegativeDuration(f64),
    #[error("no effective interface from this pulse shape when r = {r} or g = {g} vanishes")]
    Degenerate { r: f64, g: f64 },
    #[error("target error {0} must lie strictly between 0 and 1")]
    InvalidTarget(f64),
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

pub type Result<T> = std::result::Result<T, SynthesisError>;
