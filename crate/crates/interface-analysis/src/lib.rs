//! Classification of two-qubit interface unitaries.
//!
//! An interface unitary couples a system qubit `S` to an interface qubit `I`.
//! It is usable for state transfer when some local product basis puts it in
//! the block form
//!
//! ```text
//! U|0⟩_S|0⟩_I = |0⟩_S|ψ0⟩_I
//! U|1⟩_S|0⟩_I = α|0⟩_S|ψ1⟩_I + β|1⟩_S|φ⟩_I
//! U|1⟩_S|1⟩_I = γ|0⟩_S|ψ1⟩_I + ω|1⟩_S|φ′⟩_I
//! ```
//!
//! Such a basis is called feasible. This crate searches for one, extracts the
//! quantities above and decides whether the unitary is exploitable, meaning
//! it avoids the degenerate case `β = 1 ∧ (|⟨ψ0|φ⟩| = 1 ∨ ω = 1)`.

mod analysis;
mod basis;
pub mod construct;
mod search;
mod verdict;

pub use analysis::{analyze_in_basis, InterfaceAnalysis, Qubit, Regime};
pub use basis::LocalBasis;
pub use search::{
    find_feasible_basis, find_joint_feasible_basis, search_feasible_basis, FeasibleBasis, ACCEPT_RESIDUAL,
};
pub use verdict::{classify, classify_in_basis, ExploitabilityVerdict, FailureReason};

use linalg_core::LinalgError;

/// Closeness to 1 below which `β`, `ω` and `|⟨ψ0|φ⟩|` count as saturated.
pub const SATURATION_TOL: f64 = 1e-9;

/// Corner amplitude up to which a matrix counts as being in block form.
pub const CORNER_TOL: f64 = 1e-8;

#[derive(Debug, thiserror::Error)]
pub enum AnalysisError {
    #[error("interface unitary must be 4x4, got {rows}x{cols}")]
    WrongShape { rows: usize, cols: usize },
    #[error("matrix is not unitary (defect {0:.3e})")]
    NotUnitary(f64),
    #[error("interface parameters are inconsistent: {0}")]
    InconsistentParameters(String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

pub type Result<T> = std::result::Result<T, AnalysisError>;

pub(crate) fn require_interface(u: &linalg_core::ComplexMatrix) -> Result<()> {
    if u.rows() != 4 || u.cols() != 4 {
        return Err(AnalysisError::WrongShape { rows: u.rows(), cols: u.cols() });
    }
    let d = u.unitarity_defect();
    if d > linalg_core::UNITARY_TOL {
        return Err(AnalysisError::NotUnitary(d));
    }
    Ok(())
}
