use linalg_core::ComplexMatrix;

use crate::analysis::{analyze_in_basis, InterfaceAnalysis, Regime};
use crate::basis::LocalBasis;
use crate::search::search_feasible_basis;
use crate::Result;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FailureReason {
    NoFeasibleBasis,
    /// `α` and `γ` both vanish: the unitary never moves `|1⟩_S` weight into `|0⟩_S`.
    ControlledUnitaryDegenerate,
    BetaOneAndOverlapOne,
    BetaOneAndOmegaOne,
}

impl FailureReason {
    pub fn as_str(self) -> &'static str {
        match self {
            FailureReason::NoFeasibleBasis => "no_feasible_basis",
            FailureReason::ControlledUnitaryDegenerate => "controlled_unitary_degenerate",
            FailureReason::BetaOneAndOverlapOne => "beta_one_and_overlap_one",
            FailureReason::BetaOneAndOmegaOne => "beta_one_and_omega_one",
        }
    }
}

#[derive(Clone, Debug)]
pub struct ExploitabilityVerdict {
    pub in_u_star: bool,
    pub exploitable: bool,
    pub feasible_basis: Option<LocalBasis>,
    pub failure_reason: Option<FailureReason>,
    /// Analysis in the feasible basis, when one was found.
    pub analysis: Option<InterfaceAnalysis>,
}

impl ExploitabilityVerdict {
    pub fn regime(&self) -> Regime {
        self.analysis.as_ref().map_or(Regime::NotExploitable, |a| a.regime())
    }
}

/// Searches for a feasible basis and decides exploitability in it.
pub fn classify(u: &ComplexMatrix) -> Result<ExploitabilityVerdict> {
    match search_feasible_basis(u)? {
        Some(found) => classify_in_basis(u, &found.basis),
        None => Ok(ExploitabilityVerdict {
            in_u_star: false,
            exploitable: false,
            feasible_basis: None,
            failure_reason: Some(FailureReason::NoFeasibleBasis),
            analysis: None,
        }),
    }
}

/// Verdict for a caller-supplied basis; `in_u_star` is false when the basis
/// is not feasible for `u`.
pub fn classify_in_basis(u: &ComplexMatrix, basis: &LocalBasis) -> Result<ExploitabilityVerdict> {
    let a = analyze_in_basis(u, basis)?;
    if !a.in_u_star() {
        return Ok(ExploitabilityVerdict {
            in_u_star: false,
            exploitable: false,
            feasible_basis: None,
            failure_reason: Some(FailureReason::NoFeasibleBasis),
            analysis: Some(a),
        });
    }
    let failure_reason = if a.psi1_degenerate() {
        Some(FailureReason::ControlledUnitaryDegenerate)
    } else if a.beta_saturated() && a.overlap_saturated() {
        Some(FailureReason::BetaOneAndOverlapOne)
    } else if a.beta_saturated() && a.omega_saturated() {
        Some(FailureReason::BetaOneAndOmegaOne)
    } else {
        None
    };
    Ok(ExploitabilityVerdict {
        in_u_star: true,
        exploitable: failure_reason.is_none(),
        feasible_basis: Some(basis.clone()),
        failure_reason,
        analysis: Some(a),
    })
}
