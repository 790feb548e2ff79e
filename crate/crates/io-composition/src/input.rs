use cs_engine::{cs_recursion, cs_sequence};
use interface_analysis::{
    analyze_in_basis, classify_in_basis, find_joint_feasible_basis, FailureReason, InterfaceAnalysis, LocalBasis,
    SATURATION_TOL,
};
use linalg_core::{kraus_cirac_at_most_one, operator_schmidt, ComplexMatrix, STRUCTURAL_ZERO};
use ls_engine::{ls_sequence, GateSequence, MAX_REGISTERS};

use crate::{IoError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Algorithm {
    /// One fresh register qubit per extra interface use.
    Linear,
    /// A single reusable register qubit.
    Constant,
}

/// Which of the two block shapes a matrix has in the joint basis.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum JointShape {
    /// `u_{00,00} ⊕ (3×3)`
    GroundIsolated,
    /// Block diagonal in `S`: a controlled unitary.
    Controlled,
    Other,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InputDiagnostic {
    Ready(Algorithm),
    /// No single local basis puts both `U` and `U†` in block form.
    NoJointBasis,
    /// `U` is a controlled (or local) gate; neither direction can transfer.
    Controlled,
    /// Ground-isolated shape with `u_{01,10} = u_{01,11} = 0`.
    GroundIsolatedDecoupled,
    /// `U†` is in block form in the joint basis but not exploitable.
    AdjointNotExploitable(FailureReason),
}

#[derive(Clone, Debug)]
pub struct InputSynthesis {
    /// Input transfer written with `U`, register unitaries and swaps only.
    pub sequence: Option<GateSequence>,
    pub xi_in: Option<f64>,
    pub diagnostic: InputDiagnostic,
    pub shape: Option<JointShape>,
    pub basis: Option<LocalBasis>,
    /// `U` in the joint basis.
    pub forward: Option<InterfaceAnalysis>,
    /// `U†` in the joint basis.
    pub adjoint: Option<InterfaceAnalysis>,
}

impl InputSynthesis {
    fn absent(diagnostic: InputDiagnostic) -> Self {
        Self { sequence: None, xi_in: None, diagnostic, shape: None, basis: None, forward: None, adjoint: None }
    }
}

/// Classifies the block shape of `m` (a matrix already in the joint basis).
pub fn joint_shape(m: &ComplexMatrix) -> JointShape {
    let zero = |cells: &[(usize, usize)]| cells.iter().all(|&(i, j)| m[(i, j)].norm() <= STRUCTURAL_ZERO);
    let ground_isolated = zero(&[(0, 1), (0, 2), (0, 3), (1, 0), (2, 0), (3, 0)]);
    let controlled = zero(&[(0, 2), (0, 3), (1, 2), (1, 3), (2, 0), (2, 1), (3, 0), (3, 1)]);
    if controlled {
        JointShape::Controlled
    } else if ground_isolated {
        JointShape::GroundIsolated
    } else {
        JointShape::Other
    }
}

/// Output transfer for `u` with the given number of interface uses: the
/// linear algorithm when `β < 1` and the register budget allows it, the
/// constant-register one otherwise. Returns the sequence and its leakage.
pub fn output_transfer(u: &InterfaceAnalysis, uses: usize) -> Result<(GateSequence, f64, Algorithm)> {
    if uses == 0 {
        return Err(IoError::TooFewUses { needed: 1, got: 0 });
    }
    if u.beta < 1.0 - SATURATION_TOL && uses - 1 <= MAX_REGISTERS {
        let seq = ls_sequence(u, uses - 1)?;
        return Ok((seq, u.beta.powi(uses as i32), Algorithm::Linear));
    }
    if uses < 2 {
        return Err(IoError::TooFewUses { needed: 2, got: uses });
    }
    let seq = cs_sequence(u, uses)?;
    let xi = cs_recursion(u, uses)?.last().map_or(1.0, |s| s.xi());
    Ok((seq, xi, Algorithm::Constant))
}

/// Builds an input transfer for `u` as the adjoint of an output transfer
/// for `u†`, rewritten so it only calls `u`. Needs a local basis in which
/// both `u` and `u†` are exploitable; absence is reported through
/// [`InputSynthesis::diagnostic`].
pub fn synthesize_input(u: &ComplexMatrix, uses: usize) -> Result<InputSynthesis> {
    let u_adj = u.adjoint();
    let Some(found) = find_joint_feasible_basis(&[u.clone(), u_adj.clone()])? else {
        return Ok(InputSynthesis::absent(InputDiagnostic::NoJointBasis));
    };
    let basis = found.basis;
    let forward = analyze_in_basis(u, &basis)?;
    let adjoint = analyze_in_basis(&u_adj, &basis)?;
    let shape = joint_shape(&forward.matrix);
    let verdict = classify_in_basis(&u_adj, &basis)?;

    // Local and controlled gates can never transfer, whatever the basis.
    let controlled = shape == JointShape::Controlled || kraus_cirac_at_most_one(&operator_schmidt(u)?);
    let diagnostic = if controlled {
        Some(InputDiagnostic::Controlled)
    } else if shape == JointShape::GroundIsolated
        && forward.element(0, 1, 1, 0).norm() <= STRUCTURAL_ZERO
        && forward.element(0, 1, 1, 1).norm() <= STRUCTURAL_ZERO
    {
        Some(InputDiagnostic::GroundIsolatedDecoupled)
    } else if !verdict.exploitable {
        Some(InputDiagnostic::AdjointNotExploitable(verdict.failure_reason.unwrap_or(FailureReason::NoFeasibleBasis)))
    } else {
        None
    };
    if let Some(d) = diagnostic {
        return Ok(InputSynthesis {
            shape: Some(shape),
            basis: Some(basis),
            forward: Some(forward),
            adjoint: Some(adjoint),
            ..InputSynthesis::absent(d)
        });
    }

    let (out_for_adjoint, xi_in, algorithm) = output_transfer(&adjoint, uses)?;
    let sequence = out_for_adjoint.adjoint().in_terms_of_adjoint_interface();
    Ok(InputSynthesis {
        sequence: Some(sequence),
        xi_in: Some(xi_in),
        diagnostic: InputDiagnostic::Ready(algorithm),
        shape: Some(shape),
        basis: Some(basis),
        forward: Some(forward),
        adjoint: Some(adjoint),
    })
}
