//! Undoing the phases `S` picks up while the coupling is off.
//!
//! With `H_S` diagonal in the feasible basis, a wait of `t′_k` multiplies
//! `|1⟩_S` by `e^{−iθ_k}` relative to `|0⟩_S`, `θ_k = (E_1 − E_0)·t′_k`. In
//! the linear algorithm the branch that leaves `S` at use `k` has spent the
//! first `k − 1` waits in `|1⟩_S`, and its register content `t_k` is
//! orthogonal to every other branch's. A phase `e^{iΘ_{k−1}}` on `t_k`
//! (with `Θ_j = θ_1 + … + θ_j`) therefore restores the wait-free `|0⟩_S`
//! branch exactly. The residual `|1⟩_S` branch keeps its phase
//! `e^{−iΘ_N}`: it lives on `S`, which no register operation can reach.

use interface_analysis::InterfaceAnalysis;
use linalg_core::{ComplexMatrix, StateVector, C64, STRUCTURAL_ZERO};
use ls_engine::{build_s_n_timed, build_w_n, escape_term, GateSequence, Step, INTERFACE, SYSTEM};

use crate::{IoError, Result};

/// One register-side phase correction.
#[derive(Clone, Debug)]
pub struct PhaseCorrection {
    /// Interface use whose escaping branch is corrected, `2 ≤ k ≤ N+1`.
    pub use_index: usize,
    /// `Θ_{k−1}`
    pub phase: f64,
    /// `I + (e^{iΘ_{k−1}} − 1)|t_k⟩⟨t_k|` on `I, R1 … RN`.
    pub matrix: ComplexMatrix,
    pub targets: Vec<usize>,
}

impl PhaseCorrection {
    pub fn step(&self) -> Step {
        Step::RegisterUnitary { matrix: self.matrix.clone(), targets: self.targets.clone() }
    }
}

/// `E_1 − E_0` of a Hamiltonian that must be diagonal in the analysis basis.
pub fn diagonal_gap(h_s: &ComplexMatrix) -> Result<f64> {
    if h_s.rows() != 2 || h_s.cols() != 2 {
        return Err(IoError::Dimension(format!("system Hamiltonian is {}x{}", h_s.rows(), h_s.cols())));
    }
    let off = h_s[(0, 1)].norm().max(h_s[(1, 0)].norm());
    if off > STRUCTURAL_ZERO {
        return Err(IoError::NonDiagonalHamiltonian(off));
    }
    Ok(h_s[(1, 1)].re - h_s[(0, 0)].re)
}

/// Corrections for the linear algorithm with `N = off_durations.len()`
/// registers, where `off_durations[k−1]` separates uses `k` and `k+1`.
pub fn hs_phase_adjustment(u: &InterfaceAnalysis, hs_eigengap: f64, off_durations: &[f64]) -> Result<Vec<PhaseCorrection>> {
    let n = off_durations.len();
    let dim = 1usize << (n + 1);
    let targets: Vec<usize> = (INTERFACE..=INTERFACE + n).collect();
    let mut cumulative = 0.0;
    let mut out = Vec::with_capacity(n);
    for k in 2..=n + 1 {
        cumulative += hs_eigengap * off_durations[k - 2];
        let t = escape_term(u, n, k);
        let shift = C64::from_polar(1.0, cumulative) - C64::new(1.0, 0.0);
        let mut matrix = ComplexMatrix::identity(dim);
        for i in 0..dim {
            for j in 0..dim {
                matrix[(i, j)] += shift * t[i] * t[j].conj();
            }
        }
        out.push(PhaseCorrection { use_index: k, phase: cumulative, matrix, targets: targets.clone() });
    }
    Ok(out)
}

/// The linear algorithm with waits under `h_s`, optionally with the phase
/// corrections inserted before the final register unitary.
pub fn ls_sequence_with_waits(
    u: &InterfaceAnalysis,
    h_s: &ComplexMatrix,
    off_durations: &[f64],
    corrected: bool,
) -> Result<GateSequence> {
    let gap = diagonal_gap(h_s)?;
    let n = off_durations.len();
    let mut seq = build_s_n_timed(u, n, off_durations)?.with_system_hamiltonian(h_s.clone())?;
    if corrected {
        for c in hs_phase_adjustment(u, gap, off_durations)? {
            seq.push(c.step())?;
        }
    }
    let w = build_w_n(u, n)?;
    seq.push(Step::RegisterUnitary { matrix: w, targets: (INTERFACE..=INTERFACE + n).collect() })?;
    Ok(seq)
}

/// Fidelity between the `|0⟩_S` branches of two states of equal layout,
/// `|⟨P0 a|P0 b⟩|² / (‖P0 a‖²‖P0 b‖²)`, together with the norm mismatch
/// `|‖P0 a‖ − ‖P0 b‖|`.
pub fn success_branch_fidelity(a: &StateVector, b: &StateVector) -> Result<(f64, f64)> {
    let (pa, pb) = (a.component(SYSTEM, 0)?, b.component(SYSTEM, 0)?);
    let (na, nb) = (pa.norm(), pb.norm());
    if na <= 1e-14 || nb <= 1e-14 {
        return Ok((if (na - nb).abs() <= 1e-14 { 1.0 } else { 0.0 }, (na - nb).abs()));
    }
    Ok((pa.overlap_sqr(&pb) / (na * na * nb * nb), (na - nb).abs()))
}
