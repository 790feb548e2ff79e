use interface_analysis::InterfaceAnalysis;
use linalg_core::{complete_to_unitary, vector, ComplexMatrix, C64};

use crate::report::{check_input, initial_state, TransferReport};
use crate::sequence::{register, GateSequence, Step, INTERFACE, SYSTEM};
use crate::{LsError, Result};

/// Largest register count the statevector simulator accepts.
pub const MAX_REGISTERS: usize = 12;

fn require_block_form(u: &InterfaceAnalysis, n: usize) -> Result<()> {
    if n > MAX_REGISTERS {
        return Err(LsError::TooManyRegisters(n, MAX_REGISTERS));
    }
    if !u.in_u_star() {
        return Err(LsError::NotInUStar);
    }
    Ok(())
}

fn require_transferable(u: &InterfaceAnalysis, n: usize) -> Result<()> {
    require_block_form(u, n)?;
    if u.beta_saturated() {
        return Err(LsError::BetaSaturated(u.beta));
    }
    Ok(())
}

fn s_n_steps(n: usize, system: usize) -> Vec<Step> {
    let mut steps = Vec::with_capacity(2 * n + 1);
    for k in 1..=n {
        steps.push(Step::ApplyInterface { adjoint: false, system });
        steps.push(Step::Swap { a: INTERFACE, b: register(k) });
    }
    steps.push(Step::ApplyInterface { adjoint: false, system });
    steps
}

/// `n + 1` interface applications separated by swaps of `I` into `R1 … Rn`.
pub fn build_s_n(u: &InterfaceAnalysis, n: usize) -> Result<GateSequence> {
    require_block_form(u, n)?;
    let mut seq = GateSequence::new(u.matrix.clone(), n, false)?;
    seq.extend_steps(s_n_steps(n, SYSTEM))?;
    Ok(seq)
}

/// Like [`build_s_n`] with a free-evolution window after each swap; the
/// coupling is off for `off_durations[k-1]` between the `k`-th and
/// `(k+1)`-th interface applications.
pub fn build_s_n_timed(u: &InterfaceAnalysis, n: usize, off_durations: &[f64]) -> Result<GateSequence> {
    require_block_form(u, n)?;
    if off_durations.len() != n {
        return Err(LsError::InvalidStep(format!("{} off durations for {n} registers", off_durations.len())));
    }
    let mut seq = GateSequence::new(u.matrix.clone(), n, false)?;
    for (k, &t) in (1..=n).zip(off_durations) {
        seq.push(Step::ApplyInterface { adjoint: false, system: SYSTEM })?;
        seq.push(Step::Swap { a: INTERFACE, b: register(k) })?;
        seq.push(Step::Wait { duration: t })?;
    }
    seq.push(Step::ApplyInterface { adjoint: false, system: SYSTEM })?;
    Ok(seq)
}

/// Amplitude `αβ^{k−1}` of the branch that leaves `S` at the `k`-th use.
pub fn escape_amplitude(u: &InterfaceAnalysis, k: usize) -> f64 {
    u.alpha * u.beta.powi(k as i32 - 1)
}

/// Register content of the branch that leaves `S` at the `k`-th use
/// (`1 ≤ k ≤ n+1`), as a unit vector on `I ⊗ R1 ⊗ … ⊗ Rn`. In time order the
/// slots are `R1 … Rn, I`, holding `φ` before slot `k`, `ψ1` at it and `ψ0`
/// after it.
pub fn escape_term(u: &InterfaceAnalysis, n: usize, k: usize) -> Vec<C64> {
    assert!((1..=n + 1).contains(&k), "escape index {k} outside 1..={}", n + 1);
    let psi1 = u.psi1_or_perp();
    let phi = u.phi.unwrap_or_else(|| vector::perp2(&u.psi0));
    let slot = |j: usize| -> [C64; 2] {
        match j.cmp(&k) {
            std::cmp::Ordering::Less => phi,
            std::cmp::Ordering::Equal => psi1,
            std::cmp::Ordering::Greater => u.psi0,
        }
    };
    let mut factors: Vec<[C64; 2]> = Vec::with_capacity(n + 1);
    factors.push(slot(n + 1));
    factors.extend((1..=n).map(slot));
    vector::kron_all(&factors)
}

/// Unitary on `I ⊗ R1 ⊗ … ⊗ Rn` sending `ψ0^{⊗(n+1)}` to `|0…0⟩` and the
/// normalised `|0⟩_S`-branch of `S_n|1,0…0⟩` to `|1⟩_I|0…0⟩`.
pub fn build_w_n(u: &InterfaceAnalysis, n: usize) -> Result<ComplexMatrix> {
    require_transferable(u, n)?;
    let dim = 1usize << (n + 1);
    let fixed = vector::kron_all(&vec![u.psi0; n + 1]);
    let mut moved = vec![C64::new(0.0, 0.0); dim];
    for k in 1..=n + 1 {
        vector::axpy(&mut moved, C64::new(escape_amplitude(u, k), 0.0), &escape_term(u, n, k));
    }
    let moved = vector::normalized(&moved, 1e-300).ok_or(LsError::BetaSaturated(u.beta))?;
    let zero = vector::basis(dim, 0);
    let one_on_i = vector::basis(dim, dim / 2);
    Ok(complete_to_unitary(&[fixed, moved], &[zero, one_on_i])?)
}

/// `S_n` followed by `W_n` on the interface and registers.
pub fn ls_sequence(u: &InterfaceAnalysis, n: usize) -> Result<GateSequence> {
    let w = build_w_n(u, n)?;
    let mut seq = build_s_n(u, n)?;
    seq.push(Step::RegisterUnitary { matrix: w, targets: (INTERFACE..=INTERFACE + n).collect() })?;
    Ok(seq)
}

pub fn run_ls(u: &InterfaceAnalysis, n: usize, input: (C64, C64)) -> Result<TransferReport> {
    check_input(input)?;
    let seq = ls_sequence(u, n)?;
    let mut state = initial_state(seq.subsystem_count(), input);
    seq.execute(&mut state)?;
    TransferReport::measure(state, input, u.beta.powi(n as i32 + 1))
}

/// The inverse of `S_n` run with `R_S` in place of `S`, built from adjoint
/// interface applications and swaps, followed by a swap of `R_S` and `I`.
/// Acts on the layout `S, I, R1 … Rn, R_S`.
pub fn build_w_n_via_adjoint(u: &InterfaceAnalysis, n: usize) -> Result<GateSequence> {
    require_transferable(u, n)?;
    let mut seq = GateSequence::new(u.matrix.clone(), n, true)?;
    let rs = seq.rs_index().expect("layout has R_S");
    seq.push(Step::ApplyInterface { adjoint: true, system: rs })?;
    for k in (1..=n).rev() {
        seq.push(Step::Swap { a: INTERFACE, b: register(k) })?;
        seq.push(Step::ApplyInterface { adjoint: true, system: rs })?;
    }
    seq.push(Step::Swap { a: rs, b: INTERFACE })?;
    Ok(seq)
}

/// `S_n` on the extended layout followed by [`build_w_n_via_adjoint`].
pub fn ls_sequence_via_adjoint(u: &InterfaceAnalysis, n: usize) -> Result<GateSequence> {
    let tail = build_w_n_via_adjoint(u, n)?;
    let mut seq = GateSequence::new(u.matrix.clone(), n, true)?;
    seq.extend_steps(s_n_steps(n, SYSTEM))?;
    seq.extend_steps(tail.steps().iter().cloned())?;
    Ok(seq)
}

pub fn run_ls_via_adjoint(u: &InterfaceAnalysis, n: usize, input: (C64, C64)) -> Result<TransferReport> {
    check_input(input)?;
    let seq = ls_sequence_via_adjoint(u, n)?;
    let mut state = initial_state(seq.subsystem_count(), input);
    seq.execute(&mut state)?;
    TransferReport::measure(state, input, u.beta.powi(n as i32 + 1))
}
