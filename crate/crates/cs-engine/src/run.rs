use interface_analysis::InterfaceAnalysis;
use linalg_core::vector::kron;
use linalg_core::{ComplexMatrix, StateVector, C64, STRUCTURAL_ZERO};
use ls_engine::{initial_state, register, GateSequence, Step, TransferReport, INTERFACE, SYSTEM};

use crate::step::{fold, require_exploitable};
use crate::{cs_initialize, cs_recursion, cs_step, CsError, Result};

/// Qubits in the simulated layout `S, I, R`, whatever the number of uses.
pub const CS_QUBITS: usize = 3;

const IR: [usize; 2] = [INTERFACE, 2];

fn leak(state: &StateVector, b: C64, fallback: f64) -> Result<f64> {
    if b.norm() <= 1e-12 {
        return Ok(fallback);
    }
    Ok(state.component(SYSTEM, 1)?.norm() / b.norm())
}

/// `n` interface uses with their step unitaries, ending with a swap that
/// moves the transferred qubit from `R` to `I`.
pub fn cs_sequence(u: &InterfaceAnalysis, n: usize) -> Result<GateSequence> {
    let states = cs_recursion(u, n)?;
    let mut seq = GateSequence::new(u.matrix.clone(), 1, false)?;
    let use_u = Step::ApplyInterface { adjoint: false, system: SYSTEM };
    seq.push(use_u.clone())?;
    seq.push(Step::Swap { a: INTERFACE, b: register(1) })?;
    for s in &states {
        seq.push(use_u.clone())?;
        seq.push(Step::RegisterUnitary { matrix: s.w.clone(), targets: IR.to_vec() })?;
    }
    seq.push(Step::Swap { a: INTERFACE, b: register(1) })?;
    Ok(seq)
}

/// Simulates `n ≥ 2` interface uses. `xi_trace[j]` is the leakage after
/// use `j + 2`; `xi_predicted` is the recursion value for the last use.
pub fn run_cs(u: &InterfaceAnalysis, n: usize, input: (C64, C64)) -> Result<TransferReport> {
    require_exploitable(u)?;
    if n < 2 {
        return Err(CsError::TooFewUses(n));
    }
    let (mut s, mut st) = cs_initialize(u, input)?;
    let mut trace = vec![leak(&st, input.1, s.xi())?];
    for _ in 3..=n {
        (s, st) = cs_step(u, &s, st)?;
        trace.push(leak(&st, input.1, s.xi())?);
    }
    st.swap(INTERFACE, 2)?;
    let mut report = TransferReport::measure(st, input, s.xi())?;
    report.xi_trace = trace;
    Ok(report)
}

/// Like [`cs_sequence`] with `h_s` acting on `S` for `off_durations[j]`
/// between uses `j + 1` and `j + 2`. Each step unitary is fitted to the
/// simulated `|1⟩_S` input including the waits, and a final phase on `I`
/// realigns the two input branches. `h_s` must be diagonal in the analysis
/// basis.
pub fn build_cs_with_waits(
    u: &InterfaceAnalysis,
    n: usize,
    h_s: &ComplexMatrix,
    off_durations: &[f64],
) -> Result<GateSequence> {
    require_exploitable(u)?;
    if n < 2 {
        return Err(CsError::TooFewUses(n));
    }
    if off_durations.len() != n - 1 {
        return Err(CsError::WaitCount { off: off_durations.len(), uses: n });
    }
    if h_s.rows() != 2 || h_s.cols() != 2 || h_s[(0, 1)].norm() > STRUCTURAL_ZERO || h_s[(1, 0)].norm() > STRUCTURAL_ZERO {
        return Err(CsError::NonDiagonalHamiltonian);
    }
    let mut seq = GateSequence::new(u.matrix.clone(), 1, false)?.with_system_hamiltonian(h_s.clone())?;
    let use_u = Step::ApplyInterface { adjoint: false, system: SYSTEM };
    let ket0 = [C64::new(1.0, 0.0), C64::new(0.0, 0.0)];

    // The |1⟩_S input alone; the |0⟩_S input stays in the known product form.
    let mut probe = initial_state(CS_QUBITS, (C64::new(0.0, 0.0), C64::new(1.0, 0.0)));
    let mut pending = vec![use_u.clone(), Step::Swap { a: INTERFACE, b: register(1) }, Step::Wait { duration: off_durations[0] }, use_u.clone()];
    for k in 2..=n {
        if k > 2 {
            pending = vec![Step::Wait { duration: off_durations[k - 2] }, use_u.clone()];
        }
        let mut stage = GateSequence::new(u.matrix.clone(), 1, false)?.with_system_hamiltonian(h_s.clone())?;
        stage.extend_steps(pending.iter().cloned())?;
        stage.execute(&mut probe)?;
        seq.extend_steps(pending.iter().cloned())?;

        let fixed = if k == 2 { kron(&u.psi0, &u.psi0) } else { kron(&u.psi0, &ket0) };
        let amps = probe.amplitudes();
        let s = fold(k, fixed, amps[..4].to_vec(), &amps[4..])?;
        probe.apply(&s.w, &IR)?;
        seq.push(Step::RegisterUnitary { matrix: s.w, targets: IR.to_vec() })?;
    }
    seq.push(Step::Swap { a: INTERFACE, b: register(1) })?;

    // The |0⟩_S branch picks up e^{−iE0 T}; the fitted |1⟩_S branch does not.
    let total: f64 = off_durations.iter().sum();
    let e0 = h_s[(0, 0)].re;
    let fix = ComplexMatrix::diagonal(&[C64::new(1.0, 0.0), C64::from_polar(1.0, -e0 * total)]);
    seq.push(Step::RegisterUnitary { matrix: fix, targets: vec![INTERFACE] })?;
    Ok(seq)
}
