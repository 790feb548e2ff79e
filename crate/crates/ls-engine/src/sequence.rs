use linalg_core::{expm_hermitian, ComplexMatrix, StateVector, C64, HERMITIAN_TOL, UNITARY_TOL};

use crate::{LsError, Result};

/// Index of the system qubit.
pub const SYSTEM: usize = 0;
/// Index of the interface qubit.
pub const INTERFACE: usize = 1;

/// Subsystem index of register qubit `R_k`, `k ≥ 1`.
pub fn register(k: usize) -> usize {
    assert!(k >= 1, "registers are numbered from 1");
    INTERFACE + k
}

#[derive(Clone, Debug, PartialEq)]
pub enum Step {
    /// The interface unitary (or its adjoint) on `(system, I)`. `system` is
    /// `S` for the physical coupling or `R_S` when a register qubit stands
    /// in for the system.
    ApplyInterface { adjoint: bool, system: usize },
    Swap { a: usize, b: usize },
    /// Unitary on register-side subsystems; the first target is the most
    /// significant factor.
    RegisterUnitary { matrix: ComplexMatrix, targets: Vec<usize> },
    /// Free evolution of `S` under its own Hamiltonian with the coupling off.
    Wait { duration: f64 },
}

/// An ordered list of allowed operations on `S ⊗ I ⊗ R^N (⊗ R_S)`.
#[derive(Clone, Debug)]
pub struct GateSequence {
    interface: ComplexMatrix,
    system_hamiltonian: Option<ComplexMatrix>,
    register_count: usize,
    has_rs: bool,
    steps: Vec<Step>,
}

impl GateSequence {
    pub fn new(interface: ComplexMatrix, register_count: usize, has_rs: bool) -> Result<Self> {
        if interface.rows() != 4 || interface.cols() != 4 {
            return Err(LsError::InvalidStep(format!(
                "interface must be 4x4, got {}x{}",
                interface.rows(),
                interface.cols()
            )));
        }
        interface.require_unitary(UNITARY_TOL)?;
        Ok(Self { interface, system_hamiltonian: None, register_count, has_rs, steps: Vec::new() })
    }

    /// Sets the Hamiltonian that drives `S` during [`Step::Wait`].
    pub fn with_system_hamiltonian(mut self, h: ComplexMatrix) -> Result<Self> {
        if h.rows() != 2 || h.cols() != 2 {
            return Err(LsError::InvalidStep("system Hamiltonian must be 2x2".into()));
        }
        h.require_hermitian(HERMITIAN_TOL)?;
        self.system_hamiltonian = Some(h);
        Ok(self)
    }

    pub fn interface(&self) -> &ComplexMatrix {
        &self.interface
    }

    pub fn system_hamiltonian(&self) -> Option<&ComplexMatrix> {
        self.system_hamiltonian.as_ref()
    }

    pub fn register_count(&self) -> usize {
        self.register_count
    }

    pub fn has_rs(&self) -> bool {
        self.has_rs
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    pub fn subsystem_count(&self) -> usize {
        2 + self.register_count + usize::from(self.has_rs)
    }

    pub fn dims(&self) -> Vec<usize> {
        vec![2; self.subsystem_count()]
    }

    /// Index of `R_S`, when present.
    pub fn rs_index(&self) -> Option<usize> {
        self.has_rs.then(|| 2 + self.register_count)
    }

    pub fn interface_uses(&self) -> usize {
        self.steps.iter().filter(|s| matches!(s, Step::ApplyInterface { .. })).count()
    }

    pub fn push(&mut self, step: Step) -> Result<()> {
        self.check_step(&step)?;
        self.steps.push(step);
        Ok(())
    }

    pub fn extend_steps(&mut self, steps: impl IntoIterator<Item = Step>) -> Result<()> {
        for s in steps {
            self.push(s)?;
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        self.steps.iter().try_for_each(|s| self.check_step(s))
    }

    fn check_index(&self, idx: usize, what: &str) -> Result<()> {
        if idx >= self.subsystem_count() {
            return Err(LsError::InvalidStep(format!(
                "{what} index {idx} out of range for {} subsystems",
                self.subsystem_count()
            )));
        }
        if idx == SYSTEM {
            return Err(LsError::InvalidStep(format!("{what} may not act on the system qubit")));
        }
        Ok(())
    }

    fn check_step(&self, step: &Step) -> Result<()> {
        match step {
            Step::ApplyInterface { system, .. } => {
                if *system != SYSTEM && Some(*system) != self.rs_index() {
                    return Err(LsError::InvalidStep(format!("interface cannot couple subsystem {system} to I")));
                }
            }
            Step::Swap { a, b } => {
                self.check_index(*a, "swap")?;
                self.check_index(*b, "swap")?;
                if a == b {
                    return Err(LsError::InvalidStep("swap of a subsystem with itself".into()));
                }
            }
            Step::RegisterUnitary { matrix, targets } => {
                for (k, &t) in targets.iter().enumerate() {
                    self.check_index(t, "register unitary")?;
                    if targets[..k].contains(&t) {
                        return Err(LsError::InvalidStep(format!("target {t} repeated")));
                    }
                }
                let d = 1usize << targets.len();
                if matrix.rows() != d || matrix.cols() != d {
                    return Err(LsError::InvalidStep(format!(
                        "register unitary is {}x{} for {} targets",
                        matrix.rows(),
                        matrix.cols(),
                        targets.len()
                    )));
                }
                matrix.require_unitary(UNITARY_TOL)?;
            }
            Step::Wait { duration } => {
                if !duration.is_finite() {
                    return Err(LsError::InvalidStep(format!("wait duration {duration}")));
                }
            }
        }
        Ok(())
    }

    /// Runs every step on `state`, which must have this sequence's layout.
    pub fn execute(&self, state: &mut StateVector) -> Result<()> {
        if state.subsystem_dims() != self.dims().as_slice() {
            return Err(LsError::InvalidStep(format!(
                "state layout {:?} does not match sequence layout {:?}",
                state.subsystem_dims(),
                self.dims()
            )));
        }
        let identity: Vec<usize> = (0..self.subsystem_count()).collect();
        self.execute_on(state, &identity)
    }

    /// Runs every step on a larger state, with sequence subsystem `q` placed
    /// at `qubits[q]`. Subsystems not listed are left alone.
    pub fn execute_on(&self, state: &mut StateVector, qubits: &[usize]) -> Result<()> {
        if qubits.len() != self.subsystem_count() {
            return Err(LsError::InvalidStep(format!(
                "{} target subsystems for a {}-subsystem sequence",
                qubits.len(),
                self.subsystem_count()
            )));
        }
        let dims = state.subsystem_dims();
        for (k, &q) in qubits.iter().enumerate() {
            if q >= dims.len() || dims[q] != 2 || qubits[..k].contains(&q) {
                return Err(LsError::InvalidStep(format!("cannot place qubit {k} at subsystem {q}")));
            }
        }
        let map = |idx: &[usize]| -> Vec<usize> { idx.iter().map(|&i| qubits[i]).collect() };
        let adjoint = self.interface.adjoint();
        for step in &self.steps {
            match step {
                Step::ApplyInterface { adjoint: false, system } => {
                    state.apply(&self.interface, &map(&[*system, INTERFACE]))?
                }
                Step::ApplyInterface { adjoint: true, system } => state.apply(&adjoint, &map(&[*system, INTERFACE]))?,
                Step::Swap { a, b } => state.swap(qubits[*a], qubits[*b])?,
                Step::RegisterUnitary { matrix, targets } => state.apply(matrix, &map(targets))?,
                Step::Wait { duration } => {
                    if let Some(h) = &self.system_hamiltonian {
                        state.apply(&expm_hermitian(h, *duration)?, &[qubits[SYSTEM]])?;
                    }
                }
            }
        }
        Ok(())
    }

    /// The whole sequence as one matrix; exponential in the register count.
    pub fn to_matrix(&self) -> Result<ComplexMatrix> {
        let dims = self.dims();
        let dim: usize = dims.iter().product();
        let mut cols = Vec::with_capacity(dim);
        for j in 0..dim {
            let mut amps = vec![C64::new(0.0, 0.0); dim];
            amps[j] = C64::new(1.0, 0.0);
            let mut st = StateVector::new(amps, dims.clone())?;
            self.execute(&mut st)?;
            cols.push(st.into_amplitudes());
        }
        Ok(ComplexMatrix::from_columns(&cols))
    }

    /// Steps reversed and individually inverted. Waits become negative
    /// durations.
    pub fn adjoint(&self) -> Self {
        let steps = self
            .steps
            .iter()
            .rev()
            .map(|s| match s {
                Step::ApplyInterface { adjoint, system } => Step::ApplyInterface { adjoint: !adjoint, system: *system },
                Step::Swap { a, b } => Step::Swap { a: *a, b: *b },
                Step::RegisterUnitary { matrix, targets } => {
                    Step::RegisterUnitary { matrix: matrix.adjoint(), targets: targets.clone() }
                }
                Step::Wait { duration } => Step::Wait { duration: -duration },
            })
            .collect();
        Self { steps, ..self.clone() }
    }

    /// The same operation written in terms of `interface†`: every interface
    /// step has its adjoint flag flipped.
    pub fn in_terms_of_adjoint_interface(&self) -> Self {
        let steps = self
            .steps
            .iter()
            .map(|s| match s {
                Step::ApplyInterface { adjoint, system } => Step::ApplyInterface { adjoint: !adjoint, system: *system },
                other => other.clone(),
            })
            .collect();
        Self { interface: self.interface.adjoint(), steps, ..self.clone() }
    }
}
