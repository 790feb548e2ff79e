use linalg_core::{complete_to_unitary, vector, ComplexMatrix, StateVector, C64, UNITARY_TOL};
use ls_engine::{GateSequence, INTERFACE, SYSTEM};
use rand::Rng;

use crate::{IoError, Result};

/// A unitary on `S ⊗ I ⊗ R1 ⊗ … ⊗ Rk`, either as an allowed gate sequence
/// or as a dense matrix (for synthetic transfers with a chosen leakage).
#[derive(Clone, Debug)]
pub enum Transfer {
    Sequence(GateSequence),
    Matrix { unitary: ComplexMatrix, qubits: usize },
}

impl Transfer {
    /// Wraps a dense unitary on at least two qubits.
    pub fn matrix(unitary: ComplexMatrix) -> Result<Self> {
        let d = unitary.rows();
        if !d.is_power_of_two() || d < 4 || !unitary.is_square() {
            return Err(IoError::Dimension(format!("transfer matrix is {}x{}", d, unitary.cols())));
        }
        unitary.require_unitary(UNITARY_TOL)?;
        Ok(Self::Matrix { qubits: d.trailing_zeros() as usize, unitary })
    }

    pub fn qubits(&self) -> usize {
        match self {
            Transfer::Sequence(s) => s.subsystem_count(),
            Transfer::Matrix { qubits, .. } => *qubits,
        }
    }

    pub fn adjoint(&self) -> Self {
        match self {
            Transfer::Sequence(s) => Transfer::Sequence(s.adjoint()),
            Transfer::Matrix { unitary, qubits } => Transfer::Matrix { unitary: unitary.adjoint(), qubits: *qubits },
        }
    }

    /// Applies the transfer with its qubit `q` placed at `placement[q]`.
    pub fn apply(&self, state: &mut StateVector, placement: &[usize]) -> Result<()> {
        if placement.len() != self.qubits() {
            return Err(IoError::Dimension(format!(
                "{} placements for a {}-qubit transfer",
                placement.len(),
                self.qubits()
            )));
        }
        match self {
            Transfer::Sequence(s) => s.execute_on(state, placement)?,
            Transfer::Matrix { unitary, .. } => state.apply(unitary, placement)?,
        }
        Ok(())
    }

    /// Leakage `‖(⟨1|_S ⊗ I) T |1⟩_S|0…0⟩‖`.
    pub fn leakage(&self) -> Result<f64> {
        let mut st = one_on_system(self.qubits());
        self.apply(&mut st, &(0..self.qubits()).collect::<Vec<_>>())?;
        Ok(st.component(SYSTEM, 1)?.norm())
    }

    /// Largest deviation from the ideal transfer shape: `|0…0⟩` must stay
    /// put and the `|0⟩_S` part of `T|1,0…0⟩` must be a nonnegative multiple
    /// of `|0⟩_S|1⟩_I|0…0⟩`.
    pub fn shape_defect(&self) -> Result<f64> {
        let q = self.qubits();
        let all: Vec<usize> = (0..q).collect();
        let mut ground = StateVector::zero(vec![2; q]);
        self.apply(&mut ground, &all)?;
        let ground_defect = 1.0 - ground.amplitudes()[0].norm();
        let ground_phase = ground.amplitudes()[0].im.abs();

        let mut st = one_on_system(q);
        self.apply(&mut st, &all)?;
        let kept = st.component(SYSTEM, 0)?;
        let mut digits = vec![0usize; q - 1];
        digits[INTERFACE - 1] = 1;
        let idx = kept.index_of(&digits);
        let eta = kept.amplitudes()[idx];
        let stray = (kept.norm().powi(2) - eta.norm_sqr()).max(0.0).sqrt();
        Ok(ground_defect.max(ground_phase).max(stray).max(eta.im.abs()).max((-eta.re).max(0.0)))
    }
}

fn one_on_system(qubits: usize) -> StateVector {
    StateVector::new(vector::basis(1 << qubits, 1 << (qubits - 1)), vec![2; qubits]).expect("dimensions agree")
}

/// Dense unitary on `S, I, R1 … Rk` that fixes `|0…0⟩` and sends
/// `|1⟩_S|0…0⟩` to `√(1−ξ²)|0⟩_S|1⟩_I|0…0⟩ + ξ|1⟩_S|g⟩`, with `g` a unit
/// vector on `I ⊗ R`.
pub fn transfer_with_leakage(xi: f64, g: &[C64], registers: usize) -> Result<ComplexMatrix> {
    if !(0.0..=1.0).contains(&xi) {
        return Err(IoError::InvalidXi(xi));
    }
    let half = 1usize << (registers + 1);
    if g.len() != half {
        return Err(IoError::Dimension(format!("garbage state has length {}, expected {half}", g.len())));
    }
    let g = vector::normalized(g, 1e-12).ok_or(IoError::InputNotNormalized(0.0))?;
    let dim = 2 * half;
    let eta = (1.0 - xi * xi).sqrt();
    let mut moved = vector::scale(&vector::basis(dim, half / 2), C64::new(eta, 0.0));
    for (k, z) in g.iter().enumerate() {
        moved[half + k] += z * xi;
    }
    Ok(complete_to_unitary(&[vector::basis(dim, 0), vector::basis(dim, half)], &[vector::basis(dim, 0), moved])?)
}

/// [`transfer_with_leakage`] with a uniformly random garbage state.
pub fn random_transfer<R: Rng + ?Sized>(rng: &mut R, xi: f64, registers: usize) -> Result<ComplexMatrix> {
    let g = linalg_core::random::random_state(rng, 1usize << (registers + 1));
    transfer_with_leakage(xi, &g, registers)
}
