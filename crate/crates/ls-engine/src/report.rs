use linalg_core::{StateVector, C64};

use crate::sequence::{INTERFACE, SYSTEM};
use crate::{LsError, Result};

/// Outcome of one simulated output transfer.
#[derive(Clone, Debug)]
pub struct TransferReport {
    /// `‖(⟨1|_S ⊗ I)ψ‖ / |b_S|`, or the predicted value when `b_S = 0`.
    pub xi_measured: f64,
    pub xi_predicted: f64,
    /// False when `b_S = 0`, in which case the leakage cannot be observed.
    pub xi_observable: bool,
    /// `|⟨ideal|final⟩|²` with ideal `|0⟩_S (a_S|0⟩ + b_S|1⟩)_I |0…0⟩`.
    pub fidelity_to_ideal: f64,
    /// Normalised `|1⟩_S` component on the remaining subsystems, when nonzero.
    pub residual_state_g: Option<StateVector>,
    /// Amplitudes of `|0⟩_S|0⟩_I|0…⟩` and `|0⟩_S|1⟩_I|0…⟩`.
    pub success_amplitudes: (C64, C64),
    /// Per-step leakage for algorithms that expose one, starting at the
    /// first step where it is defined.
    pub xi_trace: Vec<f64>,
    pub final_state: StateVector,
}

/// Rejects inputs with `| |a|² + |b|² − 1 | > 1e-10`.
pub fn check_input(input: (C64, C64)) -> Result<()> {
    let n = input.0.norm_sqr() + input.1.norm_sqr();
    if (n - 1.0).abs() > 1e-10 {
        return Err(LsError::InputNotNormalized(n));
    }
    Ok(())
}

/// `(a|0⟩ + b|1⟩)_S ⊗ |0⟩` on every other qubit.
pub fn initial_state(qubits: usize, input: (C64, C64)) -> StateVector {
    let mut factors = vec![vec![input.0, input.1]];
    factors.extend((1..qubits).map(|_| vec![C64::new(1.0, 0.0), C64::new(0.0, 0.0)]));
    StateVector::product(&factors)
}

impl TransferReport {
    pub fn measure(final_state: StateVector, input: (C64, C64), xi_predicted: f64) -> Result<Self> {
        let (a, b) = input;
        let qubits = final_state.subsystem_dims().len();
        let leaked = final_state.component(SYSTEM, 1)?;
        let leak_norm = leaked.norm();
        let xi_observable = b.norm() > 1e-12;
        let xi_measured = if xi_observable { leak_norm / b.norm() } else { xi_predicted };

        let mut ideal_factors = vec![vec![C64::new(1.0, 0.0), C64::new(0.0, 0.0)], vec![a, b]];
        ideal_factors.extend((2..qubits).map(|_| vec![C64::new(1.0, 0.0), C64::new(0.0, 0.0)]));
        let ideal = StateVector::product(&ideal_factors);
        let fidelity_to_ideal = ideal.overlap_sqr(&final_state).min(1.0);

        let mut zeros = vec![0usize; qubits];
        let s0 = final_state.amplitude(&zeros);
        zeros[INTERFACE] = 1;
        let s1 = final_state.amplitude(&zeros);

        let residual_state_g = (leak_norm > 1e-14).then(|| {
            let mut g = leaked;
            g.normalize().expect("norm checked above");
            g
        });
        Ok(Self {
            xi_measured,
            xi_predicted,
            xi_observable,
            fidelity_to_ideal,
            residual_state_g,
            success_amplitudes: (s0, s1),
            xi_trace: Vec::new(),
            final_state,
        })
    }
}
