//! Direct construction of block-form interface unitaries with prescribed
//! `α, β, γ, ω` and states, for experiments and tests.

use linalg_core::random::{haar_unitary, random_phase, random_state};
use linalg_core::{extend_to_basis, tensor, vector, ComplexMatrix, C64};
use rand::Rng;

use crate::analysis::{Qubit, Regime};
use crate::basis::LocalBasis;
use crate::{AnalysisError, Result};

/// Parameters of a block-form interface unitary in the computational basis.
#[derive(Clone, Debug)]
pub struct InterfaceParams {
    pub psi0: Qubit,
    pub psi1: Qubit,
    pub alpha: f64,
    pub phi: Qubit,
    pub gamma: C64,
    pub omega: f64,
    pub phi_prime: Qubit,
}

impl InterfaceParams {
    /// Builds the unitary with columns `|0⟩|ψ0⟩`, (completion), `α|0ψ1⟩ + β|1φ⟩`
    /// and `γ|0ψ1⟩ + ω|1φ′⟩`. Fails when these columns are not orthonormal.
    pub fn assemble(&self) -> Result<ComplexMatrix> {
        let zero = C64::new(0.0, 0.0);
        let beta = (1.0 - self.alpha * self.alpha).max(0.0).sqrt();
        let c0 = vec![self.psi0[0], self.psi0[1], zero, zero];
        let c2 = vec![
            self.psi1[0] * self.alpha,
            self.psi1[1] * self.alpha,
            self.phi[0] * beta,
            self.phi[1] * beta,
        ];
        let c3 = vec![
            self.psi1[0] * self.gamma,
            self.psi1[1] * self.gamma,
            self.phi_prime[0] * self.omega,
            self.phi_prime[1] * self.omega,
        ];
        let full = extend_to_basis(&[c0.clone(), c2.clone(), c3.clone()], 4)
            .map_err(|e| AnalysisError::InconsistentParameters(e.to_string()))?;
        Ok(ComplexMatrix::from_columns(&[c0, full[3].clone(), c2, c3]))
    }
}

fn qubit(v: Vec<C64>) -> Qubit {
    [v[0], v[1]]
}

fn phased(q: Qubit, p: C64) -> Qubit {
    [q[0] * p, q[1] * p]
}

/// `φ′` with prescribed overlap `x = ⟨φ|φ′⟩`, `|x| ≤ 1`.
fn with_overlap<R: Rng + ?Sized>(rng: &mut R, phi: &Qubit, x: C64) -> Qubit {
    let perp = vector::perp2(phi);
    let y = (1.0 - x.norm_sqr()).max(0.0).sqrt();
    let p = random_phase(rng);
    [phi[0] * x + perp[0] * p * y, phi[1] * x + perp[1] * p * y]
}

/// Random block-form unitary in the requested regime. `beta` fixes `β`
/// where the regime allows it (ignored for B2, where `β = 1`).
///
/// Panics for [`Regime::NotExploitable`].
pub fn random_interface<R: Rng + ?Sized>(rng: &mut R, regime: Regime, beta: Option<f64>) -> ComplexMatrix {
    let psi0 = qubit(random_state(rng, 2));
    let psi1 = phased(vector::perp2(&psi0), random_phase(rng));
    let draw_beta = |rng: &mut R| beta.unwrap_or_else(|| rng.random_range(0.05..0.95));
    let params = match regime {
        Regime::A | Regime::B0 => {
            let b = draw_beta(rng);
            let alpha = (1.0 - b * b).sqrt();
            let phi = if regime == Regime::A {
                phased(psi0, random_phase(rng))
            } else {
                qubit(random_state(rng, 2))
            };
            // Orthogonality of the last two columns forces
            // ⟨φ|φ′⟩ = −αγ/(βω), which is attainable iff β² + ω² ≥ 1.
            let lo = (1.0 - b * b).max(0.0).sqrt();
            let omega = if regime == Regime::A && rng.random_bool(0.25) {
                1.0
            } else {
                lo + (1.0 - lo) * rng.random_range(0.02..0.98)
            };
            let gamma = random_phase(rng) * (1.0 - omega * omega).max(0.0).sqrt();
            let x = if b * omega > 0.0 { -gamma * alpha / (b * omega) } else { C64::new(0.0, 0.0) };
            let phi_prime = with_overlap(rng, &phi, x);
            InterfaceParams { psi0, psi1, alpha, phi, gamma, omega, phi_prime }
        }
        Regime::B1 => {
            let b = draw_beta(rng);
            let phi = qubit(random_state(rng, 2));
            let phi_prime = phased(vector::perp2(&phi), random_phase(rng));
            InterfaceParams {
                psi0,
                psi1,
                alpha: (1.0 - b * b).sqrt(),
                phi,
                gamma: C64::new(0.0, 0.0),
                omega: 1.0,
                phi_prime,
            }
        }
        Regime::B2 => {
            let phi = qubit(random_state(rng, 2));
            let phi_prime = phased(vector::perp2(&phi), random_phase(rng));
            let omega: f64 = rng.random_range(0.05..0.95);
            InterfaceParams {
                psi0,
                psi1,
                alpha: 0.0,
                phi,
                gamma: random_phase(rng) * (1.0 - omega * omega).sqrt(),
                omega,
                phi_prime,
            }
        }
        Regime::NotExploitable => panic!("random_interface needs an exploitable regime"),
    };
    params.assemble().expect("constructed columns are orthonormal by design")
}

/// Conjugates `u` by a random product unitary. The returned basis is
/// feasible for the result whenever the computational basis is feasible
/// for `u`.
pub fn hide_in_random_frame<R: Rng + ?Sized>(rng: &mut R, u: &ComplexMatrix) -> (ComplexMatrix, LocalBasis) {
    let ls = haar_unitary(rng, 2);
    let li = haar_unitary(rng, 2);
    let l = tensor(&ls, &li);
    let hidden = l.matmul(u).matmul(&l.adjoint());
    let basis = LocalBasis::new(ls, li).expect("Haar factors are unitary");
    (hidden, basis)
}
