use linalg_core::{vector, ComplexMatrix, C64, STRUCTURAL_ZERO};

use crate::basis::LocalBasis;
use crate::{require_interface, Result, CORNER_TOL, SATURATION_TOL};

/// Single-qubit state in the coordinates of the chosen local basis.
pub type Qubit = [C64; 2];

/// Convergence regime of the constant-register transfer algorithm.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Regime {
    /// `|⟨ψ0|φ⟩| = 1`
    A,
    /// `β < 1`, `ω < 1`
    B0,
    /// `β < 1`, `ω = 1`
    B1,
    /// `β = 1`, `ω < 1`
    B2,
    NotExploitable,
}

impl Regime {
    pub fn as_str(self) -> &'static str {
        match self {
            Regime::A => "A",
            Regime::B0 => "B0",
            Regime::B1 => "B1",
            Regime::B2 => "B2",
            Regime::NotExploitable => "not_exploitable",
        }
    }
}

impl std::fmt::Display for Regime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Matrix elements and derived quantities of an interface unitary in a
/// fixed local basis.
#[derive(Clone, Debug)]
pub struct InterfaceAnalysis {
    pub basis: LocalBasis,
    /// The unitary in the analysis basis; entry `(2i+j, 2k+l)` is `u_{ij,kl}`.
    pub matrix: ComplexMatrix,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: C64,
    pub omega: f64,
    pub psi0: Qubit,
    pub psi1: Option<Qubit>,
    pub phi: Option<Qubit>,
    pub phi_prime: Option<Qubit>,
    /// `⟨ψ0|φ⟩`, zero when `φ` is undefined.
    pub overlap_psi0_phi: C64,
}

fn top(col: &[C64]) -> Qubit {
    [col[0], col[1]]
}

fn bottom(col: &[C64]) -> Qubit {
    [col[2], col[3]]
}

fn unit(v: &Qubit) -> Option<Qubit> {
    let n = vector::norm(v);
    (n > STRUCTURAL_ZERO).then(|| [v[0] / n, v[1] / n])
}

/// Computes every `u_{ij,kl}` of `u` in `basis` together with `α, β, γ, ω`
/// and the states `ψ0, ψ1, φ, φ′`.
pub fn analyze_in_basis(u: &ComplexMatrix, basis: &LocalBasis) -> Result<InterfaceAnalysis> {
    require_interface(u)?;
    Ok(analyze_transformed(basis.transform(u), basis.clone()))
}

pub(crate) fn analyze_transformed(m: ComplexMatrix, basis: LocalBasis) -> InterfaceAnalysis {
    let col0 = m.column(0);
    let col2 = m.column(2);
    let col3 = m.column(3);

    let psi0_raw = top(&col0);
    let psi0 = unit(&psi0_raw).unwrap_or(psi0_raw);

    let psi1_tilde = top(&col2);
    let alpha = vector::norm(&psi1_tilde);
    let phi_tilde = bottom(&col2);
    let beta = vector::norm(&phi_tilde);
    let top3 = top(&col3);
    let phi_prime_tilde = bottom(&col3);
    let omega = vector::norm(&phi_prime_tilde);

    // ψ1 comes from column |10⟩ when α is resolvable, else from column |11⟩.
    let psi1 = unit(&psi1_tilde).or_else(|| unit(&top3));
    let gamma = psi1.map_or(C64::new(0.0, 0.0), |p| vector::inner(&p, &top3));
    let phi = unit(&phi_tilde);
    let phi_prime = unit(&phi_prime_tilde);
    let overlap_psi0_phi = phi.map_or(C64::new(0.0, 0.0), |p| vector::inner(&psi0, &p));

    InterfaceAnalysis {
        basis,
        matrix: m,
        alpha,
        beta,
        gamma,
        omega,
        psi0,
        psi1,
        phi,
        phi_prime,
        overlap_psi0_phi,
    }
}

impl InterfaceAnalysis {
    /// `u_{ij,kl} = ⟨ij|U|kl⟩`
    pub fn element(&self, i: usize, j: usize, k: usize, l: usize) -> C64 {
        self.matrix[(2 * i + j, 2 * k + l)]
    }

    /// `|u_{10,00}|² + |u_{11,00}|²`
    pub fn corner_residual(&self) -> f64 {
        self.matrix[(2, 0)].norm_sqr() + self.matrix[(3, 0)].norm_sqr()
    }

    pub fn in_u_star(&self) -> bool {
        self.matrix[(2, 0)].norm() <= CORNER_TOL && self.matrix[(3, 0)].norm() <= CORNER_TOL
    }

    /// Neither `α` nor `γ` carries weight, so `ψ1` is undefined and the
    /// unitary acts as a controlled operation on the relevant subspace.
    pub fn psi1_degenerate(&self) -> bool {
        self.alpha < STRUCTURAL_ZERO && self.gamma.norm() < STRUCTURAL_ZERO
    }

    pub fn beta_saturated(&self) -> bool {
        self.beta >= 1.0 - SATURATION_TOL
    }

    pub fn omega_saturated(&self) -> bool {
        self.omega >= 1.0 - SATURATION_TOL
    }

    pub fn overlap_saturated(&self) -> bool {
        self.overlap_psi0_phi.norm() >= 1.0 - SATURATION_TOL
    }

    pub fn is_exploitable(&self) -> bool {
        self.in_u_star()
            && !self.psi1_degenerate()
            && !(self.beta_saturated() && (self.overlap_saturated() || self.omega_saturated()))
    }

    pub fn regime(&self) -> Regime {
        if !self.is_exploitable() {
            Regime::NotExploitable
        } else if self.overlap_saturated() {
            Regime::A
        } else if self.beta_saturated() {
            Regime::B2
        } else if self.omega_saturated() {
            Regime::B1
        } else {
            Regime::B0
        }
    }

    /// `ψ1`, falling back to the orthocomplement of `ψ0` when neither
    /// column defines it. Only the products `αψ1` and `γψ1` enter the
    /// algorithms, so the fallback never changes a state.
    pub fn psi1_or_perp(&self) -> Qubit {
        self.psi1.unwrap_or_else(|| vector::perp2(&self.psi0))
    }

    pub fn phi_or_zero(&self) -> Qubit {
        self.phi.unwrap_or([C64::new(0.0, 0.0); 2])
    }

    pub fn phi_prime_or_zero(&self) -> Qubit {
        self.phi_prime.unwrap_or([C64::new(0.0, 0.0); 2])
    }

    /// The interface unitary in the analysis basis, as used by simulators
    /// that work in those coordinates.
    pub fn unitary(&self) -> &ComplexMatrix {
        &self.matrix
    }
}
