use linalg_core::{expm_hermitian, gates, tensor, ComplexMatrix};

use crate::{HamiltonianPair, Result, SynthesisError};

/// Pulse parameters that make `U_eff(τ, T, s)` exploitable for the
/// `rXX + gZ` model.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EffectiveInterfaceSolution {
    pub r: f64,
    pub g: f64,
    /// Each coupled window lasts `π/(4ω̄)`.
    pub tau_star: f64,
    /// Free evolution of `S` between the two windows, always positive.
    pub t_star: f64,
    /// Angle of the `e^{iZs}` pulse on `I`.
    pub s_star: f64,
    /// Root of `cos θ + (g/ω̄) sin θ`, i.e. `tan θ* = −ω̄/g`.
    pub theta_star: f64,
    pub omega_bar: f64,
    /// `β` of the resulting gate, `|g|/ω̄`.
    pub predicted_beta: f64,
}

impl EffectiveInterfaceSolution {
    /// `r/ω̄`, the amplitude that moves from `|10⟩` to `|01⟩` per use.
    pub fn coupling_ratio(&self) -> f64 {
        self.r.abs() / self.omega_bar
    }

    /// Uses needed for `β^N ≤ ξ_ε`: `⌈ln ξ_ε / ln β⌉`.
    pub fn n_star_for(&self, xi_eps: f64) -> Result<usize> {
        if !(xi_eps > 0.0 && xi_eps < 1.0) {
            return Err(SynthesisError::InvalidTarget(xi_eps));
        }
        let x = xi_eps.ln() / self.predicted_beta.ln();
        // Exact powers of β land on integers up to rounding.
        Ok(((x - 1e-12).ceil() as usize).max(1))
    }
}

/// Closed-form pulse for the `rXX + gZ` model.
pub fn solve_effective_interface(r: f64, g: f64) -> Result<EffectiveInterfaceSolution> {
    if r == 0.0 || g == 0.0 || !r.is_finite() || !g.is_finite() {
        return Err(SynthesisError::Degenerate { r, g });
    }
    let omega_bar = r.hypot(g);
    // atan lands in (−π/2, π/2) with sign opposite to g, which keeps
    // T* = −θ*/(2g) positive.
    let theta_star = (-omega_bar / g).atan();
    Ok(EffectiveInterfaceSolution {
        r,
        g,
        tau_star: std::f64::consts::FRAC_PI_4 / omega_bar,
        t_star: -theta_star / (2.0 * g),
        s_star: theta_star / 2.0,
        theta_star,
        omega_bar,
        predicted_beta: g.abs() / omega_bar,
    })
}

/// `e^{−iH_on τ} (e^{−iH_S T} ⊗ e^{iZs}) e^{−iH_on τ}`
pub fn build_u_eff(pair: &HamiltonianPair, tau: f64, t: f64, s: f64) -> Result<ComplexMatrix> {
    for d in [tau, t] {
        if d < 0.0 {
            return Err(SynthesisError::NegativeDuration(d));
        }
    }
    let on = expm_hermitian(pair.h_on(), tau)?;
    let v = tensor(&expm_hermitian(pair.h_s(), t)?, &expm_hermitian(&gates::pauli_z(), -s)?);
    Ok(on.matmul(&v).matmul(&on))
}

/// `(2τ* + T* + ΔT)·N*`: two coupled windows, one free window and the
/// register operations per use.
pub fn end_to_end_time_cost(sol: &EffectiveInterfaceSolution, xi_eps: f64, delta_t: f64) -> Result<f64> {
    if delta_t < 0.0 {
        return Err(SynthesisError::NegativeDuration(delta_t));
    }
    let n = sol.n_star_for(xi_eps)?;
    Ok((2.0 * sol.tau_star + sol.t_star + delta_t) * n as f64)
}
