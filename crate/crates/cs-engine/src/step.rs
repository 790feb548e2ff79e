use interface_analysis::InterfaceAnalysis;
use linalg_core::vector::{self, inner, kron};
use linalg_core::{complete_to_unitary, ComplexMatrix, StateVector, C64};
use ls_engine::{check_input, initial_state};

use crate::{CsError, Result};

/// Largest Gram defect tolerated among the vectors a step unitary is built
/// from before the step is declared numerically degenerate.
pub const ORTHONORMALITY_LIMIT: f64 = 1e-8;

/// Below this the `η` direction is treated as absent.
const ETA_FLOOR: f64 = 1e-12;
/// Below this a `μ` weight is set to zero and its register state chosen freely.
const MU_FLOOR: f64 = 1e-10;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);
const KET0: [C64; 2] = [ONE, ZERO];
const KET1: [C64; 2] = [ZERO, ONE];

/// Recursion data after the `k`-th interface use and its step unitary.
#[derive(Clone, Debug)]
pub struct CsStepState {
    pub k: usize,
    pub eta: f64,
    pub mu0: f64,
    pub mu1: f64,
    pub mu0_register_state: [C64; 2],
    pub mu1_register_state: [C64; 2],
    /// Unit vector on `I ⊗ R` carrying the transferred amplitude before the
    /// step unitary, absent while `η` vanishes.
    pub eta_vector: Option<Vec<C64>>,
    /// Step unitary on `I ⊗ R`.
    pub w: ComplexMatrix,
}

impl CsStepState {
    /// `√(μ0² + μ1²)`, equal to `√(1 − η²)` but without the cancellation.
    pub fn xi(&self) -> f64 {
        self.mu0.hypot(self.mu1)
    }

    /// `|η² + μ0² + μ1² − 1|`
    pub fn norm_defect(&self) -> f64 {
        (self.eta * self.eta + self.mu0 * self.mu0 + self.mu1 * self.mu1 - 1.0).abs()
    }

    /// `η` of the next step from the scalar recursion alone:
    /// `√(η² + |αμ0|² + |γμ1|²)`.
    pub fn next_eta(&self, u: &InterfaceAnalysis) -> f64 {
        (self.eta * self.eta + (u.alpha * self.mu0).powi(2) + (u.gamma.norm() * self.mu1).powi(2)).sqrt()
    }

    /// The three-qubit state this step leaves for input `(a, b)`.
    pub fn state(&self, (a, b): (C64, C64)) -> StateVector {
        let mut amps = vec![ZERO; 8];
        amps[0] = a;
        amps[1] = b * self.eta;
        for r in 0..2 {
            amps[4 + r] = b * self.mu0 * self.mu0_register_state[r];
            amps[6 + r] = b * self.mu1 * self.mu1_register_state[r];
        }
        StateVector::new(amps, vec![2, 2, 2]).expect("fixed layout")
    }
}

pub(crate) fn require_exploitable(u: &InterfaceAnalysis) -> Result<()> {
    if u.is_exploitable() {
        Ok(())
    } else {
        Err(CsError::NotExploitable)
    }
}

pub(crate) fn check(input: (C64, C64)) -> Result<()> {
    check_input(input).map_err(|_| CsError::InputNotNormalized(input.0.norm_sqr() + input.1.norm_sqr()))
}

/// Removes the components of `v` along each unit vector in `against`, twice.
fn project_out(v: &mut [C64], against: &[&[C64]]) {
    for _ in 0..2 {
        for e in against {
            let c = inner(e, v);
            vector::axpy(v, -c, e);
        }
    }
}

/// Builds the step unitary for `k` from the `|0⟩_S` content of the `a`
/// branch (`fixed`, a unit vector), the `|0⟩_S` content of the `b` branch
/// (`eta_raw`) and its `|1⟩_S` content (`nu`), all on `I ⊗ R`.
pub(crate) fn fold(k: usize, fixed: Vec<C64>, mut eta_raw: Vec<C64>, nu: &[C64]) -> Result<CsStepState> {
    project_out(&mut eta_raw, &[&fixed]);
    let eta = vector::norm(&eta_raw);
    let eta_hat = (eta > ETA_FLOOR).then(|| vector::scale(&eta_raw, C64::new(1.0 / eta, 0.0)));

    // ν splits into its part inside span{fixed, η̂} and the remainder.
    let c0 = inner(&fixed, nu);
    let c1 = eta_hat.as_ref().map_or(ZERO, |e| inner(e, nu));
    let mut nu1 = nu.to_vec();
    match &eta_hat {
        Some(e) => project_out(&mut nu1, &[&fixed, e]),
        None => project_out(&mut nu1, &[&fixed]),
    }
    let mut mu0 = c0.norm().hypot(c1.norm());
    let mut mu1 = vector::norm(&nu1);

    let (m0, m1) = if mu0 > MU_FLOOR {
        let m0 = [c0 / mu0, c1 / mu0];
        (m0, vector::perp2(&m0))
    } else {
        mu0 = 0.0;
        (vector::perp2(&KET0), KET0)
    };
    if mu1 <= MU_FLOOR {
        mu1 = 0.0;
    }

    let mut sources = vec![fixed];
    let mut targets = vec![kron(&KET0, &KET0)];
    if let Some(e) = &eta_hat {
        sources.push(e.clone());
        targets.push(kron(&KET0, &KET1));
    }
    if mu1 > 0.0 {
        let mut n1 = vector::scale(&nu1, C64::new(1.0 / mu1, 0.0));
        let refs: Vec<&[C64]> = sources.iter().map(|s| s.as_slice()).collect();
        project_out(&mut n1, &refs);
        let n1 = vector::normalized(&n1, 0.0).ok_or(CsError::Degenerate(1.0))?;
        sources.push(n1);
        targets.push(kron(&KET1, &m1));
    }
    let defect = vector::orthonormality_defect(&sources);
    if defect > ORTHONORMALITY_LIMIT {
        return Err(CsError::Degenerate(defect));
    }
    let w = complete_to_unitary(&sources, &targets)?;
    Ok(CsStepState {
        k,
        eta,
        mu0,
        mu1,
        mu0_register_state: m0,
        mu1_register_state: m1,
        eta_vector: eta_hat,
        w,
    })
}

/// Step `k = 2`, reached after `U`, a swap of `I` and `R`, and `U` again.
fn first_step(u: &InterfaceAnalysis) -> Result<CsStepState> {
    let psi0 = u.psi0;
    let psi1 = u.psi1_or_perp();
    let phi = u.phi_or_zero();
    let alpha = C64::new(u.alpha, 0.0);
    let fixed = kron(&psi0, &psi0);
    let mut eta_raw = vector::scale(&kron(&psi0, &psi1), alpha);
    vector::axpy(&mut eta_raw, alpha * u.beta, &kron(&psi1, &phi));
    let nu = vector::scale(&kron(&phi, &phi), C64::new(u.beta * u.beta, 0.0));
    fold(2, fixed, eta_raw, &nu)
}

fn next_step(u: &InterfaceAnalysis, s: &CsStepState) -> Result<CsStepState> {
    let psi1 = u.psi1_or_perp();
    let fixed = kron(&u.psi0, &KET0);
    let mut eta_raw = vector::scale(&kron(&u.psi0, &KET1), C64::new(s.eta, 0.0));
    let mut escaped = vector::scale(&s.mu0_register_state, C64::new(u.alpha * s.mu0, 0.0));
    vector::axpy(&mut escaped, u.gamma * s.mu1, &s.mu1_register_state);
    vector::axpy(&mut eta_raw, ONE, &kron(&psi1, &escaped));
    let mut nu = vector::scale(&kron(&u.phi_or_zero(), &s.mu0_register_state), C64::new(u.beta * s.mu0, 0.0));
    vector::axpy(&mut nu, C64::new(u.omega * s.mu1, 0.0), &kron(&u.phi_prime_or_zero(), &s.mu1_register_state));
    fold(s.k + 1, fixed, eta_raw, &nu)
}

/// Runs the first two interface uses and the first step unitary on
/// `(a|0⟩ + b|1⟩)_S|00⟩_IR`.
pub fn cs_initialize(u: &InterfaceAnalysis, input: (C64, C64)) -> Result<(CsStepState, StateVector)> {
    require_exploitable(u)?;
    check(input)?;
    let s = first_step(u)?;
    let mut st = initial_state(3, input);
    st.apply(&u.matrix, &[0, 1])?;
    st.swap(1, 2)?;
    st.apply(&u.matrix, &[0, 1])?;
    st.apply(&s.w, &[1, 2])?;
    Ok((s, st))
}

/// One more interface use followed by the next step unitary.
pub fn cs_step(u: &InterfaceAnalysis, s: &CsStepState, mut state: StateVector) -> Result<(CsStepState, StateVector)> {
    require_exploitable(u)?;
    let next = next_step(u, s)?;
    state.apply(&u.matrix, &[0, 1])?;
    state.apply(&next.w, &[1, 2])?;
    Ok((next, state))
}

/// Recursion states for steps `2..=n`, without simulating a state.
pub fn cs_recursion(u: &InterfaceAnalysis, n: usize) -> Result<Vec<CsStepState>> {
    require_exploitable(u)?;
    if n < 2 {
        return Err(CsError::TooFewUses(n));
    }
    let mut out = Vec::with_capacity(n - 1);
    out.push(first_step(u)?);
    for _ in 3..=n {
        let next = next_step(u, out.last().expect("nonempty"))?;
        out.push(next);
    }
    Ok(out)
}
