//! Worst-case error of the composed channel against its unitary target.
//!
//! Both the composed channel and the ideal map are isometries from `S ⊗ E`
//! into `S ⊗ I ⊗ R ⊗ E`, so their distance is `2√(1 − min_Ψ |F(Ψ)|²)` with
//! `F(Ψ) = ⟨Ψ|K|Ψ⟩` for a fixed `K` on `S ⊗ E`. The minimum is searched by
//! multi-start Nelder–Mead and cross-checked against the distance from the
//! origin to the numerical range of `K`.

use argmin::core::{CostFunction, Error as ArgminError, Executor, State, TerminationReason, TerminationStatus};
use argmin::solver::neldermead::NelderMead;
use linalg_core::{eigh, ComplexMatrix, StateVector, C64, UNITARY_TOL};
use ls_engine::SYSTEM;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::channel::IoChannel;
use crate::{IoError, Result};

/// Allowed excess of the measured distance over the bound.
pub const BOUND_SLACK: f64 = 1e-7;

const MAX_ITERS: u64 = 4000;
const POLISH_ROUNDS: usize = 3;
const FAMILY_STARTS: usize = 8;
const THETA_GRID: usize = 720;

/// `Ξ = −1 + √(1−ξ_out²) + √(1−ξ_in²) − ξ_out·ξ_in`
pub fn xi_cap(xi_out: f64, xi_in: f64) -> f64 {
    -1.0 + (1.0 - xi_out * xi_out).sqrt() + (1.0 - xi_in * xi_in).sqrt() - xi_out * xi_in
}

/// `2√(1−Ξ²)` for `Ξ ≥ 0`, else the trivial 2.
pub fn lemma1_bound(xi_out: f64, xi_in: f64) -> f64 {
    let x = xi_cap(xi_out, xi_in);
    if x >= 0.0 {
        2.0 * (1.0 - x * x).max(0.0).sqrt()
    } else {
        2.0
    }
}

fn distance_from_fidelity(f: f64) -> f64 {
    2.0 * (1.0 - f.min(1.0).powi(2)).max(0.0).sqrt()
}

#[derive(Clone, Debug)]
pub struct BoundReport {
    pub xi_out: f64,
    pub xi_in: f64,
    /// `Ξ`
    pub xi_cap: f64,
    pub bound: f64,
    /// `2√(1 − |F|²)` at the best state found by the optimiser.
    pub measured_distance: f64,
    /// Smallest `|F|` found.
    pub min_fidelity: f64,
    /// Best distance within the `|1⟩_S ⊗ |e⟩_E` family alone.
    pub family_distance: f64,
    /// Exact value from the numerical range of `K`.
    pub oracle_distance: f64,
    /// Optimiser starts, random and family together.
    pub samples: usize,
    /// False when the best run stopped on the iteration cap.
    pub converged: bool,
}

impl BoundReport {
    pub fn within_bound(&self) -> bool {
        self.measured_distance <= self.bound + BOUND_SLACK
    }

    /// `measured / bound`, or 1 when both vanish.
    pub fn tightness(&self) -> f64 {
        if self.bound <= 0.0 {
            if self.measured_distance <= BOUND_SLACK {
                1.0
            } else {
                f64::INFINITY
            }
        } else {
            self.measured_distance / self.bound
        }
    }
}

/// `K` with `K_ij = ⟨B_i|A_j⟩`, where `A_j` is `T_in†·(U_M on S,E)|j,0⟩` and
/// `B_j` is `(target on I,E)·T_out|j,0⟩`.
pub fn fidelity_operator(ch: &IoChannel, u_m: &ComplexMatrix) -> Result<ComplexMatrix> {
    let d = ch.port_dim();
    if u_m.rows() != d || u_m.cols() != d {
        return Err(IoError::Dimension(format!("U_M is {}x{}, expected {d}x{d}", u_m.rows(), u_m.cols())));
    }
    u_m.require_unitary(UNITARY_TOL)?;
    let env = ch.env_index(0);
    let input_adj = ch.input().adjoint();
    let mut a_cols = Vec::with_capacity(d);
    let mut b_cols = Vec::with_capacity(d);
    for j in 0..d {
        let e = linalg_core::vector::basis(d, j);
        let mut a: StateVector = ch.embed(&e);
        a.apply(u_m, &[SYSTEM, env])?;
        input_adj.apply(&mut a, &IoChannel::placement(input_adj.qubits(), 0))?;
        a_cols.push(a);

        let mut b = ch.embed(&e);
        ch.output().apply(&mut b, &IoChannel::placement(ch.output().qubits(), 0))?;
        b.apply(ch.target(), &[ls_engine::INTERFACE, env])?;
        b_cols.push(b);
    }
    Ok(ComplexMatrix::from_fn(d, d, |i, j| b_cols[i].inner(&a_cols[j])))
}

/// `min_Ψ |⟨Ψ|K|Ψ⟩|` over unit `Ψ`: zero when the numerical range of `K`
/// contains the origin, else `max_θ λ_min((e^{−iθ}K + e^{iθ}K†)/2)`.
pub fn numerical_range_min_modulus(k: &ComplexMatrix) -> Result<f64> {
    let kd = k.adjoint();
    let support = |t: f64| -> Result<f64> {
        let h = &k.scale(C64::from_polar(0.5, -t)) + &kd.scale(C64::from_polar(0.5, t));
        Ok(eigh(&h)?.values[0])
    };
    let step = std::f64::consts::TAU / THETA_GRID as f64;
    let grid: Vec<f64> = (0..THETA_GRID).map(|i| support(i as f64 * step)).collect::<Result<_>>()?;
    let mut best = grid.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    // Refine every local maximum of the grid by golden-section search.
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    for i in 0..THETA_GRID {
        let (l, r) = (grid[(i + THETA_GRID - 1) % THETA_GRID], grid[(i + 1) % THETA_GRID]);
        if grid[i] < l || grid[i] < r {
            continue;
        }
        let (mut a, mut b) = ((i as f64 - 1.0) * step, (i as f64 + 1.0) * step);
        let mut c = b - ratio * (b - a);
        let mut d = a + ratio * (b - a);
        let (mut fc, mut fd) = (support(c)?, support(d)?);
        for _ in 0..60 {
            if fc > fd {
                b = d;
                d = c;
                fd = fc;
                c = b - ratio * (b - a);
                fc = support(c)?;
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + ratio * (b - a);
                fd = support(d)?;
            }
        }
        best = best.max(fc).max(fd);
    }
    Ok(best.max(0.0))
}

#[derive(Clone, Copy)]
enum Family {
    /// Any unit vector on `S ⊗ E`.
    Full,
    /// `|1⟩_S ⊗ |e⟩_E`
    Excited,
}

struct FidelityCost<'a> {
    k: &'a ComplexMatrix,
    family: Family,
}

impl FidelityCost<'_> {
    fn state(&self, x: &[f64]) -> Option<Vec<C64>> {
        let v: Vec<C64> = x.chunks(2).map(|p| C64::new(p[0], p[1])).collect();
        let n = linalg_core::vector::norm(&v);
        if n <= 1e-12 {
            return None;
        }
        let v: Vec<C64> = v.into_iter().map(|z| z / n).collect();
        Some(match self.family {
            Family::Full => v,
            Family::Excited => {
                let mut full = vec![C64::new(0.0, 0.0); v.len()];
                full.extend(v);
                full
            }
        })
    }

    fn modulus(&self, x: &[f64]) -> f64 {
        match self.state(x) {
            Some(psi) => linalg_core::vector::inner(&psi, &self.k.apply(&psi)).norm(),
            None => 1.0,
        }
    }
}

impl CostFunction for FidelityCost<'_> {
    type Param = Vec<f64>;
    type Output = f64;

    fn cost(&self, x: &Self::Param) -> std::result::Result<f64, ArgminError> {
        Ok(self.modulus(x).powi(2))
    }
}

struct Run {
    modulus: f64,
    converged: bool,
}

fn simplex(x0: &[f64], scale: f64) -> Vec<Vec<f64>> {
    let mut pts = vec![x0.to_vec()];
    for i in 0..x0.len() {
        let mut p = x0.to_vec();
        p[i] += scale;
        pts.push(p);
    }
    pts
}

fn minimise(k: &ComplexMatrix, family: Family, x0: Vec<f64>) -> Result<Run> {
    let mut x = x0;
    let mut converged = false;
    let mut scale = 0.5;
    for _ in 0..POLISH_ROUNDS {
        let solver = NelderMead::new(simplex(&x, scale))
            .with_sd_tolerance(1e-15)
            .map_err(|e| IoError::Dimension(e.to_string()))?;
        let res = Executor::new(FidelityCost { k, family }, solver)
            .configure(|s| s.max_iters(MAX_ITERS))
            .run()
            .map_err(|e| IoError::Dimension(e.to_string()))?;
        let state = res.state();
        converged = matches!(state.get_termination_status(), TerminationStatus::Terminated(TerminationReason::SolverConverged));
        if let Some(best) = state.get_best_param() {
            x = best.clone();
        }
        // Restarting from the best vertex with a smaller simplex undoes
        // premature collapse, a known weakness of Nelder–Mead.
        scale *= 0.1;
    }
    Ok(Run { modulus: FidelityCost { k, family }.modulus(&x), converged })
}

fn start(seed: u64, stream: u64, len: usize) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    (0..len).map(|_| rng.sample(StandardNormal)).collect()
}

/// Measures `2√(1 − min_Ψ |F(Ψ)|²)` for the composed channel against `u_m`
/// (a unitary on `S ⊗ E`) and compares it with the error bound at the
/// channel's `(ξ_out, ξ_in)`. `sample_budget` random starts are drawn from
/// `seed`; the `|1⟩_S ⊗ |e⟩_E` family gets its own starts.
pub fn verify_lemma1(ch: &IoChannel, u_m: &ComplexMatrix, sample_budget: usize, seed: u64) -> Result<BoundReport> {
    let k = fidelity_operator(ch, u_m)?;
    let d = ch.port_dim();
    let de = ch.env_dim();

    let full: Vec<Run> = (0..sample_budget as u64)
        .into_par_iter()
        .map(|i| minimise(&k, Family::Full, start(seed, i, 2 * d)))
        .collect::<Result<_>>()?;
    let family: Vec<Run> = (0..FAMILY_STARTS as u64)
        .into_par_iter()
        .map(|i| {
            // Basis vectors of E first, then random directions.
            let x0 = if (i as usize) < de {
                let mut x = vec![0.0; 2 * de];
                x[2 * i as usize] = 1.0;
                x
            } else {
                start(seed, u64::MAX - i, 2 * de)
            };
            minimise(&k, Family::Excited, x0)
        })
        .collect::<Result<_>>()?;

    let best_of = |runs: &[Run]| -> Option<(f64, bool)> {
        runs.iter().map(|r| (r.modulus, r.converged)).min_by(|a, b| a.0.total_cmp(&b.0))
    };
    let family_best = best_of(&family).expect("family starts are nonempty");
    let (min_fidelity, converged) = match best_of(&full) {
        Some(f) if f.0 < family_best.0 => f,
        _ => family_best,
    };
    let oracle = numerical_range_min_modulus(&k)?;
    Ok(BoundReport {
        xi_out: ch.xi_out(),
        xi_in: ch.xi_in(),
        xi_cap: xi_cap(ch.xi_out(), ch.xi_in()),
        bound: lemma1_bound(ch.xi_out(), ch.xi_in()),
        measured_distance: distance_from_fidelity(min_fidelity),
        min_fidelity,
        family_distance: distance_from_fidelity(family_best.0),
        oracle_distance: distance_from_fidelity(oracle),
        samples: sample_budget + FAMILY_STARTS,
        converged,
    })
}
