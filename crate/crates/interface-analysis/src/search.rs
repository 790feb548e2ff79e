//! Numerical search for a feasible local basis.
//!
//! `|0⟩_S` and `|0⟩_I` are parameterized by Bloch angles and the corner
//! objective `‖(⟨1|_S ⊗ I) U |0⟩_S|0⟩_I‖²` is driven to zero by
//! Levenberg–Marquardt from a spread of grid starts. `|1⟩` of each factor is
//! the orthocomplement, so the objective and `β` only depend on four angles.

use std::f64::consts::{PI, TAU};

use linalg_core::{vector, ComplexMatrix, C64};

use crate::analysis::analyze_transformed;
use crate::basis::{bloch_ket, LocalBasis};
use crate::{require_interface, Result};

/// Objective value below which a basis is accepted as feasible.
pub const ACCEPT_RESIDUAL: f64 = 1e-16;

const GRID_POINTS: usize = 64;
const BEST_STARTS: usize = 64;
const BETA_TIE: f64 = 1e-9;
const POLE_SNAP: f64 = 1e-9;

/// A feasible basis together with the angles that produced it.
#[derive(Clone, Debug)]
pub struct FeasibleBasis {
    pub basis: LocalBasis,
    /// `(θ_S, φ_S, θ_I, φ_I)` in canonical form.
    pub angles: [f64; 4],
    /// Corner objective of the returned basis, summed over all matrices
    /// searched jointly.
    pub residual: f64,
    /// `β` of the first matrix in the returned basis.
    pub beta: f64,
}

/// Returns a local basis in which `u` has vanishing `(10,00)` and `(11,00)`
/// entries, or `None` when the search finds no such basis. Among feasible
/// bases the one with smallest `β` wins.
pub fn find_feasible_basis(u: &ComplexMatrix) -> Result<Option<LocalBasis>> {
    Ok(search_feasible_basis(u)?.map(|f| f.basis))
}

pub fn search_feasible_basis(u: &ComplexMatrix) -> Result<Option<FeasibleBasis>> {
    find_joint_feasible_basis(std::slice::from_ref(u))
}

/// One basis that is feasible for every matrix in `us` at once.
pub fn find_joint_feasible_basis(us: &[ComplexMatrix]) -> Result<Option<FeasibleBasis>> {
    for u in us {
        require_interface(u)?;
    }
    if us.is_empty() {
        return Ok(None);
    }
    let problem = Corner { us };
    let grid = sphere_grid();

    let mut scored: Vec<(f64, [f64; 4])> = Vec::with_capacity(grid.len() * grid.len());
    for s in &grid {
        for i in &grid {
            let x = [s.0, s.1, i.0, i.1];
            scored.push((problem.cost(&x), x));
        }
    }

    // Starts: the globally best grid points, plus for every S direction its
    // best I partner so that distant solutions are not crowded out.
    let mut starts: Vec<[f64; 4]> = Vec::new();
    let mut order: Vec<usize> = (0..scored.len()).collect();
    order.sort_by(|&a, &b| scored[a].0.total_cmp(&scored[b].0).then(a.cmp(&b)));
    starts.extend(order.iter().take(BEST_STARTS).map(|&k| scored[k].1));
    for row in scored.chunks(grid.len()) {
        let best = row
            .iter()
            .min_by(|a, b| a.0.total_cmp(&b.0))
            .expect("grid rows are nonempty");
        starts.push(best.1);
    }

    let mut found: Vec<FeasibleBasis> = Vec::new();
    for x0 in starts {
        let (x, _) = levenberg_marquardt(|x| problem.residuals(x), x0);
        let angles = canonical(x);
        let residual = problem.cost(&angles);
        if residual < ACCEPT_RESIDUAL {
            let basis = LocalBasis::from_bloch(angles[0], angles[1], angles[2], angles[3]);
            let beta = analyze_transformed(basis.transform(&us[0]), basis.clone()).beta;
            found.push(FeasibleBasis { basis, angles, residual, beta });
        }
    }

    Ok(found.into_iter().min_by(|a, b| {
        if (a.beta - b.beta).abs() <= BETA_TIE {
            lexicographic(&a.angles, &b.angles)
        } else {
            a.beta.total_cmp(&b.beta)
        }
    }))
}

fn lexicographic(a: &[f64; 4], b: &[f64; 4]) -> std::cmp::Ordering {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.total_cmp(y))
        .find(|o| o.is_ne())
        .unwrap_or(std::cmp::Ordering::Equal)
}

struct Corner<'a> {
    us: &'a [ComplexMatrix],
}

impl Corner<'_> {
    fn residuals(&self, x: &[f64; 4]) -> Vec<f64> {
        let s0 = bloch_ket(x[0], x[1]);
        let s1 = vector::perp2(&s0);
        let i0 = bloch_ket(x[2], x[3]);
        let input = vector::kron(&s0, &i0);
        let mut out = Vec::with_capacity(4 * self.us.len());
        for u in self.us {
            let v = u.apply(&input);
            for j in 0..2 {
                let r: C64 = s1[0].conj() * v[j] + s1[1].conj() * v[2 + j];
                out.push(r.re);
                out.push(r.im);
            }
        }
        out
    }

    fn cost(&self, x: &[f64; 4]) -> f64 {
        self.residuals(x).iter().map(|r| r * r).sum()
    }
}

/// Fibonacci lattice on the sphere plus both poles, as `(θ, φ)` pairs.
fn sphere_grid() -> Vec<(f64, f64)> {
    let golden = PI * (3.0 - 5f64.sqrt());
    let mut pts = vec![(0.0, 0.0), (PI, 0.0)];
    for k in 0..GRID_POINTS {
        let z = 1.0 - (2 * k + 1) as f64 / GRID_POINTS as f64;
        pts.push((z.acos(), (k as f64 * golden).rem_euclid(TAU)));
    }
    pts
}

/// Folds angles into `θ ∈ [0, π]`, `φ ∈ [0, 2π)` and sets `φ = 0` at the poles.
fn canonical(x: [f64; 4]) -> [f64; 4] {
    let mut out = [0.0; 4];
    for f in 0..2 {
        let mut theta = x[2 * f].rem_euclid(TAU);
        let mut phi = x[2 * f + 1];
        if theta > PI {
            theta = TAU - theta;
            phi += PI;
        }
        phi = phi.rem_euclid(TAU);
        if TAU - phi < 1e-12 {
            phi = 0.0;
        }
        if theta < POLE_SNAP {
            theta = 0.0;
            phi = 0.0;
        } else if PI - theta < POLE_SNAP {
            theta = PI;
            phi = 0.0;
        }
        out[2 * f] = theta;
        out[2 * f + 1] = phi;
    }
    out
}

/// Damped Gauss–Newton on a residual vector with a central-difference
/// Jacobian. Returns the final point and its squared residual norm.
fn levenberg_marquardt(f: impl Fn(&[f64; 4]) -> Vec<f64>, x0: [f64; 4]) -> ([f64; 4], f64) {
    const H: f64 = 1e-7;
    let sq = |r: &[f64]| r.iter().map(|v| v * v).sum::<f64>();
    let mut x = x0;
    let mut r = f(&x);
    let mut cost = sq(&r);
    let mut lambda = 1e-3;
    for _ in 0..200 {
        if cost < 1e-30 {
            break;
        }
        let m = r.len();
        let mut jac = vec![[0.0; 4]; m];
        for p in 0..4 {
            let mut xp = x;
            let mut xm = x;
            xp[p] += H;
            xm[p] -= H;
            let (rp, rm) = (f(&xp), f(&xm));
            for k in 0..m {
                jac[k][p] = (rp[k] - rm[k]) / (2.0 * H);
            }
        }
        let mut jtj = [[0.0; 4]; 4];
        let mut jtr = [0.0; 4];
        for k in 0..m {
            for p in 0..4 {
                jtr[p] += jac[k][p] * r[k];
                for q in 0..4 {
                    jtj[p][q] += jac[k][p] * jac[k][q];
                }
            }
        }
        let mut improved = false;
        while lambda < 1e12 {
            let mut a = jtj;
            for p in 0..4 {
                a[p][p] += lambda * (jtj[p][p] + 1e-12);
            }
            let Some(step) = solve4(a, jtr.map(|v| -v)) else {
                lambda *= 4.0;
                continue;
            };
            let trial = [x[0] + step[0], x[1] + step[1], x[2] + step[2], x[3] + step[3]];
            let rt = f(&trial);
            let ct = sq(&rt);
            if ct < cost {
                let small = step.iter().map(|s| s.abs()).fold(0.0, f64::max) < 1e-15;
                x = trial;
                r = rt;
                let rel = (cost - ct) / cost;
                cost = ct;
                lambda = (lambda / 3.0).max(1e-15);
                improved = !small && rel > 1e-14;
                break;
            }
            lambda *= 4.0;
        }
        if !improved {
            break;
        }
    }
    (x, cost)
}

/// Gaussian elimination with partial pivoting on a 4×4 system.
fn solve4(mut a: [[f64; 4]; 4], mut b: [f64; 4]) -> Option<[f64; 4]> {
    for col in 0..4 {
        let piv = (col..4).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[piv][col].abs() < 1e-300 {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for row in col + 1..4 {
            let f = a[row][col] / a[col][col];
            let pivot = a[col];
            for (k, v) in a[row].iter_mut().enumerate().skip(col) {
                *v -= f * pivot[k];
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = [0.0; 4];
    for row in (0..4).rev() {
        let s: f64 = (row + 1..4).map(|k| a[row][k] * x[k]).sum();
        x[row] = (b[row] - s) / a[row][row];
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_folds_theta_and_snaps_poles() {
        let c = canonical([TAU - 0.5, 0.25, 1e-12, 3.0]);
        assert!((c[0] - 0.5).abs() < 1e-15);
        assert!((c[1] - (0.25 + PI)).abs() < 1e-15);
        assert_eq!((c[2], c[3]), (0.0, 0.0));
    }

    #[test]
    fn solve4_matches_known_solution() {
        let a = [[4.0, 1.0, 0.0, 0.0], [1.0, 3.0, 1.0, 0.0], [0.0, 1.0, 2.0, 0.5], [0.0, 0.0, 0.5, 1.0]];
        let x = [1.0, -2.0, 0.5, 3.0];
        let b: Vec<f64> = a.iter().map(|row| row.iter().zip(&x).map(|(p, q)| p * q).sum()).collect();
        let got = solve4(a, [b[0], b[1], b[2], b[3]]).unwrap();
        for k in 0..4 {
            assert!((got[k] - x[k]).abs() < 1e-12);
        }
    }

    #[test]
    fn grid_has_poles_and_lattice() {
        let g = sphere_grid();
        assert_eq!(g.len(), GRID_POINTS + 2);
        assert!(g.iter().all(|&(t, p)| (0.0..=PI).contains(&t) && (0.0..TAU).contains(&p)));
    }
}
