//! Jacobi-based eigen- and singular-value decompositions and Gram–Schmidt QR.
//!
//! The matrices in this workspace are small (at most a few dozen rows for
//! decompositions), where cyclic Jacobi sweeps are accurate to rounding,
//! handle exact rank deficiency cleanly and are fully deterministic.

use crate::error::{LinalgError, Result};
use crate::matrix::ComplexMatrix;
use crate::vector::{self, inner};
use crate::{C64, HERMITIAN_TOL};

const MAX_SWEEPS: usize = 100;

/// Hermitian eigendecomposition.
#[derive(Clone, Debug)]
pub struct Eigh {
    /// Eigenvalues in ascending order.
    pub values: Vec<f64>,
    /// Eigenvectors as columns, matching `values`.
    pub vectors: ComplexMatrix,
}

/// `(c, s)` of the real rotation annihilating the off-diagonal entry `b ≥ 0`
/// of `[[a, b], [b, d]]`.
fn sym_schur2(a: f64, b: f64, d: f64) -> (f64, f64) {
    let tau = (d - a) / (2.0 * b);
    let t = tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt());
    let c = 1.0 / (1.0 + t * t).sqrt();
    (c, t * c)
}

pub fn eigh(h: &ComplexMatrix) -> Result<Eigh> {
    h.require_hermitian(HERMITIAN_TOL)?;
    let n = h.rows();
    let mut a = (h + &h.adjoint()).scale_real(0.5);
    let mut v = ComplexMatrix::identity(n);
    let scale = a.frobenius_norm().max(f64::MIN_POSITIVE);
    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[(i, j)].norm_sqr())
            .sum::<f64>()
            .sqrt();
        if off <= 1e-17 * scale {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let b = a[(p, q)];
                if b.norm() <= 1e-300 {
                    continue;
                }
                let phase = b / b.norm();
                let (c, s) = sym_schur2(a[(p, p)].re, b.norm(), a[(q, q)].re);
                // G = diag(1, e^{−iφ})·[[c, s], [−s, c]] in the (p, q) plane.
                let g = [[C64::new(c, 0.0), C64::new(s, 0.0)], [-phase.conj() * s, phase.conj() * c]];
                for k in 0..n {
                    let (x, y) = (a[(k, p)], a[(k, q)]);
                    a[(k, p)] = x * g[0][0] + y * g[1][0];
                    a[(k, q)] = x * g[0][1] + y * g[1][1];
                }
                for k in 0..n {
                    let (x, y) = (a[(p, k)], a[(q, k)]);
                    a[(p, k)] = g[0][0].conj() * x + g[1][0].conj() * y;
                    a[(q, k)] = g[0][1].conj() * x + g[1][1].conj() * y;
                }
                a[(p, q)] = C64::new(0.0, 0.0);
                a[(q, p)] = C64::new(0.0, 0.0);
                for k in 0..n {
                    let (x, y) = (v[(k, p)], v[(k, q)]);
                    v[(k, p)] = x * g[0][0] + y * g[1][0];
                    v[(k, q)] = x * g[0][1] + y * g[1][1];
                }
            }
        }
    }
    if !converged {
        return Err(LinalgError::NoConvergence);
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| a[(x, x)].re.total_cmp(&a[(y, y)].re));
    let values = order.iter().map(|&i| a[(i, i)].re).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |i, j| v[(i, order[j])]);
    Ok(Eigh { values, vectors })
}

/// Thin singular value decomposition `M = U·diag(s)·V†`.
#[derive(Clone, Debug)]
pub struct Svd {
    pub u: ComplexMatrix,
    /// Singular values in descending order.
    pub values: Vec<f64>,
    pub v_adjoint: ComplexMatrix,
}

/// One-sided (Hestenes) Jacobi SVD for `rows ≥ cols`.
fn svd_tall(m: &ComplexMatrix) -> Result<Svd> {
    let (rows, cols) = (m.rows(), m.cols());
    let mut a: Vec<Vec<C64>> = (0..cols).map(|j| m.column(j)).collect();
    let mut v: Vec<Vec<C64>> = (0..cols).map(|j| vector::basis(cols, j)).collect();
    // Pairs of columns at rounding level relative to the whole matrix are
    // left alone; rotating them only shuffles noise and may never settle.
    let floor = 1e-30 * m.frobenius_norm().powi(2);
    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..cols {
            for q in (p + 1)..cols {
                let alpha: f64 = a[p].iter().map(|z| z.norm_sqr()).sum();
                let beta: f64 = a[q].iter().map(|z| z.norm_sqr()).sum();
                let gamma = inner(&a[p], &a[q]);
                if gamma.norm() <= 1e-15 * (alpha * beta).sqrt() || gamma.norm() <= floor.max(1e-300) {
                    continue;
                }
                rotated = true;
                let phase = gamma / gamma.norm();
                let (c, s) = sym_schur2(alpha, gamma.norm(), beta);
                let rot = |x: &mut Vec<Vec<C64>>| {
                    for k in 0..x[p].len() {
                        let xp = x[p][k];
                        let xq = x[q][k] * phase.conj();
                        x[p][k] = xp * c - xq * s;
                        x[q][k] = xp * s + xq * c;
                    }
                };
                rot(&mut a);
                rot(&mut v);
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(LinalgError::NoConvergence);
    }
    let norms: Vec<f64> = a.iter().map(|col| vector::norm(col)).collect();
    let mut order: Vec<usize> = (0..cols).collect();
    order.sort_by(|&x, &y| norms[y].total_cmp(&norms[x]));
    let largest = norms.iter().cloned().fold(0.0, f64::max);
    let mut u_cols: Vec<Vec<C64>> = Vec::with_capacity(cols);
    for &j in &order {
        if norms[j] > 1e-14 * largest.max(f64::MIN_POSITIVE) {
            u_cols.push(a[j].iter().map(|z| z / norms[j]).collect());
        }
    }
    // Null directions: fill with canonical completion so U keeps orthonormal columns.
    let filled = crate::complete::extend_to_basis(&u_cols, rows).map_err(|_| LinalgError::NoConvergence)?;
    let u_cols: Vec<Vec<C64>> = filled.into_iter().take(cols).collect();
    let u = ComplexMatrix::from_columns(&u_cols);
    let v_adjoint = ComplexMatrix::from_fn(cols, cols, |i, j| v[order[i]][j].conj());
    Ok(Svd { u, values: order.iter().map(|&j| norms[j]).collect(), v_adjoint })
}

pub fn svd(m: &ComplexMatrix) -> Result<Svd> {
    if m.rows() >= m.cols() {
        svd_tall(m)
    } else {
        let t = svd_tall(&m.adjoint())?;
        Ok(Svd { u: t.v_adjoint.adjoint(), values: t.values, v_adjoint: t.u.adjoint() })
    }
}

pub fn singular_values(m: &ComplexMatrix) -> Result<Vec<f64>> {
    Ok(svd(m)?.values)
}

/// QR factorisation of a square or tall matrix with full column rank, by
/// re-orthogonalised Gram–Schmidt; the diagonal of `R` is real and positive.
pub fn qr_positive(m: &ComplexMatrix) -> Result<(ComplexMatrix, ComplexMatrix)> {
    let cols = m.cols();
    let mut q: Vec<Vec<C64>> = Vec::with_capacity(cols);
    let mut r = ComplexMatrix::zeros(cols, cols);
    for j in 0..cols {
        let mut x = m.column(j);
        for _ in 0..2 {
            for (i, qi) in q.iter().enumerate() {
                let c = inner(qi, &x);
                r[(i, j)] += c;
                vector::axpy(&mut x, -c, qi);
            }
        }
        let n = vector::norm(&x);
        if n <= 1e-14 {
            return Err(LinalgError::ZeroNorm(n));
        }
        r[(j, j)] = C64::new(n, 0.0);
        q.push(x.into_iter().map(|z| z / n).collect());
    }
    Ok((ComplexMatrix::from_columns(&q), r))
}

/// `e^{−iht}` for Hermitian `h`, via eigendecomposition.
pub fn expm_hermitian(h: &ComplexMatrix, t: f64) -> Result<ComplexMatrix> {
    let e = eigh(h)?;
    let n = h.rows();
    let phases: Vec<C64> = e.values.iter().map(|&l| C64::from_polar(1.0, -l * t)).collect();
    let v = &e.vectors;
    Ok(ComplexMatrix::from_fn(n, n, |i, j| {
        (0..n).map(|k| v[(i, k)] * phases[k] * v[(j, k)].conj()).sum()
    }))
}
