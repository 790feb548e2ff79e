//! Deterministic unitary completion of partial isometries.

use crate::error::{LinalgError, Result};
use crate::matrix::ComplexMatrix;
use crate::vector::{self, inner};
use crate::{C64, ORTHONORMAL_TOL};

/// Residual below which a canonical basis vector is considered already
/// spanned and skipped.
pub const COMPLETION_SKIP_TOL: f64 = 1e-8;

fn check_orthonormal(vs: &[Vec<C64>], dim: usize) -> Result<()> {
    for v in vs {
        if v.len() != dim {
            return Err(LinalgError::DimensionMismatch { expected: dim, got: v.len() });
        }
    }
    let d = vector::orthonormality_defect(vs);
    if d > ORTHONORMAL_TOL {
        return Err(LinalgError::NotOrthonormal(d));
    }
    Ok(())
}

/// Extends orthonormal `vectors` to an orthonormal basis of `C^dim` by
/// Gram–Schmidt over `|0⟩, |1⟩, …` in index order. The given vectors come
/// first, unchanged.
pub fn extend_to_basis(vectors: &[Vec<C64>], dim: usize) -> Result<Vec<Vec<C64>>> {
    check_orthonormal(vectors, dim)?;
    let mut basis: Vec<Vec<C64>> = vectors.to_vec();
    for i in 0..dim {
        if basis.len() == dim {
            break;
        }
        let mut e = vector::basis(dim, i);
        // Two passes keep the result orthonormal to rounding even when the
        // first projection cancels most of the vector.
        for _ in 0..2 {
            for b in &basis {
                let c = inner(b, &e);
                vector::axpy(&mut e, -c, b);
            }
        }
        let n = vector::norm(&e);
        if n < COMPLETION_SKIP_TOL {
            continue;
        }
        basis.push(e.into_iter().map(|x| x / n).collect());
    }
    debug_assert_eq!(basis.len(), dim);
    Ok(basis)
}

/// A unitary `U` with `U·sources[j] = targets[j]`; the action on the
/// orthogonal complement pairs the canonical completions of both lists.
pub fn complete_to_unitary(sources: &[Vec<C64>], targets: &[Vec<C64>]) -> Result<ComplexMatrix> {
    if sources.len() != targets.len() {
        return Err(LinalgError::DimensionMismatch { expected: sources.len(), got: targets.len() });
    }
    let dim = match sources.first() {
        Some(v) => v.len(),
        None => return Err(LinalgError::DimensionMismatch { expected: 1, got: 0 }),
    };
    let a = extend_to_basis(sources, dim)?;
    let b = extend_to_basis(targets, dim)?;
    // U = Σ_k |b_k⟩⟨a_k|
    let mut u = ComplexMatrix::zeros(dim, dim);
    for (ak, bk) in a.iter().zip(&b) {
        for i in 0..dim {
            let bi = bk[i];
            if bi == C64::new(0.0, 0.0) {
                continue;
            }
            for j in 0..dim {
                u[(i, j)] += bi * ak[j].conj();
            }
        }
    }
    Ok(u)
}
