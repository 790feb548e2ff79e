use crate::decomp::singular_values;
use crate::error::{LinalgError, Result};
use crate::matrix::ComplexMatrix;
use crate::STRUCTURAL_ZERO;

/// Realignment of a two-qubit operator across the first/second factor cut:
/// `R[(i,k),(j,l)] = U[(i,j),(k,l)]`.
pub fn realign(u: &ComplexMatrix) -> Result<ComplexMatrix> {
    if u.rows() != 4 || u.cols() != 4 {
        return Err(LinalgError::DimensionMismatch { expected: 4, got: u.rows().max(u.cols()) });
    }
    Ok(ComplexMatrix::from_fn(4, 4, |row, col| {
        let (i, k) = (row / 2, row % 2);
        let (j, l) = (col / 2, col % 2);
        u[(2 * i + j, 2 * k + l)]
    }))
}

/// Operator-Schmidt coefficients of a 4×4 operator, descending.
pub fn operator_schmidt(u: &ComplexMatrix) -> Result<Vec<f64>> {
    singular_values(&realign(u)?)
}

/// Number of coefficients above the structural-zero tolerance.
pub fn schmidt_number(values: &[f64]) -> usize {
    values.iter().filter(|&&s| s > STRUCTURAL_ZERO).count()
}

/// Kraus–Cirac class is at most one (local or controlled) exactly when the
/// Schmidt number is at most two.
pub fn kraus_cirac_at_most_one(values: &[f64]) -> bool {
    schmidt_number(values) <= 2
}
