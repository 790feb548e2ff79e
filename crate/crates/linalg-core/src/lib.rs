//! Dense complex linear algebra for few-qubit simulations.
//!
//! Matrices are row-major, Kronecker products put the left factor in the
//! most significant position, and every decomposition returns its factors in
//! a fixed order so repeated runs produce identical numbers.

mod complete;
mod decomp;
mod error;
pub mod gates;
mod matrix;
pub mod random;
mod schmidt;
mod state;
pub mod vector;

pub use num_complex::Complex64 as C64;

pub use complete::{complete_to_unitary, extend_to_basis, COMPLETION_SKIP_TOL};
pub use decomp::{eigh, expm_hermitian, qr_positive, singular_values, svd, Eigh, Svd};
pub use error::{LinalgError, Result};
pub use matrix::{tensor, tensor_all, ComplexMatrix};
pub use schmidt::{kraus_cirac_at_most_one, operator_schmidt, realign, schmidt_number};
pub use state::{embed_operator, partial_trace_density, StateVector};

/// Threshold for treating a magnitude as exactly zero.
pub const STRUCTURAL_ZERO: f64 = 1e-10;
/// Entrywise tolerance for matrix equality.
pub const MATRIX_EQ_TOL: f64 = 1e-12;
/// Tolerance on `‖U†U − I‖_max` for matrices treated as unitary.
pub const UNITARY_TOL: f64 = 1e-10;
/// Tolerance on `‖H − H†‖_max` for matrices treated as Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-10;
/// Tolerance on Gram-matrix deviation for vectors treated as orthonormal.
pub const ORTHONORMAL_TOL: f64 = 1e-10;

/// Shorthand for a real complex number.
pub fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// Shorthand for an arbitrary complex number.
pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}
