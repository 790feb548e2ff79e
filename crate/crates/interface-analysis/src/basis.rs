use linalg_core::{tensor, ComplexMatrix, C64, UNITARY_TOL};

use crate::{AnalysisError, Result};

/// A product basis `{|i⟩_S ⊗ |j⟩_I}` given by two 2×2 unitaries whose
/// columns are `|0⟩` and `|1⟩` of each factor.
#[derive(Clone, Debug, PartialEq)]
pub struct LocalBasis {
    basis_s: ComplexMatrix,
    basis_i: ComplexMatrix,
}

impl LocalBasis {
    pub fn new(basis_s: ComplexMatrix, basis_i: ComplexMatrix) -> Result<Self> {
        for m in [&basis_s, &basis_i] {
            if m.rows() != 2 || m.cols() != 2 {
                return Err(AnalysisError::WrongShape { rows: m.rows(), cols: m.cols() });
            }
            let d = m.unitarity_defect();
            if d > UNITARY_TOL {
                return Err(AnalysisError::NotUnitary(d));
            }
        }
        Ok(Self { basis_s, basis_i })
    }

    pub fn computational() -> Self {
        Self { basis_s: ComplexMatrix::identity(2), basis_i: ComplexMatrix::identity(2) }
    }

    /// Basis with `|0⟩ = cos(θ/2)|0⟩ + e^{iφ} sin(θ/2)|1⟩` on each factor and
    /// `|1⟩` its orthocomplement `−e^{−iφ} sin(θ/2)|0⟩ + cos(θ/2)|1⟩`.
    pub fn from_bloch(theta_s: f64, phi_s: f64, theta_i: f64, phi_i: f64) -> Self {
        Self { basis_s: bloch_frame(theta_s, phi_s), basis_i: bloch_frame(theta_i, phi_i) }
    }

    pub fn basis_s(&self) -> &ComplexMatrix {
        &self.basis_s
    }

    pub fn basis_i(&self) -> &ComplexMatrix {
        &self.basis_i
    }

    /// `B_S ⊗ B_I`
    pub fn product(&self) -> ComplexMatrix {
        tensor(&self.basis_s, &self.basis_i)
    }

    /// Matrix of `u` in this basis, `(B_S⊗B_I)† u (B_S⊗B_I)`.
    pub fn transform(&self, u: &ComplexMatrix) -> ComplexMatrix {
        let b = self.product();
        b.adjoint().matmul(u).matmul(&b)
    }

    /// Inverse of [`transform`](Self::transform): maps a matrix written in
    /// this basis back to computational coordinates.
    pub fn untransform(&self, m: &ComplexMatrix) -> ComplexMatrix {
        let b = self.product();
        b.matmul(m).matmul(&b.adjoint())
    }

    /// `|j⟩_S` in computational coordinates.
    pub fn s_ket(&self, j: usize) -> [C64; 2] {
        [self.basis_s[(0, j)], self.basis_s[(1, j)]]
    }

    /// `|j⟩_I` in computational coordinates.
    pub fn i_ket(&self, j: usize) -> [C64; 2] {
        [self.basis_i[(0, j)], self.basis_i[(1, j)]]
    }
}

pub(crate) fn bloch_ket(theta: f64, phi: f64) -> [C64; 2] {
    let (s, c) = (theta / 2.0).sin_cos();
    [C64::new(c, 0.0), C64::from_polar(s, phi)]
}

fn bloch_frame(theta: f64, phi: f64) -> ComplexMatrix {
    let (s, c) = (theta / 2.0).sin_cos();
    ComplexMatrix::from_rows(&[
        [C64::new(c, 0.0), -C64::from_polar(s, -phi)],
        [C64::from_polar(s, phi), C64::new(c, 0.0)],
    ])
}
