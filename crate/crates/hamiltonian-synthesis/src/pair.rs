use linalg_core::{expm_hermitian, gates, tensor, ComplexMatrix, HERMITIAN_TOL};

use crate::{Result, SynthesisError};

/// System Hamiltonian and coupling, both in energy units.
#[derive(Clone, Debug)]
pub struct HamiltonianPair {
    h_s: ComplexMatrix,
    h_int: ComplexMatrix,
    h_on: ComplexMatrix,
}

fn check(name: &'static str, m: &ComplexMatrix, dim: usize) -> Result<()> {
    if m.rows() != dim || m.cols() != dim {
        return Err(SynthesisError::WrongShape(name, m.rows(), m.cols()));
    }
    let d = m.hermiticity_defect();
    if d > HERMITIAN_TOL {
        return Err(SynthesisError::NotHermitian(name, d));
    }
    Ok(())
}

impl HamiltonianPair {
    pub fn new(h_s: ComplexMatrix, h_int: ComplexMatrix) -> Result<Self> {
        check("H_S", &h_s, 2)?;
        check("H_int", &h_int, 4)?;
        let h_on = &tensor(&h_s, &ComplexMatrix::identity(2)) + &h_int;
        Ok(Self { h_s, h_int, h_on })
    }

    /// `H_S = gZ`, `H_int = rZ⊗Z`.
    pub fn zz(r: f64, g: f64) -> Self {
        let z = gates::pauli_z();
        Self::new(z.scale_real(g), tensor(&z, &z).scale_real(r)).expect("Pauli products are Hermitian")
    }

    /// `H_S = gZ`, `H_int = rX⊗X`.
    pub fn xx(r: f64, g: f64) -> Self {
        let x = gates::pauli_x();
        Self::new(gates::pauli_z().scale_real(g), tensor(&x, &x).scale_real(r)).expect("Pauli products are Hermitian")
    }

    pub fn h_s(&self) -> &ComplexMatrix {
        &self.h_s
    }

    pub fn h_int(&self) -> &ComplexMatrix {
        &self.h_int
    }

    /// `H_S ⊗ I + H_int`
    pub fn h_on(&self) -> &ComplexMatrix {
        &self.h_on
    }
}

/// `e^{−iH_on τ}`
pub fn interface_from_hamiltonian(pair: &HamiltonianPair, tau: f64) -> Result<ComplexMatrix> {
    if tau < 0.0 {
        return Err(SynthesisError::NegativeDuration(tau));
    }
    Ok(expm_hermitian(pair.h_on(), tau)?)
}
