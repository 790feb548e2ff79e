use interface_analysis::classify;
use linalg_core::{operator_schmidt, schmidt_number, ComplexMatrix, STRUCTURAL_ZERO};

use crate::{interface_from_hamiltonian, HamiltonianPair, Result};

/// Summary of the `ZZ`-coupled family over a set of durations.
#[derive(Clone, Debug, PartialEq)]
pub struct ZzFamilyVerdict {
    pub samples: usize,
    /// Every sample has the form `[A 0; 0 B]` in the `Z` basis of `S`.
    pub all_block_diagonal: bool,
    pub max_schmidt_number: usize,
    /// Number of samples the exploitability check accepted.
    pub exploitable_count: usize,
}

impl ZzFamilyVerdict {
    pub fn never_exploitable(&self) -> bool {
        self.exploitable_count == 0
    }
}

/// True when `u` does not couple the `|0⟩_S` and `|1⟩_S` blocks.
pub fn is_block_diagonal(u: &ComplexMatrix) -> bool {
    (0..2).all(|i| (2..4).all(|j| u[(i, j)].norm() <= STRUCTURAL_ZERO && u[(j, i)].norm() <= STRUCTURAL_ZERO))
}

/// Evolves the `rZZ + gZ` model for each duration and checks structure,
/// operator Schmidt number and exploitability.
pub fn classify_zz_family(r: f64, g: f64, times: &[f64]) -> Result<ZzFamilyVerdict> {
    let pair = HamiltonianPair::zz(r, g);
    let mut verdict =
        ZzFamilyVerdict { samples: times.len(), all_block_diagonal: true, max_schmidt_number: 0, exploitable_count: 0 };
    for &t in times {
        let u = interface_from_hamiltonian(&pair, t)?;
        verdict.all_block_diagonal &= is_block_diagonal(&u);
        verdict.max_schmidt_number = verdict.max_schmidt_number.max(schmidt_number(&operator_schmidt(&u)?));
        if classify(&u)?.exploitable {
            verdict.exploitable_count += 1;
        }
    }
    Ok(verdict)
}
