//! Interface unitaries generated by a switchable coupling.
//!
//! With the coupling on, `S` and `I` evolve under `H_on = H_S ⊗ I + H_int`;
//! with it off, `S` evolves under `H_S` alone while `I` is freely
//! controllable. Two model families are provided: `gZ_S` with a `rZZ`
//! coupling, which only ever yields controlled gates, and `gZ_S` with an
//! `rXX` coupling, where a three-segment pulse gives an exploitable gate.

mod effective;
mod error;
mod pair;
mod zz;

pub use effective::{build_u_eff, end_to_end_time_cost, solve_effective_interface, EffectiveInterfaceSolution};
pub use error::{Result, SynthesisError};
pub use pair::{interface_from_hamiltonian, HamiltonianPair};
pub use zz::{classify_zz_family, is_block_diagonal, ZzFamilyVerdict};
