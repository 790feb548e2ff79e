//! Output transfer, a unitary target on the interface, and input transfer,
//! composed into one channel on `S ⊗ E`.
//!
//! The crate simulates the composite, builds input transfers from output
//! transfers of `U†`, removes the phases a diagonal system Hamiltonian
//! imprints during waits, and measures the worst-case distance of the
//! composite from its target.

mod channel;
mod error;
mod input;
mod lemma;
mod phase;
mod transfer;

pub use channel::{compose_phi, IoChannel, DEFAULT_ENV_DIM, MAX_ENV_DIM};
pub use error::{IoError, Result};
pub use input::{joint_shape, output_transfer, synthesize_input, Algorithm, InputDiagnostic, InputSynthesis, JointShape};
pub use lemma::{
    fidelity_operator, lemma1_bound, numerical_range_min_modulus, verify_lemma1, xi_cap, BoundReport, BOUND_SLACK,
};
pub use phase::{diagonal_gap, hs_phase_adjustment, ls_sequence_with_waits, success_branch_fidelity, PhaseCorrection};
pub use transfer::{random_transfer, transfer_with_leakage, Transfer};
