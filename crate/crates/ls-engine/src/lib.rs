//! Output transfer from a system qubit into a growing quantum register.
//!
//! Subsystems are ordered `S, I, R1, …, RN` with an optional extra register
//! qubit `R_S` last. The system `S` is only touched by the interface
//! unitary (and by its own Hamiltonian while waiting); everything else is
//! freely controllable.

mod error;
mod ls;
mod report;
mod sequence;

pub use error::{LsError, Result};
pub use ls::{
    build_s_n, build_s_n_timed, build_w_n, build_w_n_via_adjoint, escape_amplitude, escape_term, ls_sequence,
    ls_sequence_via_adjoint, run_ls, run_ls_via_adjoint, MAX_REGISTERS,
};
pub use report::{check_input, initial_state, TransferReport};
pub use sequence::{register, GateSequence, Step, INTERFACE, SYSTEM};
