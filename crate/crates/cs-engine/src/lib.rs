//! Output transfer with a constant-size register.
//!
//! The layout is `S, I, R` (three qubits, dimension 8) for every number of
//! interface uses. After the first two uses the state of the `|0⟩_S` branch
//! is kept inside `|0⟩_I ⊗ R`, and a fresh step unitary `W` on `I ⊗ R`
//! folds each new interface use back into that form:
//!
//! ```text
//! |0⟩_S|0⟩_I (a|0⟩ + bη|1⟩)_R + b(μ0|1⟩_S|0⟩_I|m0⟩_R + μ1|1⟩_S|1⟩_I|m1⟩_R)
//! ```
//!
//! `ξ = √(1 − η²)` is the amplitude still stuck in the system.

mod bounds;
mod error;
mod run;
mod step;

pub use bounds::{cs_bounds, decay_factor, effective_exponent, CsBounds};
pub use error::{CsError, Result};
pub use run::{build_cs_with_waits, cs_sequence, run_cs, CS_QUBITS};
pub use step::{cs_initialize, cs_recursion, cs_step, CsStepState, ORTHONORMALITY_LIMIT};
