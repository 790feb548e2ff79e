//! Batch experiments for the interface transfer crates.
//!
//! An experiment is a TOML config naming one of eight kinds. Running it
//! draws every random quantity from a ChaCha stream keyed by the seed and
//! the point index, evaluates the points in parallel and writes the
//! records as one CSV per metric plus a JSON summary of invariant
//! verdicts. Tables are byte-identical for identical configs.

pub mod config;
pub mod error;
pub mod kinds;
pub mod matrix_file;
pub mod record;
pub mod run;

pub use config::{ExperimentConfig, ExperimentKind, Params};
pub use error::{Result, RunnerError};
pub use record::{emit_tables, parse_table, read_table, ResultRecord, Table, Value};
pub use run::{
    collect_summaries, execute, resolve_workers, run_experiment, run_sweep, write_outputs, CheckTally, ExperimentRun,
    SweepEntry, Summary, WORKERS_ENV,
};
