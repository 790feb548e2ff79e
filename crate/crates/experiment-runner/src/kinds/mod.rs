//! One module per experiment kind. Each turns its parameters and the seed
//! into records and free-text notes.

mod cs;
mod hamiltonian;
mod io;
mod ls;
mod phase;

use std::f64::consts::TAU;
use std::fmt::Display;
use std::time::Instant;

use linalg_core::random::{haar_unitary, random_state};
use linalg_core::{ComplexMatrix, StateVector, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::config::Params;
use crate::error::{Result, RunnerError};
use crate::record::ResultRecord;

/// Tolerance for the structural checks: unitarity and normalisation.
pub const STRUCTURE_TOL: f64 = 1e-10;

/// Streams at or above this are shared by several points; per-point
/// streams are the point indices.
const SHARED_STREAM: u64 = 1 << 40;

#[derive(Clone, Debug, Default)]
pub struct Outcome {
    pub records: Vec<ResultRecord>,
    pub notes: Vec<String>,
}

/// The random stream of point `stream` under `seed`.
pub fn point_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

pub(crate) fn shared_rng(seed: u64, group: usize) -> ChaCha8Rng {
    point_rng(seed, SHARED_STREAM + group as u64)
}

pub(crate) trait PointExt<T> {
    fn at(self, point: usize) -> Result<T>;
}

impl<T, E: Display> PointExt<T> for std::result::Result<T, E> {
    fn at(self, point: usize) -> Result<T> {
        self.map_err(|e| RunnerError::Point { point, message: e.to_string() })
    }
}

/// Runs `f` for every point in parallel and concatenates the records in
/// point order. Each record gets its point's wall time.
pub(crate) fn run_points<F>(count: usize, f: F) -> Result<Vec<ResultRecord>>
where
    F: Fn(usize) -> Result<Vec<ResultRecord>> + Sync,
{
    let per_point: Vec<Vec<ResultRecord>> = (0..count)
        .into_par_iter()
        .map(|i| {
            let start = Instant::now();
            let mut recs = f(i)?;
            let secs = start.elapsed().as_secs_f64();
            for r in &mut recs {
                r.wall_time = secs;
            }
            Ok(recs)
        })
        .collect::<Result<_>>()?;
    Ok(per_point.into_iter().flatten().collect())
}

pub(crate) fn uniform<R: Rng + ?Sized>(rng: &mut R, range: [f64; 2]) -> f64 {
    range[0] + (range[1] - range[0]) * rng.random::<f64>()
}

/// Random normalised `(a, b)` for the system qubit.
pub(crate) fn random_input<R: Rng + ?Sized>(rng: &mut R) -> (C64, C64) {
    let v = random_state(rng, 2);
    (v[0], v[1])
}

/// `e^{iχ} ⊕ V` with `V` Haar on the three states other than `|00⟩`.
/// Both the matrix and its adjoint keep `|00⟩` isolated.
pub(crate) fn ground_isolated<R: Rng + ?Sized>(rng: &mut R) -> ComplexMatrix {
    let v = haar_unitary(rng, 3);
    let mut u = ComplexMatrix::zeros(4, 4);
    u[(0, 0)] = C64::from_polar(1.0, rng.random_range(0.0..TAU));
    for i in 0..3 {
        for j in 0..3 {
            u[(i + 1, j + 1)] = v[(i, j)];
        }
    }
    u
}

pub(crate) fn norm_defect(st: &StateVector) -> f64 {
    (st.norm() - 1.0).abs()
}

pub fn run_kind(params: &Params, seed: u64) -> Result<Outcome> {
    match params {
        Params::LsConvergence(p) => ls::ls_convergence(p, seed),
        Params::CsConvergence(p) => cs::cs_convergence(p, seed),
        Params::CsBounds(p) => cs::cs_bounds(p, seed),
        Params::Lemma1(p) => io::lemma1(p, seed),
        Params::ZzNegative(p) => hamiltonian::zz_negative(p, seed),
        Params::XxEffective(p) => hamiltonian::xx_effective(p, seed),
        Params::IoRoundtrip(p) => io::io_roundtrip(p, seed),
        Params::PhaseAdjust(p) => phase::phase_adjust(p, seed),
    }
}
