use interface_analysis::construct::hide_in_random_frame;
use io_composition::{
    output_transfer, random_transfer, synthesize_input, verify_lemma1, BoundReport, InputDiagnostic, IoChannel,
    Transfer, BOUND_SLACK,
};
use linalg_core::random::haar_unitary;
use linalg_core::ComplexMatrix;
use rand::Rng;

use super::{ground_isolated, point_rng, run_points, uniform, Outcome, PointExt};
use crate::config::{IoRoundtripParams, Lemma1Params, TargetMap};
use crate::error::Result;
use crate::record::ResultRecord;

/// Largest tolerated gap between the optimiser and the exact minimum.
const ORACLE_GAP: f64 = 1e-5;
/// Leakage of a built transfer against the value it was built for.
const LEAKAGE_TOL: f64 = 1e-9;

fn with_report(rec: ResultRecord, rep: &BoundReport) -> ResultRecord {
    rec.input("xi_out", rep.xi_out)
        .input("xi_in", rep.xi_in)
        .measure("measured_distance", rep.measured_distance)
        .measure("oracle_distance", rep.oracle_distance)
        .measure("family_distance", rep.family_distance)
        .measure("min_fidelity", rep.min_fidelity)
        .measure("converged", rep.converged)
        .predict("xi_cap", rep.xi_cap)
        .predict("bound", rep.bound)
        .check("within_bound", rep.within_bound())
        .check("oracle_within_bound", rep.oracle_distance <= rep.bound + BOUND_SLACK)
        .check(
            "optimiser_matches_oracle",
            rep.measured_distance <= rep.oracle_distance + 1e-9 && rep.oracle_distance - rep.measured_distance <= ORACLE_GAP,
        )
}

/// Synthetic transfers with random leakage, a Haar `U_M` on `S ⊗ E` and the
/// same unitary as the target on `I ⊗ E`.
pub(crate) fn lemma1(p: &Lemma1Params, seed: u64) -> Result<Outcome> {
    let records = run_points(p.samples, |i| {
        let mut rng = point_rng(seed, i as u64);
        let (xi_out, xi_in) = (uniform(&mut rng, [0.0, p.xi_max]), uniform(&mut rng, [0.0, p.xi_max]));
        let out = Transfer::matrix(random_transfer(&mut rng, xi_out, p.registers).at(i)?).at(i)?;
        let inn = Transfer::matrix(random_transfer(&mut rng, xi_in, p.registers).at(i)?).at(i)?.adjoint();
        let u_m = haar_unitary(&mut rng, 2 * p.env_dim);
        let ch = IoChannel::new(out, u_m.clone(), inn, xi_out, xi_in).at(i)?;
        let rep = verify_lemma1(&ch, &u_m, p.starts, rng.random()).at(i)?;
        let rec = ResultRecord::new("lemma1", i).input("env_dim", p.env_dim);
        let trivial = rep.xi_cap >= 0.0 || rep.bound == 2.0;
        Ok(vec![with_report(rec, &rep).check("trivial_bound_when_negative", trivial)])
    })?;
    Ok(Outcome { records, notes: Vec::new() })
}

/// Output transfer and synthesized input for interfaces that keep `|00⟩`
/// isolated, composed around a target on `I ⊗ E`.
pub(crate) fn io_roundtrip(p: &IoRoundtripParams, seed: u64) -> Result<Outcome> {
    let records = run_points(p.samples, |i| {
        let mut rng = point_rng(seed, i as u64);
        let mut u = ground_isolated(&mut rng);
        if p.hide_frame {
            u = hide_in_random_frame(&mut rng, &u).0;
        }
        let rec = ResultRecord::new("io_roundtrip", i).input("uses_out", p.uses_out).input("uses_in", p.uses_in);
        let s = synthesize_input(&u, p.uses_in).at(i)?;
        let (Some(input), Some(xi_in), Some(forward), InputDiagnostic::Ready(in_alg)) =
            (s.sequence.clone(), s.xi_in, s.forward.clone(), s.diagnostic)
        else {
            return Ok(vec![rec.measure("diagnostic", format!("{:?}", s.diagnostic)).check("input_ready", false)]);
        };
        let (output, xi_out, out_alg) = output_transfer(&forward, p.uses_out).at(i)?;
        let target = match p.target {
            TargetMap::Identity => ComplexMatrix::identity(2 * p.env_dim),
            TargetMap::Haar => haar_unitary(&mut rng, 2 * p.env_dim),
        };
        let (output, input) = (Transfer::Sequence(output), Transfer::Sequence(input));
        let leak_out = output.leakage().at(i)?;
        let leak_in = input.adjoint().leakage().at(i)?;
        let ch = IoChannel::new(output, target.clone(), input, xi_out, xi_in).at(i)?;
        let rep = verify_lemma1(&ch, &target, p.starts, rng.random()).at(i)?;
        let rec = rec
            .measure("output_algorithm", format!("{out_alg:?}"))
            .measure("input_algorithm", format!("{in_alg:?}"))
            .measure("leakage_out", leak_out)
            .measure("leakage_in", leak_in)
            .check("input_ready", true)
            .check("leakage_out_matches", (leak_out - xi_out).abs() <= LEAKAGE_TOL)
            .check("leakage_in_matches", (leak_in - xi_in).abs() <= LEAKAGE_TOL);
        Ok(vec![with_report(rec, &rep)])
    })?;
    Ok(Outcome { records, notes: Vec::new() })
}
