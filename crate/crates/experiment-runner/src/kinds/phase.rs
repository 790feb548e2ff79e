use cs_engine::{build_cs_with_waits, cs_sequence};
use interface_analysis::construct::random_interface;
use interface_analysis::{analyze_in_basis, LocalBasis, Regime};
use io_composition::{ls_sequence_with_waits, success_branch_fidelity};
use linalg_core::{re, ComplexMatrix, StateVector};
use ls_engine::{initial_state, ls_sequence, GateSequence};

use super::{norm_defect, point_rng, random_input, run_points, uniform, Outcome, PointExt, STRUCTURE_TOL};
use crate::config::{PhaseAdjustParams, TransferAlgorithm};
use crate::error::Result;
use crate::record::ResultRecord;

fn execute(seq: &GateSequence, input: (linalg_core::C64, linalg_core::C64), point: usize) -> Result<StateVector> {
    let mut st = initial_state(seq.subsystem_count(), input);
    seq.execute(&mut st).at(point)?;
    Ok(st)
}

/// Runs each algorithm with a diagonal `H_S` acting during random waits,
/// with its phase corrections, and compares the success branch with the
/// wait-free run.
pub(crate) fn phase_adjust(p: &PhaseAdjustParams, seed: u64) -> Result<Outcome> {
    let count = p.samples * p.algorithms.len();
    let records = run_points(count, |i| {
        let alg = p.algorithms[i / p.samples];
        let mut rng = point_rng(seed, i as u64);
        let u = random_interface(&mut rng, Regime::B0, None);
        let a = analyze_in_basis(&u, &LocalBasis::computational()).at(i)?;
        let e0 = uniform(&mut rng, p.energy);
        let gap = uniform(&mut rng, p.gap);
        let h_s = ComplexMatrix::diagonal(&[re(e0), re(e0 + gap)]);
        let input = random_input(&mut rng);
        let (free, with_waits, uncorrected, waits) = match alg {
            TransferAlgorithm::Ls => {
                let n = p.ls_registers;
                let off: Vec<f64> = (0..n).map(|_| uniform(&mut rng, p.off)).collect();
                (
                    ls_sequence(&a, n).at(i)?,
                    ls_sequence_with_waits(&a, &h_s, &off, true).at(i)?,
                    Some(ls_sequence_with_waits(&a, &h_s, &off, false).at(i)?),
                    off,
                )
            }
            TransferAlgorithm::Cs => {
                let n = p.cs_uses;
                let off: Vec<f64> = (0..n - 1).map(|_| uniform(&mut rng, p.off)).collect();
                (cs_sequence(&a, n).at(i)?, build_cs_with_waits(&a, n, &h_s, &off).at(i)?, None, off)
            }
        };
        let reference = execute(&free, input, i)?;
        let st = execute(&with_waits, input, i)?;
        let (fidelity, norm_gap) = success_branch_fidelity(&st, &reference).at(i)?;
        let uncorrected_fidelity = match &uncorrected {
            Some(seq) => success_branch_fidelity(&execute(seq, input, i)?, &reference).at(i)?.0,
            None => f64::NAN,
        };
        let state_defect = norm_defect(&st);
        Ok(vec![ResultRecord::new("phase_adjust", i)
            .input("algorithm", format!("{alg:?}").to_lowercase())
            .input("e0", e0)
            .input("gap", gap)
            .input("total_wait", waits.iter().sum::<f64>())
            .input("beta", a.beta)
            .measure("fidelity", fidelity)
            .measure("norm_gap", norm_gap)
            .measure("uncorrected_fidelity", uncorrected_fidelity)
            .measure("state_norm_defect", state_defect)
            .predict("fidelity", 1.0)
            .check("reproduces_wait_free_run", fidelity >= 1.0 - p.tolerance && norm_gap <= p.tolerance)
            .check("state_normalized", state_defect <= STRUCTURE_TOL)])
    })?;
    Ok(Outcome { records, notes: Vec::new() })
}
