use hamiltonian_synthesis::{build_u_eff, solve_effective_interface, HamiltonianPair};
use interface_analysis::construct::random_interface;
use interface_analysis::{analyze_in_basis, classify, InterfaceAnalysis, LocalBasis, Regime};
use ls_engine::{build_w_n, run_ls};
use rand::Rng;

use super::{norm_defect, point_rng, random_input, run_points, shared_rng, Outcome, PointExt, STRUCTURE_TOL};
use crate::config::{Construction, LsConvergenceParams};
use crate::error::{Result, RunnerError};
use crate::record::ResultRecord;

/// Interface with the requested `β`, analysed in a feasible basis.
fn interface_for_beta<R: Rng + ?Sized>(
    rng: &mut R,
    beta: f64,
    construction: Construction,
    point: usize,
) -> Result<InterfaceAnalysis> {
    match construction {
        Construction::Direct => {
            let u = random_interface(rng, Regime::B0, Some(beta));
            analyze_in_basis(&u, &LocalBasis::computational()).at(point)
        }
        Construction::UEff => {
            // ω̄ = 1 and |g|/ω̄ = β.
            let (r, g) = ((1.0 - beta * beta).sqrt(), beta);
            let sol = solve_effective_interface(r, g).at(point)?;
            let u = build_u_eff(&HamiltonianPair::xx(r, g), sol.tau_star, sol.t_star, sol.s_star).at(point)?;
            let v = classify(&u).at(point)?;
            match (v.exploitable, v.analysis) {
                (true, Some(a)) => Ok(a),
                _ => Err(RunnerError::Point { point, message: format!("U_eff for beta {beta} is not exploitable") }),
            }
        }
    }
}

pub(crate) fn ls_convergence(p: &LsConvergenceParams, seed: u64) -> Result<Outcome> {
    let points: Vec<(usize, usize)> =
        (0..p.betas.len()).flat_map(|b| (p.n_min..=p.n_max).map(move |n| (b, n))).collect();
    let records = run_points(points.len(), |i| {
        let (bi, n) = points[i];
        let beta = p.betas[bi];
        // One interface per β so the rows of a β trace a single unitary.
        let u = interface_for_beta(&mut shared_rng(seed, bi), beta, p.construction, i)?;
        let input = random_input(&mut point_rng(seed, i as u64));
        let w_defect = build_w_n(&u, n).at(i)?.unitarity_defect();
        let rep = run_ls(&u, n, input).at(i)?;
        let predicted = beta.powi(n as i32 + 1);
        let state_defect = norm_defect(&rep.final_state);
        Ok(vec![ResultRecord::new("ls_convergence", i)
            .input("beta", beta)
            .input("n", n)
            .input("uses", n + 1)
            .measure("xi_measured", rep.xi_measured)
            .measure("beta_analysis", u.beta)
            .measure("fidelity_to_ideal", rep.fidelity_to_ideal)
            .measure("w_unitarity_defect", w_defect)
            .measure("state_norm_defect", state_defect)
            .predict("xi_predicted", predicted)
            .check("xi_law", (rep.xi_measured - predicted).abs() <= p.tolerance)
            .check("w_unitary", w_defect <= STRUCTURE_TOL)
            .check("state_normalized", state_defect <= STRUCTURE_TOL)])
    })?;
    Ok(Outcome { records, notes: Vec::new() })
}
