//! Acceptance run: one PASS/FAIL line per criterion with its runtime and
//! limit. Exits nonzero when any criterion fails.

use std::process::ExitCode;
use std::time::Instant;

use experiment_runner::config::{
    CsBoundsParams, CsConvergenceParams, IoRoundtripParams, Lemma1Params, LsConvergenceParams, PhaseAdjustParams,
    RegimeName, XxEffectiveParams, ZzNegativeParams,
};
use experiment_runner::{execute, ExperimentConfig, ExperimentRun, Params};

const SEED: u64 = 20_240_601;

struct Outcome {
    pass: bool,
    detail: String,
    notes: Vec<String>,
}

fn run(params: Params) -> (ExperimentRun, f64) {
    let cfg = ExperimentConfig::new(params, SEED, "unused").expect("valid parameters");
    let start = Instant::now();
    let r = execute(&cfg).expect("experiment runs");
    (r, start.elapsed().as_secs_f64())
}

fn tally(run: &ExperimentRun, checks: &[&str]) -> (bool, String) {
    let mut ok = true;
    let parts: Vec<String> = checks
        .iter()
        .map(|c| {
            let t = run.tally(c);
            ok &= t.failed == 0 && t.passed > 0;
            format!("{c} {}/{}", t.passed, t.passed + t.failed)
        })
        .collect();
    (ok, parts.join(", "))
}

fn report(id: usize, title: &str, limit: Option<f64>, secs: f64, o: Outcome) -> bool {
    let in_time = limit.map_or(true, |l| secs < l);
    let pass = o.pass && in_time;
    let timing = match limit {
        Some(l) => format!("{secs:.2} s, limit {l} s"),
        None => format!("{secs:.2} s"),
    };
    let late = if in_time { "" } else { "; over the time limit" };
    println!("{} {id:>2} {title}: {}{late} ({timing})", if pass { "PASS" } else { "FAIL" }, o.detail);
    for n in &o.notes {
        println!("        {n}");
    }
    pass
}

fn main() -> ExitCode {
    let mut results = Vec::new();
    let mut runs: Vec<(Params, ExperimentRun)> = Vec::new();
    let mut keep = |p: Params, r: &ExperimentRun| runs.push((p, r.clone()));

    // 1
    let p = Params::LsConvergence(LsConvergenceParams::default());
    let (r, t) = run(p.clone());
    let (ok, detail) = tally(&r, &["xi_law"]);
    results.push(report(1, "LS leakage law", Some(10.0), t, Outcome { pass: ok, detail, notes: vec![] }));
    keep(p, &r);

    // 2
    let p = Params::CsConvergence(CsConvergenceParams { regimes: vec![RegimeName::A], ..Default::default() });
    let (r, t) = run(p.clone());
    let (ok, detail) = tally(&r, &["within_bounds"]);
    results.push(report(2, "CS regime A power law", Some(5.0), t, Outcome { pass: ok, detail, notes: vec![] }));
    keep(p, &r);

    // 3
    let p = Params::CsBounds(CsBoundsParams::default());
    let (r, t) = run(p.clone());
    let (ok, detail) = tally(&r, &["within_bounds", "sandwich"]);
    let notes = r.summary.notes.clone();
    results.push(report(3, "CS B0/B1/B2 sandwich", Some(60.0), t, Outcome { pass: ok, detail, notes }));
    keep(p, &r);

    // 4
    let p = Params::Lemma1(Lemma1Params::default());
    let (r, t) = run(p.clone());
    let (ok, mut detail) = tally(&r, &["within_bound", "trivial_bound_when_negative"]);
    let negative = r.records.iter().filter(|x| x.get("xi_cap").and_then(|v| v.as_f64()).is_some_and(|v| v < 0.0)).count();
    detail.push_str(&format!(", {negative} samples with negative cap"));
    results.push(report(4, "composed-channel error bound", Some(120.0), t, Outcome { pass: ok, detail, notes: vec![] }));
    keep(p, &r);

    // 5
    let p = Params::ZzNegative(ZzNegativeParams::default());
    let (r, t) = run(p.clone());
    let (ok, detail) = tally(&r, &["not_exploitable", "schmidt_at_most_two"]);
    results.push(report(5, "ZZ coupling never exploitable", Some(10.0), t, Outcome { pass: ok, detail, notes: vec![] }));
    keep(p, &r);

    // 6
    let p = Params::XxEffective(XxEffectiveParams::default());
    let (r, t) = run(p.clone());
    let (ok, detail) = tally(&r, &["exploitable", "beta_is_coupling_ratio", "n_star_reaches_target"]);
    let worst = r
        .records
        .iter()
        .filter_map(|x| Some((x.get("beta_measured")?.as_f64()? - x.get("beta_coupling_ratio")?.as_f64()?).abs()))
        .fold(0.0, f64::max);
    let notes = vec![format!("largest |beta - r/omega_bar| = {worst:.3e}")];
    results.push(report(6, "XX effective interface", Some(30.0), t, Outcome { pass: ok, detail, notes }));
    keep(p, &r);

    // 7
    let p = Params::CsConvergence(CsConvergenceParams {
        regimes: vec![RegimeName::A, RegimeName::B0, RegimeName::B1, RegimeName::B2],
        instances: 25,
        ..Default::default()
    });
    let (r, t) = run(p.clone());
    let (ok, detail) = tally(&r, &["recursion_matches", "scalar_recursion"]);
    results.push(report(7, "recursion against statevector", Some(30.0), t, Outcome { pass: ok, detail, notes: vec![] }));
    keep(p, &r);

    // 8
    let p = Params::PhaseAdjust(PhaseAdjustParams::default());
    let (r, t) = run(p.clone());
    let (ok, _) = tally(&r, &["reproduces_wait_free_run"]);
    let per_alg: Vec<String> = ["ls", "cs"]
        .iter()
        .map(|alg| {
            let mine: Vec<_> = r.records.iter().filter(|x| x.get("algorithm").is_some_and(|v| v.to_string() == *alg)).collect();
            let good = mine.iter().filter(|x| x.check_value("reproduces_wait_free_run") == Some(true)).count();
            let worst_gap = mine.iter().filter_map(|x| x.get("norm_gap")?.as_f64()).fold(0.0, f64::max);
            format!("{alg} {good}/{} (largest branch-norm gap {worst_gap:.2e})", mine.len())
        })
        .collect();
    results.push(report(8, "phase adjustment", Some(20.0), t, Outcome { pass: ok, detail: per_alg.join(", "), notes: vec![] }));
    keep(p, &r);

    // 9
    let p = Params::IoRoundtrip(IoRoundtripParams::default());
    let (r, t) = run(p.clone());
    let (ok, detail) = tally(&r, &["input_ready", "within_bound", "leakage_in_matches", "leakage_out_matches"]);
    results.push(report(9, "input synthesis round trip", Some(30.0), t, Outcome { pass: ok, detail, notes: vec![] }));
    keep(p, &r);

    // 10: structural checks gathered from every run above, then each
    // experiment again with a different worker count, compared byte by byte.
    let start = Instant::now();
    let mut structural = true;
    let mut counted = 0;
    for (_, r) in &runs {
        for c in ["w_unitary", "state_normalized", "u_eff_unitary"] {
            let t = r.tally(c);
            structural &= t.failed == 0;
            counted += t.passed + t.failed;
        }
    }
    let mut identical = 0;
    for (p, first) in &runs {
        let mut cfg = ExperimentConfig::new(p.clone(), SEED, "unused").expect("valid parameters");
        cfg.workers = Some(2);
        let again = execute(&cfg).expect("experiment runs");
        let same = first.tables.len() == again.tables.len()
            && first.tables.iter().zip(&again.tables).all(|(a, b)| a.to_csv().ok() == b.to_csv().ok());
        identical += usize::from(same);
    }
    let deterministic = identical == runs.len();
    let detail = format!(
        "{counted} unitarity/normalisation checks {}, {identical}/{} experiments byte-identical on rerun",
        if structural { "clean" } else { "with failures" },
        runs.len()
    );
    results.push(report(
        10,
        "structure and determinism",
        None,
        start.elapsed().as_secs_f64(),
        Outcome { pass: structural && deterministic, detail, notes: vec![] },
    ));

    let passed = results.iter().filter(|&&x| x).count();
    println!("{passed}/{} criteria passed", results.len());
    if passed == results.len() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
