use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use experiment_runner::config::Lemma1Params;
use experiment_runner::matrix_file::read_matrix;
use experiment_runner::{
    collect_summaries, execute, run_experiment, run_sweep, write_outputs, ExperimentConfig, Params, Summary,
};
use hamiltonian_synthesis::{build_u_eff, solve_effective_interface, HamiltonianPair};
use interface_analysis::classify;
use linalg_core::{kraus_cirac_at_most_one, operator_schmidt, schmidt_number};
use serde_json::json;

#[derive(Parser)]
#[command(name = "qio", version, about = "Interface transfer experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify a 4x4 interface unitary read from a text file.
    Analyze { matrix_file: PathBuf },
    /// Run one experiment config.
    Run { config: PathBuf },
    /// Run every point of a config's [sweep] table.
    Sweep { config: PathBuf },
    /// Check the composed-channel error bound on random instances.
    VerifyLemma1 {
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 16)]
        starts: usize,
        #[arg(long, default_value_t = 2)]
        env_dim: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Directory for tables and summary; nothing is written without it.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Pulse parameters for the rXX + gZ effective interface.
    SolveEffective {
        #[arg(long, allow_hyphen_values = true)]
        r: f64,
        #[arg(long, allow_hyphen_values = true)]
        g: f64,
        #[arg(long)]
        xi_eps: Option<f64>,
    },
    /// Summarise the results under a directory.
    Report { results_dir: PathBuf },
}

fn verdict(ok: bool) -> ExitCode {
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn print_summary(s: &Summary) {
    println!(
        "{}  hash {}  seed {}  records {}  wall {:.2} s",
        s.kind,
        &s.config_hash[..12],
        s.seed,
        s.records,
        s.wall_time_seconds
    );
    let width = s.checks.keys().map(String::len).max().unwrap_or(0);
    for (name, t) in &s.checks {
        println!("  {name:<width$}  {:>6} passed  {:>6} failed", t.passed, t.failed);
    }
    for note in &s.notes {
        eprintln!("note: {note}");
    }
    println!("{}", if s.all_passed { "PASS" } else { "FAIL" });
}

fn analyze(path: &Path) -> Result<bool> {
    let u = read_matrix(path)?;
    let defect = u.unitarity_defect();
    let v = classify(&u).with_context(|| format!("analysing {}", path.display()))?;
    let schmidt = operator_schmidt(&u)?;
    let mut out = json!({
        "unitarity_defect": defect,
        "in_u_star": v.in_u_star,
        "exploitable": v.exploitable,
        "regime": v.regime().as_str(),
        "failure_reason": v.failure_reason.map(|r| r.as_str()),
        "operator_schmidt_number": schmidt_number(&schmidt),
        "controlled_or_local": kraus_cirac_at_most_one(&schmidt),
    });
    if let Some(a) = &v.analysis {
        out["alpha"] = json!(a.alpha);
        out["beta"] = json!(a.beta);
        out["gamma"] = json!([a.gamma.re, a.gamma.im]);
        out["omega"] = json!(a.omega);
        out["overlap_psi0_phi"] = json!(a.overlap_psi0_phi.norm());
    }
    println!("{}", serde_json::to_string_pretty(&out)?);
    Ok(true)
}

fn solve(r: f64, g: f64, xi_eps: Option<f64>) -> Result<bool> {
    let sol = solve_effective_interface(r, g)?;
    let u = build_u_eff(&HamiltonianPair::xx(r, g), sol.tau_star, sol.t_star, sol.s_star)?;
    let v = classify(&u)?;
    let defect = u.unitarity_defect();
    let mut out = json!({
        "r": r,
        "g": g,
        "tau_star": sol.tau_star,
        "t_star": sol.t_star,
        "s_star": sol.s_star,
        "theta_star": sol.theta_star,
        "omega_bar": sol.omega_bar,
        "predicted_beta": sol.predicted_beta,
        "coupling_ratio": sol.coupling_ratio(),
        "u_eff_unitarity_defect": defect,
        "exploitable": v.exploitable,
        "regime": v.regime().as_str(),
        "measured_beta": v.analysis.as_ref().map(|a| a.beta),
    });
    if let Some(eps) = xi_eps {
        out["xi_eps"] = json!(eps);
        out["n_star"] = json!(sol.n_star_for(eps)?);
    }
    println!("{}", serde_json::to_string_pretty(&out)?);
    Ok(v.exploitable && defect <= 1e-10)
}

fn report(dir: &Path) -> Result<bool> {
    let found = collect_summaries(dir)?;
    if found.is_empty() {
        anyhow::bail!("no summary.json under {}", dir.display());
    }
    let mut ok = true;
    for (path, s) in &found {
        println!("{}", path.parent().unwrap_or(path).display());
        print_summary(s);
        ok &= s.all_passed;
    }
    println!("{} of {} experiments passed", found.iter().filter(|(_, s)| s.all_passed).count(), found.len());
    Ok(ok)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Analyze { matrix_file } => analyze(matrix_file),
        Command::Run { config } => (|| {
            let cfg = ExperimentConfig::load(config)?;
            let run = run_experiment(&cfg)?;
            print_summary(&run.summary);
            println!("results in {}", cfg.output.display());
            Ok(run.summary.all_passed)
        })(),
        Command::Sweep { config } => (|| {
            let cfg = ExperimentConfig::load(config)?;
            let mut ok = true;
            for (entry, run) in run_sweep(&cfg)? {
                println!("[{}] {}", entry.directory.display(), entry.label);
                print_summary(&run.summary);
                ok &= entry.all_passed;
            }
            println!("results in {}", cfg.output.display());
            Ok(ok)
        })(),
        Command::VerifyLemma1 { samples, starts, env_dim, seed, output } => (|| {
            let params = Params::Lemma1(Lemma1Params { samples: *samples, starts: *starts, env_dim: *env_dim, ..Default::default() });
            let cfg = ExperimentConfig::new(params, *seed, output.clone().unwrap_or_default())?;
            let run = execute(&cfg)?;
            if let Some(dir) = output {
                write_outputs(&run, dir)?;
            }
            print_summary(&run.summary);
            Ok(run.summary.all_passed)
        })(),
        Command::SolveEffective { r, g, xi_eps } => solve(*r, *g, *xi_eps),
        Command::Report { results_dir } => report(results_dir),
    };
    match result {
        Ok(ok) => verdict(ok),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
