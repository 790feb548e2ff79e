use std::f64::consts::FRAC_1_SQRT_2;
use std::fs;

use experiment_runner::config::{CsConvergenceParams, Lemma1Params, LsConvergenceParams, ZzNegativeParams};
use experiment_runner::matrix_file::{parse_complex, parse_matrix};
use experiment_runner::{
    emit_tables, execute, parse_table, run_experiment, ExperimentConfig, ExperimentKind, Params, ResultRecord,
    RunnerError, Value,
};
use linalg_core::C64;

fn cfg(params: Params, seed: u64) -> ExperimentConfig {
    ExperimentConfig::new(params, seed, "unused").unwrap()
}

fn sample_records() -> Vec<ResultRecord> {
    let a = ResultRecord::new("m", 0)
        .input("regime", "B1")
        .input("n", 3usize)
        .measure("xi_measured", 0.1)
        .measure("whole", 2.0)
        .measure("tiny", 1e-300)
        .measure("neg", -7i64)
        .predict("bound_upper", 1.0 / 3.0)
        .check("ok", true);
    let b = ResultRecord::new("m", 1)
        .input("regime", "A")
        .input("n", 4usize)
        .measure("xi_measured", f64::INFINITY)
        .predict("bound_upper", 0.25)
        .check("ok", false)
        .check("extra", true);
    let c = ResultRecord::new("other", 1).input("label", "with,comma \"quoted\"").measure("x", -0.0);
    let mut out = vec![a, b, c];
    for r in &mut out {
        r.config_hash = "0123abcd".into();
    }
    out
}

#[test]
fn csv_round_trips_on_shared_columns() {
    let records = sample_records();
    let tables = emit_tables(&records);
    assert_eq!(tables.iter().map(|t| t.metric.as_str()).collect::<Vec<_>>(), ["m", "other"]);
    for t in &tables {
        let back = parse_table(&t.metric, &t.to_csv().unwrap()).unwrap();
        assert_eq!(&back, t);
    }
    let m = parse_table("m", &tables[0].to_csv().unwrap()).unwrap();
    let mine: Vec<&ResultRecord> = records.iter().filter(|r| r.metric == "m").collect();
    for (i, r) in mine.iter().enumerate() {
        assert_eq!(m.row_fields(i), r.columns());
    }
}

#[test]
fn missing_cells_stay_empty() {
    let t = &emit_tables(&sample_records())[0];
    let csv = t.to_csv().unwrap();
    let first = csv.lines().nth(1).unwrap();
    assert!(first.ends_with(",true,"), "{first}");
    assert_eq!(t.header.last().unwrap(), "pass_extra");
}

#[test]
fn floats_keep_their_type() {
    for (cell, v) in [
        ("1.0", Value::Float(1.0)),
        ("1e-10", Value::Float(1e-10)),
        ("-3", Value::Int(-3)),
        ("NaN", Value::Text("NaN".into())),
        ("B0", Value::Text("B0".into())),
        ("true", Value::Bool(true)),
        ("3e5abc", Value::Text("3e5abc".into())),
    ] {
        let parsed = Value::parse(cell);
        if cell == "NaN" {
            assert!(matches!(parsed, Value::Float(x) if x.is_nan()));
        } else {
            assert_eq!(parsed, v, "{cell}");
        }
    }
    assert_eq!(Value::Float(2.0).to_string(), "2.0");
    assert_eq!(Value::Float(0.1 + 0.2).to_string(), "0.30000000000000004");
}

#[test]
fn ls_example_has_eight_records_on_the_power_law() {
    let p = LsConvergenceParams { betas: vec![FRAC_1_SQRT_2], n_min: 1, n_max: 8, ..Default::default() };
    let run = execute(&cfg(Params::LsConvergence(p), 9)).unwrap();
    assert_eq!(run.records.len(), 8);
    for (k, r) in run.records.iter().enumerate() {
        let n = k + 1;
        let xi = r.get("xi_measured").and_then(Value::as_f64).unwrap();
        assert!((xi - FRAC_1_SQRT_2.powi(n as i32 + 1)).abs() <= 1e-9, "N = {n}: {xi}");
        assert!(r.passed());
    }
    assert!(run.summary.all_passed);
}

#[test]
fn zz_example_is_never_exploitable() {
    let run = execute(&cfg(Params::ZzNegative(ZzNegativeParams { samples: 40, ..Default::default() }), 5)).unwrap();
    assert_eq!(run.records.len(), 40);
    assert!(run.records.iter().all(|r| r.get("exploitable") == Some(&Value::Bool(false))));
    assert!(run.summary.all_passed);
}

#[test]
fn lemma1_example_has_no_violations() {
    let p = Lemma1Params { samples: 12, starts: 8, ..Default::default() };
    let run = execute(&cfg(Params::Lemma1(p), 4)).unwrap();
    assert_eq!(run.tally("within_bound").failed, 0);
    assert_eq!(run.tally("within_bound").passed, 12);
}

#[test]
fn cs_convergence_table_has_the_plot_columns() {
    let p = CsConvergenceParams { instances: 2, n_max: 5, ..Default::default() };
    let run = execute(&cfg(Params::CsConvergence(p), 2)).unwrap();
    let t = run.table("cs_convergence").unwrap();
    for col in ["n", "xi_measured", "bound_lower", "bound_upper", "regime"] {
        assert!(t.column(col).is_some(), "missing {col}");
    }
    assert_eq!(t.rows.len(), 2 * 4);
}

#[test]
fn single_point_gives_single_row() {
    let p = LsConvergenceParams { betas: vec![0.5], n_min: 2, n_max: 2, ..Default::default() };
    let run = execute(&cfg(Params::LsConvergence(p), 1)).unwrap();
    assert_eq!(run.tables.len(), 1);
    assert_eq!(run.tables[0].rows.len(), 1);
    assert_eq!(run.tables[0].to_csv().unwrap().lines().count(), 2);
}

#[test]
fn tables_are_byte_identical_across_runs_and_worker_counts() {
    let p = Params::Lemma1(Lemma1Params { samples: 6, starts: 4, ..Default::default() });
    let mut a = cfg(p.clone(), 77);
    a.workers = Some(1);
    let mut b = cfg(p, 77);
    b.workers = Some(3);
    let (ra, rb) = (execute(&a).unwrap(), execute(&b).unwrap());
    for (ta, tb) in ra.tables.iter().zip(&rb.tables) {
        assert_eq!(ta.to_csv().unwrap(), tb.to_csv().unwrap());
    }
    let c = execute(&cfg(Params::Lemma1(Lemma1Params { samples: 6, starts: 4, ..Default::default() }), 78)).unwrap();
    assert_ne!(ra.tables[0].to_csv().unwrap(), c.tables[0].to_csv().unwrap());
}

#[test]
fn every_artifact_carries_the_hash() {
    let dir = tempfile::tempdir().unwrap();
    let p = Params::CsConvergence(CsConvergenceParams { instances: 1, n_max: 3, ..Default::default() });
    let c = ExperimentConfig::new(p, 3, dir.path().join("out")).unwrap();
    let run = run_experiment(&c).unwrap();
    let hash = c.hash();
    assert_eq!(run.summary.config_hash, hash);
    let files: Vec<_> = fs::read_dir(dir.path().join("out")).unwrap().map(|e| e.unwrap().path()).collect();
    assert_eq!(files.len(), 4);
    for f in files {
        let text = fs::read_to_string(&f).unwrap();
        assert!(text.contains(&hash), "{} lacks the hash", f.display());
    }
}

#[test]
fn unwritable_output_is_an_error() {
    let dir = tempfile::tempdir().unwrap();
    let blocker = dir.path().join("file");
    fs::write(&blocker, "x").unwrap();
    let p = Params::defaults(ExperimentKind::ZzNegative);
    let c = ExperimentConfig::new(p, 1, blocker.join("out")).unwrap();
    assert!(matches!(run_experiment(&c), Err(RunnerError::Io { .. })));
}

const BASE: &str = "kind = \"lemma1\"\nseed = 5\noutput = \"out\"\n";

#[test]
fn config_parses_with_defaults() {
    let c = ExperimentConfig::parse(BASE).unwrap();
    assert_eq!(c.kind, ExperimentKind::Lemma1);
    assert_eq!(c.params, Params::Lemma1(Lemma1Params::default()));
    for kind in ExperimentKind::ALL {
        let text = format!("kind = \"{kind}\"\nseed = 0\noutput = \"o\"\n");
        assert_eq!(ExperimentConfig::parse(&text).unwrap().params, Params::defaults(kind));
    }
}

#[test]
fn config_rejects_schema_violations() {
    let bad = [
        "seed = 5\noutput = \"o\"\n".to_string(),
        BASE.replace("lemma1", "lemma2"),
        format!("{BASE}colour = 3\n"),
        format!("{BASE}[params]\nsample = 3\n"),
        format!("{BASE}[params]\nsamples = \"many\"\n"),
        format!("{BASE}[params]\nsamples = 0\n"),
        format!("{BASE}[params]\nenv_dim = 9\n"),
        format!("{BASE}[params]\nxi_max = 1.5\n"),
        format!("{BASE}workers = 0\n"),
        BASE.replace("seed = 5", "seed = -1"),
        format!("{BASE}[sweep]\nsamples = 3\n"),
        format!("{BASE}[sweep]\nsamples = []\n"),
        format!("{BASE}[sweep]\nsamples = [3, 0]\n"),
        format!("{BASE}[sweep]\nbogus = [1]\n"),
        "kind = \"ls_convergence\"\nseed = 1\noutput = \"o\"\n[params]\nbetas = [1.0]\n".into(),
        "kind = \"ls_convergence\"\nseed = 1\noutput = \"o\"\n[params]\nn_max = 13\n".into(),
        "kind = \"cs_bounds\"\nseed = 1\noutput = \"o\"\n[params]\nregimes = [\"C\"]\n".into(),
        "kind = \"cs_bounds\"\nseed = 1\noutput = \"o\"\n[params]\nn_min = 1\n".into(),
        "kind = \"xx_effective\"\nseed = 1\noutput = \"o\"\n[params]\ng = [-1.0, 1.0]\n".into(),
    ];
    for text in &bad {
        assert!(ExperimentConfig::parse(text).is_err(), "accepted:\n{text}");
    }
}

#[test]
fn hash_ignores_output_and_workers_but_not_parameters() {
    let a = ExperimentConfig::parse(BASE).unwrap();
    let b = ExperimentConfig::parse(&format!("{}workers = 2\n", BASE.replace("\"out\"", "\"elsewhere\""))).unwrap();
    let explicit = ExperimentConfig::parse(&format!("{BASE}[params]\nsamples = 100\n")).unwrap();
    let other = ExperimentConfig::parse(&format!("{BASE}[params]\nsamples = 99\n")).unwrap();
    let reseeded = ExperimentConfig::parse(&BASE.replace("seed = 5", "seed = 6")).unwrap();
    assert_eq!(a.hash(), b.hash());
    assert_eq!(a.hash(), explicit.hash());
    assert_ne!(a.hash(), other.hash());
    assert_ne!(a.hash(), reseeded.hash());
    assert_eq!(a.hash().len(), 64);
}

#[test]
fn sweep_expands_the_cartesian_product() {
    let text = format!("{BASE}[params]\nstarts = 2\n[sweep]\nsamples = [1, 2, 3]\nenv_dim = [1, 2]\n");
    let c = ExperimentConfig::parse(&text).unwrap();
    let pts = c.expand_sweep().unwrap();
    assert_eq!(pts.len(), 6);
    assert_eq!(pts[0].0, "env_dim=1, samples=1");
    assert_eq!(pts[5].0, "env_dim=2, samples=3");
    let hashes: std::collections::BTreeSet<String> = pts.iter().map(|(_, p)| p.hash()).collect();
    assert_eq!(hashes.len(), 6);
    assert!(pts.iter().all(|(_, p)| matches!(&p.params, Params::Lemma1(l) if l.starts == 2)));
    assert!(pts[3].1.output.ends_with("point-003"));
    assert!(matches!(run_experiment(&c), Err(RunnerError::Config(_))));
}

#[test]
fn complex_entries_parse() {
    let cases = [
        ("1", C64::new(1.0, 0.0)),
        ("-0.5", C64::new(-0.5, 0.0)),
        ("i", C64::new(0.0, 1.0)),
        ("-i", C64::new(0.0, -1.0)),
        ("2.5i", C64::new(0.0, 2.5)),
        ("0.3+0.4i", C64::new(0.3, 0.4)),
        ("0.3-i", C64::new(0.3, -1.0)),
        ("-1e-3+2E-2i", C64::new(-1e-3, 2e-2)),
        ("1e+2-3e-1i", C64::new(100.0, -0.3)),
    ];
    for (s, z) in cases {
        assert_eq!(parse_complex(s), Some(z), "{s}");
    }
    for s in ["", "abc", "1+", "0.3+0.4", "1..2i", "++i"] {
        assert_eq!(parse_complex(s), None, "{s}");
    }
}

#[test]
fn matrix_files_need_four_by_four() {
    let good = "# comment\n1 0 0 0\n0 0 i 0\n\n0 i 0 0\n0 0 0 1\n";
    let m = parse_matrix(good).unwrap();
    assert_eq!(m[(1, 2)], C64::new(0.0, 1.0));
    assert!(m.is_unitary(1e-12));
    assert!(matches!(parse_matrix("1 0 0\n"), Err(RunnerError::MatrixFile { line: 1, .. })));
    assert!(parse_matrix("1 0 0 0\n0 1 0 0\n0 0 1 0\n").is_err());
    assert!(matches!(parse_matrix("1 0 0 0\n0 1 x 0\n"), Err(RunnerError::MatrixFile { line: 2, .. })));
}
