use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::config::{ExperimentConfig, ExperimentKind};
use crate::error::{io_err, Result, RunnerError};
use crate::kinds::run_kind;
use crate::record::{emit_tables, Fields, ResultRecord, Table};

/// Overrides the configured worker count.
pub const WORKERS_ENV: &str = "QIO_WORKERS";

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckTally {
    pub passed: usize,
    pub failed: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub config_hash: String,
    pub kind: ExperimentKind,
    pub seed: u64,
    pub params: serde_json::Value,
    pub records: usize,
    pub tables: Vec<String>,
    pub checks: BTreeMap<String, CheckTally>,
    pub notes: Vec<String>,
    pub all_passed: bool,
    pub workers: Option<usize>,
    pub wall_time_seconds: f64,
}

impl Summary {
    pub fn failed_checks(&self) -> usize {
        self.checks.values().map(|t| t.failed).sum()
    }
}

#[derive(Clone, Debug)]
pub struct ExperimentRun {
    pub records: Vec<ResultRecord>,
    pub tables: Vec<Table>,
    pub summary: Summary,
}

impl ExperimentRun {
    pub fn table(&self, metric: &str) -> Option<&Table> {
        self.tables.iter().find(|t| t.metric == metric)
    }

    /// Tally of one check over all records that carry it.
    pub fn tally(&self, check: &str) -> CheckTally {
        self.summary.checks.get(check).copied().unwrap_or_default()
    }
}

/// Worker count from the environment, else from the config.
pub fn resolve_workers(cfg: &ExperimentConfig) -> Result<Option<usize>> {
    match std::env::var(WORKERS_ENV) {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(RunnerError::Config(format!("{WORKERS_ENV} must be a positive integer, got {v:?}"))),
        },
        Err(_) => Ok(cfg.workers),
    }
}

/// Runs the experiment without touching the file system.
pub fn execute(cfg: &ExperimentConfig) -> Result<ExperimentRun> {
    cfg.params.validate()?;
    let workers = resolve_workers(cfg)?;
    let hash = cfg.hash();
    let start = Instant::now();
    let outcome = match workers {
        Some(n) => rayon::ThreadPoolBuilder::new().num_threads(n).build()?.install(|| run_kind(&cfg.params, cfg.seed)),
        None => run_kind(&cfg.params, cfg.seed),
    }?;
    let wall = start.elapsed().as_secs_f64();

    let mut records = outcome.records;
    for r in &mut records {
        r.config_hash = hash.clone();
    }
    let mut checks: BTreeMap<String, CheckTally> = BTreeMap::new();
    for r in &records {
        for (name, ok) in &r.checks {
            let t = checks.entry(name.clone()).or_default();
            if *ok {
                t.passed += 1;
            } else {
                t.failed += 1;
            }
        }
    }
    let tables = emit_tables(&records);
    let summary = Summary {
        config_hash: hash,
        kind: cfg.kind,
        seed: cfg.seed,
        params: serde_json::to_value(&cfg.params)?,
        records: records.len(),
        tables: tables.iter().map(Table::file_name).collect(),
        all_passed: !records.is_empty() && checks.values().all(|t| t.failed == 0),
        checks,
        notes: outcome.notes,
        workers,
        wall_time_seconds: wall,
    };
    Ok(ExperimentRun { records, tables, summary })
}

fn fields_json(f: &Fields) -> serde_json::Value {
    serde_json::Value::Object(
        f.iter().map(|(k, v)| (k.clone(), serde_json::to_value(v).expect("cells serialise"))).collect(),
    )
}

fn record_json(r: &ResultRecord) -> serde_json::Value {
    serde_json::json!({
        "config_hash": r.config_hash,
        "metric": r.metric,
        "point": r.point,
        "inputs": fields_json(&r.inputs),
        "measured": fields_json(&r.measured),
        "predicted": fields_json(&r.predicted),
        "checks": r.checks.iter().map(|(k, ok)| (k.clone(), serde_json::Value::Bool(*ok))).collect::<serde_json::Map<_, _>>(),
        "wall_time": r.wall_time,
    })
}

fn write(path: PathBuf, contents: &str) -> Result<PathBuf> {
    fs::write(&path, contents).map_err(io_err(&path))?;
    Ok(path)
}

/// Writes one CSV per table, `records.jsonl`, `summary.json` and a
/// one-row `summary.csv` into `dir`. Only the JSON files carry timings.
pub fn write_outputs(run: &ExperimentRun, dir: &Path) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir).map_err(io_err(dir))?;
    let mut written = Vec::new();
    for t in &run.tables {
        if t.rows.is_empty() {
            return Err(RunnerError::EmptyTable(t.metric.clone()));
        }
        written.push(write(dir.join(t.file_name()), &t.to_csv()?)?);
    }
    let mut lines = String::new();
    for r in &run.records {
        lines.push_str(&serde_json::to_string(&record_json(r))?);
        lines.push('\n');
    }
    written.push(write(dir.join("records.jsonl"), &lines)?);
    written.push(write(dir.join("summary.json"), &(serde_json::to_string_pretty(&run.summary)? + "\n"))?);

    let s = &run.summary;
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["config_hash", "kind", "seed", "records", "checks_failed", "all_passed"])?;
    w.write_record([
        s.config_hash.clone(),
        s.kind.to_string(),
        s.seed.to_string(),
        s.records.to_string(),
        s.failed_checks().to_string(),
        s.all_passed.to_string(),
    ])?;
    let bytes = w.into_inner().map_err(|e| RunnerError::Csv(e.into_error().into()))?;
    written.push(write(dir.join("summary.csv"), &String::from_utf8(bytes).expect("ASCII"))?);
    Ok(written)
}

fn prepare_output(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(io_err(dir))?;
    let probe = dir.join(".write-test");
    fs::write(&probe, b"").map_err(io_err(&probe))?;
    fs::remove_file(&probe).map_err(io_err(&probe))
}

/// Runs the experiment and writes its artifacts to the configured output
/// directory, which is checked for writability first.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentRun> {
    if !cfg.sweep.is_empty() {
        return Err(RunnerError::Config("config has a [sweep] table; run it as a sweep".into()));
    }
    prepare_output(&cfg.output)?;
    let run = execute(cfg)?;
    write_outputs(&run, &cfg.output)?;
    Ok(run)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepEntry {
    pub label: String,
    pub directory: PathBuf,
    pub config_hash: String,
    pub all_passed: bool,
}

/// Runs every point of the config's sweep into its own subdirectory and
/// writes `sweep.json` listing them.
pub fn run_sweep(cfg: &ExperimentConfig) -> Result<Vec<(SweepEntry, ExperimentRun)>> {
    if cfg.sweep.is_empty() {
        return Err(RunnerError::Config("config has no [sweep] table".into()));
    }
    prepare_output(&cfg.output)?;
    let mut out = Vec::new();
    for (label, point) in cfg.expand_sweep()? {
        prepare_output(&point.output)?;
        let run = execute(&point)?;
        write_outputs(&run, &point.output)?;
        let dir = point.output.strip_prefix(&cfg.output).unwrap_or(&point.output).to_path_buf();
        let entry = SweepEntry { label, directory: dir, config_hash: run.summary.config_hash.clone(), all_passed: run.summary.all_passed };
        out.push((entry, run));
    }
    let entries: Vec<&SweepEntry> = out.iter().map(|(e, _)| e).collect();
    write(cfg.output.join("sweep.json"), &(serde_json::to_string_pretty(&entries)? + "\n"))?;
    Ok(out)
}

/// Every `summary.json` in `dir` and its subdirectories, sorted by path.
pub fn collect_summaries(dir: &Path) -> Result<Vec<(PathBuf, Summary)>> {
    let mut found = Vec::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        for entry in fs::read_dir(&d).map_err(io_err(&d))? {
            let path = entry.map_err(io_err(&d))?.path();
            if path.is_dir() {
                stack.push(path);
            } else if path.file_name().is_some_and(|n| n == "summary.json") {
                let text = fs::read_to_string(&path).map_err(io_err(&path))?;
                found.push((path, serde_json::from_str(&text)?));
            }
        }
    }
    found.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(found)
}
