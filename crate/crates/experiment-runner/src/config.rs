//! Experiment configuration files.
//!
//! One TOML file per experiment. Top-level keys are `kind`, `seed`,
//! `output` and optionally `workers`; kind-specific parameters live in a
//! `[params]` table and an optional `[sweep]` table lists values to vary.
//! Unknown keys are rejected everywhere. See `CONFIG.md` for the schema.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use interface_analysis::Regime;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{io_err, Result, RunnerError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    LsConvergence,
    CsConvergence,
    CsBounds,
    Lemma1,
    ZzNegative,
    XxEffective,
    IoRoundtrip,
    PhaseAdjust,
}

impl ExperimentKind {
    pub const ALL: [ExperimentKind; 8] = [
        ExperimentKind::LsConvergence,
        ExperimentKind::CsConvergence,
        ExperimentKind::CsBounds,
        ExperimentKind::Lemma1,
        ExperimentKind::ZzNegative,
        ExperimentKind::XxEffective,
        ExperimentKind::IoRoundtrip,
        ExperimentKind::PhaseAdjust,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ExperimentKind::LsConvergence => "ls_convergence",
            ExperimentKind::CsConvergence => "cs_convergence",
            ExperimentKind::CsBounds => "cs_bounds",
            ExperimentKind::Lemma1 => "lemma1",
            ExperimentKind::ZzNegative => "zz_negative",
            ExperimentKind::XxEffective => "xx_effective",
            ExperimentKind::IoRoundtrip => "io_roundtrip",
            ExperimentKind::PhaseAdjust => "phase_adjust",
        }
    }
}

impl std::fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Exploitable regimes as written in config files.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum RegimeName {
    A,
    B0,
    B1,
    B2,
}

impl From<RegimeName> for Regime {
    fn from(r: RegimeName) -> Self {
        match r {
            RegimeName::A => Regime::A,
            RegimeName::B0 => Regime::B0,
            RegimeName::B1 => Regime::B1,
            RegimeName::B2 => Regime::B2,
        }
    }
}

/// How the interface unitaries of an LS run are produced.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Construction {
    /// Block-form unitary with the requested `β`.
    Direct,
    /// Switched `rXX + gZ` evolution with `g/ω̄` equal to the requested `β`.
    UEff,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TargetMap {
    Identity,
    Haar,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TransferAlgorithm {
    Ls,
    Cs,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LsConvergenceParams {
    pub betas: Vec<f64>,
    pub n_min: usize,
    pub n_max: usize,
    pub construction: Construction,
    pub tolerance: f64,
}

impl Default for LsConvergenceParams {
    fn default() -> Self {
        Self {
            betas: vec![0.3, std::f64::consts::FRAC_1_SQRT_2, 0.9],
            n_min: 0,
            n_max: 8,
            construction: Construction::Direct,
            tolerance: 1e-9,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CsConvergenceParams {
    pub regimes: Vec<RegimeName>,
    /// Instances per regime.
    pub instances: usize,
    pub n_min: usize,
    pub n_max: usize,
    pub tolerance: f64,
}

impl Default for CsConvergenceParams {
    fn default() -> Self {
        Self { regimes: vec![RegimeName::A], instances: 20, n_min: 2, n_max: 12, tolerance: 1e-9 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CsBoundsParams {
    pub regimes: Vec<RegimeName>,
    pub instances: usize,
    pub n_min: usize,
    pub n_max: usize,
    pub tolerance: f64,
}

impl Default for CsBoundsParams {
    fn default() -> Self {
        Self {
            regimes: vec![RegimeName::B0, RegimeName::B1, RegimeName::B2],
            instances: 200,
            n_min: 2,
            n_max: 12,
            tolerance: 1e-9,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Lemma1Params {
    pub samples: usize,
    /// Random optimiser starts per sample.
    pub starts: usize,
    pub env_dim: usize,
    /// Register qubits of the synthetic transfers.
    pub registers: usize,
    /// Leakages are drawn uniformly from `[0, xi_max]`.
    pub xi_max: f64,
}

impl Default for Lemma1Params {
    fn default() -> Self {
        Self { samples: 100, starts: 16, env_dim: 2, registers: 1, xi_max: 1.0 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ZzNegativeParams {
    pub samples: usize,
    pub r: [f64; 2],
    pub g: [f64; 2],
    pub t: [f64; 2],
}

impl Default for ZzNegativeParams {
    fn default() -> Self {
        Self { samples: 1000, r: [-2.0, 2.0], g: [-2.0, 2.0], t: [0.0, 10.0] }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct XxEffectiveParams {
    pub samples: usize,
    pub r: [f64; 2],
    pub g: [f64; 2],
    pub xi_eps: f64,
    pub tolerance: f64,
    /// Cap on simulated interface uses when checking the use count.
    pub max_uses: usize,
}

impl Default for XxEffectiveParams {
    fn default() -> Self {
        Self { samples: 50, r: [0.2, 2.0], g: [0.2, 2.0], xi_eps: 1e-2, tolerance: 1e-8, max_uses: 400 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct IoRoundtripParams {
    pub samples: usize,
    pub uses_out: usize,
    pub uses_in: usize,
    pub env_dim: usize,
    pub starts: usize,
    /// Conjugate each interface by a random local frame before synthesis.
    pub hide_frame: bool,
    pub target: TargetMap,
}

impl Default for IoRoundtripParams {
    fn default() -> Self {
        Self { samples: 10, uses_out: 4, uses_in: 4, env_dim: 2, starts: 16, hide_frame: true, target: TargetMap::Identity }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PhaseAdjustParams {
    pub samples: usize,
    pub algorithms: Vec<TransferAlgorithm>,
    pub ls_registers: usize,
    pub cs_uses: usize,
    /// Range of `E_1 − E_0`.
    pub gap: [f64; 2],
    /// Range of `E_0`.
    pub energy: [f64; 2],
    /// Range of each off-duration.
    pub off: [f64; 2],
    pub tolerance: f64,
}

impl Default for PhaseAdjustParams {
    fn default() -> Self {
        Self {
            samples: 20,
            algorithms: vec![TransferAlgorithm::Ls, TransferAlgorithm::Cs],
            ls_registers: 4,
            cs_uses: 6,
            gap: [0.1, 3.0],
            energy: [-1.0, 1.0],
            off: [0.0, 3.0],
            tolerance: 1e-9,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Params {
    LsConvergence(LsConvergenceParams),
    CsConvergence(CsConvergenceParams),
    CsBounds(CsBoundsParams),
    Lemma1(Lemma1Params),
    ZzNegative(ZzNegativeParams),
    XxEffective(XxEffectiveParams),
    IoRoundtrip(IoRoundtripParams),
    PhaseAdjust(PhaseAdjustParams),
}

fn typed<T: serde::de::DeserializeOwned>(kind: ExperimentKind, table: &toml::Table) -> Result<T> {
    toml::Value::Table(table.clone())
        .try_into()
        .map_err(|e: toml::de::Error| RunnerError::Config(format!("[params] for {kind}: {}", e.message())))
}

fn check(ok: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(RunnerError::Config(msg()))
    }
}

fn check_range(name: &str, r: [f64; 2]) -> Result<()> {
    check(r[0].is_finite() && r[1].is_finite() && r[0] <= r[1], || format!("{name} range [{}, {}] is invalid", r[0], r[1]))
}

fn check_tol(t: f64) -> Result<()> {
    check(t > 0.0 && t.is_finite(), || format!("tolerance must be positive, got {t}"))
}

fn check_uses(n_min: usize, n_max: usize) -> Result<()> {
    check((2..=n_max).contains(&n_min), || format!("need 2 <= n_min <= n_max, got {n_min}..{n_max}"))
}

impl Params {
    pub fn parse(kind: ExperimentKind, table: &toml::Table) -> Result<Self> {
        let p = match kind {
            ExperimentKind::LsConvergence => Params::LsConvergence(typed(kind, table)?),
            ExperimentKind::CsConvergence => Params::CsConvergence(typed(kind, table)?),
            ExperimentKind::CsBounds => Params::CsBounds(typed(kind, table)?),
            ExperimentKind::Lemma1 => Params::Lemma1(typed(kind, table)?),
            ExperimentKind::ZzNegative => Params::ZzNegative(typed(kind, table)?),
            ExperimentKind::XxEffective => Params::XxEffective(typed(kind, table)?),
            ExperimentKind::IoRoundtrip => Params::IoRoundtrip(typed(kind, table)?),
            ExperimentKind::PhaseAdjust => Params::PhaseAdjust(typed(kind, table)?),
        };
        p.validate()?;
        Ok(p)
    }

    pub fn defaults(kind: ExperimentKind) -> Self {
        Self::parse(kind, &toml::Table::new()).expect("defaults are valid")
    }

    pub fn kind(&self) -> ExperimentKind {
        match self {
            Params::LsConvergence(_) => ExperimentKind::LsConvergence,
            Params::CsConvergence(_) => ExperimentKind::CsConvergence,
            Params::CsBounds(_) => ExperimentKind::CsBounds,
            Params::Lemma1(_) => ExperimentKind::Lemma1,
            Params::ZzNegative(_) => ExperimentKind::ZzNegative,
            Params::XxEffective(_) => ExperimentKind::XxEffective,
            Params::IoRoundtrip(_) => ExperimentKind::IoRoundtrip,
            Params::PhaseAdjust(_) => ExperimentKind::PhaseAdjust,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Params::LsConvergence(p) => {
                check(!p.betas.is_empty(), || "betas is empty".into())?;
                for &b in &p.betas {
                    check(b > 0.0 && b < 1.0, || format!("beta {b} outside (0, 1)"))?;
                }
                check(p.n_min <= p.n_max && p.n_max <= ls_engine::MAX_REGISTERS, || {
                    format!("need n_min <= n_max <= {}, got {}..{}", ls_engine::MAX_REGISTERS, p.n_min, p.n_max)
                })?;
                check_tol(p.tolerance)
            }
            Params::CsConvergence(p) => {
                check(!p.regimes.is_empty() && p.instances > 0, || "need at least one regime and instance".into())?;
                check_uses(p.n_min, p.n_max)?;
                check_tol(p.tolerance)
            }
            Params::CsBounds(p) => {
                check(!p.regimes.is_empty() && p.instances > 0, || "need at least one regime and instance".into())?;
                check_uses(p.n_min, p.n_max)?;
                check_tol(p.tolerance)
            }
            Params::Lemma1(p) => {
                check(p.samples > 0, || "samples must be positive".into())?;
                check(p.starts > 0, || "starts must be positive".into())?;
                check((1..=io_composition::MAX_ENV_DIM).contains(&p.env_dim), || {
                    format!("env_dim must be in 1..={}, got {}", io_composition::MAX_ENV_DIM, p.env_dim)
                })?;
                check((1..=4).contains(&p.registers), || format!("registers must be in 1..=4, got {}", p.registers))?;
                check((0.0..=1.0).contains(&p.xi_max), || format!("xi_max {} outside [0, 1]", p.xi_max))
            }
            Params::ZzNegative(p) => {
                check(p.samples > 0, || "samples must be positive".into())?;
                check_range("r", p.r)?;
                check_range("g", p.g)?;
                check_range("t", p.t)?;
                check(p.t[0] >= 0.0, || "durations must be nonnegative".into())
            }
            Params::XxEffective(p) => {
                check(p.samples > 0, || "samples must be positive".into())?;
                check_range("r", p.r)?;
                check_range("g", p.g)?;
                for (name, r) in [("r", p.r), ("g", p.g)] {
                    check(r[0] > 0.0 || r[1] < 0.0, || format!("{name} range must exclude zero"))?;
                }
                check(p.xi_eps > 0.0 && p.xi_eps < 1.0, || format!("xi_eps {} outside (0, 1)", p.xi_eps))?;
                check(p.max_uses >= 2, || "max_uses must be at least 2".into())?;
                check_tol(p.tolerance)
            }
            Params::IoRoundtrip(p) => {
                check(p.samples > 0 && p.starts > 0, || "samples and starts must be positive".into())?;
                check(p.uses_out >= 1 && p.uses_in >= 1, || "need at least one interface use each way".into())?;
                check(
                    p.uses_out - 1 <= 6 && p.uses_in - 1 <= 6,
                    || "at most 7 uses per direction (registers are simulated densely)".into(),
                )?;
                check((1..=io_composition::MAX_ENV_DIM).contains(&p.env_dim), || {
                    format!("env_dim must be in 1..={}, got {}", io_composition::MAX_ENV_DIM, p.env_dim)
                })
            }
            Params::PhaseAdjust(p) => {
                check(p.samples > 0 && !p.algorithms.is_empty(), || "need samples and algorithms".into())?;
                check((1..=8).contains(&p.ls_registers), || format!("ls_registers must be in 1..=8, got {}", p.ls_registers))?;
                check(p.cs_uses >= 2, || format!("cs_uses must be at least 2, got {}", p.cs_uses))?;
                check_range("gap", p.gap)?;
                check_range("energy", p.energy)?;
                check_range("off", p.off)?;
                check(p.off[0] >= 0.0, || "off-durations must be nonnegative".into())?;
                check_tol(p.tolerance)
            }
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    kind: ExperimentKind,
    seed: u64,
    output: PathBuf,
    workers: Option<usize>,
    #[serde(default)]
    params: toml::Table,
    sweep: Option<toml::Table>,
}

#[derive(Clone, Debug)]
pub struct ExperimentConfig {
    pub kind: ExperimentKind,
    pub seed: u64,
    pub output: PathBuf,
    pub workers: Option<usize>,
    pub params: Params,
    raw_params: toml::Table,
    /// Parameter name to the list of values it takes, in key order.
    pub sweep: BTreeMap<String, Vec<toml::Value>>,
}

#[derive(Serialize)]
struct HashInput<'a> {
    kind: ExperimentKind,
    seed: u64,
    params: &'a Params,
}

impl ExperimentConfig {
    pub fn new(params: Params, seed: u64, output: impl Into<PathBuf>) -> Result<Self> {
        params.validate()?;
        let raw_params = match toml::Value::try_from(&params) {
            Ok(toml::Value::Table(t)) => t,
            _ => return Err(RunnerError::Config("parameters do not serialise to a table".into())),
        };
        Ok(Self {
            kind: params.kind(),
            seed,
            output: output.into(),
            workers: None,
            params,
            raw_params,
            sweep: BTreeMap::new(),
        })
    }

    pub fn parse(text: &str) -> Result<Self> {
        let raw: RawConfig = toml::from_str(text)?;
        if raw.workers == Some(0) {
            return Err(RunnerError::Config("workers must be positive".into()));
        }
        let params = Params::parse(raw.kind, &raw.params)?;
        let mut sweep = BTreeMap::new();
        for (key, values) in raw.sweep.unwrap_or_default() {
            let toml::Value::Array(values) = values else {
                return Err(RunnerError::Config(format!("sweep.{key} must be an array")));
            };
            if values.is_empty() {
                return Err(RunnerError::Config(format!("sweep.{key} is empty")));
            }
            sweep.insert(key, values);
        }
        let cfg = Self { kind: raw.kind, seed: raw.seed, output: raw.output, workers: raw.workers, params, raw_params: raw.params, sweep };
        // Every sweep point must validate before anything runs.
        cfg.expand_sweep()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(io_err(path))?;
        let mut cfg = Self::parse(&text)?;
        // Relative output paths are taken from the config file's directory.
        if cfg.output.is_relative() {
            if let Some(dir) = path.parent() {
                cfg.output = dir.join(&cfg.output);
            }
        }
        Ok(cfg)
    }

    /// SHA-256 over the kind, seed and fully resolved parameters. Output
    /// location and worker count do not affect results and are excluded.
    pub fn hash(&self) -> String {
        let json = serde_json::to_string(&HashInput { kind: self.kind, seed: self.seed, params: &self.params })
            .expect("parameters serialise");
        Sha256::digest(json.as_bytes()).iter().map(|b| format!("{b:02x}")).collect()
    }

    /// One config per point of the cartesian product of the sweep values,
    /// each writing to its own subdirectory. Without a sweep table this is
    /// the config itself.
    pub fn expand_sweep(&self) -> Result<Vec<(String, ExperimentConfig)>> {
        if self.sweep.is_empty() {
            return Ok(vec![(String::new(), self.clone())]);
        }
        let keys: Vec<&String> = self.sweep.keys().collect();
        let total: usize = self.sweep.values().map(Vec::len).product();
        let mut out = Vec::with_capacity(total);
        for idx in 0..total {
            let mut rest = idx;
            let mut table = self.raw_params.clone();
            let mut label = Vec::new();
            for key in keys.iter().rev() {
                let values = &self.sweep[*key];
                let v = &values[rest % values.len()];
                rest /= values.len();
                table.insert((*key).clone(), v.clone());
                label.push(format!("{key}={v}"));
            }
            label.reverse();
            let params = Params::parse(self.kind, &table).map_err(|e| {
                let why = match e {
                    RunnerError::Config(m) => m,
                    other => other.to_string(),
                };
                RunnerError::Config(format!("sweep point {idx} ({}): {why}", label.join(", ")))
            })?;
            let name = format!("point-{idx:03}");
            out.push((
                label.join(", "),
                ExperimentConfig {
                    kind: self.kind,
                    seed: self.seed,
                    output: self.output.join(&name),
                    workers: self.workers,
                    params,
                    raw_params: table,
                    sweep: BTreeMap::new(),
                },
            ));
        }
        Ok(out)
    }
}
