//! Parameter enums, grids and the sweep configuration.

use anyhow::{bail, ensure, Context, Result};
use clap::ValueEnum;
use serde::{Deserialize, Serialize};
use seqmbqc::channels::{EntanglerModel, Scenario};
use seqmbqc::metrics::{Gate, DEFAULT_SEED};
use seqmbqc::sdp::DEFAULT_TOL;
use std::f64::consts::FRAC_PI_4;
use std::fs::OpenOptions;
use std::path::{Path, PathBuf};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GateKind {
    Uz,
    Cx,
}

impl GateKind {
    pub fn core(self) -> Gate {
        match self {
            GateKind::Uz => Gate::Uz,
            GateKind::Cx => Gate::Cx,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    Depolarizing,
    Misfiring,
    None,
}

impl ModelKind {
    pub fn core(self) -> EntanglerModel {
        match self {
            ModelKind::Depolarizing => EntanglerModel::Depolarizing,
            ModelKind::Misfiring => EntanglerModel::Misfiring,
            ModelKind::None => EntanglerModel::None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScenarioKind {
    Perfect,
    Imperfect,
}

impl ScenarioKind {
    pub fn core(self) -> Scenario {
        match self {
            ScenarioKind::Perfect => Scenario::Perfect,
            ScenarioKind::Imperfect => Scenario::Imperfect,
        }
    }
}

/// Which figures of merit a sweep computes. `D` is the costly one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, ValueEnum, Serialize, Deserialize)]
pub enum Metric {
    #[value(name = "G", alias = "g")]
    #[serde(alias = "g")]
    G,
    #[value(name = "D", alias = "d")]
    #[serde(alias = "d")]
    D,
}

/// Grid text: either `a,b,c` or `start:stop:count` (inclusive, evenly spaced).
pub fn parse_grid(text: &str) -> Result<Vec<f64>> {
    let text = text.trim();
    if text.is_empty() {
        return Ok(Vec::new());
    }
    let parts: Vec<&str> = text.split(':').collect();
    match parts.as_slice() {
        [single] => single
            .split(',')
            .map(|v| v.trim().parse::<f64>().with_context(|| format!("bad grid value {v:?}")))
            .collect(),
        [start, stop, count] => {
            let a: f64 = start.trim().parse().with_context(|| format!("bad grid start {start:?}"))?;
            let b: f64 = stop.trim().parse().with_context(|| format!("bad grid stop {stop:?}"))?;
            let n: usize = count.trim().parse().with_context(|| format!("bad grid count {count:?}"))?;
            Ok(linspace(a, b, n))
        }
        _ => bail!("grid {text:?} is neither a list nor start:stop:count"),
    }
}

pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![a],
        _ => (0..n).map(|i| if i + 1 == n { b } else { a + (b - a) * i as f64 / (n - 1) as f64 }).collect(),
    }
}

/// Nonempty, finite, inside `[lo, hi]` and strictly ascending.
pub fn validate_grid(name: &str, grid: &[f64], lo: f64, hi: f64) -> Result<()> {
    ensure!(!grid.is_empty(), "{name} grid is empty");
    for &v in grid {
        ensure!(v.is_finite() && (lo..=hi).contains(&v), "{name} grid value {v} outside [{lo}, {hi}]");
    }
    ensure!(grid.windows(2).all(|w| w[0] < w[1]), "{name} grid must be strictly ascending");
    Ok(())
}

/// Fails unless `path` can be opened for writing. Leaves the filesystem
/// as it was found.
pub fn check_writable(path: &Path) -> Result<()> {
    let parent = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    ensure!(parent.is_dir(), "output directory {} does not exist", parent.display());
    ensure!(!path.is_dir(), "output path {} is a directory", path.display());
    let existed = path.exists();
    OpenOptions::new()
        .append(true)
        .create(true)
        .open(path)
        .with_context(|| format!("cannot write {}", path.display()))?;
    if !existed {
        std::fs::remove_file(path).with_context(|| format!("cannot write {}", path.display()))?;
    }
    Ok(())
}

/// Grid as it may appear in a config file.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum GridValue {
    List(Vec<f64>),
    Text(String),
}

impl GridValue {
    fn resolve(&self) -> Result<Vec<f64>> {
        match self {
            GridValue::List(v) => Ok(v.clone()),
            GridValue::Text(t) => parse_grid(t),
        }
    }
}

/// Optional sweep settings, from a TOML file or from flags.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSettings {
    pub gate: Option<GateKind>,
    pub alpha: Option<f64>,
    pub model: Option<ModelKind>,
    pub scenario: Option<ScenarioKind>,
    pub eta_grid: Option<GridValue>,
    pub strength_grid: Option<GridValue>,
    pub metrics: Option<Vec<Metric>>,
    pub out: Option<PathBuf>,
    pub json: Option<PathBuf>,
    pub seed: Option<u64>,
    pub tol: Option<f64>,
    pub jobs: Option<usize>,
}

impl SweepSettings {
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
        toml::from_str(&text).with_context(|| format!("bad config file {}", path.display()))
    }

    /// Fields set in `self` win over `base`.
    pub fn over(self, base: SweepSettings) -> SweepSettings {
        SweepSettings {
            gate: self.gate.or(base.gate),
            alpha: self.alpha.or(base.alpha),
            model: self.model.or(base.model),
            scenario: self.scenario.or(base.scenario),
            eta_grid: self.eta_grid.or(base.eta_grid),
            strength_grid: self.strength_grid.or(base.strength_grid),
            metrics: self.metrics.or(base.metrics),
            out: self.out.or(base.out),
            json: self.json.or(base.json),
            seed: self.seed.or(base.seed),
            tol: self.tol.or(base.tol),
            jobs: self.jobs.or(base.jobs),
        }
    }

    pub fn resolve(self) -> Result<SweepConfig> {
        let default_grid = || linspace(0.0, 1.0, 11);
        let mut metrics = self.metrics.unwrap_or_else(|| vec![Metric::G, Metric::D]);
        metrics.sort();
        metrics.dedup();
        Ok(SweepConfig {
            gate: self.gate.unwrap_or(GateKind::Uz),
            alpha: self.alpha.unwrap_or(FRAC_PI_4),
            model: self.model.unwrap_or(ModelKind::Depolarizing),
            scenario: self.scenario.unwrap_or(ScenarioKind::Perfect),
            eta_grid: self.eta_grid.map(|g| g.resolve()).transpose()?.unwrap_or_else(default_grid),
            strength_grid: self.strength_grid.map(|g| g.resolve()).transpose()?.unwrap_or_else(default_grid),
            metrics,
            out: self.out.unwrap_or_else(|| PathBuf::from("sweep.csv")),
            json: self.json,
            seed: self.seed.unwrap_or(DEFAULT_SEED),
            tol: self.tol.unwrap_or(DEFAULT_TOL),
            jobs: self.jobs.unwrap_or(0),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepConfig {
    pub gate: GateKind,
    /// Rotation angle, used by `uz` only.
    pub alpha: f64,
    pub model: ModelKind,
    pub scenario: ScenarioKind,
    pub eta_grid: Vec<f64>,
    pub strength_grid: Vec<f64>,
    pub metrics: Vec<Metric>,
    pub out: PathBuf,
    pub json: Option<PathBuf>,
    pub seed: u64,
    pub tol: f64,
    /// Worker threads; 0 lets the pool decide.
    pub jobs: usize,
}

impl SweepConfig {
    pub fn wants(&self, m: Metric) -> bool {
        self.metrics.contains(&m)
    }

    /// Everything that can fail before computing, including the output paths.
    pub fn validate(&self) -> Result<()> {
        validate_grid("eta", &self.eta_grid, 0.0, 1.0)?;
        validate_grid("strength", &self.strength_grid, 0.0, 1.0)?;
        ensure!(self.alpha.is_finite(), "alpha must be finite");
        ensure!(!self.metrics.is_empty(), "no metrics selected");
        ensure!(self.tol > 0.0 && self.tol.is_finite(), "tolerance must be positive");
        check_writable(&self.out)?;
        if let Some(j) = &self.json {
            check_writable(j)?;
        }
        Ok(())
    }

    pub fn points(&self) -> usize {
        self.eta_grid.len() * self.strength_grid.len()
    }
}
