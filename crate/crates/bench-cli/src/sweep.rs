//! Grid sweeps comparing the standard and sequential circuits.

use crate::config::{GateKind, Metric, ModelKind, ScenarioKind, SweepConfig};
use crate::output::{fmt_float, fmt_opt, write_csv, write_json, CsvRow};
use anyhow::{bail, Result};
use rayon::prelude::*;
use serde::Serialize;
use seqmbqc::channels::NoiseSpec;
use seqmbqc::circuits::{sequential_cx, sequential_uz, standard_cx, standard_uz};
use seqmbqc::metrics::{diamond_only, logical_infidelity};
use seqmbqc::Logical;

/// One grid point. Differences are always `sequential − standard`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepRecord {
    pub eta: f64,
    pub strength: f64,
    pub g_stan: Option<f64>,
    pub g_seq: Option<f64>,
    pub g_diff: Option<f64>,
    pub d_stan: Option<f64>,
    pub d_seq: Option<f64>,
    pub d_diff: Option<f64>,
    pub sdp_gap_max: Option<f64>,
}

impl CsvRow for SweepRecord {
    const HEADER: &'static [&'static str] =
        &["eta", "strength", "g_stan", "g_seq", "g_diff", "d_stan", "d_seq", "d_diff", "sdp_gap_max"];

    fn fields(&self) -> Vec<String> {
        let mut f = vec![fmt_float(self.eta), fmt_float(self.strength)];
        f.extend(
            [self.g_stan, self.g_seq, self.g_diff, self.d_stan, self.d_seq, self.d_diff, self.sdp_gap_max].map(fmt_opt),
        );
        f
    }

    fn numbers(&self) -> Vec<f64> {
        [self.g_stan, self.g_seq, self.g_diff, self.d_stan, self.d_seq, self.d_diff, self.sdp_gap_max]
            .into_iter()
            .flatten()
            .chain([self.eta, self.strength])
            .collect()
    }
}

/// Standard and sequential realisations of `gate` under one noise setting.
pub fn circuit_pair(gate: GateKind, alpha: f64, noise: &NoiseSpec<f64>) -> Result<(Logical, Logical)> {
    Ok(match gate {
        GateKind::Uz => (standard_uz(alpha, noise)?, sequential_uz(alpha, noise)?),
        GateKind::Cx => (standard_cx(noise)?, sequential_cx(noise)?),
    })
}

pub fn noise(model: ModelKind, scenario: ScenarioKind, eta: f64, strength: f64) -> Result<NoiseSpec<f64>> {
    Ok(NoiseSpec::new(model.core(), strength, eta, scenario.core())?)
}

/// `G_seq − G_stan` at one point, the cheap path.
pub fn g_diff(gate: GateKind, model: ModelKind, scenario: ScenarioKind, eta: f64, strength: f64, alpha: f64) -> Result<f64> {
    let (stan, seq) = circuit_pair(gate, alpha, &noise(model, scenario, eta, strength)?)?;
    Ok(logical_infidelity(&seq)? - logical_infidelity(&stan)?)
}

pub fn evaluate(cfg: &SweepConfig, eta: f64, strength: f64) -> Result<SweepRecord> {
    let (stan, seq) = circuit_pair(cfg.gate, cfg.alpha, &noise(cfg.model, cfg.scenario, eta, strength)?)?;
    let mut r = SweepRecord {
        eta,
        strength,
        g_stan: None,
        g_seq: None,
        g_diff: None,
        d_stan: None,
        d_seq: None,
        d_diff: None,
        sdp_gap_max: None,
    };
    if cfg.wants(Metric::G) {
        let (a, b) = (logical_infidelity(&stan)?, logical_infidelity(&seq)?);
        (r.g_stan, r.g_seq, r.g_diff) = (Some(a), Some(b), Some(b - a));
    }
    if cfg.wants(Metric::D) {
        let (a, gap_a) = diamond_only(&stan.ideal, &stan.noisy, cfg.tol)?;
        let (b, gap_b) = diamond_only(&seq.ideal, &seq.noisy, cfg.tol)?;
        (r.d_stan, r.d_seq, r.d_diff, r.sdp_gap_max) = (Some(a), Some(b), Some(b - a), Some(gap_a.max(gap_b)));
    }
    Ok(r)
}

/// Runs `f` on a pool of `jobs` threads (0 = pool default).
pub fn with_pool<R: Send>(jobs: usize, f: impl FnOnce() -> R + Send) -> Result<R> {
    Ok(rayon::ThreadPoolBuilder::new().num_threads(jobs).build()?.install(f))
}

/// Evaluates `items` in parallel, keeping input order, and fails listing
/// every item whose evaluation failed.
pub fn par_eval<I: Sync, R: Send>(
    jobs: usize,
    items: &[I],
    describe: impl Fn(&I) -> String,
    f: impl Fn(&I) -> Result<R> + Sync + Send,
) -> Result<Vec<R>> {
    let results: Vec<Result<R>> = with_pool(jobs, || items.par_iter().map(&f).collect())?;
    let mut out = Vec::with_capacity(results.len());
    let mut failures = Vec::new();
    for (item, r) in items.iter().zip(results) {
        match r {
            Ok(v) => out.push(v),
            Err(e) => failures.push(format!("  {}: {e:#}", describe(item))),
        }
    }
    if !failures.is_empty() {
        bail!("{} of {} points failed:\n{}", failures.len(), items.len(), failures.join("\n"));
    }
    Ok(out)
}

/// Eta-major grid evaluation. Validates the config first.
pub fn run_sweep(cfg: &SweepConfig) -> Result<Vec<SweepRecord>> {
    cfg.validate()?;
    let points: Vec<(f64, f64)> =
        cfg.eta_grid.iter().flat_map(|&e| cfg.strength_grid.iter().map(move |&s| (e, s))).collect();
    par_eval(cfg.jobs, &points, |(e, s)| format!("eta={e} strength={s}"), |&(e, s)| evaluate(cfg, e, s))
}

#[derive(Debug, Serialize)]
pub struct SweepReport<'a> {
    pub command: &'static str,
    pub config: &'a SweepConfig,
    pub records: &'a [SweepRecord],
}

/// Runs the sweep and writes the CSV plus the optional JSON mirror.
pub fn cmd_sweep(cfg: &SweepConfig) -> Result<Vec<SweepRecord>> {
    let records = run_sweep(cfg)?;
    write_csv(&cfg.out, &records)?;
    if let Some(path) = &cfg.json {
        write_json(path, &SweepReport { command: "sweep", config: cfg, records: &records })?;
    }
    Ok(records)
}
