//! Cavity-QED benchmark: sequential circuits with Raman-pulse registers.
//!
//! `G` and `d_averaged` use the offset-averaged channel. `D` reads each
//! pulse offset as a fixed systematic error: it is the mean diamond
//! distance over sampled offset draws, which is what separates worst-case
//! from average-case behaviour at small `s`.

use crate::config::{check_writable, validate_grid, GateKind};
use crate::output::{fmt_float, fmt_opt, write_csv, write_json, CsvRow};
use crate::sweep::par_eval;
use anyhow::{ensure, Result};
use clap::ValueEnum;
use serde::Serialize;
use seqmbqc::circuits::{cavity_sequential_cx_with, cavity_sequential_uz_with, CavityOptions, OffsetCorrelation, CX_REGISTER_HADAMARDS};
use seqmbqc::metrics::{diamond_only, logical_infidelity, systematic_diamond, DEFAULT_SEED};
use seqmbqc::sdp::DEFAULT_TOL;
use seqmbqc::Logical;
use std::f64::consts::FRAC_PI_4;
use std::path::PathBuf;

pub const DEFAULT_ETA: f64 = 0.01;
pub const DEFAULT_SAMPLES: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Correlation {
    Independent,
    Shared,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CavityConfig {
    pub gates: Vec<GateKind>,
    pub s_grid: Vec<f64>,
    pub gammas: Vec<f64>,
    pub eta: f64,
    /// T gate by default.
    pub alpha: f64,
    /// Offset draws per point for `D`; points with `gamma = 0` need one.
    pub samples: usize,
    pub seed: u64,
    pub tol: f64,
    pub jobs: usize,
    pub correlation: Correlation,
    pub noisy_correction: bool,
    pub out: PathBuf,
    pub json: Option<PathBuf>,
}

impl Default for CavityConfig {
    fn default() -> Self {
        Self {
            gates: vec![GateKind::Uz, GateKind::Cx],
            s_grid: vec![0.0, 0.05, 0.1, 0.15, 0.2],
            gammas: vec![0.0, 0.1, 0.2],
            eta: DEFAULT_ETA,
            alpha: FRAC_PI_4,
            samples: DEFAULT_SAMPLES,
            seed: DEFAULT_SEED,
            tol: DEFAULT_TOL,
            jobs: 0,
            correlation: Correlation::Independent,
            noisy_correction: false,
            out: PathBuf::from("cavity.csv"),
            json: None,
        }
    }
}

impl CavityConfig {
    pub fn options(&self) -> CavityOptions {
        CavityOptions {
            correlation: match self.correlation {
                Correlation::Independent => OffsetCorrelation::Independent,
                Correlation::Shared => OffsetCorrelation::Shared,
            },
            noisy_correction: self.noisy_correction,
        }
    }

    pub fn validate(&self) -> Result<()> {
        ensure!(!self.gates.is_empty(), "no gates selected");
        validate_grid("s", &self.s_grid, 0.0, 1.0)?;
        validate_grid("gamma", &self.gammas, 0.0, f64::MAX)?;
        ensure!((0.0..=1.0).contains(&self.eta), "eta must lie in [0, 1]");
        ensure!(self.samples >= 2, "need at least two offset samples");
        ensure!(self.tol > 0.0, "tolerance must be positive");
        check_writable(&self.out)?;
        if let Some(j) = &self.json {
            check_writable(j)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CavityRecord {
    pub gate: GateKind,
    pub gamma: f64,
    pub s: f64,
    pub g: f64,
    /// Mean systematic diamond distance.
    pub d: f64,
    /// `None` when `g` vanishes.
    pub d_over_g: Option<f64>,
    pub d_std_error: f64,
    pub d_averaged: f64,
    pub sdp_gap_max: f64,
    pub samples: usize,
}

impl CsvRow for CavityRecord {
    const HEADER: &'static [&'static str] =
        &["gate", "gamma", "s", "g", "d", "d_over_g", "d_std_error", "d_averaged", "sdp_gap_max", "samples"];

    fn fields(&self) -> Vec<String> {
        vec![
            format!("{:?}", self.gate).to_lowercase(),
            fmt_float(self.gamma),
            fmt_float(self.s),
            fmt_float(self.g),
            fmt_float(self.d),
            fmt_opt(self.d_over_g),
            fmt_float(self.d_std_error),
            fmt_float(self.d_averaged),
            fmt_float(self.sdp_gap_max),
            self.samples.to_string(),
        ]
    }

    fn numbers(&self) -> Vec<f64> {
        let mut v = vec![self.gamma, self.s, self.g, self.d, self.d_std_error, self.d_averaged, self.sdp_gap_max];
        v.extend(self.d_over_g);
        v
    }
}

/// Offset-averaged cavity channel.
pub fn averaged_channel(cfg: &CavityConfig, gate: GateKind, s: f64, gamma: f64) -> Result<Logical> {
    let opts = cfg.options();
    Ok(match gate {
        GateKind::Uz => opts.uz(cfg.alpha, s, cfg.eta, gamma)?,
        GateKind::Cx => opts.cx(s, cfg.eta, gamma)?,
    })
}

/// Cavity channel for one fixed draw of pulse offsets.
pub fn fixed_channel(cfg: &CavityConfig, gate: GateKind, s: f64, offsets: &[f64]) -> seqmbqc::Result<Logical> {
    let hs = cfg.options().fixed_hadamards(offsets);
    match gate {
        GateKind::Uz => cavity_sequential_uz_with(cfg.alpha, s, cfg.eta, &hs),
        GateKind::Cx => cavity_sequential_cx_with(s, cfg.eta, &hs[..CX_REGISTER_HADAMARDS], hs.get(CX_REGISTER_HADAMARDS)),
    }
}

pub fn offsets(cfg: &CavityConfig, gate: GateKind) -> usize {
    match gate {
        GateKind::Uz => cfg.options().uz_offsets(),
        GateKind::Cx => cfg.options().cx_offsets(),
    }
}

/// Every point draws from the same seed, so curves in `s` share offsets.
pub fn evaluate(cfg: &CavityConfig, gate: GateKind, gamma: f64, s: f64) -> Result<CavityRecord> {
    let avg = averaged_channel(cfg, gate, s, gamma)?;
    let g = logical_infidelity(&avg)?;
    let (d_averaged, gap) = diamond_only(&avg.ideal, &avg.noisy, cfg.tol)?;
    let (d, d_std_error, sdp_gap_max, samples) = if gamma == 0.0 {
        (d_averaged, 0.0, gap, 1)
    } else {
        let sys = systematic_diamond(
            |draw: &[f64]| fixed_channel(cfg, gate, s, draw),
            offsets(cfg, gate),
            gamma,
            cfg.samples,
            cfg.seed,
            cfg.tol,
        )?;
        (sys.mean, sys.std_error, sys.max_gap.max(gap), sys.samples)
    };
    let d_over_g = (g > 0.0).then(|| d / g);
    Ok(CavityRecord { gate, gamma, s, g, d, d_over_g, d_std_error, d_averaged, sdp_gap_max, samples })
}

/// Rows ordered gate, then gamma, then s.
pub fn run_cavity(cfg: &CavityConfig) -> Result<Vec<CavityRecord>> {
    cfg.validate()?;
    let mut items = Vec::new();
    for &gate in &cfg.gates {
        for &gamma in &cfg.gammas {
            for &s in &cfg.s_grid {
                items.push((gate, gamma, s));
            }
        }
    }
    par_eval(cfg.jobs, &items, |p| format!("{p:?}"), |&(gate, gamma, s)| evaluate(cfg, gate, gamma, s))
}

#[derive(Debug, Serialize)]
pub struct CavityReport<'a> {
    pub command: &'static str,
    pub config: &'a CavityConfig,
    pub records: &'a [CavityRecord],
}

pub fn cmd_cavity(cfg: &CavityConfig) -> Result<Vec<CavityRecord>> {
    let records = run_cavity(cfg)?;
    write_csv(&cfg.out, &records)?;
    if let Some(path) = &cfg.json {
        write_json(path, &CavityReport { command: "cavity", config: cfg, records: &records })?;
    }
    Ok(records)
}
