//! Command-line interface.

use crate::cavity::{cmd_cavity, CavityConfig, Correlation, DEFAULT_ETA, DEFAULT_SAMPLES};
use crate::config::{parse_grid, GateKind, GridValue, Metric, ModelKind, ScenarioKind, SweepSettings};
use crate::diamond::score;
use crate::formulas::{verify_formulas, zero_curve};
use crate::output::write_json;
use crate::sweep::cmd_sweep;
use anyhow::{ensure, Result};
use clap::{Args, Parser, Subcommand};
use seqmbqc::metrics::{DEFAULT_LOWER_BOUND_SAMPLES, DEFAULT_SEED};
use seqmbqc::sdp::DEFAULT_TOL;
use std::path::PathBuf;

#[derive(Debug, Parser)]
#[command(name = "seqmbqc-bench", version, about = "Standard vs sequential MBQC noise benchmarks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sweep an (eta, strength) grid and write one CSV row per point.
    Sweep(SweepArgs),
    /// Compare simulated infidelity differences with the closed-form tables.
    VerifyFormulas(VerifyArgs),
    /// Locate the zero level of the CX depolarizing g_diff by bisection.
    ZeroCurve(ZeroArgs),
    /// Cavity-QED benchmark with Raman-pulse register Hadamards.
    Cavity(CavityArgs),
    /// Score an ad-hoc pair of channels.
    Diamond(DiamondArgs),
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// TOML file with any of the flag names below (underscored); flags win.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub gate: Option<GateKind>,
    /// Rotation angle of the uz gate [default: pi/4].
    #[arg(long, allow_negative_numbers = true)]
    pub alpha: Option<f64>,
    #[arg(long, value_enum)]
    pub model: Option<ModelKind>,
    #[arg(long, value_enum)]
    pub scenario: Option<ScenarioKind>,
    /// `a,b,c` or `start:stop:count` [default: 0:1:11].
    #[arg(long)]
    pub eta_grid: Option<String>,
    #[arg(long)]
    pub strength_grid: Option<String>,
    /// Comma-separated subset of G,D [default: G,D].
    #[arg(long, value_enum, value_delimiter = ',', ignore_case = true)]
    pub metrics: Option<Vec<Metric>>,
    /// CSV output [default: sweep.csv].
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also write the JSON report here.
    #[arg(long)]
    pub json: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub tol: Option<f64>,
    /// Worker threads, 0 for one per core.
    #[arg(long)]
    pub jobs: Option<usize>,
}

impl SweepArgs {
    pub fn settings(&self) -> Result<SweepSettings> {
        let file = match &self.config {
            Some(p) => SweepSettings::from_file(p)?,
            None => SweepSettings::default(),
        };
        let flags = SweepSettings {
            gate: self.gate,
            alpha: self.alpha,
            model: self.model,
            scenario: self.scenario,
            eta_grid: self.eta_grid.clone().map(GridValue::Text),
            strength_grid: self.strength_grid.clone().map(GridValue::Text),
            metrics: self.metrics.clone(),
            out: self.out.clone(),
            json: self.json.clone(),
            seed: self.seed,
            tol: self.tol,
            jobs: self.jobs,
        };
        Ok(flags.over(file))
    }
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Grid points per axis on [0, 1].
    #[arg(long, default_value_t = 11)]
    pub resolution: usize,
    /// Ancilla noise for the cavity formula curves.
    #[arg(long, default_value_t = DEFAULT_ETA)]
    pub eta: f64,
    #[arg(long)]
    pub json: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    pub jobs: usize,
}

#[derive(Debug, Args)]
pub struct ZeroArgs {
    #[arg(long, value_enum, default_value = "depolarizing")]
    pub model: ModelKind,
    #[arg(long, value_enum, default_value = "perfect")]
    pub scenario: ScenarioKind,
    #[arg(long, default_value = "0:1:11")]
    pub eta_grid: String,
    /// Agreement tolerance against the closed-form curve.
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
    #[arg(long)]
    pub json: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    pub jobs: usize,
}

#[derive(Debug, Args)]
pub struct CavityArgs {
    #[arg(long, value_enum, value_delimiter = ',', default_value = "uz,cx")]
    pub gates: Vec<GateKind>,
    #[arg(long, default_value = "0,0.05,0.1,0.15,0.2")]
    pub s_grid: String,
    #[arg(long, default_value = "0,0.1,0.2")]
    pub gammas: String,
    #[arg(long, default_value_t = DEFAULT_ETA)]
    pub eta: f64,
    /// Rotation angle of the uz gate [default: pi/4].
    #[arg(long, allow_negative_numbers = true)]
    pub alpha: Option<f64>,
    /// Offset draws per point for the systematic D.
    #[arg(long, default_value_t = DEFAULT_SAMPLES)]
    pub samples: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
    #[arg(long, default_value_t = 0)]
    pub jobs: usize,
    /// Whether the two pulses of one Raman Hadamard share their offset.
    #[arg(long, value_enum, default_value = "independent")]
    pub correlation: Correlation,
    /// Also realise the CX circuit's H correction with a Raman pulse.
    #[arg(long)]
    pub noisy_correction: bool,
    #[arg(long, default_value = "cavity.csv")]
    pub out: PathBuf,
    #[arg(long)]
    pub json: Option<PathBuf>,
}

impl CavityArgs {
    pub fn config(&self) -> Result<CavityConfig> {
        let d = CavityConfig::default();
        Ok(CavityConfig {
            gates: self.gates.clone(),
            s_grid: parse_grid(&self.s_grid)?,
            gammas: parse_grid(&self.gammas)?,
            eta: self.eta,
            alpha: self.alpha.unwrap_or(d.alpha),
            samples: self.samples,
            seed: self.seed,
            tol: self.tol,
            jobs: self.jobs,
            correlation: self.correlation,
            noisy_correction: self.noisy_correction,
            out: self.out.clone(),
            json: self.json.clone(),
        })
    }
}

#[derive(Debug, Args)]
pub struct DiamondArgs {
    /// Channel spec, e.g. `x`, `rz:0.3`, `depolarizing:0.1:2`, `kraus:FILE`.
    #[arg(long)]
    pub ideal: String,
    #[arg(long)]
    pub noisy: String,
    /// Random pure states for the lower bound, 0 to skip.
    #[arg(long, default_value_t = DEFAULT_LOWER_BOUND_SAMPLES)]
    pub samples: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
    #[arg(long)]
    pub json: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    pub jobs: usize,
}

fn check_json(path: &Option<PathBuf>) -> Result<()> {
    if let Some(p) = path {
        crate::config::check_writable(p)?;
    }
    Ok(())
}

/// Runs one parsed command, printing a short summary to stdout.
pub fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Sweep(args) => {
            let cfg = args.settings()?.resolve()?;
            let records = cmd_sweep(&cfg)?;
            println!("wrote {} rows to {}", records.len(), cfg.out.display());
        }
        Command::VerifyFormulas(args) => {
            check_json(&args.json)?;
            let report = verify_formulas(args.resolution, args.eta, args.jobs)?;
            print!("{}", report.text());
            if let Some(p) = &args.json {
                write_json(p, &report)?;
            }
        }
        Command::ZeroCurve(args) => {
            check_json(&args.json)?;
            let grid = parse_grid(&args.eta_grid)?;
            let report = zero_curve(args.model, args.scenario, &grid, args.tol, args.jobs)?;
            let text = serde_json::to_string_pretty(&report)?;
            println!("{text}");
            if let Some(p) = &args.json {
                write_json(p, &report)?;
            }
        }
        Command::Cavity(args) => {
            let cfg = args.config()?;
            let records = cmd_cavity(&cfg)?;
            println!("wrote {} rows to {}", records.len(), cfg.out.display());
        }
        Command::Diamond(args) => {
            check_json(&args.json)?;
            ensure!(args.tol > 0.0, "tolerance must be positive");
            let r = score(&args.ideal, &args.noisy, args.samples, args.seed, args.tol, args.jobs)?;
            println!("G = {:.12}", r.gate_infidelity);
            println!("D = {:.12} (sdp gap {:.2e})", r.diamond_distance, r.sdp_gap);
            if let Some(lb) = r.lower_bound {
                println!("lower bound = {lb:.12}");
            }
            if let Some(p) = &args.json {
                write_json(p, &r)?;
            }
        }
    }
    Ok(())
}
