//! Cross-checks of simulated infidelity differences against closed forms.

use crate::config::{linspace, GateKind, ModelKind, ScenarioKind};
use crate::sweep::{g_diff, par_eval};
use anyhow::{ensure, Result};
use serde::Serialize;
use seqmbqc::circuits::cavity_sequential_uz;
use seqmbqc::metrics::{eval_cavity_formula, eval_table_formula, logical_infidelity};
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, FRAC_PI_8};

pub const ALPHAS: [f64; 4] = [0.0, FRAC_PI_8, FRAC_PI_4, FRAC_PI_2];
/// Simulated and literal cavity values further apart than this are flagged.
pub const DIVERGENCE_TOL: f64 = 1e-6;
/// Strength scan points before bisection in the zero-curve search.
pub const ZERO_SCAN: usize = 101;
/// `|g_diff|` below this counts as an exact zero.
pub const ZERO_TOL: f64 = 1e-13;

/// The eight (gate, model, scenario) rows of the two comparison tables.
pub const TABLE_CASES: [(GateKind, ModelKind, ScenarioKind); 8] = [
    (GateKind::Uz, ModelKind::Depolarizing, ScenarioKind::Perfect),
    (GateKind::Uz, ModelKind::Depolarizing, ScenarioKind::Imperfect),
    (GateKind::Uz, ModelKind::Misfiring, ScenarioKind::Perfect),
    (GateKind::Uz, ModelKind::Misfiring, ScenarioKind::Imperfect),
    (GateKind::Cx, ModelKind::Depolarizing, ScenarioKind::Perfect),
    (GateKind::Cx, ModelKind::Depolarizing, ScenarioKind::Imperfect),
    (GateKind::Cx, ModelKind::Misfiring, ScenarioKind::Perfect),
    (GateKind::Cx, ModelKind::Misfiring, ScenarioKind::Imperfect),
];

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FormulaPoint {
    pub eta: f64,
    pub strength: f64,
    pub alpha: f64,
    pub simulated: f64,
    pub formula: f64,
}

impl FormulaPoint {
    pub fn deviation(&self) -> f64 {
        (self.simulated - self.formula).abs()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FormulaCheck {
    pub gate: GateKind,
    pub model: ModelKind,
    pub scenario: ScenarioKind,
    pub points: usize,
    pub max_deviation: f64,
    /// Point where the deviation peaks.
    pub worst: FormulaPoint,
}

/// Compares one table formula with simulation on `grid × grid × alphas`.
/// CX has no angle, so it is checked at a single `alpha = 0`.
pub fn check_formula(
    gate: GateKind,
    model: ModelKind,
    scenario: ScenarioKind,
    grid: &[f64],
    alphas: &[f64],
    jobs: usize,
) -> Result<FormulaCheck> {
    let alphas = if gate == GateKind::Cx { &[0.0][..] } else { alphas };
    let mut items = Vec::new();
    for &eta in grid {
        for &s in grid {
            for &a in alphas {
                items.push((eta, s, a));
            }
        }
    }
    let points = par_eval(jobs, &items, |p| format!("{gate:?}/{model:?}/{scenario:?} at {p:?}"), |&(eta, s, a)| {
        Ok(FormulaPoint {
            eta,
            strength: s,
            alpha: a,
            simulated: g_diff(gate, model, scenario, eta, s, a)?,
            formula: eval_table_formula(gate.core(), model.core(), scenario.core(), eta, s, a),
        })
    })?;
    let worst = *points.iter().max_by(|a, b| a.deviation().total_cmp(&b.deviation())).expect("nonempty grid");
    Ok(FormulaCheck { gate, model, scenario, points: points.len(), max_deviation: worst.deviation(), worst })
}

/// Literal cavity formula next to the simulated cavity `U_z(π/4)` infidelity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CavityFormulaPoint {
    pub gamma: f64,
    pub eta: f64,
    pub s: f64,
    pub formula: f64,
    pub simulated: f64,
    pub divergent: bool,
    /// `|1 − formula − simulated|`: how far the formula is from reading as a fidelity.
    pub complement_deviation: f64,
}

pub fn cavity_formula_point(gamma: f64, eta: f64, s: f64) -> Result<CavityFormulaPoint> {
    let simulated = logical_infidelity(&cavity_sequential_uz(FRAC_PI_4, s, eta, gamma)?)?;
    let formula = eval_cavity_formula(eta, s, gamma);
    Ok(CavityFormulaPoint {
        gamma,
        eta,
        s,
        formula,
        simulated,
        divergent: (formula - simulated).abs() > DIVERGENCE_TOL,
        complement_deviation: (1.0 - formula - simulated).abs(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub command: &'static str,
    pub resolution: usize,
    pub alphas: Vec<f64>,
    pub formulas: Vec<FormulaCheck>,
    pub max_deviation: f64,
    /// Reported only; the literal formula is not expected to match.
    pub cavity: Vec<CavityFormulaPoint>,
}

/// All eight table checks on a `resolution²` grid, then the cavity
/// formula along `s ∈ [0, 0.2]` at `eta` plus the zero-noise point.
pub fn verify_formulas(resolution: usize, eta: f64, jobs: usize) -> Result<VerifyReport> {
    ensure!(resolution >= 2, "resolution must be at least 2");
    ensure!((0.0..=1.0).contains(&eta), "eta must lie in [0, 1]");
    let grid = linspace(0.0, 1.0, resolution);
    let formulas = TABLE_CASES
        .iter()
        .map(|&(g, m, sc)| check_formula(g, m, sc, &grid, &ALPHAS, jobs))
        .collect::<Result<Vec<_>>>()?;
    let max_deviation = formulas.iter().map(|f| f.max_deviation).fold(0.0, f64::max);
    let mut cavity = vec![cavity_formula_point(0.0, 0.0, 0.0)?];
    for gamma in [0.0, 0.1, 0.2] {
        for s in linspace(0.0, 0.2, 5) {
            cavity.push(cavity_formula_point(gamma, eta, s)?);
        }
    }
    Ok(VerifyReport { command: "verify-formulas", resolution, alphas: ALPHAS.to_vec(), formulas, max_deviation, cavity })
}

impl VerifyReport {
    pub fn text(&self) -> String {
        let mut out = format!("table formulas on a {0}x{0} grid, alpha in {{0, pi/8, pi/4, pi/2}}\n", self.resolution);
        for f in &self.formulas {
            out += &format!(
                "  {:?} {:?} {:?}: max |sim - formula| = {:.3e} over {} points\n",
                f.gate, f.model, f.scenario, f.max_deviation, f.points
            );
        }
        out += "cavity U_z(pi/4) infidelity, literal formula vs simulation\n";
        for c in &self.cavity {
            out += &format!(
                "  gamma={:.2} eta={:.2} s={:.2}: formula {:.10} simulated {:.10} |1-formula-sim| {:.1e}{}\n",
                c.gamma,
                c.eta,
                c.s,
                c.formula,
                c.simulated,
                c.complement_deviation,
                if c.divergent { "  DIVERGENT" } else { "" }
            );
        }
        out
    }
}

/// `p = 4(2η − η²)/(1 + 8η − 4η²)`.
pub fn closed_form_zero(eta: f64) -> f64 {
    4.0 * (2.0 * eta - eta * eta) / (1.0 + 8.0 * eta - 4.0 * eta * eta)
}

/// First strength in `[0, 1]` where the CX depolarizing `g_diff` changes
/// sign, by a coarse scan then bisection to `1e-13`.
pub fn locate_zero(eta: f64, scenario: ScenarioKind) -> Result<Option<f64>> {
    let f = |s: f64| g_diff(GateKind::Cx, ModelKind::Depolarizing, scenario, eta, s, 0.0);
    let scan = linspace(0.0, 1.0, ZERO_SCAN);
    let mut prev = (scan[0], f(scan[0])?);
    if prev.1.abs() < ZERO_TOL {
        return Ok(Some(prev.0));
    }
    for &s in &scan[1..] {
        let v = f(s)?;
        if v.abs() < ZERO_TOL {
            return Ok(Some(s));
        }
        if v.signum() != prev.1.signum() {
            let (mut lo, mut hi, lo_sign) = (prev.0, s, prev.1.signum());
            for _ in 0..200 {
                if hi - lo <= 1e-13 {
                    break;
                }
                let mid = 0.5 * (lo + hi);
                let m = f(mid)?;
                if m.abs() < ZERO_TOL {
                    return Ok(Some(mid));
                }
                if m.signum() == lo_sign {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            return Ok(Some(0.5 * (lo + hi)));
        }
        prev = (s, v);
    }
    Ok(None)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RootStatus {
    Found,
    None,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ZeroPoint {
    pub eta: f64,
    pub status: RootStatus,
    pub root: Option<f64>,
    pub closed_form: f64,
    pub deviation: Option<f64>,
    pub agrees: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ZeroCurveReport {
    pub command: &'static str,
    pub model: ModelKind,
    pub scenario: ScenarioKind,
    pub tol: f64,
    pub points: Vec<ZeroPoint>,
}

pub fn zero_curve(model: ModelKind, scenario: ScenarioKind, eta_grid: &[f64], tol: f64, jobs: usize) -> Result<ZeroCurveReport> {
    ensure!(model == ModelKind::Depolarizing, "the zero curve is defined for depolarizing CX only");
    crate::config::validate_grid("eta", eta_grid, 0.0, 1.0)?;
    ensure!(tol > 0.0, "tolerance must be positive");
    let points = par_eval(jobs, eta_grid, |e| format!("eta={e}"), |&eta| {
        let root = locate_zero(eta, scenario)?;
        let closed_form = closed_form_zero(eta);
        let deviation = root.map(|r| (r - closed_form).abs());
        Ok(ZeroPoint {
            eta,
            status: if root.is_some() { RootStatus::Found } else { RootStatus::None },
            root,
            closed_form,
            deviation,
            agrees: deviation.is_some_and(|d| d <= tol),
        })
    })?;
    Ok(ZeroCurveReport { command: "zero-curve", model, scenario, tol, points })
}
