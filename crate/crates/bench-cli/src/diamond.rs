//! Ad-hoc scoring of a pair of channels given by short specs.
//!
//! Spec grammar: `name` or `name:param[:param]`.
//!
//! | spec | channel |
//! |---|---|
//! | `id`, `id2` | one- or two-qubit identity |
//! | `x`, `y`, `z`, `h`, `s`, `t`, `cz`, `cx` | unitary gates |
//! | `rx:θ`, `ry:θ`, `rz:θ` | rotations `exp(−iθσ/2)` |
//! | `depolarizing:p[:n]` | `ρ ↦ (1−p)ρ + p·I/2ⁿ` on `n` qubits (default 1) |
//! | `dephasing:p` | `ρ ↦ (1−p)ρ + p·ZρZ` |
//! | `amplitude-damping:g` | decay `|1⟩ → |0⟩` with probability `g` |
//! | `kraus:FILE` | JSON list of Kraus matrices, entries `[re, im]` |

use crate::sweep::with_pool;
use anyhow::{bail, ensure, Context, Result};
use serde::Serialize;
use seqmbqc::channels::{cx, cz, hadamard, pauli, rotation, Axis, KrausChannel};
use seqmbqc::metrics::{gate_infidelity, refined_lower_bound, DiamondOptions};
use seqmbqc::qlin::{ComplexMatrix, Superoperator};
use seqmbqc::{CMatrix, Complex, Superop};
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

fn unitary(u: &CMatrix) -> Superop {
    Superoperator::from_unitary(u)
}

fn param(spec: &str, args: &[&str], i: usize) -> Result<f64> {
    let v = args.get(i).with_context(|| format!("{spec} needs a parameter"))?;
    v.parse().with_context(|| format!("bad parameter {v:?} in {spec}"))
}

fn probability(spec: &str, p: f64) -> Result<f64> {
    ensure!((0.0..=1.0).contains(&p), "{spec}: parameter must lie in [0, 1]");
    Ok(p)
}

fn kraus(ops: Vec<CMatrix>) -> Result<Superop> {
    Ok(KrausChannel::new(ops)?.to_superoperator())
}

pub fn depolarizing(p: f64, qubits: usize) -> Result<Superop> {
    ensure!((1..=4).contains(&qubits), "depolarizing supports 1 to 4 qubits");
    let basis = seqmbqc::metrics::pauli_basis::<f64>(qubits);
    let dd = basis.len() as f64;
    let ops = basis
        .into_iter()
        .enumerate()
        .map(|(i, b)| b.scale_real(if i == 0 { (1.0 - p + p / dd).sqrt() } else { (p / dd).sqrt() }))
        .collect();
    kraus(ops)
}

fn matrix_from_json(value: &serde_json::Value) -> Result<CMatrix> {
    let rows: Vec<Vec<[f64; 2]>> = serde_json::from_value(value.clone()).context("matrix must be rows of [re, im]")?;
    let n = rows.len();
    ensure!(n > 0 && rows.iter().all(|r| r.len() == n), "Kraus matrices must be square");
    Ok(ComplexMatrix::from_fn(n, n, |i, j| Complex::new(rows[i][j][0], rows[i][j][1])))
}

/// Parses one channel spec; see the module docs for the grammar.
pub fn parse_channel(spec: &str) -> Result<Superop> {
    let (name, rest) = spec.split_once(':').unwrap_or((spec, ""));
    if name == "kraus" {
        let text = std::fs::read_to_string(rest).with_context(|| format!("cannot read {rest}"))?;
        let list: Vec<serde_json::Value> = serde_json::from_str(&text).context("Kraus file must be a JSON list")?;
        return kraus(list.iter().map(matrix_from_json).collect::<Result<_>>()?);
    }
    let args: Vec<&str> = if rest.is_empty() { Vec::new() } else { rest.split(':').collect() };
    let i = ComplexMatrix::<f64>::identity(2);
    Ok(match name {
        "id" => Superoperator::identity(2),
        "id2" => Superoperator::identity(4),
        "x" => unitary(&pauli(Axis::X)),
        "y" => unitary(&pauli(Axis::Y)),
        "z" => unitary(&pauli(Axis::Z)),
        "h" => unitary(&hadamard()),
        "s" => unitary(&rotation(Axis::Z, FRAC_PI_2)),
        "t" => unitary(&rotation(Axis::Z, FRAC_PI_4)),
        "cz" => unitary(&cz()),
        "cx" => unitary(&cx()),
        "rx" => unitary(&rotation(Axis::X, param(spec, &args, 0)?)),
        "ry" => unitary(&rotation(Axis::Y, param(spec, &args, 0)?)),
        "rz" => unitary(&rotation(Axis::Z, param(spec, &args, 0)?)),
        "depolarizing" => {
            let p = probability(spec, param(spec, &args, 0)?)?;
            let n = if args.len() > 1 { param(spec, &args, 1)? } else { 1.0 };
            ensure!(n.fract() == 0.0 && n >= 1.0, "{spec}: qubit count must be a positive integer");
            depolarizing(p, n as usize)?
        }
        "dephasing" => {
            let p = probability(spec, param(spec, &args, 0)?)?;
            kraus(vec![i.scale_real((1.0 - p).sqrt()), pauli::<f64>(Axis::Z).scale_real(p.sqrt())])?
        }
        "amplitude-damping" => {
            let g = probability(spec, param(spec, &args, 0)?)?;
            let k0 = ComplexMatrix::from_real_rows(&[&[1.0, 0.0], &[0.0, (1.0 - g).sqrt()]])?;
            let k1 = ComplexMatrix::from_real_rows(&[&[0.0, g.sqrt()], &[0.0, 0.0]])?;
            kraus(vec![k0, k1])?
        }
        _ => bail!("unknown channel spec {spec:?}"),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiamondReport {
    pub command: &'static str,
    pub ideal: String,
    pub noisy: String,
    pub gate_infidelity: f64,
    pub diamond_distance: f64,
    pub sdp_gap: f64,
    /// Pure-state lower bound, see-saw refined; absent when `samples = 0`.
    pub lower_bound: Option<f64>,
}

pub fn score(ideal: &str, noisy: &str, samples: usize, seed: u64, tol: f64, jobs: usize) -> Result<DiamondReport> {
    let (a, b) = (parse_channel(ideal)?, parse_channel(noisy)?);
    ensure!(a.dim_in() == b.dim_in(), "{ideal} and {noisy} act on different dimensions");
    with_pool(jobs, || -> Result<DiamondReport> {
        let opts = DiamondOptions { tol, lower_bound_samples: 0, seed };
        let m = seqmbqc::metrics::diamond_distance_with(&a, &b, &opts)?;
        let lower_bound = if samples == 0 { None } else { Some(refined_lower_bound(&a, &b, samples, seed)?) };
        Ok(DiamondReport {
            command: "diamond",
            ideal: ideal.into(),
            noisy: noisy.into(),
            gate_infidelity: gate_infidelity(&a, &b, a.dim_in())?,
            diamond_distance: m.diamond_distance,
            sdp_gap: m.diamond_gap,
            lower_bound,
        })
    })?
}
