//! Figures of merit for (ideal, noisy) channel pairs.
//!
//! - Average gate infidelity over the Pauli operator basis.
//! - Diamond distance `D = λ`, the common optimum of the primal and dual
//!   SDPs in [`crate::sdp`]. This already places `D(E, E) = 0` and
//!   `D(id, X·X) = 1`, so no further rescaling is applied.
//! - A pure-state lower bound on `D`, used as an independent certificate.

use num_complex::Complex;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::channels::{pauli, Axis, EntanglerModel, Scenario};
use crate::circuits::{apply_local, LogicalChannel};
use crate::error::{Error, Result};
use crate::qlin::{hermitian_eig, kron_all, trace_norm, ComplexMatrix, Superoperator};
use crate::scalar::{cr, Real};
use crate::sdp::{solve_diamond, SdpProblem, DEFAULT_TOL};

/// Seed of the default lower-bound sample stream.
pub const DEFAULT_SEED: u64 = 0x5eed_0001;
pub const DEFAULT_LOWER_BOUND_SAMPLES: usize = 2000;
/// Largest imaginary part tolerated in the infidelity trace sum.
pub const IMAGINARY_RESIDUE_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Gate {
    Uz,
    Cx,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricResult<T> {
    pub gate_infidelity: T,
    pub diamond_distance: T,
    /// `|dual − primal|` of the SDP certificates.
    pub diamond_gap: T,
    pub lower_bound: T,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiamondOptions {
    pub tol: f64,
    /// Random pure states for [`diamond_lower_bound`]; 0 skips the bound.
    pub lower_bound_samples: usize,
    pub seed: u64,
}

impl Default for DiamondOptions {
    fn default() -> Self {
        Self { tol: DEFAULT_TOL, lower_bound_samples: DEFAULT_LOWER_BOUND_SAMPLES, seed: DEFAULT_SEED }
    }
}

fn qubit_count(d: usize) -> Result<usize> {
    if d < 2 || !d.is_power_of_two() {
        return Err(Error::Dimension(format!("dimension {d} is not a qubit register")));
    }
    Ok(d.trailing_zeros() as usize)
}

/// Pauli strings over `n` qubits, `(I, X, Y, Z)^⊗n` in lexicographic order.
pub fn pauli_basis<T: Real>(n: usize) -> Vec<ComplexMatrix<T>> {
    let single = [ComplexMatrix::identity(2), pauli(Axis::X), pauli(Axis::Y), pauli(Axis::Z)];
    let mut out = Vec::with_capacity(1 << (2 * n));
    for idx in 0..1usize << (2 * n) {
        let factors: Vec<ComplexMatrix<T>> = (0..n).map(|q| single[(idx >> (2 * (n - 1 - q))) & 3].clone()).collect();
        out.push(kron_all(&factors.iter().collect::<Vec<_>>()));
    }
    out
}

fn check_pair<T: Real>(ideal: &Superoperator<T>, noisy: &Superoperator<T>) -> Result<usize> {
    let d = ideal.dim_in();
    if ideal.dim_out() != d || noisy.dim_in() != d || noisy.dim_out() != d {
        return Err(Error::Dimension("ideal and noisy maps must share one square dimension".into()));
    }
    Ok(d)
}

/// `1 − [1/(d+1) + Σⱼ Tr(F(Uⱼ†)·E(Uⱼ)) / (d²(d+1))]` over Pauli strings `Uⱼ`.
pub fn gate_infidelity<T: Real>(ideal: &Superoperator<T>, noisy: &Superoperator<T>, d: usize) -> Result<T> {
    if check_pair(ideal, noisy)? != d {
        return Err(Error::Dimension(format!("maps act on dimension {}, not {d}", ideal.dim_in())));
    }
    let mut sum = cr(T::zero());
    for u in pauli_basis::<T>(qubit_count(d)?) {
        let f = ideal.apply(&u.dagger())?;
        let e = noisy.apply(&u)?;
        // Tr(A·B) = Σ A_ij B_ji.
        sum = sum + f.dagger().hs_inner(&e);
    }
    let dd = T::from_usize(d).expect("small");
    let scale = T::one().max(sum.re.abs());
    if sum.im.abs() > T::lit(IMAGINARY_RESIDUE_TOL) * scale {
        return Err(Error::Invalid(format!("infidelity trace sum has imaginary part {}", sum.im)));
    }
    Ok(T::one() - (T::one() / (dd + T::one()) + sum.re / (dd * dd * (dd + T::one()))))
}

/// Gate infidelity and diamond distance with default options.
pub fn diamond_distance<T: Real>(ideal: &Superoperator<T>, noisy: &Superoperator<T>) -> Result<MetricResult<T>> {
    diamond_distance_with(ideal, noisy, &DiamondOptions::default())
}

pub fn diamond_distance_with<T: Real>(
    ideal: &Superoperator<T>,
    noisy: &Superoperator<T>,
    opts: &DiamondOptions,
) -> Result<MetricResult<T>> {
    let d = check_pair(ideal, noisy)?;
    let gate_infidelity = gate_infidelity(ideal, noisy, d)?;
    let (diamond_distance, diamond_gap) = diamond_only(ideal, noisy, opts.tol)?;
    let lower_bound = if opts.lower_bound_samples == 0 {
        T::zero()
    } else {
        diamond_lower_bound(ideal, noisy, opts.lower_bound_samples, opts.seed)?
    };
    Ok(MetricResult { gate_infidelity, diamond_distance, diamond_gap, lower_bound })
}

/// `(D, gap)` from the SDP alone.
pub fn diamond_only<T: Real>(ideal: &Superoperator<T>, noisy: &Superoperator<T>, tol: f64) -> Result<(T, T)> {
    check_pair(ideal, noisy)?;
    let problem = SdpProblem::new(ideal.sub(noisy)?.choi())?;
    let sol = solve_diamond(&problem, T::lit(tol))?;
    Ok((sol.dual_value, sol.gap))
}

pub fn logical_metrics<T: Real>(ch: &LogicalChannel<T>, opts: &DiamondOptions) -> Result<MetricResult<T>> {
    diamond_distance_with(&ch.ideal, &ch.noisy, opts)
}

pub fn logical_infidelity<T: Real>(ch: &LogicalChannel<T>) -> Result<T> {
    gate_infidelity(&ch.ideal, &ch.noisy, ch.dim())
}

/// `(Ψ ⊗ I)` and its adjoint on the doubled space, Ψ on the first factor.
struct Doubled<T> {
    psi: Superoperator<T>,
    adjoint: Superoperator<T>,
    system: Vec<usize>,
    qubits: usize,
}

impl<T: Real> Doubled<T> {
    fn new(ideal: &Superoperator<T>, noisy: &Superoperator<T>) -> Result<Self> {
        let d = check_pair(ideal, noisy)?;
        let n = qubit_count(d)?;
        let psi = ideal.sub(noisy)?;
        let adjoint = Superoperator::new(d, d, psi.matrix().dagger())?;
        Ok(Self { psi, adjoint, system: (0..n).collect(), qubits: 2 * n })
    }

    fn dim(&self) -> usize {
        1 << self.qubits
    }

    fn output(&self, v: &[Complex<T>]) -> Result<ComplexMatrix<T>> {
        let rho = ComplexMatrix::outer(v, v);
        apply_local(&rho, &self.psi, &self.system, self.qubits)
    }

    fn value(&self, v: &[Complex<T>]) -> Result<T> {
        Ok(trace_norm(&self.output(v)?)? * T::lit(0.5))
    }
}

fn random_state<T: Real>(rng: &mut ChaCha8Rng, dim: usize) -> Vec<Complex<T>> {
    let mut v: Vec<Complex<T>> = (0..dim)
        .map(|_| {
            let re: f64 = StandardNormal.sample(rng);
            let im: f64 = StandardNormal.sample(rng);
            Complex::new(T::lit(re), T::lit(im))
        })
        .collect();
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt();
    for z in &mut v {
        *z = *z / norm;
    }
    v
}

/// Running maximum of `½‖(Ψ ⊗ I)(|ψ⟩⟨ψ|)‖₁` over Haar-random pure states.
pub fn diamond_lower_bound<T: Real>(ideal: &Superoperator<T>, noisy: &Superoperator<T>, samples: usize, seed: u64) -> Result<T> {
    Ok(sampled(&Doubled::new(ideal, noisy)?, samples, seed, 0)?.0)
}

/// A sampled state and its objective value.
type Scored<T> = (T, Vec<Complex<T>>);

/// Returns the best value and the `keep` best states.
fn sampled<T: Real>(map: &Doubled<T>, samples: usize, seed: u64, keep: usize) -> Result<(T, Vec<Scored<T>>)> {
    if samples == 0 {
        return Err(Error::Invalid("lower bound needs at least one sample".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best = T::zero();
    let mut top: Vec<Scored<T>> = Vec::with_capacity(keep + 1);
    for _ in 0..samples {
        let v = random_state(&mut rng, map.dim());
        let f = map.value(&v)?;
        best = best.max(f);
        if keep > 0 {
            top.push((f, v));
            top.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap_or(std::cmp::Ordering::Equal));
            top.truncate(keep);
        }
    }
    Ok((best, top))
}

/// Sampled lower bound, then polished by see-saw ascent from the best
/// few samples: alternately fix the sign operator `S` of the output and
/// move `ψ` to the top eigenvector of `(Ψ† ⊗ I)(S)`. Each step is
/// nondecreasing, so the result never drops below the sampled bound.
pub fn refined_lower_bound<T: Real>(ideal: &Superoperator<T>, noisy: &Superoperator<T>, samples: usize, seed: u64) -> Result<T> {
    const STARTS: usize = 4;
    const SWEEPS: usize = 100;
    let map = Doubled::new(ideal, noisy)?;
    let (mut best, top) = sampled(&map, samples, seed, STARTS)?;
    for (mut f, mut v) in top {
        for _ in 0..SWEEPS {
            let eig = hermitian_eig(&map.output(&v)?)?;
            let n = eig.values.len();
            let signed = ComplexMatrix::from_fn(n, n, |i, j| {
                eig.vectors[(i, j)] * if eig.values[j] >= T::zero() { T::one() } else { -T::one() }
            });
            let sign = &signed * &eig.vectors.dagger();
            let pulled = apply_local(&sign, &map.adjoint, &map.system, map.qubits)?;
            let pulled = ComplexMatrix::from_fn(n, n, |i, j| (pulled[(i, j)] + pulled[(j, i)].conj()) * T::lit(0.5));
            let top = hermitian_eig(&pulled)?;
            let next: Vec<Complex<T>> = (0..n).map(|i| top.vectors[(i, n - 1)]).collect();
            let g = map.value(&next)?;
            if g <= f {
                break;
            }
            let done = g - f < T::epsilon() * T::lit(16.0);
            f = g;
            v = next;
            if done {
                break;
            }
        }
        best = best.max(f);
    }
    Ok(best)
}

/// Closed-form `G_seq − G_stan` from the two comparison tables.
///
/// `EntanglerModel::None` evaluates the zero-strength row, where every
/// formula for a given gate agrees.
pub fn eval_table_formula<T: Real>(gate: Gate, model: EntanglerModel, scenario: Scenario, eta: T, strength: T, alpha: T) -> T {
    let l = T::lit;
    let (model, s) = match model {
        EntanglerModel::None => (EntanglerModel::Depolarizing, T::zero()),
        m => (m, strength),
    };
    let p = s;
    match (gate, model, scenario) {
        (Gate::Uz, EntanglerModel::Depolarizing, _) => eta * (p - l(1.0)) * alpha.cos().powi(2) / l(3.0),
        (Gate::Uz, _, Scenario::Perfect) => (eta * s - eta - s + eta * (s - l(1.0)) * (l(2.0) * alpha).cos()) / l(6.0),
        (Gate::Uz, _, Scenario::Imperfect) => (s + eta * (s - l(2.0))) * alpha.cos().powi(2) / l(6.0),
        (Gate::Cx, EntanglerModel::Depolarizing, _) => {
            let k = l(4.0) * eta * (eta - l(2.0));
            (p - l(1.0)).powi(2) * (k + p * (l(1.0) - k)) / l(20.0)
        }
        (Gate::Cx, _, Scenario::Perfect) => {
            (s * (s * (l(6.0) - s) - l(2.0))
                - l(2.0) * eta * (l(2.0) - s * (l(6.0) - s * (l(7.0) - l(2.0) * s)))
                - l(2.0) * eta * eta * (s - l(1.0)).powi(3))
                / l(10.0)
        }
        (Gate::Cx, _, Scenario::Imperfect) => {
            (l(2.0) * s * (l(5.0) + s * (l(7.0) * s - l(9.0))) - eta * (l(9.0) * s.powi(3) - l(14.0) * s + l(8.0))
                + l(2.0) * eta * eta * (s - l(1.0)) * (l(3.0) * s - l(2.0)))
                / l(20.0)
        }
    }
}

/// Coefficients `(a₀, a₁)` of the cavity infidelity formula.
pub fn cavity_coefficients<T: Real>(eta: T, gamma: T) -> (T, T) {
    let l = T::lit;
    let g2 = gamma * gamma;
    let a0 = l(4.0) * (l(2.0) + l(6.0) * g2.exp() - (g2 / l(2.0)).exp() * (eta - l(4.0)) - eta);
    let a1 = l(4.0) * (g2 / l(2.0)).exp() * (eta - l(4.0)) + l(4.0) * (eta - l(2.0)) - g2.exp() * (l(5.0) + eta);
    (a0, a1)
}

/// Literal cavity formula `G = e^{−γ²}(a₀ + a₁s)/48`.
///
/// At zero noise this evaluates to 1, not 0; callers report it beside the
/// simulated value rather than substituting one for the other.
pub fn eval_cavity_formula<T: Real>(eta: T, s: T, gamma: T) -> T {
    let (a0, a1) = cavity_coefficients(eta, gamma);
    (-(gamma * gamma)).exp() * (a0 + a1 * s) / T::lit(48.0)
}

/// Mean diamond distance over sampled pulse-offset realisations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystematicDiamond<T> {
    pub mean: T,
    pub std_error: T,
    pub samples: usize,
    pub max_gap: T,
}

/// Averages `D(ideal, realise(δ))` over `δ ~ N(0, γ²·I)` with `offsets`
/// components per draw, reading each draw as a fixed systematic error.
pub fn systematic_diamond<T: Real>(
    mut realise: impl FnMut(&[T]) -> Result<LogicalChannel<T>>,
    offsets: usize,
    gamma: T,
    samples: usize,
    seed: u64,
    tol: f64,
) -> Result<SystematicDiamond<T>> {
    if samples < 2 {
        return Err(Error::Invalid("systematic average needs at least two samples".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut sum, mut sum_sq, mut max_gap) = (T::zero(), T::zero(), T::zero());
    let mut draw = vec![T::zero(); offsets];
    for _ in 0..samples {
        for x in &mut draw {
            let z: f64 = StandardNormal.sample(&mut rng);
            *x = gamma * T::lit(z);
        }
        let ch = realise(&draw)?;
        let (d, gap) = diamond_only(&ch.ideal, &ch.noisy, tol)?;
        sum = sum + d;
        sum_sq = sum_sq + d * d;
        max_gap = max_gap.max(gap);
    }
    let n = T::from_usize(samples).expect("count");
    let mean = sum / n;
    let var = ((sum_sq - n * mean * mean) / (n - T::one())).max(T::zero());
    Ok(SystematicDiamond { mean, std_error: (var / n).sqrt(), samples, max_gap })
}
