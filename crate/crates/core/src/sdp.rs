//! Dense primal-dual interior-point solver for the diamond-norm SDP.
//!
//! For a Hermiticity-preserving map with Choi matrix `J` (output factor
//! first) the solver computes
//!
//! ```text
//! λ = max ⟨J, W⟩   s.t.  0 ⪯ W ⪯ I_B ⊗ ρ,  ρ ⪰ 0,  tr ρ = 1
//!   = min λmax(Tr_B Z)   s.t.  Z ⪰ J,  Z ⪰ 0
//! ```
//!
//! which equals half the diamond norm. Internally `(t, Z)` is the variable
//! of a standard-form LMI `C − Σ yᵢAᵢ ⪰ 0` with three blocks
//! `(Z, Z − J, t·I − Tr_B Z)`, every complex Hermitian block embedded as a
//! real symmetric matrix of twice the side. The primal multipliers of the
//! three blocks are `I_B⊗ρ − W`, `W` and `ρ` (each halved by the embedding).

use crate::error::{Error, IterationResidual, Result};
use crate::qlin::{hermitian_eig, partial_trace, ChoiMatrix, ComplexMatrix, DensityMatrix, RealMatrix, HERMITIAN_TOL};
use crate::scalar::{cr, Real};
use num_complex::Complex;

pub const DEFAULT_TOL: f64 = 1e-8;
pub const MAX_ITERATIONS: usize = 200;
const STEP_FRACTION: f64 = 0.98;

#[derive(Debug, Clone)]
pub struct SdpProblem<T> {
    objective: ChoiMatrix<T>,
}

impl<T: Real> SdpProblem<T> {
    pub fn new(objective: ChoiMatrix<T>) -> Result<Self> {
        let m = objective.matrix();
        let err = m.hermiticity_error();
        if err > T::lit(HERMITIAN_TOL) * T::one().max(m.max_abs()) {
            return Err(Error::NotHermitian(err.as_f64()));
        }
        Ok(Self { objective })
    }

    pub fn objective(&self) -> &ChoiMatrix<T> {
        &self.objective
    }

    pub fn dim_a(&self) -> usize {
        self.objective.dim_a()
    }

    pub fn dim_b(&self) -> usize {
        self.objective.dim_b()
    }
}

#[derive(Debug, Clone)]
pub struct SdpSolution<T> {
    /// `⟨J, W⟩` at the returned primal certificate.
    pub primal_value: T,
    /// `λmax(Tr_B Z)` at the returned dual certificate.
    pub dual_value: T,
    pub w: ComplexMatrix<T>,
    pub rho: DensityMatrix<T>,
    pub z_cert: ComplexMatrix<T>,
    pub gap: T,
    pub iterations: usize,
    pub history: Vec<IterationResidual>,
}

/// `[[Re, −Im], [Im, Re]]` embedding of a Hermitian matrix.
pub fn embed_real<T: Real>(h: &ComplexMatrix<T>) -> Result<RealMatrix<T>> {
    let n = h.side()?;
    let err = h.hermiticity_error();
    if err > T::lit(HERMITIAN_TOL) * T::one().max(h.max_abs()) {
        return Err(Error::NotHermitian(err.as_f64()));
    }
    Ok(embed_unchecked(h, n))
}

fn embed_unchecked<T: Real>(h: &ComplexMatrix<T>, n: usize) -> RealMatrix<T> {
    RealMatrix::from_fn(2 * n, 2 * n, |p, q| {
        let z = h[(p % n, q % n)];
        match (p < n, q < n) {
            (true, true) | (false, false) => z.re,
            (true, false) => -z.im,
            (false, true) => z.im,
        }
    })
}

/// Inverse of [`embed_real`], averaging the redundant blocks.
pub fn extract_complex<T: Real>(r: &RealMatrix<T>) -> Result<ComplexMatrix<T>> {
    if r.rows() != r.cols() || !r.rows().is_multiple_of(2) {
        return Err(Error::Dimension(format!("{}x{} is not an embedded Hermitian matrix", r.rows(), r.cols())));
    }
    let n = r.rows() / 2;
    let half = T::lit(0.5);
    Ok(ComplexMatrix::from_fn(n, n, |i, j| {
        Complex::new((r[(i, j)] + r[(i + n, j + n)]) * half, (r[(i + n, j)] - r[(i, j + n)]) * half)
    }))
}

/// Sparse symmetric constraint matrix, split per block as `(row, col, value)`.
type Sparse<T> = [Vec<(usize, usize, T)>; 3];

type Blocks<T> = [RealMatrix<T>; 3];

struct Lmi<T> {
    sizes: [usize; 3],
    c: Blocks<T>,
    a: Vec<Sparse<T>>,
    b: Vec<T>,
}

/// Orthonormal Hermitian basis of `n × n` matrices as sparse complex entries.
fn hermitian_basis<T: Real>(n: usize) -> Vec<Vec<(usize, usize, Complex<T>)>> {
    let r = T::FRAC_1_SQRT_2();
    let mut basis = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in i..n {
            if i == j {
                basis.push(vec![(i, i, cr(T::one()))]);
            } else {
                basis.push(vec![(i, j, cr(r)), (j, i, cr(r))]);
                basis.push(vec![(i, j, Complex::new(T::zero(), -r)), (j, i, Complex::new(T::zero(), r))]);
            }
        }
    }
    basis
}

fn embed_sparse<T: Real>(entries: &[(usize, usize, Complex<T>)], n: usize, sign: T) -> Vec<(usize, usize, T)> {
    let mut out = Vec::with_capacity(4 * entries.len());
    for &(i, j, z) in entries {
        if z.re != T::zero() {
            out.push((i, j, sign * z.re));
            out.push((i + n, j + n, sign * z.re));
        }
        if z.im != T::zero() {
            out.push((i, j + n, -sign * z.im));
            out.push((i + n, j, sign * z.im));
        }
    }
    out
}

impl<T: Real> Lmi<T> {
    fn diamond(j: &ComplexMatrix<T>, da: usize, db: usize) -> Self {
        let n = da * db;
        let sizes = [2 * n, 2 * n, 2 * da];
        let c = [RealMatrix::zeros(2 * n, 2 * n), embed_unchecked(j, n).scale(-T::one()), RealMatrix::zeros(2 * da, 2 * da)];
        let mut a = Vec::with_capacity(1 + n * n);
        let mut b = Vec::with_capacity(1 + n * n);
        a.push([Vec::new(), Vec::new(), (0..2 * da).map(|i| (i, i, -T::one())).collect()]);
        b.push(-T::one());
        for e in hermitian_basis::<T>(n) {
            // Tr_B keeps entries whose output indices agree.
            let mut reduced: Vec<(usize, usize, Complex<T>)> = Vec::new();
            for &(p, q, z) in &e {
                if p / da == q / da {
                    let key = (p % da, q % da);
                    match reduced.iter_mut().find(|(r, s, _)| (*r, *s) == key) {
                        Some(entry) => entry.2 = entry.2 + z,
                        None => reduced.push((key.0, key.1, z)),
                    }
                }
            }
            a.push([embed_sparse(&e, n, -T::one()), embed_sparse(&e, n, -T::one()), embed_sparse(&reduced, da, T::one())]);
            b.push(T::zero());
        }
        Self { sizes, c, a, b }
    }

    fn m(&self) -> usize {
        self.a.len()
    }

    /// `(⟨Aᵢ, Y⟩)ᵢ`, with `Y` not necessarily symmetric.
    fn apply(&self, y: &Blocks<T>) -> Vec<T> {
        self.a
            .iter()
            .map(|ai| {
                let mut s = T::zero();
                for (k, entries) in ai.iter().enumerate() {
                    for &(p, q, v) in entries {
                        s = s + v * y[k][(q, p)];
                    }
                }
                s
            })
            .collect()
    }

    /// `Σ yᵢ Aᵢ`.
    fn adjoint(&self, y: &[T]) -> Blocks<T> {
        let mut out = self.sizes.map(|n| RealMatrix::zeros(n, n));
        for (ai, &yi) in self.a.iter().zip(y) {
            for (k, entries) in ai.iter().enumerate() {
                for &(p, q, v) in entries {
                    out[k][(p, q)] = out[k][(p, q)] + yi * v;
                }
            }
        }
        out
    }

    /// HKM Schur complement `Mᵢⱼ = tr(Aᵢ X Aⱼ S⁻¹)`.
    fn schur(&self, x: &Blocks<T>, sinv: &Blocks<T>) -> RealMatrix<T> {
        let m = self.m();
        let mut out = RealMatrix::zeros(m, m);
        for i in 0..m {
            for j in i..m {
                let mut s = T::zero();
                for k in 0..3 {
                    for &(p, q, a) in &self.a[i][k] {
                        for &(r, t, b) in &self.a[j][k] {
                            s = s + a * b * x[k][(q, r)] * sinv[k][(t, p)];
                        }
                    }
                }
                out[(i, j)] = s;
                out[(j, i)] = s;
            }
        }
        out
    }
}

fn map_blocks<T: Real>(a: &Blocks<T>, b: &Blocks<T>, f: impl Fn(&RealMatrix<T>, &RealMatrix<T>) -> RealMatrix<T>) -> Blocks<T> {
    [f(&a[0], &b[0]), f(&a[1], &b[1]), f(&a[2], &b[2])]
}

fn inner<T: Real>(a: &Blocks<T>, b: &Blocks<T>) -> T {
    a.iter().zip(b).map(|(x, y)| x.dot(y)).sum()
}

fn max_abs<T: Real>(a: &Blocks<T>) -> T {
    a.iter().map(RealMatrix::max_abs).fold(T::zero(), T::max)
}

/// Largest `α ≤ 1` with `X + α·dX ⪰ 0`, shrunk by the boundary fraction.
fn step_length<T: Real>(x: &Blocks<T>, dx: &Blocks<T>) -> Result<T> {
    let mut alpha = T::infinity();
    for (xk, dk) in x.iter().zip(dx) {
        let linv = xk.cholesky()?.lower_inverse();
        let lam = linv.matmul(dk).matmul(&linv.transpose()).min_eigenvalue()?;
        if lam < T::zero() {
            alpha = alpha.min(-T::one() / lam);
        }
    }
    Ok(T::one().min(T::lit(STEP_FRACTION) * alpha))
}

struct Direction<T> {
    dx: Blocks<T>,
    dy: Vec<T>,
    ds: Blocks<T>,
}

struct State<'a, T> {
    lmi: &'a Lmi<T>,
    x: &'a Blocks<T>,
    sinv: &'a Blocks<T>,
    chol: &'a RealMatrix<T>,
    rp: &'a [T],
    rd: &'a Blocks<T>,
}

impl<T: Real> State<'_, T> {
    /// Solves the Newton system with complementarity target `σμ·I − corr`.
    fn direction(&self, sigma_mu: T, corr: Option<&Blocks<T>>) -> Direction<T> {
        let lmi = self.lmi;
        // target·S⁻¹ − X, where target = σμI − corr.
        let mut rs: Blocks<T> = self.sinv.clone().map(|s| s.scale(sigma_mu));
        if let Some(cm) = corr {
            rs = map_blocks(&rs, &map_blocks(cm, self.sinv, |a, b| a.matmul(b)), |a, b| a.sub(b));
        }
        let rs = map_blocks(&rs, self.x, |a, b| a.sub(b));
        let x_rd_sinv = map_blocks(&map_blocks(self.x, self.rd, |a, b| a.matmul(b)), self.sinv, |a, b| a.matmul(b));
        let a_rs = lmi.apply(&rs);
        let a_xrs = lmi.apply(&x_rd_sinv);
        let rhs: Vec<T> = (0..lmi.m()).map(|i| self.rp[i] - a_rs[i] + a_xrs[i]).collect();
        let dy = crate::qlin::cholesky_solve(self.chol, &rhs);
        let ds = map_blocks(self.rd, &lmi.adjoint(&dy), |a, b| a.sub(b));
        let x_ds_sinv = map_blocks(&map_blocks(self.x, &ds, |a, b| a.matmul(b)), self.sinv, |a, b| a.matmul(b));
        let dx = map_blocks(&rs, &x_ds_sinv, |a, b| a.sub(b).symmetrized());
        Direction { dx, dy, ds }
    }
}

fn not_converged(iterations: usize, history: Vec<IterationResidual>) -> Error {
    let last_gap = history.last().map_or(f64::NAN, |h| h.gap);
    Error::NotConverged { iterations, last_gap, history }
}

/// Solves the diamond-norm SDP for `problem` to absolute gap `tol`.
pub fn solve_diamond<T: Real>(problem: &SdpProblem<T>, tol: T) -> Result<SdpSolution<T>> {
    if tol.is_nan() || tol <= T::zero() {
        return Err(Error::Invalid("tolerance must be positive".into()));
    }
    let (da, db) = (problem.dim_a(), problem.dim_b());
    let n = da * db;
    let j = problem.objective().matrix();
    let lmi = Lmi::diamond(j, da, db);
    let basis = hermitian_basis::<T>(n);

    // Strictly feasible start: W = εI, ρ = I/d_A, Z = J + ε'I.
    let eps = T::one() / T::from_usize(2 * da).expect("small");
    let rho0 = T::one() / T::from_usize(da).expect("small");
    let half = T::lit(0.5);
    let mut x: Blocks<T> = [
        RealMatrix::identity(2 * n).scale((rho0 - eps) * half),
        RealMatrix::identity(2 * n).scale(eps * half),
        RealMatrix::identity(2 * da).scale(rho0 * half),
    ];
    let shift = T::one() + j.frobenius_norm();
    let reduced_j = partial_trace(j, &[db, da], &[1])?;
    let mut y = Vec::with_capacity(lmi.m());
    // λmax(Tr_B Z) ≤ ‖Tr_B J‖_F + d_B·ε', so t starts strictly above it.
    y.push(T::one() + reduced_j.frobenius_norm() + shift * T::from_usize(db).expect("small"));
    for e in &basis {
        let mut coef = T::zero();
        for &(p, q, v) in e {
            let zpq = if p == q { j[(q, p)] + cr(shift) } else { j[(q, p)] };
            coef = coef + (v * zpq).re;
        }
        y.push(coef);
    }
    let mut s = map_blocks(&lmi.c, &lmi.adjoint(&y), |a, b| a.sub(b));

    let ntot = T::from_usize(lmi.sizes.iter().sum()).expect("small");
    let b_scale = T::one() + lmi.b.iter().map(|v| v.abs()).fold(T::zero(), T::max);
    let c_scale = T::one() + max_abs(&lmi.c);
    let mut history = Vec::new();
    let mut converged = false;
    for iter in 0..=MAX_ITERATIONS {
        let ax = lmi.apply(&x);
        let rp: Vec<T> = lmi.b.iter().zip(&ax).map(|(b, a)| *b - *a).collect();
        let rd = map_blocks(&map_blocks(&lmi.c, &lmi.adjoint(&y), |a, b| a.sub(b)), &s, |a, b| a.sub(b));
        let pobj = -inner(&lmi.c, &x);
        let dobj = y[0];
        let mu = inner(&x, &s) / ntot;
        let pinf = rp.iter().map(|v| v.abs()).fold(T::zero(), T::max) / b_scale;
        let dinf = max_abs(&rd) / c_scale;
        let gap = (pobj - dobj).abs();
        history.push(IterationResidual {
            iteration: iter,
            primal_infeasibility: pinf.as_f64(),
            dual_infeasibility: dinf.as_f64(),
            gap: gap.as_f64(),
            mu: mu.as_f64(),
        });
        if gap < tol && pinf < tol && dinf < tol && mu * ntot < tol {
            converged = true;
            break;
        }
        if iter == MAX_ITERATIONS {
            break;
        }

        let step = || -> Result<(Direction<T>, T, T)> {
            let sinv = [s[0].spd_inverse()?, s[1].spd_inverse()?, s[2].spd_inverse()?];
            let chol = lmi.schur(&x, &sinv).cholesky()?;
            let st = State { lmi: &lmi, x: &x, sinv: &sinv, chol: &chol, rp: &rp, rd: &rd };
            let pred = st.direction(T::zero(), None);
            let ap = step_length(&x, &pred.dx)?;
            let ad = step_length(&s, &pred.ds)?;
            let xa = map_blocks(&x, &pred.dx, |a, b| a.axpy(ap, b));
            let sa = map_blocks(&s, &pred.ds, |a, b| a.axpy(ad, b));
            let mu_aff = inner(&xa, &sa) / ntot;
            let sigma = (mu_aff / mu).max(T::zero()).min(T::one()).powi(3);
            let corr = map_blocks(&pred.dx, &pred.ds, |a, b| a.matmul(b));
            let dir = st.direction(sigma * mu, Some(&corr));
            let ap = step_length(&x, &dir.dx)?;
            let ad = step_length(&s, &dir.ds)?;
            Ok((dir, ap, ad))
        };
        let (dir, ap, ad) = step().map_err(|_| not_converged(iter, history.clone()))?;
        x = map_blocks(&x, &dir.dx, |a, b| a.axpy(ap, b));
        s = map_blocks(&s, &dir.ds, |a, b| a.axpy(ad, b));
        for (yi, di) in y.iter_mut().zip(&dir.dy) {
            *yi = *yi + ad * *di;
        }
    }
    if !converged {
        return Err(not_converged(MAX_ITERATIONS, history));
    }
    certificates(j, da, db, &basis, &x, &y, history)
}

fn hermitize<T: Real>(m: &ComplexMatrix<T>) -> ComplexMatrix<T> {
    ComplexMatrix::from_fn(m.rows(), m.cols(), |i, j| (m[(i, j)] + m[(j, i)].conj()) * T::lit(0.5))
}

/// Reads `W`, `ρ` and `Z` off the final iterate and repairs the rounding
/// residue so that each certificate is feasible on its own.
fn certificates<T: Real>(
    j: &ComplexMatrix<T>,
    da: usize,
    db: usize,
    basis: &[Vec<(usize, usize, Complex<T>)>],
    x: &Blocks<T>,
    y: &[T],
    history: Vec<IterationResidual>,
) -> Result<SdpSolution<T>> {
    let n = da * db;
    let two = T::lit(2.0);
    let rho = hermitize(&extract_complex(&x[2])?.scale_real(two));
    let w = hermitize(&extract_complex(&x[1])?.scale_real(two));
    let tr = rho.trace().re;
    let rho = rho.scale_real(T::one() / tr);
    let w = w.scale_real(T::one() / tr);

    let mut z = ComplexMatrix::zeros(n, n);
    for (e, &coef) in basis.iter().zip(&y[1..]) {
        for &(p, q, v) in e {
            z[(p, q)] = z[(p, q)] + v * coef;
        }
    }
    let z = hermitize(&z);
    let deficit = T::zero().max(-hermitian_eig(&(&z - j))?.min()).max(-hermitian_eig(&z)?.min());
    let z_cert = &z + &ComplexMatrix::identity(n).scale_real(deficit);
    let reduced = partial_trace(&z_cert, &[db, da], &[1])?;
    let dual_value = hermitian_eig(&reduced)?.max();
    let primal_value = j.hs_inner(&w).re;
    let iterations = history.len() - 1;
    Ok(SdpSolution {
        primal_value,
        dual_value,
        w,
        rho: DensityMatrix::new(rho)?,
        z_cert,
        gap: (dual_value - primal_value).abs(),
        iterations,
        history,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::{pauli, Axis};
    use crate::qlin::Superoperator;

    type M = ComplexMatrix<f64>;

    #[test]
    fn embedding_round_trip_and_spectrum() {
        let y = pauli::<f64>(Axis::Y);
        let e = embed_real(&y).unwrap();
        let vals = e.symmetric_eigenvalues().unwrap();
        for (got, want) in vals.iter().zip([-1.0, -1.0, 1.0, 1.0]) {
            assert!((got - want).abs() < 1e-14);
        }
        assert_eq!(embed_real(&M::identity(2)).unwrap(), RealMatrix::identity(4));
        let h = M::from_rows(&[&[(0.3, 0.0), (0.1, -0.7)], &[(0.1, 0.7), (-1.2, 0.0)]]).unwrap();
        assert!(extract_complex(&embed_real(&h).unwrap()).unwrap().approx_eq(&h, 1e-14));
        assert!(embed_real(&M::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]).unwrap()).is_err());
    }

    #[test]
    fn zero_objective() {
        let p = SdpProblem::new(ChoiMatrix::new(2, 2, M::zeros(4, 4)).unwrap()).unwrap();
        let sol = solve_diamond(&p, 1e-8).unwrap();
        assert!(sol.primal_value.abs() < 1e-8 && sol.dual_value.abs() < 1e-8);
    }

    #[test]
    fn orthogonal_unitaries() {
        let diff = Superoperator::identity(2).sub(&Superoperator::from_unitary(&pauli(Axis::X))).unwrap();
        let p = SdpProblem::new(diff.choi()).unwrap();
        let sol: SdpSolution<f64> = solve_diamond(&p, 1e-8).unwrap();
        assert!((sol.dual_value - 1.0).abs() < 1e-7, "{}", sol.dual_value);
        assert!(sol.gap < 1e-7);
    }

    #[test]
    fn deterministic_iterations() {
        let diff = Superoperator::identity(2).sub(&Superoperator::from_unitary(&pauli(Axis::Z))).unwrap();
        let p = SdpProblem::new(diff.choi()).unwrap();
        let a: SdpSolution<f64> = solve_diamond(&p, 1e-8).unwrap();
        let b: SdpSolution<f64> = solve_diamond(&p, 1e-8).unwrap();
        assert_eq!(a.iterations, b.iterations);
        assert_eq!(a.dual_value.to_bits(), b.dual_value.to_bits());
    }

    #[test]
    fn rejects_non_hermitian_objective() {
        let m = M::from_real_rows(&[&[0.0, 1.0, 0.0, 0.0], &[0.0; 4], &[0.0; 4], &[0.0; 4]]).unwrap();
        assert!(matches!(SdpProblem::new(ChoiMatrix::new(2, 2, m).unwrap()), Err(Error::NotHermitian(_))));
        let p = SdpProblem::new(ChoiMatrix::new(2, 2, M::zeros(4, 4)).unwrap()).unwrap();
        assert!(solve_diamond(&p, 0.0).is_err());
    }
}
