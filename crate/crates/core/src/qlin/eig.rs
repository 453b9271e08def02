//! Hermitian eigendecomposition by cyclic complex Jacobi rotations.

use num_complex::Complex;

use super::matrix::{tol, ComplexMatrix};
use crate::error::{Error, Result};
use crate::scalar::{cr, Real};

const MAX_SWEEPS: usize = 100;

/// Input Hermiticity tolerance.
pub const HERMITIAN_TOL: f64 = 1e-10;

/// Eigenvalues in ascending order with the matching unitary eigenvector
/// matrix (eigenvectors in columns).
#[derive(Debug, Clone)]
pub struct HermitianEig<T> {
    pub values: Vec<T>,
    pub vectors: ComplexMatrix<T>,
}

impl<T: Real> HermitianEig<T> {
    /// `V · diag(λ) · V†`.
    pub fn reconstruct(&self) -> ComplexMatrix<T> {
        let n = self.values.len();
        let scaled = ComplexMatrix::from_fn(n, n, |i, j| self.vectors[(i, j)] * self.values[j]);
        &scaled * &self.vectors.dagger()
    }

    pub fn min(&self) -> T {
        self.values.first().copied().unwrap_or_else(T::zero)
    }

    pub fn max(&self) -> T {
        self.values.last().copied().unwrap_or_else(T::zero)
    }
}

pub fn hermitian_eig<T: Real>(m: &ComplexMatrix<T>) -> Result<HermitianEig<T>> {
    let n = m.side()?;
    let herr = m.hermiticity_error();
    let scale = T::one().max(m.max_abs());
    if herr > tol::<T>(HERMITIAN_TOL) * scale {
        return Err(Error::NotHermitian(herr.as_f64()));
    }
    // Symmetrize so that rounding in the input cannot break the iteration.
    let mut a = ComplexMatrix::from_fn(n, n, |i, j| (m[(i, j)] + m[(j, i)].conj()) * T::lit(0.5));
    let mut v = ComplexMatrix::identity(n);

    let off = |a: &ComplexMatrix<T>| {
        let mut s = T::zero();
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s = s + a[(i, j)].norm_sqr();
                }
            }
        }
        s
    };
    let total = a.frobenius_norm();
    let threshold = (T::epsilon() * total).powi(2);

    let mut sweeps = 0;
    while off(&a) > threshold {
        if sweeps == MAX_SWEEPS {
            return Err(Error::EigenNotConverged(MAX_SWEEPS));
        }
        sweeps += 1;
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<T> = (0..n).map(|i| a[(i, i)].re).collect();
    order.sort_by(|&i, &j| diag[i].partial_cmp(&diag[j]).unwrap_or(std::cmp::Ordering::Equal));
    let values = order.iter().map(|&i| diag[i]).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |i, j| v[(i, order[j])]);
    Ok(HermitianEig { values, vectors })
}

/// One rotation `A ← J† A J`, `V ← V J` annihilating `A[p][q]`.
fn rotate<T: Real>(a: &mut ComplexMatrix<T>, v: &mut ComplexMatrix<T>, p: usize, q: usize) {
    let g = a[(p, q)];
    let r = g.norm();
    if r == T::zero() {
        return;
    }
    let phase = g / r;
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let theta = (aqq - app) / (T::lit(2.0) * r);
    let t = theta.signum() / (theta.abs() + (theta * theta + T::one()).sqrt());
    let t = if theta == T::zero() { T::one() } else { t };
    let cs = T::one() / (t * t + T::one()).sqrt();
    let sn = t * cs;
    let n = a.rows();

    // J = [[c, s·e], [−s·ē, c]] on the (p, q) plane.
    let jpq: Complex<T> = phase * sn;
    let jqp: Complex<T> = -(phase.conj() * sn);
    let c = cr(cs);

    // A ← A J (columns p, q).
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * c + akq * jqp;
        a[(k, q)] = akp * jpq + akq * c;
    }
    // A ← J† A (rows p, q).
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = c * apk + jqp.conj() * aqk;
        a[(q, k)] = jpq.conj() * apk + c * aqk;
    }
    a[(p, q)] = cr(T::zero());
    a[(q, p)] = cr(T::zero());
    a[(p, p)] = cr(a[(p, p)].re);
    a[(q, q)] = cr(a[(q, q)].re);
    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * c + vkq * jqp;
        v[(k, q)] = vkp * jpq + vkq * c;
    }
}

/// Sum of singular values.
///
/// Hermitian input uses `Σ|λ|` directly; anything else goes through the
/// Hermitian dilation `[[0, M], [M†, 0]]`, whose spectrum is `±σ`.
pub fn trace_norm<T: Real>(m: &ComplexMatrix<T>) -> Result<T> {
    let n = m.side()?;
    let scale = T::one().max(m.max_abs());
    if m.hermiticity_error() <= tol::<T>(1e-13) * scale {
        let eig = hermitian_eig(m)?;
        return Ok(eig.values.iter().map(|x| x.abs()).sum());
    }
    let dil = ComplexMatrix::from_fn(2 * n, 2 * n, |i, j| match (i < n, j < n) {
        (true, false) => m[(i, j - n)],
        (false, true) => m[(j, i - n)].conj(),
        _ => cr(T::zero()),
    });
    let eig = hermitian_eig(&dil)?;
    Ok(eig.values.iter().map(|x| x.abs()).sum::<T>() * T::lit(0.5))
}
