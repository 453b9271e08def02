//! Dense real matrices for the SDP's real symmetric embedding.

use std::ops::{Index, IndexMut};

use crate::error::{Error, Result};
use crate::scalar::Real;

#[derive(Debug, Clone, PartialEq)]
pub struct RealMatrix<T> {
    n: usize,
    m: usize,
    data: Vec<T>,
}

impl<T: Real> RealMatrix<T> {
    pub fn zeros(n: usize, m: usize) -> Self {
        Self { n, m, data: vec![T::zero(); n * m] }
    }

    pub fn identity(n: usize) -> Self {
        let mut a = Self::zeros(n, n);
        for i in 0..n {
            a[(i, i)] = T::one();
        }
        a
    }

    pub fn from_fn(n: usize, m: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(n * m);
        for i in 0..n {
            for j in 0..m {
                data.push(f(i, j));
            }
        }
        Self { n, m, data }
    }

    pub fn rows(&self) -> usize {
        self.n
    }

    pub fn cols(&self) -> usize {
        self.m
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.m, self.n, |i, j| self[(j, i)])
    }

    pub fn symmetrized(&self) -> Self {
        Self::from_fn(self.n, self.n, |i, j| (self[(i, j)] + self[(j, i)]) * T::lit(0.5))
    }

    pub fn scale(&self, k: T) -> Self {
        Self { n: self.n, m: self.m, data: self.data.iter().map(|&x| x * k).collect() }
    }

    pub fn add(&self, other: &Self) -> Self {
        debug_assert_eq!((self.n, self.m), (other.n, other.m));
        Self { n: self.n, m: self.m, data: self.data.iter().zip(&other.data).map(|(a, b)| *a + *b).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        debug_assert_eq!((self.n, self.m), (other.n, other.m));
        Self { n: self.n, m: self.m, data: self.data.iter().zip(&other.data).map(|(a, b)| *a - *b).collect() }
    }

    /// `self + k·other`.
    pub fn axpy(&self, k: T, other: &Self) -> Self {
        Self {
            n: self.n,
            m: self.m,
            data: self.data.iter().zip(&other.data).map(|(a, b)| *a + k * *b).collect(),
        }
    }

    pub fn matmul(&self, other: &Self) -> Self {
        debug_assert_eq!(self.m, other.n);
        let (n, k, m) = (self.n, self.m, other.m);
        let mut out = Self::zeros(n, m);
        for i in 0..n {
            for l in 0..k {
                let a = self.data[i * k + l];
                if a == T::zero() {
                    continue;
                }
                let src = &other.data[l * m..(l + 1) * m];
                let dst = &mut out.data[i * m..(i + 1) * m];
                for (d, &b) in dst.iter_mut().zip(src) {
                    *d = *d + a * b;
                }
            }
        }
        out
    }

    /// Frobenius inner product.
    pub fn dot(&self, other: &Self) -> T {
        self.data.iter().zip(&other.data).map(|(a, b)| *a * *b).sum()
    }

    pub fn norm(&self) -> T {
        self.dot(self).sqrt()
    }

    pub fn trace(&self) -> T {
        (0..self.n.min(self.m)).map(|i| self[(i, i)]).sum()
    }

    pub fn max_abs(&self) -> T {
        self.data.iter().map(|x| x.abs()).fold(T::zero(), T::max)
    }

    /// Lower Cholesky factor `L` with `self = L Lᵀ`.
    pub fn cholesky(&self) -> Result<Self> {
        let n = self.n;
        let mut l = Self::zeros(n, n);
        for j in 0..n {
            let mut d = self[(j, j)];
            for k in 0..j {
                d = d - l[(j, k)] * l[(j, k)];
            }
            if d.is_nan() || d <= T::zero() {
                return Err(Error::NotPositiveDefinite);
            }
            let d = d.sqrt();
            l[(j, j)] = d;
            for i in (j + 1)..n {
                let mut s = self[(i, j)];
                for k in 0..j {
                    s = s - l[(i, k)] * l[(j, k)];
                }
                l[(i, j)] = s / d;
            }
        }
        Ok(l)
    }

    /// Inverse of a lower-triangular matrix.
    pub fn lower_inverse(&self) -> Self {
        let n = self.n;
        let mut inv = Self::zeros(n, n);
        for j in 0..n {
            inv[(j, j)] = T::one() / self[(j, j)];
            for i in (j + 1)..n {
                let mut s = T::zero();
                for k in j..i {
                    s = s + self[(i, k)] * inv[(k, j)];
                }
                inv[(i, j)] = -s / self[(i, i)];
            }
        }
        inv
    }

    /// Inverse of a symmetric positive definite matrix.
    pub fn spd_inverse(&self) -> Result<Self> {
        let linv = self.cholesky()?.lower_inverse();
        Ok(linv.transpose().matmul(&linv))
    }

    /// Solves `self · x = b` for symmetric positive definite `self`.
    pub fn spd_solve(&self, b: &[T]) -> Result<Vec<T>> {
        let l = self.cholesky()?;
        Ok(cholesky_solve(&l, b))
    }

    /// Eigenvalues of a symmetric matrix, ascending (cyclic Jacobi).
    pub fn symmetric_eigenvalues(&self) -> Result<Vec<T>> {
        let n = self.n;
        let mut a = self.symmetrized();
        let threshold = (T::epsilon() * a.norm()).powi(2);
        let off = |a: &Self| {
            let mut s = T::zero();
            for i in 0..n {
                for j in 0..n {
                    if i != j {
                        s = s + a[(i, j)] * a[(i, j)];
                    }
                }
            }
            s
        };
        let mut sweeps = 0;
        while off(&a) > threshold {
            if sweeps == 100 {
                return Err(Error::EigenNotConverged(100));
            }
            sweeps += 1;
            for p in 0..n {
                for q in (p + 1)..n {
                    let apq = a[(p, q)];
                    if apq == T::zero() {
                        continue;
                    }
                    let theta = (a[(q, q)] - a[(p, p)]) / (T::lit(2.0) * apq);
                    let t = if theta == T::zero() {
                        T::one()
                    } else {
                        theta.signum() / (theta.abs() + (theta * theta + T::one()).sqrt())
                    };
                    let c = T::one() / (t * t + T::one()).sqrt();
                    let s = t * c;
                    for k in 0..n {
                        let akp = a[(k, p)];
                        let akq = a[(k, q)];
                        a[(k, p)] = c * akp - s * akq;
                        a[(k, q)] = s * akp + c * akq;
                    }
                    for k in 0..n {
                        let apk = a[(p, k)];
                        let aqk = a[(q, k)];
                        a[(p, k)] = c * apk - s * aqk;
                        a[(q, k)] = s * apk + c * aqk;
                    }
                    a[(p, q)] = T::zero();
                    a[(q, p)] = T::zero();
                }
            }
        }
        let mut vals: Vec<T> = (0..n).map(|i| a[(i, i)]).collect();
        vals.sort_by(|x, y| x.partial_cmp(y).unwrap_or(std::cmp::Ordering::Equal));
        Ok(vals)
    }

    pub fn min_eigenvalue(&self) -> Result<T> {
        Ok(self.symmetric_eigenvalues()?.first().copied().unwrap_or_else(T::zero))
    }
}

/// Forward/back substitution with a lower Cholesky factor.
pub fn cholesky_solve<T: Real>(l: &RealMatrix<T>, b: &[T]) -> Vec<T> {
    let n = l.rows();
    let mut y = vec![T::zero(); n];
    for i in 0..n {
        let mut s = b[i];
        for k in 0..i {
            s = s - l[(i, k)] * y[k];
        }
        y[i] = s / l[(i, i)];
    }
    let mut x = vec![T::zero(); n];
    for i in (0..n).rev() {
        let mut s = y[i];
        for k in (i + 1)..n {
            s = s - l[(k, i)] * x[k];
        }
        x[i] = s / l[(i, i)];
    }
    x
}

impl<T> Index<(usize, usize)> for RealMatrix<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.m + j]
    }
}

impl<T> IndexMut<(usize, usize)> for RealMatrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.m + j]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cholesky_and_inverse() {
        let a = RealMatrix::from_fn(3, 3, |i, j| if i == j { 4.0 } else { 1.0 / (1.0 + (i + j) as f64) });
        let inv = a.spd_inverse().unwrap();
        let prod = a.matmul(&inv);
        assert!(prod.sub(&RealMatrix::identity(3)).max_abs() < 1e-14);
        let x = a.spd_solve(&[1.0, 2.0, 3.0]).unwrap();
        let back: Vec<f64> = (0..3).map(|i| (0..3).map(|j| a[(i, j)] * x[j]).sum()).collect();
        for (got, want) in back.iter().zip([1.0, 2.0, 3.0]) {
            assert!((got - want).abs() < 1e-14);
        }
        assert!(RealMatrix::from_fn(2, 2, |i, j| if i == j { -1.0 } else { 0.0 }).cholesky().is_err());
    }

    #[test]
    fn jacobi_eigenvalues() {
        let a = RealMatrix::from_fn(2, 2, |i, j| if i == j { 2.0 } else { 1.0 });
        let e: Vec<f64> = a.symmetric_eigenvalues().unwrap();
        assert!((e[0] - 1.0).abs() < 1e-14 && (e[1] - 3.0).abs() < 1e-14);
    }
}
