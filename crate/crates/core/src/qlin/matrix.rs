use std::fmt;
use std::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::{cr, Real};

/// Default entrywise tolerance for matrix equality.
pub const EQ_TOL: f64 = 1e-12;

/// Tolerance floor for types coarser than `f64`.
pub(crate) fn tol<T: Real>(x: f64) -> T {
    let floor = 100.0 * T::epsilon().as_f64();
    T::lit(x.max(floor))
}

/// Dense complex matrix, row-major.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<Complex<T>>,
}

impl<T: Real> ComplexMatrix<T> {
    pub fn new(rows: usize, cols: usize, data: Vec<Complex<T>>) -> Result<Self> {
        if rows * cols != data.len() {
            return Err(Error::Dimension(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![Complex::new(T::zero(), T::zero()); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = cr(T::one());
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex<T>) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Builds a matrix from nested rows of `f64` pairs `(re, im)`.
    pub fn from_rows(rows: &[&[(f64, f64)]]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            if row.len() != c {
                return Err(Error::Dimension("ragged rows".into()));
            }
            data.extend(row.iter().map(|&(re, im)| Complex::new(T::lit(re), T::lit(im))));
        }
        Self::new(r, c, data)
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let pairs: Vec<Vec<(f64, f64)>> = rows.iter().map(|r| r.iter().map(|&x| (x, 0.0)).collect()).collect();
        let refs: Vec<&[(f64, f64)]> = pairs.iter().map(|r| r.as_slice()).collect();
        Self::from_rows(&refs)
    }

    pub fn diag(entries: &[Complex<T>]) -> Self {
        let n = entries.len();
        let mut m = Self::zeros(n, n);
        for (i, &e) in entries.iter().enumerate() {
            m[(i, i)] = e;
        }
        m
    }

    /// `|v⟩⟨w|`.
    pub fn outer(v: &[Complex<T>], w: &[Complex<T>]) -> Self {
        Self::from_fn(v.len(), w.len(), |i, j| v[i] * w[j].conj())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Side length of a square matrix, or an error.
    pub fn side(&self) -> Result<usize> {
        if self.is_square() {
            Ok(self.rows)
        } else {
            Err(Error::NotSquare { rows: self.rows, cols: self.cols })
        }
    }

    pub fn entries(&self) -> &[Complex<T>] {
        &self.data
    }

    pub fn dagger(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn conj(&self) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|z| z.conj()).collect() }
    }

    pub fn scale(&self, k: Complex<T>) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|&z| z * k).collect() }
    }

    pub fn scale_real(&self, k: T) -> Self {
        self.scale(cr(k))
    }

    pub fn trace(&self) -> Complex<T> {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).fold(cr(T::zero()), |a, b| a + b)
    }

    pub fn frobenius_norm(&self) -> T {
        self.data.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt()
    }

    pub fn max_abs(&self) -> T {
        self.data.iter().map(|z| z.norm()).fold(T::zero(), T::max)
    }

    /// Largest entrywise modulus of `self - other`; infinite on shape mismatch.
    pub fn max_abs_diff(&self, other: &Self) -> T {
        if self.rows != other.rows || self.cols != other.cols {
            return T::infinity();
        }
        self.data.iter().zip(&other.data).map(|(a, b)| (*a - *b).norm()).fold(T::zero(), T::max)
    }

    pub fn approx_eq(&self, other: &Self, tol: T) -> bool {
        self.max_abs_diff(other) <= tol
    }

    /// Entrywise comparison at the default tolerance.
    pub fn approx_eq_default(&self, other: &Self) -> bool {
        self.approx_eq(other, tol(EQ_TOL))
    }

    pub fn hermiticity_error(&self) -> T {
        if !self.is_square() {
            return T::infinity();
        }
        let n = self.rows;
        let mut worst = T::zero();
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    pub fn is_hermitian(&self, tol: T) -> bool {
        self.hermiticity_error() <= tol
    }

    /// `‖U†U − I‖_max`; infinite for non-square input.
    pub fn unitarity_error(&self) -> T {
        if !self.is_square() {
            return T::infinity();
        }
        (&self.dagger() * self).max_abs_diff(&Self::identity(self.rows))
    }

    pub fn checked_mul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        Ok(self.mul_unchecked(rhs))
    }

    fn mul_unchecked(&self, rhs: &Self) -> Self {
        let (n, k, m) = (self.rows, self.cols, rhs.cols);
        let mut out = Self::zeros(n, m);
        for i in 0..n {
            for l in 0..k {
                let a = self.data[i * k + l];
                if a.re == T::zero() && a.im == T::zero() {
                    continue;
                }
                let row = &rhs.data[l * m..(l + 1) * m];
                let dst = &mut out.data[i * m..(i + 1) * m];
                for (d, &b) in dst.iter_mut().zip(row) {
                    *d = *d + a * b;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Complex<T>]) -> Vec<Complex<T>> {
        assert_eq!(v.len(), self.cols, "vector length mismatch");
        (0..self.rows)
            .map(|i| {
                self.data[i * self.cols..(i + 1) * self.cols]
                    .iter()
                    .zip(v)
                    .fold(cr(T::zero()), |acc, (a, b)| acc + *a * *b)
            })
            .collect()
    }

    /// Hilbert–Schmidt inner product `Tr(self† · other)`.
    pub fn hs_inner(&self, other: &Self) -> Complex<T> {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch");
        self.data.iter().zip(&other.data).fold(cr(T::zero()), |acc, (a, b)| acc + a.conj() * *b)
    }

    /// Column-major vectorization.
    pub fn vectorize(&self) -> Vec<Complex<T>> {
        let mut v = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                v.push(self[(i, j)]);
            }
        }
        v
    }

    /// Inverse of [`vectorize`](Self::vectorize) for a `rows × cols` matrix.
    pub fn devectorize(v: &[Complex<T>], rows: usize, cols: usize) -> Result<Self> {
        if v.len() != rows * cols {
            return Err(Error::Dimension(format!("cannot reshape {} entries to {rows}x{cols}", v.len())));
        }
        Ok(Self::from_fn(rows, cols, |i, j| v[i + j * rows]))
    }
}

impl<T> Index<(usize, usize)> for ComplexMatrix<T> {
    type Output = Complex<T>;
    fn index(&self, (i, j): (usize, usize)) -> &Complex<T> {
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for ComplexMatrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex<T> {
        &mut self.data[i * self.cols + j]
    }
}

impl<T: Real> Mul for &ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;
    fn mul(self, rhs: Self) -> ComplexMatrix<T> {
        assert_eq!(self.cols, rhs.rows, "matrix product shape mismatch");
        self.mul_unchecked(rhs)
    }
}

impl<T: Real> Add for &ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;
    fn add(self, rhs: Self) -> ComplexMatrix<T> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "matrix sum shape mismatch");
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| *a + *b).collect(),
        }
    }
}

impl<T: Real> Sub for &ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;
    fn sub(self, rhs: Self) -> ComplexMatrix<T> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "matrix difference shape mismatch");
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| *a - *b).collect(),
        }
    }
}

impl<T: Real> AddAssign<&ComplexMatrix<T>> for ComplexMatrix<T> {
    fn add_assign(&mut self, rhs: &ComplexMatrix<T>) {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "matrix sum shape mismatch");
        for (a, b) in self.data.iter_mut().zip(&rhs.data) {
            *a = *a + *b;
        }
    }
}

impl<T: Real> Neg for &ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;
    fn neg(self) -> ComplexMatrix<T> {
        self.scale_real(-T::one())
    }
}

impl<T: fmt::Debug> fmt::Debug for ComplexMatrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for row in self.data.chunks(self.cols.max(1)) {
            writeln!(f, "  {row:?}")?;
        }
        write!(f, "]")
    }
}

/// Kronecker product `a ⊗ b`.
pub fn kron<T: Real>(a: &ComplexMatrix<T>, b: &ComplexMatrix<T>) -> ComplexMatrix<T> {
    let (br, bc) = (b.rows, b.cols);
    ComplexMatrix::from_fn(a.rows * br, a.cols * bc, |i, j| a[(i / br, j / bc)] * b[(i % br, j % bc)])
}

/// Kronecker product of a list of factors, left to right.
pub fn kron_all<T: Real>(factors: &[&ComplexMatrix<T>]) -> ComplexMatrix<T> {
    factors
        .iter()
        .fold(ComplexMatrix::identity(1), |acc, f| kron(&acc, f))
}

/// Traces out every subsystem not listed in `keep`; the kept subsystems stay
/// in their original order.
pub fn partial_trace<T: Real>(m: &ComplexMatrix<T>, dims: &[usize], keep: &[usize]) -> Result<ComplexMatrix<T>> {
    let side = m.side()?;
    let total: usize = dims.iter().product();
    if total != side {
        return Err(Error::Dimension(format!(
            "subsystem dims {dims:?} multiply to {total}, matrix side is {side}"
        )));
    }
    let mut keep_sorted = keep.to_vec();
    keep_sorted.sort_unstable();
    keep_sorted.dedup();
    if keep_sorted.len() != keep.len() || keep_sorted.iter().any(|&k| k >= dims.len()) {
        return Err(Error::Dimension(format!("invalid kept subsystems {keep:?} for {} factors", dims.len())));
    }
    let traced: Vec<usize> = (0..dims.len()).filter(|k| !keep_sorted.contains(k)).collect();
    let kept_dim: usize = keep_sorted.iter().map(|&k| dims[k]).product();
    let traced_dim: usize = traced.iter().map(|&k| dims[k]).product();

    // Strides of each subsystem inside the full index (subsystem 0 most significant).
    let mut strides = vec![1usize; dims.len()];
    for k in (0..dims.len().saturating_sub(1)).rev() {
        strides[k] = strides[k + 1] * dims[k + 1];
    }
    let compose = |subs: &[usize], digits_of: usize| -> usize {
        let mut rem = digits_of;
        let mut idx = 0;
        for &s in subs.iter().rev() {
            idx += (rem % dims[s]) * strides[s];
            rem /= dims[s];
        }
        idx
    };
    let kept_offsets: Vec<usize> = (0..kept_dim).map(|a| compose(&keep_sorted, a)).collect();
    let traced_offsets: Vec<usize> = (0..traced_dim).map(|t| compose(&traced, t)).collect();

    let mut out = ComplexMatrix::zeros(kept_dim, kept_dim);
    for (a, &ra) in kept_offsets.iter().enumerate() {
        for (b, &rb) in kept_offsets.iter().enumerate() {
            let mut acc = cr(T::zero());
            for &t in &traced_offsets {
                acc = acc + m[(ra + t, rb + t)];
            }
            out[(a, b)] = acc;
        }
    }
    Ok(out)
}

/// Lifts an operator acting on `targets` (in the given order) to an `n`-qubit
/// register.
pub fn embed_qubits<T: Real>(op: &ComplexMatrix<T>, targets: &[usize], n: usize) -> Result<ComplexMatrix<T>> {
    let k = targets.len();
    if op.rows() != 1 << k || op.cols() != 1 << k {
        return Err(Error::Dimension(format!("operator is {}x{}, expected {} qubits", op.rows(), op.cols(), k)));
    }
    if targets.iter().any(|&t| t >= n) {
        return Err(Error::Dimension(format!("targets {targets:?} out of range for {n} qubits")));
    }
    let dim = 1usize << n;
    let bit = |idx: usize, q: usize| (idx >> (n - 1 - q)) & 1;
    let sub = |idx: usize| targets.iter().fold(0usize, |acc, &q| (acc << 1) | bit(idx, q));
    let mask: usize = targets.iter().map(|&q| 1usize << (n - 1 - q)).sum();
    Ok(ComplexMatrix::from_fn(dim, dim, |i, j| {
        if i & !mask == j & !mask {
            op[(sub(i), sub(j))]
        } else {
            cr(T::zero())
        }
    }))
}
