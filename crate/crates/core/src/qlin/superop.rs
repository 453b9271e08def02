use num_complex::Complex;

use super::eig::hermitian_eig;
use super::matrix::{kron, tol, ComplexMatrix, EQ_TOL};
use crate::channels::KrausChannel;
use crate::error::{Error, Result};
use crate::scalar::{cr, Real};

/// Eigenvalue floor for PSD and CP checks.
pub const PSD_TOL: f64 = 1e-10;

/// Hermitian, unit-trace, positive semidefinite matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix<T> {
    mat: ComplexMatrix<T>,
}

impl<T: Real> DensityMatrix<T> {
    pub fn new(mat: ComplexMatrix<T>) -> Result<Self> {
        mat.side()?;
        let herr = mat.hermiticity_error();
        if herr > tol(EQ_TOL) {
            return Err(Error::NotHermitian(herr.as_f64()));
        }
        let tr = mat.trace();
        if (tr - cr(T::one())).norm() > tol(EQ_TOL) {
            return Err(Error::Invalid(format!("density matrix trace is {}", tr.re.as_f64())));
        }
        let min = hermitian_eig(&mat)?.min();
        if min < -tol::<T>(PSD_TOL) {
            return Err(Error::Invalid(format!("density matrix has eigenvalue {:e}", min.as_f64())));
        }
        Ok(Self { mat })
    }

    /// `|ψ⟩⟨ψ|` for a normalized state vector.
    pub fn pure(psi: &[Complex<T>]) -> Result<Self> {
        Self::new(ComplexMatrix::outer(psi, psi))
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self { mat: ComplexMatrix::identity(dim).scale_real(T::one() / T::lit(dim as f64)) }
    }

    pub fn dim(&self) -> usize {
        self.mat.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix<T> {
        &self.mat
    }

    pub fn into_matrix(self) -> ComplexMatrix<T> {
        self.mat
    }

    pub fn purity(&self) -> T {
        self.mat.hs_inner(&self.mat).re
    }

    /// `⟨ψ|ρ|ψ⟩`.
    pub fn fidelity_with_pure(&self, psi: &[Complex<T>]) -> T {
        let v = self.mat.mul_vec(psi);
        psi.iter().zip(&v).fold(cr(T::zero()), |acc, (a, b)| acc + a.conj() * *b).re
    }
}

/// Linear map on operators stored as a `dim_out² × dim_in²` matrix acting on
/// column-vectorized operators.
#[derive(Debug, Clone, PartialEq)]
pub struct Superoperator<T> {
    dim_in: usize,
    dim_out: usize,
    mat: ComplexMatrix<T>,
}

impl<T: Real> Superoperator<T> {
    pub fn new(dim_in: usize, dim_out: usize, mat: ComplexMatrix<T>) -> Result<Self> {
        if mat.rows() != dim_out * dim_out || mat.cols() != dim_in * dim_in {
            return Err(Error::Dimension(format!(
                "superoperator {}->{} needs a {}x{} matrix, got {}x{}",
                dim_in,
                dim_out,
                dim_out * dim_out,
                dim_in * dim_in,
                mat.rows(),
                mat.cols()
            )));
        }
        Ok(Self { dim_in, dim_out, mat })
    }

    pub fn identity(dim: usize) -> Self {
        Self { dim_in: dim, dim_out: dim, mat: ComplexMatrix::identity(dim * dim) }
    }

    pub fn zero(dim_in: usize, dim_out: usize) -> Self {
        Self { dim_in, dim_out, mat: ComplexMatrix::zeros(dim_out * dim_out, dim_in * dim_in) }
    }

    /// `ρ ↦ U ρ U†`, i.e. `conj(U) ⊗ U`.
    pub fn from_unitary(u: &ComplexMatrix<T>) -> Self {
        let d = u.rows();
        let dim_in = u.cols();
        Self { dim_in, dim_out: d, mat: kron(&u.conj(), u) }
    }

    /// `ρ ↦ Σ K ρ K†` without any completeness check.
    pub fn from_operators(ops: &[ComplexMatrix<T>]) -> Result<Self> {
        let first = ops.first().ok_or_else(|| Error::Invalid("empty operator list".into()))?;
        let (dout, din) = (first.rows(), first.cols());
        let mut mat = ComplexMatrix::zeros(dout * dout, din * din);
        for k in ops {
            if (k.rows(), k.cols()) != (dout, din) {
                return Err(Error::Dimension("Kraus operators of different shapes".into()));
            }
            mat += &kron(&k.conj(), k);
        }
        Ok(Self { dim_in: din, dim_out: dout, mat })
    }

    /// Builds the superoperator of an arbitrary linear map from its action on
    /// the matrix units `|j⟩⟨k|`.
    pub fn from_linear_map(
        dim_in: usize,
        dim_out: usize,
        mut map: impl FnMut(&ComplexMatrix<T>) -> Result<ComplexMatrix<T>>,
    ) -> Result<Self> {
        let mut mat = ComplexMatrix::zeros(dim_out * dim_out, dim_in * dim_in);
        for k in 0..dim_in {
            for j in 0..dim_in {
                let mut unit = ComplexMatrix::zeros(dim_in, dim_in);
                unit[(j, k)] = cr(T::one());
                let image = map(&unit)?;
                if (image.rows(), image.cols()) != (dim_out, dim_out) {
                    return Err(Error::Dimension("linear map produced wrong output shape".into()));
                }
                let col = j + k * dim_in;
                for (row, z) in image.vectorize().into_iter().enumerate() {
                    mat[(row, col)] = z;
                }
            }
        }
        Ok(Self { dim_in, dim_out, mat })
    }

    pub fn dim_in(&self) -> usize {
        self.dim_in
    }

    pub fn dim_out(&self) -> usize {
        self.dim_out
    }

    pub fn matrix(&self) -> &ComplexMatrix<T> {
        &self.mat
    }

    pub fn apply(&self, x: &ComplexMatrix<T>) -> Result<ComplexMatrix<T>> {
        if x.rows() != self.dim_in || x.cols() != self.dim_in {
            return Err(Error::Dimension(format!(
                "map acts on {}x{} operators, got {}x{}",
                self.dim_in,
                self.dim_in,
                x.rows(),
                x.cols()
            )));
        }
        let v = self.mat.mul_vec(&x.vectorize());
        ComplexMatrix::devectorize(&v, self.dim_out, self.dim_out)
    }

    /// Hilbert–Schmidt adjoint applied to `y`.
    pub fn apply_adjoint(&self, y: &ComplexMatrix<T>) -> Result<ComplexMatrix<T>> {
        if y.rows() != self.dim_out || y.cols() != self.dim_out {
            return Err(Error::Dimension("adjoint input has wrong shape".into()));
        }
        let v = self.mat.dagger().mul_vec(&y.vectorize());
        ComplexMatrix::devectorize(&v, self.dim_in, self.dim_in)
    }

    /// `self ∘ first`: apply `first`, then `self`.
    pub fn compose(&self, first: &Self) -> Result<Self> {
        if first.dim_out != self.dim_in {
            return Err(Error::Dimension(format!(
                "cannot compose {}->{} after {}->{}",
                self.dim_in, self.dim_out, first.dim_in, first.dim_out
            )));
        }
        Ok(Self { dim_in: first.dim_in, dim_out: self.dim_out, mat: &self.mat * &first.mat })
    }

    /// `self ⊗ other` with `(f ⊗ g)(x ⊗ y) = f(x) ⊗ g(y)`.
    pub fn tensor(&self, other: &Self) -> Self {
        let (ai, ao, bi, bo) = (self.dim_in, self.dim_out, other.dim_in, other.dim_out);
        let (din, dout) = (ai * bi, ao * bo);
        let mut mat = ComplexMatrix::zeros(dout * dout, din * din);
        for (r, c) in (0..ao * ao).flat_map(|r| (0..ai * ai).map(move |c| (r, c))) {
            let f = self.mat[(r, c)];
            if f.re == T::zero() && f.im == T::zero() {
                continue;
            }
            let (i1, j1) = (r % ao, r / ao);
            let (k1, l1) = (c % ai, c / ai);
            for r2 in 0..bo * bo {
                let (i2, j2) = (r2 % bo, r2 / bo);
                let row = (i1 * bo + i2) + (j1 * bo + j2) * dout;
                for c2 in 0..bi * bi {
                    let (k2, l2) = (c2 % bi, c2 / bi);
                    let col = (k1 * bi + k2) + (l1 * bi + l2) * din;
                    mat[(row, col)] = f * other.mat[(r2, c2)];
                }
            }
        }
        Self { dim_in: din, dim_out: dout, mat }
    }

    /// `a·self + b·other`.
    pub fn combine(&self, a: T, other: &Self, b: T) -> Result<Self> {
        if (self.dim_in, self.dim_out) != (other.dim_in, other.dim_out) {
            return Err(Error::Dimension("cannot combine maps of different dimensions".into()));
        }
        Ok(Self {
            dim_in: self.dim_in,
            dim_out: self.dim_out,
            mat: &self.mat.scale_real(a) + &other.mat.scale_real(b),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.combine(T::one(), other, -T::one())
    }

    pub fn approx_eq(&self, other: &Self, tol: T) -> bool {
        self.dim_in == other.dim_in && self.dim_out == other.dim_out && self.mat.approx_eq(&other.mat, tol)
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        self.mat.max_abs_diff(&other.mat)
    }

    /// Choi matrix with the output factor first.
    pub fn choi(&self) -> ChoiMatrix<T> {
        let (da, db) = (self.dim_in, self.dim_out);
        let n = da * db;
        let mut j = ComplexMatrix::zeros(n, n);
        for (r, c) in (0..db).flat_map(|r| (0..db).map(move |c| (r, c))) {
            let row_vec = r + c * db;
            for (a, b) in (0..da).flat_map(|a| (0..da).map(move |b| (a, b))) {
                j[(r * da + a, c * da + b)] = self.mat[(row_vec, a + b * da)];
            }
        }
        ChoiMatrix { dim_a: da, dim_b: db, mat: j }
    }

    /// `max ‖Φ†(I) − I‖`.
    pub fn trace_preservation_error(&self) -> T {
        match self.apply_adjoint(&ComplexMatrix::identity(self.dim_out)) {
            Ok(m) => m.max_abs_diff(&ComplexMatrix::identity(self.dim_in)),
            Err(_) => T::infinity(),
        }
    }

    /// Smallest eigenvalue of the Choi matrix.
    pub fn choi_min_eigenvalue(&self) -> Result<T> {
        Ok(hermitian_eig(self.choi().matrix())?.min())
    }

    /// Complete positivity and trace preservation at the crate tolerances.
    pub fn is_cptp(&self) -> bool {
        self.trace_preservation_error() <= tol(PSD_TOL)
            && self.choi_min_eigenvalue().map(|m| m >= -tol::<T>(PSD_TOL)).unwrap_or(false)
    }
}

/// `J(Δ) = Σ_jk Δ(|j⟩⟨k|) ⊗ |j⟩⟨k|`, acting on `B ⊗ A`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChoiMatrix<T> {
    dim_a: usize,
    dim_b: usize,
    mat: ComplexMatrix<T>,
}

impl<T: Real> ChoiMatrix<T> {
    pub fn new(dim_a: usize, dim_b: usize, mat: ComplexMatrix<T>) -> Result<Self> {
        let n = dim_a * dim_b;
        if mat.rows() != n || mat.cols() != n {
            return Err(Error::Dimension(format!("Choi matrix for {dim_a}->{dim_b} must be {n}x{n}")));
        }
        Ok(Self { dim_a, dim_b, mat })
    }

    pub fn dim_a(&self) -> usize {
        self.dim_a
    }

    pub fn dim_b(&self) -> usize {
        self.dim_b
    }

    pub fn matrix(&self) -> &ComplexMatrix<T> {
        &self.mat
    }

    /// Recovers the superoperator this Choi matrix encodes.
    pub fn to_superoperator(&self) -> Superoperator<T> {
        let (da, db) = (self.dim_a, self.dim_b);
        let mut mat = ComplexMatrix::zeros(db * db, da * da);
        for (r, c) in (0..db).flat_map(|r| (0..db).map(move |c| (r, c))) {
            for (a, b) in (0..da).flat_map(|a| (0..da).map(move |b| (a, b))) {
                mat[(r + c * db, a + b * da)] = self.mat[(r * da + a, c * da + b)];
            }
        }
        Superoperator { dim_in: da, dim_out: db, mat }
    }
}

/// `superop_compose(g, f) = g ∘ f`.
pub fn superop_compose<T: Real>(g: &Superoperator<T>, f: &Superoperator<T>) -> Result<Superoperator<T>> {
    g.compose(f)
}

pub fn superop_tensor<T: Real>(f: &Superoperator<T>, g: &Superoperator<T>) -> Superoperator<T> {
    f.tensor(g)
}

pub fn superop_apply<T: Real>(f: &Superoperator<T>, x: &ComplexMatrix<T>) -> Result<ComplexMatrix<T>> {
    f.apply(x)
}

/// `Σ conj(K) ⊗ K`, after checking `Σ K†K = I`.
pub fn superop_from_kraus<T: Real>(k: &KrausChannel<T>) -> Result<Superoperator<T>> {
    let err = k.completeness_error();
    if err > tol(PSD_TOL) {
        return Err(Error::IncompleteKraus(err.as_f64()));
    }
    Superoperator::from_operators(k.ops())
}

pub fn choi_of<T: Real>(delta: &Superoperator<T>) -> ChoiMatrix<T> {
    delta.choi()
}
