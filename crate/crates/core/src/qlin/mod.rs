//! Dense complex linear algebra for systems of at most four qubits.
//!
//! Operators are vectorized column-major throughout; superoperator tensor
//! products and Choi matrices depend on that convention.

mod eig;
mod matrix;
mod real;
mod superop;

pub use eig::{hermitian_eig, trace_norm, HermitianEig, HERMITIAN_TOL};
pub(crate) use matrix::tol;
pub use matrix::{embed_qubits, kron, kron_all, partial_trace, ComplexMatrix, EQ_TOL};
pub use real::{cholesky_solve, RealMatrix};
pub use superop::{
    choi_of, superop_apply, superop_compose, superop_from_kraus, superop_tensor, ChoiMatrix, DensityMatrix,
    Superoperator, PSD_TOL,
};
