//! Noisy gate-teleportation channels for standard and sequential
//! measurement-based quantum computation.
//!
//! The crate builds the logical CPTP map realised by each teleportation
//! circuit (single-qubit `U_z` rotations, `CX`, and the three-step Euler
//! chain) under ancilla-preparation noise and depolarizing or misfiring
//! entangling gates, then scores it against the ideal gate with
//!
//! - the average gate infidelity over a Pauli operator basis, and
//! - the diamond distance, computed by a dense primal-dual interior-point
//!   SDP on the Choi matrix of the difference map.
//!
//! All numerics are generic over a [`Real`] scalar. The `f64` aliases at the
//! crate root are what the benchmarks and tests use; the tolerances quoted
//! throughout assume double precision.
//!
//! # Conventions
//!
//! - Operators are vectorized column-major: `vec(X)[i + j*d] = X[i][j]`, so
//!   `vec(A X B) = (Bᵀ ⊗ A) vec(X)`.
//! - Choi matrices put the output factor first:
//!   `J(Δ) = Σ_jk Δ(|j⟩⟨k|) ⊗ |j⟩⟨k|`.
//! - Qubit 0 is the most significant tensor factor. Circuits place registers
//!   first and append ancillae in creation order.

pub mod channels;
pub mod circuits;
pub mod error;
pub mod metrics;
pub mod qlin;
pub mod scalar;
pub mod sdp;

pub use error::{Error, Result};
pub use scalar::Real;

pub use num_complex::Complex;

/// Complex scalar used by the `f64` aliases.
pub type C64 = Complex<f64>;
pub type CMatrix = qlin::ComplexMatrix<f64>;
pub type Density = qlin::DensityMatrix<f64>;
pub type Superop = qlin::Superoperator<f64>;
pub type Choi = qlin::ChoiMatrix<f64>;
pub type Kraus = channels::KrausChannel<f64>;
pub type Logical = circuits::LogicalChannel<f64>;
pub type Metrics = metrics::MetricResult<f64>;
pub type Solution = sdp::SdpSolution<f64>;
