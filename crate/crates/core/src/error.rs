use thiserror::Error;

/// Residuals recorded at one interior-point iteration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IterationResidual {
    pub iteration: usize,
    pub primal_infeasibility: f64,
    pub dual_infeasibility: f64,
    pub gap: f64,
    pub mu: f64,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("expected a square matrix, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is not Hermitian (max deviation {0:e})")]
    NotHermitian(f64),
    #[error("matrix is not unitary (max deviation {0:e})")]
    NotUnitary(f64),
    #[error("Kraus operators are not complete (max deviation of sum K†K from I: {0:e})")]
    IncompleteKraus(f64),
    #[error("parameter `{name}` = {value} is outside [{lo}, {hi}]")]
    OutOfRange { name: &'static str, value: f64, lo: f64, hi: f64 },
    #[error("matrix is not positive definite")]
    NotPositiveDefinite,
    #[error("eigensolver did not converge in {0} sweeps")]
    EigenNotConverged(usize),
    #[error("SDP solver did not converge after {iterations} iterations (last gap {last_gap:e})")]
    NotConverged { iterations: usize, last_gap: f64, history: Vec<IterationResidual> },
    #[error("invalid argument: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_range(name: &'static str, value: f64, lo: f64, hi: f64) -> Result<()> {
    if value.is_nan() || value < lo || value > hi {
        return Err(Error::OutOfRange { name, value, lo, hi });
    }
    Ok(())
}
