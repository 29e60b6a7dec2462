//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not square: {rows}x{cols}")]
    NonSquare { rows: usize, cols: usize },

    #[error("matrix is not Hermitian: deviation {deviation:.3e} exceeds tolerance {tol:.3e}")]
    NotHermitian { deviation: f64, tol: f64 },

    #[error("Jacobi eigensolver did not converge after {sweeps} sweeps (off-diagonal norm {off:.3e})")]
    NoConvergence { sweeps: usize, off: f64 },

    #[error("matrix is not positive semidefinite: eigenvalue {eigenvalue:.3e}")]
    NotPositiveSemidefinite { eigenvalue: f64 },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("subsystem dimension must be at least 2, got {0}")]
    DimensionTooSmall(usize),

    #[error("state vector has zero norm")]
    ZeroNorm,

    #[error("state is not normalized: norm = {norm}")]
    NotNormalized { norm: f64 },

    #[error("density matrix trace {trace} differs from 1 beyond tolerance")]
    TraceNotOne { trace: f64 },

    #[error("Kraus operator list is empty")]
    EmptyKraus,

    #[error("Kraus completeness violated: residual {residual:.3e}")]
    CompletenessViolation { residual: f64 },

    #[error("post-selection probability {probability:.3e} is too small to renormalize")]
    ZeroProbability { probability: f64 },

    #[error("relaxation rates must satisfy gamma2_t >= gamma1_t >= 0, got ({gamma1_t}, {gamma2_t})")]
    RateOrdering { gamma1_t: f64, gamma2_t: f64 },

    #[error("invalid decomposition: {0}")]
    BadDecomposition(String),

    #[error("decomposition does not reconstruct its target: residual {residual:.3e}")]
    ReconstructionFailure { residual: f64 },

    #[error("channel image is not pure: purity = {purity}")]
    ImageNotPure { purity: f64 },

    #[error("no evolution law applies to dims {n1}x{n2} with a mixed channel image")]
    OutOfScope { n1: usize, n2: usize },

    #[error("convex-roof budget exhausted without a reconstruction-valid witness")]
    BudgetExhausted,

    #[error("bisection bracket [{lo}, {hi}] has no sign change")]
    NoSignChange { lo: f64, hi: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
