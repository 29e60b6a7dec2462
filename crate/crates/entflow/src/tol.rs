//! Numerical tolerances used across the crate.
//!
//! Everything that compares two floating-point quantities pulls its
//! threshold from here, so the acceptance thresholds live in exactly one
//! place.

/// Hermiticity check for operator inputs: max entry of |m - m†|.
pub const HERMITICITY: f64 = 1e-10;

/// Eigenvalues above this floor are clamped to zero in PSD contexts;
/// anything below is a hard error.
pub const PSD_FLOOR: f64 = -1e-10;

/// Trace-one check for density matrices.
pub const TRACE_ONE: f64 = 1e-10;

/// Norm-one check for pure-state amplitudes.
pub const STATE_NORM: f64 = 1e-12;

/// Frobenius residual allowed when a decomposition rebuilds its density
/// matrix (looser than state norm because it accumulates over terms).
pub const RECONSTRUCTION: f64 = 1e-9;

/// Gap tolerance when both sides of a law are computed exactly.
pub const EXACT_LAW: f64 = 1e-10;

/// Entrywise agreement between the closed-form and generator-contraction
/// concurrence matrices.
pub const ENTRYWISE: f64 = 1e-12;

/// One-sided window for roof-estimate comparisons: the estimator may sit
/// above an exact prediction by this much with the default budget.
pub const ESTIMATOR_UPPER: f64 = 5e-3;

/// The estimator never undercuts a true convex roof by more than this.
pub const ESTIMATOR_LOWER: f64 = -1e-9;

/// Tightness demanded of the estimator against the Wootters closed form
/// on 2x2 inputs.
pub const ESTIMATOR_VS_WOOTTERS: f64 = 1e-3;

/// Scenario columns with a paper closed form must match the direct
/// numerical pipeline to this.
pub const CLOSED_FORM: f64 = 1e-8;

/// Residual entanglement of the dephased W state is zero to this.
pub const TAU_ZERO: f64 = 1e-9;

/// Root accuracy for the sudden-death time.
pub const ESD_TIME: f64 = 1e-6;

/// Relative off-diagonal norm at which the Jacobi iteration stops.
pub const JACOBI_OFF_DIAG: f64 = 1e-13;

/// Sweep cap for the Jacobi iteration.
pub const JACOBI_MAX_SWEEPS: usize = 100;

/// Unitarity / orthonormality checks (V†V = I and friends).
pub const UNITARITY: f64 = 1e-12;

/// Eigendecomposition reconstruction residual, relative to ‖m‖_F.
pub const EIGH_RECONSTRUCTION: f64 = 1e-10;

/// Squared PSD square root must reproduce its input to this (Frobenius).
pub const SQRT_RESIDUAL: f64 = 1e-9;

/// Rank cutoff when eigendecomposing density matrices.
pub const RANK_CUTOFF: f64 = 1e-12;

/// Absolute improvement below which the roof optimizer stops sweeping.
pub const ROOF_IMPROVEMENT: f64 = 1e-12;
