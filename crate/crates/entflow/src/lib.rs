//! Entanglement dynamics of bipartite quantum states under one-sided noisy
//! channels.
//!
//! The library computes concurrence matrices over SO(N) generator pairs,
//! the I-concurrence they induce, Wootters concurrence for two-qubit mixed
//! states, and a convex-roof estimator for everything else. On top of these
//! sit the evolution laws for a state with one subsystem passing through a
//! Kraus channel: the pure-image concurrence-matrix product, the N₁⊗2
//! factorization of the scalar concurrence, Cauchy-type upper bounds for
//! mixed images and mixed initial states, and two-sided channel equalities
//! for Schmidt-form two-qubit states. A `scenarios` layer reproduces the
//! dephased and amplitude-damped W state (including sudden death of
//! entanglement and the residual-tangle surface) and the relaxation of a
//! spin-1 NMR ground state.
//!
//! All randomness is explicitly seeded and all tolerances live in [`tol`].

pub mod channels;
pub mod concurrence;
pub mod error;
pub mod evolution;
pub mod numerics;
pub mod scenarios;
pub mod states;
pub mod tol;

pub use channels::KrausChannel;
pub use concurrence::{
    concurrence_matrix, concurrence_matrix_via_generators, convex_roof_estimate,
    iconcurrence_pure, so_generators, wootters_concurrence, ConcurrenceMatrix, GeneratorSet,
    RoofBudget, RoofEstimate,
};
pub use error::{Error, Result};
pub use numerics::{CMatrix, CVector, Subsystem};
pub use states::{Decomposition, DensityMatrix, FilterOperator, PureState};
