//! Bipartite state model: pure states with an explicit tensor split, mixed
//! density matrices, the filtering operator that reaches a pure state from
//! the maximally entangled one, and weighted pure-state decompositions.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{self, CMatrix, CVector, Subsystem};
use crate::tol;

/// Normalized pure state of an N₁ ⊗ N₂ system.
///
/// Amplitudes are stored as an N₁ x N₂ matrix `A`, `A[[i, j]]` being the
/// coefficient of |ij⟩ (0-based storage; formulas quoted in 1-based index
/// conventions map through k = k₀ + 1). The bipartite split is part of the
/// state's identity: a three-qubit state declared as 4 ⊗ 2 stays 4 ⊗ 2.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(try_from = "StateWire", into = "StateWire")]
pub struct PureState {
    dims: (usize, usize),
    amps: CMatrix,
}

impl PureState {
    /// Build from an amplitude matrix, normalizing if requested.
    pub fn from_amplitudes(dims: (usize, usize), raw: CMatrix, normalize: bool) -> Result<Self> {
        if raw.dim() != dims {
            return Err(Error::DimensionMismatch(format!(
                "amplitude matrix is {}x{}, declared dims are {}x{}",
                raw.nrows(),
                raw.ncols(),
                dims.0,
                dims.1
            )));
        }
        if raw.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidParameter(
                "amplitude matrix contains non-finite entries".into(),
            ));
        }
        let norm = raw.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if normalize {
            if norm <= 1e-12 {
                return Err(Error::ZeroNorm);
            }
            let amps = raw.mapv(|z| z / norm);
            Ok(Self { dims, amps })
        } else {
            if (norm - 1.0).abs() > tol::STATE_NORM {
                return Err(Error::NotNormalized { norm });
            }
            Ok(Self { dims, amps: raw })
        }
    }

    /// The maximally entangled state |φ⟩ = Σ_n |nn⟩/√N on C^N ⊗ C^N.
    pub fn max_entangled(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::DimensionTooSmall(n));
        }
        let amps = CMatrix::from_shape_fn((n, n), |(i, j)| {
            if i == j {
                C64::new(1.0 / (n as f64).sqrt(), 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        });
        Ok(Self { dims: (n, n), amps })
    }

    /// Gaussian-random pure state with the given seed.
    pub fn random(dims: (usize, usize), seed: u64) -> Self {
        let mut rng = numerics::rng_from_seed(seed);
        Self::random_with(&mut rng, dims)
    }

    /// Gaussian-random pure state drawn from an existing RNG stream.
    pub fn random_with<R: rand::Rng>(rng: &mut R, dims: (usize, usize)) -> Self {
        loop {
            let raw = numerics::complex_gaussian_matrix(rng, dims.0, dims.1);
            if let Ok(state) = Self::from_amplitudes(dims, raw, true) {
                return state;
            }
        }
    }

    pub fn dims(&self) -> (usize, usize) {
        self.dims
    }

    pub fn n1(&self) -> usize {
        self.dims.0
    }

    pub fn n2(&self) -> usize {
        self.dims.1
    }

    /// Amplitude matrix A.
    pub fn amps(&self) -> &CMatrix {
        &self.amps
    }

    /// Row-major flattening of A into a ket on C^{N₁N₂}.
    pub fn state_vector(&self) -> CVector {
        CVector::from_iter(self.amps.iter().cloned())
    }

    /// Projector |χ⟩⟨χ| as a density matrix.
    pub fn density(&self) -> DensityMatrix {
        let v = self.state_vector();
        let n = v.len();
        let mat = CMatrix::from_shape_fn((n, n), |(i, j)| v[i] * v[j].conj());
        DensityMatrix {
            dims: self.dims,
            mat,
        }
    }

    /// ⟨self|other⟩.
    pub fn overlap(&self, other: &PureState) -> C64 {
        self.amps
            .iter()
            .zip(other.amps.iter())
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// |⟨self|other⟩|².
    pub fn fidelity(&self, other: &PureState) -> f64 {
        self.overlap(other).norm_sqr()
    }

    /// Marginal on the kept subsystem (delegates to the partial trace).
    pub fn reduced_density(&self, keep: Subsystem) -> CMatrix {
        let rho = self.density();
        numerics::partial_trace(rho.mat(), self.dims, keep)
            .expect("projector dims match state dims")
    }

    /// Singular values of the amplitude matrix, descending.
    pub fn schmidt_coefficients(&self) -> Vec<f64> {
        let r = self.dims.0.min(self.dims.1);
        // singular values via the smaller Gram matrix
        let gram = if self.dims.0 <= self.dims.1 {
            self.amps.dot(&numerics::dagger(&self.amps))
        } else {
            numerics::dagger(&self.amps).dot(&self.amps)
        };
        let (vals, _) = numerics::eigh(&gram, tol::HERMITICITY)
            .expect("Gram matrix of finite amplitudes is Hermitian");
        let mut sv: Vec<f64> = vals.iter().map(|&l| l.max(0.0).sqrt()).collect();
        sv.sort_by(|a, b| b.partial_cmp(a).unwrap());
        sv.truncate(r);
        sv
    }

    /// The filtering operator M_χ = √N₂ Σ A_ij |i⟩⟨j| with
    /// (M_χ ⊗ I)|φ_{N₂}⟩ = |χ⟩.
    pub fn filter_operator(&self) -> FilterOperator {
        let scale = (self.dims.1 as f64).sqrt();
        FilterOperator {
            mat: self.amps.mapv(|z| z * scale),
        }
    }
}

/// Local filter M_χ encoding a pure state's amplitudes (an N₁ x N₂ map
/// from the second factor's dimension into the first's).
#[derive(Debug, Clone)]
pub struct FilterOperator {
    mat: CMatrix,
}

impl FilterOperator {
    pub fn mat(&self) -> &CMatrix {
        &self.mat
    }

    /// Amplitudes of (M_χ ⊗ I)|ψ⟩ for a state |ψ⟩ on C^{N₂} ⊗ C^{K},
    /// not renormalized.
    pub fn apply_to_amplitudes(&self, amps: &CMatrix) -> CMatrix {
        self.mat.dot(amps)
    }

    /// Push a pure state through the filter, returning the unnormalized
    /// amplitude matrix.
    pub fn apply_to_state(&self, psi: &PureState) -> CMatrix {
        self.apply_to_amplitudes(psi.amps())
    }
}

/// Hermitian, PSD, trace-one operator on an N₁ ⊗ N₂ system.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(try_from = "DensityWire", into = "DensityWire")]
pub struct DensityMatrix {
    dims: (usize, usize),
    mat: CMatrix,
}

impl DensityMatrix {
    /// Validating constructor: Hermitian to 1e-10, eigenvalues ≥ -1e-10,
    /// trace 1 to 1e-10.
    pub fn new(dims: (usize, usize), mat: CMatrix) -> Result<Self> {
        let n = dims.0 * dims.1;
        if mat.dim() != (n, n) {
            return Err(Error::DimensionMismatch(format!(
                "matrix is {}x{}, dims ({}, {}) require {}x{}",
                mat.nrows(),
                mat.ncols(),
                dims.0,
                dims.1,
                n,
                n
            )));
        }
        if mat.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidParameter(
                "density matrix contains non-finite entries".into(),
            ));
        }
        let dev = numerics::hermiticity_deviation(&mat);
        if dev > tol::HERMITICITY {
            return Err(Error::NotHermitian {
                deviation: dev,
                tol: tol::HERMITICITY,
            });
        }
        let tr = numerics::trace(&mat).re;
        if (tr - 1.0).abs() > tol::TRACE_ONE {
            return Err(Error::TraceNotOne { trace: tr });
        }
        let (vals, _) = numerics::eigh(&mat, tol::HERMITICITY)?;
        if let Some(&lo) = vals.first() {
            if lo < tol::PSD_FLOOR {
                return Err(Error::NotPositiveSemidefinite { eigenvalue: lo });
            }
        }
        Ok(Self { dims, mat })
    }

    /// Internal constructor for operators that are valid by construction
    /// (channel outputs of valid inputs, projectors of normalized states).
    pub(crate) fn from_parts_unchecked(dims: (usize, usize), mat: CMatrix) -> Self {
        Self { dims, mat }
    }

    pub fn from_pure(chi: &PureState) -> Self {
        chi.density()
    }

    /// Gaussian-random density matrix with the given rank.
    pub fn random(dims: (usize, usize), rank: usize, seed: u64) -> Result<Self> {
        let mut rng = numerics::rng_from_seed(seed);
        Self::random_with(&mut rng, dims, rank)
    }

    /// Gaussian-random density matrix drawn from an existing RNG stream.
    pub fn random_with<R: rand::Rng>(
        rng: &mut R,
        dims: (usize, usize),
        rank: usize,
    ) -> Result<Self> {
        let n = dims.0 * dims.1;
        if rank < 1 || rank > n {
            return Err(Error::InvalidParameter(format!(
                "rank must lie in 1..={n}, got {rank}"
            )));
        }
        let g = numerics::complex_gaussian_matrix(rng, n, rank);
        let mut mat = g.dot(&numerics::dagger(&g));
        let tr = numerics::trace(&mat).re;
        mat.mapv_inplace(|z| z / tr);
        Ok(Self { dims, mat })
    }

    pub fn dims(&self) -> (usize, usize) {
        self.dims
    }

    pub fn n1(&self) -> usize {
        self.dims.0
    }

    pub fn n2(&self) -> usize {
        self.dims.1
    }

    pub fn mat(&self) -> &CMatrix {
        &self.mat
    }

    /// Tr ρ².
    pub fn purity(&self) -> f64 {
        // Hermitian, so Tr ρ² is the squared Frobenius norm
        self.mat.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn is_pure(&self, tol: f64) -> bool {
        self.purity() >= 1.0 - tol
    }

    /// Marginal on the kept subsystem.
    pub fn reduced(&self, keep: Subsystem) -> CMatrix {
        numerics::partial_trace(&self.mat, self.dims, keep).expect("dims are consistent")
    }

    /// Eigenvalues (ascending) and eigenvectors.
    pub fn eigendecomposition(&self) -> Result<(Vec<f64>, CMatrix)> {
        numerics::eigh(&self.mat, tol::HERMITICITY)
    }

    /// Eigendecomposition as a weighted pure-state mixture (eigenvalues
    /// below the rank cutoff are dropped).
    pub fn spectral_decomposition(&self) -> Result<Decomposition> {
        let (vals, vecs) = self.eigendecomposition()?;
        let mut weights = Vec::new();
        let mut states = Vec::new();
        for (k, &lam) in vals.iter().enumerate() {
            if lam <= tol::RANK_CUTOFF {
                continue;
            }
            let amps =
                CMatrix::from_shape_fn(self.dims, |(i, j)| vecs[[i * self.dims.1 + j, k]]);
            weights.push(lam);
            states.push(PureState::from_amplitudes(self.dims, amps, true)?);
        }
        Decomposition::new(weights, states)
    }

    /// Largest eigenvalue and its eigenvector as a pure state.
    pub fn dominant_eigenvector(&self) -> Result<(f64, PureState)> {
        let (vals, vecs) = self.eigendecomposition()?;
        let top = vals.len() - 1;
        let amps = CMatrix::from_shape_fn(self.dims, |(i, j)| vecs[[i * self.dims.1 + j, top]]);
        Ok((vals[top], PureState::from_amplitudes(self.dims, amps, true)?))
    }

    /// ⟨ψ|ρ|ψ⟩.
    pub fn fidelity_with_pure(&self, psi: &PureState) -> f64 {
        let v = psi.state_vector();
        let n = v.len();
        let mut acc = C64::new(0.0, 0.0);
        for i in 0..n {
            for j in 0..n {
                acc += v[i].conj() * self.mat[[i, j]] * v[j];
            }
        }
        acc.re
    }
}

/// Weighted mixture of pure states that reassembles a density matrix.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Decomposition {
    weights: Vec<f64>,
    states: Vec<PureState>,
}

impl Decomposition {
    /// Weights must be nonnegative and sum to one within 1e-10; states
    /// must share dimensions.
    pub fn new(weights: Vec<f64>, states: Vec<PureState>) -> Result<Self> {
        if weights.len() != states.len() {
            return Err(Error::BadDecomposition(format!(
                "{} weights for {} states",
                weights.len(),
                states.len()
            )));
        }
        if states.is_empty() {
            return Err(Error::BadDecomposition("empty decomposition".into()));
        }
        if let Some(w) = weights.iter().find(|&&w| w < -1e-12 || !w.is_finite()) {
            return Err(Error::BadDecomposition(format!("invalid weight {w}")));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > tol::TRACE_ONE {
            return Err(Error::BadDecomposition(format!(
                "weights sum to {total}, expected 1"
            )));
        }
        let dims = states[0].dims();
        if states.iter().any(|s| s.dims() != dims) {
            return Err(Error::BadDecomposition(
                "states have inconsistent dims".into(),
            ));
        }
        Ok(Self { weights, states })
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn states(&self) -> &[PureState] {
        &self.states
    }

    pub fn dims(&self) -> (usize, usize) {
        self.states[0].dims()
    }

    /// Σ p_i |ψ_i⟩⟨ψ_i|.
    pub fn reconstruct(&self) -> CMatrix {
        let dims = self.dims();
        let n = dims.0 * dims.1;
        let mut acc = CMatrix::zeros((n, n));
        for (w, s) in self.weights.iter().zip(&self.states) {
            let v = s.state_vector();
            for i in 0..n {
                for j in 0..n {
                    acc[[i, j]] += v[i] * v[j].conj() * *w;
                }
            }
        }
        acc
    }

    /// Check the mixture rebuilds `target` to the given Frobenius residual.
    pub fn verify_reconstructs(&self, target: &DensityMatrix, tolerance: f64) -> Result<()> {
        let rebuilt = self.reconstruct();
        let residual = numerics::frob_norm(&(&rebuilt - target.mat()));
        if residual > tolerance {
            return Err(Error::ReconstructionFailure { residual });
        }
        Ok(())
    }

    /// Weighted average of a pure-state functional.
    pub fn average<F: Fn(&PureState) -> f64>(&self, f: F) -> f64 {
        self.weights
            .iter()
            .zip(&self.states)
            .map(|(w, s)| w * f(s))
            .sum()
    }
}

// ---------------------------------------------------------------------------
// JSON wire formats (field names are fixed for CLI ingestion)
// ---------------------------------------------------------------------------

pub(crate) fn matrix_to_rows(m: &CMatrix) -> (Vec<Vec<f64>>, Vec<Vec<f64>>) {
    let re = m
        .rows()
        .into_iter()
        .map(|r| r.iter().map(|z| z.re).collect())
        .collect();
    let im = m
        .rows()
        .into_iter()
        .map(|r| r.iter().map(|z| z.im).collect())
        .collect();
    (re, im)
}

pub(crate) fn rows_to_matrix(re: &[Vec<f64>], im: &[Vec<f64>]) -> Result<CMatrix> {
    if re.len() != im.len() {
        return Err(Error::InvalidParameter(
            "re and im parts have different row counts".into(),
        ));
    }
    let rows = re.len();
    if rows == 0 {
        return Err(Error::InvalidParameter("empty matrix".into()));
    }
    let cols = re[0].len();
    if re.iter().any(|r| r.len() != cols) || im.iter().any(|r| r.len() != cols) {
        return Err(Error::InvalidParameter("ragged matrix rows".into()));
    }
    Ok(CMatrix::from_shape_fn((rows, cols), |(i, j)| {
        C64::new(re[i][j], im[i][j])
    }))
}

#[derive(Serialize, Deserialize)]
struct StateWire {
    dims: [usize; 2],
    amps_re: Vec<Vec<f64>>,
    amps_im: Vec<Vec<f64>>,
}

impl TryFrom<StateWire> for PureState {
    type Error = Error;

    fn try_from(w: StateWire) -> Result<Self> {
        let raw = rows_to_matrix(&w.amps_re, &w.amps_im)?;
        PureState::from_amplitudes((w.dims[0], w.dims[1]), raw, false)
    }
}

impl From<PureState> for StateWire {
    fn from(s: PureState) -> Self {
        let (amps_re, amps_im) = matrix_to_rows(&s.amps);
        StateWire {
            dims: [s.dims.0, s.dims.1],
            amps_re,
            amps_im,
        }
    }
}

#[derive(Serialize, Deserialize)]
struct DensityWire {
    dims: [usize; 2],
    mat_re: Vec<Vec<f64>>,
    mat_im: Vec<Vec<f64>>,
}

impl TryFrom<DensityWire> for DensityMatrix {
    type Error = Error;

    fn try_from(w: DensityWire) -> Result<Self> {
        let mat = rows_to_matrix(&w.mat_re, &w.mat_im)?;
        DensityMatrix::new((w.dims[0], w.dims[1]), mat)
    }
}

impl From<DensityMatrix> for DensityWire {
    fn from(d: DensityMatrix) -> Self {
        let (mat_re, mat_im) = matrix_to_rows(&d.mat);
        DensityWire {
            dims: [d.dims.0, d.dims.1],
            mat_re,
            mat_im,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{frob_norm, identity};

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn from_amplitudes_basis_state() {
        let raw =
            CMatrix::from_shape_fn(
                (2, 2),
                |(i, j)| if i == 0 && j == 0 { c(1.0) } else { c(0.0) },
            );
        let s = PureState::from_amplitudes((2, 2), raw, false).unwrap();
        assert_eq!(s.dims(), (2, 2));
        assert!((s.amps()[[0, 0]].re - 1.0).abs() < 1e-15);
    }

    #[test]
    fn from_amplitudes_normalizes_bell() {
        let raw = identity(2);
        let s = PureState::from_amplitudes((2, 2), raw, true).unwrap();
        let phi = PureState::max_entangled(2).unwrap();
        assert!((s.fidelity(&phi) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn from_amplitudes_rejects_zero_and_shape() {
        let raw = CMatrix::zeros((2, 2));
        assert!(matches!(
            PureState::from_amplitudes((2, 2), raw, true),
            Err(Error::ZeroNorm)
        ));
        let raw = CMatrix::zeros((3, 2));
        assert!(PureState::from_amplitudes((2, 2), raw, true).is_err());
    }

    #[test]
    fn w_state_amplitudes_as_4x2() {
        // α|001⟩ + β|010⟩ + γ|100⟩ in the AB:C split
        let (a, b, g) = (0.5, 0.5, std::f64::consts::FRAC_1_SQRT_2);
        let mut raw = CMatrix::zeros((4, 2));
        raw[[0, 1]] = c(a);
        raw[[1, 0]] = c(b);
        raw[[2, 0]] = c(g);
        let s = PureState::from_amplitudes((4, 2), raw, false).unwrap();
        let norm: f64 = s.amps().iter().map(|z| z.norm_sqr()).sum();
        assert!((norm - 1.0).abs() < 1e-12);
    }

    #[test]
    fn max_entangled_marginals_are_maximally_mixed() {
        for n in [2usize, 3, 4] {
            let phi = PureState::max_entangled(n).unwrap();
            for keep in [Subsystem::First, Subsystem::Second] {
                let red = phi.reduced_density(keep);
                let uniform = identity(n).mapv(|z| z / n as f64);
                assert!(frob_norm(&(&red - &uniform)) < 1e-12);
            }
        }
        assert!(matches!(
            PureState::max_entangled(1),
            Err(Error::DimensionTooSmall(1))
        ));
    }

    #[test]
    fn filter_reproduces_bell_and_basis() {
        let bell = PureState::max_entangled(2).unwrap();
        let m = bell.filter_operator();
        assert!(frob_norm(&(m.mat() - &identity(2))) < 1e-14);

        let mut raw = CMatrix::zeros((2, 2));
        raw[[0, 0]] = c(1.0);
        let ket00 = PureState::from_amplitudes((2, 2), raw, false).unwrap();
        let m = ket00.filter_operator();
        assert!((m.mat()[[0, 0]].re - 2f64.sqrt()).abs() < 1e-14);
        let phi = PureState::max_entangled(2).unwrap();
        let out = m.apply_to_state(&phi);
        assert!(frob_norm(&(&out - ket00.amps())) < 1e-12);
    }

    #[test]
    fn filter_round_trip_random_3x2() {
        let chi = PureState::random((3, 2), 99);
        let phi = PureState::max_entangled(2).unwrap();
        let out = chi.filter_operator().apply_to_state(&phi);
        assert!(frob_norm(&(&out - chi.amps())) < 1e-12);
    }

    #[test]
    fn reduced_density_of_product_state_is_pure() {
        let mut raw = CMatrix::zeros((3, 2));
        raw[[1, 0]] = c(1.0);
        let s = PureState::from_amplitudes((3, 2), raw, false).unwrap();
        let red = s.reduced_density(Subsystem::First);
        let purity: f64 = red.iter().map(|z| z.norm_sqr()).sum();
        assert!((purity - 1.0).abs() < 1e-12);
    }

    #[test]
    fn schmidt_coefficients_cases() {
        let bell = PureState::max_entangled(2).unwrap();
        let sv = bell.schmidt_coefficients();
        for v in &sv {
            assert!((v - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
        }

        let mut raw = CMatrix::zeros((2, 2));
        raw[[0, 0]] = c(1.0);
        let s = PureState::from_amplitudes((2, 2), raw, false).unwrap();
        let sv = s.schmidt_coefficients();
        assert!((sv[0] - 1.0).abs() < 1e-12);
        assert!(sv[1].abs() < 1e-8);

        // NMR ground state (|02⟩ - |11⟩ + |20⟩)/√3
        let r3 = 1.0 / 3f64.sqrt();
        let mut raw = CMatrix::zeros((3, 3));
        raw[[0, 2]] = c(r3);
        raw[[1, 1]] = c(-r3);
        raw[[2, 0]] = c(r3);
        let s = PureState::from_amplitudes((3, 3), raw, false).unwrap();
        for v in s.schmidt_coefficients() {
            assert!((v - r3).abs() < 1e-12);
        }
        let sq: f64 = s.schmidt_coefficients().iter().map(|v| v * v).sum();
        assert!((sq - 1.0).abs() < 1e-10);
    }

    #[test]
    fn density_validation() {
        let bell = PureState::max_entangled(2).unwrap();
        let rho = bell.density();
        assert!(DensityMatrix::new((2, 2), rho.mat().clone()).is_ok());
        assert!((rho.purity() - 1.0).abs() < 1e-12);

        // trace violation
        let double = rho.mat().mapv(|z| z * 2.0);
        assert!(matches!(
            DensityMatrix::new((2, 2), double),
            Err(Error::TraceNotOne { .. })
        ));

        // negative eigenvalue
        let mut bad = rho.mat().clone();
        bad[[1, 1]] = c(0.5);
        bad[[2, 2]] = c(-0.5);
        assert!(matches!(
            DensityMatrix::new((2, 2), bad),
            Err(Error::NotPositiveSemidefinite { .. })
        ));
    }

    #[test]
    fn dominant_eigenvector_recovers_pure_state() {
        let chi = PureState::random((3, 2), 5);
        let rho = chi.density();
        let (val, psi) = rho.dominant_eigenvector().unwrap();
        assert!((val - 1.0).abs() < 1e-10);
        assert!((psi.fidelity(&chi) - 1.0).abs() < 1e-10);
    }

    #[test]
    fn decomposition_reconstructs() {
        let a = PureState::random((2, 2), 1);
        let b = PureState::random((2, 2), 2);
        let dec = Decomposition::new(vec![0.25, 0.75], vec![a.clone(), b.clone()]).unwrap();
        let mix = dec.reconstruct();
        let target = DensityMatrix::new((2, 2), mix.clone()).unwrap();
        dec.verify_reconstructs(&target, tol::RECONSTRUCTION)
            .unwrap();

        assert!(Decomposition::new(vec![0.5, 0.4], vec![a.clone(), b.clone()]).is_err());
        assert!(Decomposition::new(vec![1.2, -0.2], vec![a, b]).is_err());
    }

    #[test]
    fn state_wire_format() {
        let bell = PureState::max_entangled(2).unwrap();
        let json = serde_json::to_value(&bell).unwrap();
        assert!(json.get("dims").is_some());
        assert!(json.get("amps_re").is_some());
        assert!(json.get("amps_im").is_some());
        let back: PureState = serde_json::from_value(json).unwrap();
        assert!((back.fidelity(&bell) - 1.0).abs() < 1e-14);

        let rho = bell.density();
        let json = serde_json::to_value(&rho).unwrap();
        assert!(json.get("mat_re").is_some());
        let back: DensityMatrix = serde_json::from_value(json).unwrap();
        assert!(frob_norm(&(back.mat() - rho.mat())) < 1e-14);
    }
}
