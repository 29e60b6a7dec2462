//! Kraus-operator channels: the paper's noise models, one- and two-sided
//! application, and the channel image ρ_$ = (I ⊗ $)|φ⟩⟨φ| that controls
//! entanglement evolution.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{self, CMatrix, Subsystem};
use crate::states::{matrix_to_rows, rows_to_matrix, DensityMatrix, PureState};
use crate::tol;

/// ν = exp(-Γt).
pub fn nu(gamma_t: f64) -> f64 {
    (-gamma_t).exp()
}

/// ω = √(1 - ν²).
pub fn omega(gamma_t: f64) -> f64 {
    let v = nu(gamma_t);
    (1.0 - v * v).max(0.0).sqrt()
}

/// Dimensionless parameters of the built-in noise models. Channels are
/// parametrized by the products Γt, never by Γ and t separately.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ChannelParams {
    pub gamma_t: f64,
    pub p: f64,
    pub gamma1_t: f64,
    pub gamma2_t: f64,
}

impl Default for ChannelParams {
    fn default() -> Self {
        Self {
            gamma_t: 0.0,
            p: 0.5,
            gamma1_t: 0.0,
            gamma2_t: 0.0,
        }
    }
}

/// Completely positive map ρ ↦ Σ K_i ρ K_i†.
///
/// Trace-preserving channels satisfy Σ K_i†K_i = I; for filters the sum is
/// only required to sit below the identity, and application renormalizes by
/// the post-selection probability.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(try_from = "ChannelWire", into = "ChannelWire")]
pub struct KrausChannel {
    dim_in: usize,
    dim_out: usize,
    ops: Vec<CMatrix>,
    trace_preserving: bool,
}

impl KrausChannel {
    /// Build a channel from explicit Kraus operators, verifying the
    /// completeness relation the `expect_tp` flag demands.
    pub fn new(ops: Vec<CMatrix>, expect_tp: bool) -> Result<Self> {
        if ops.is_empty() {
            return Err(Error::EmptyKraus);
        }
        let (dim_out, dim_in) = ops[0].dim();
        if ops.iter().any(|k| k.dim() != (dim_out, dim_in)) {
            return Err(Error::DimensionMismatch(
                "Kraus operators have inconsistent shapes".into(),
            ));
        }
        if ops
            .iter()
            .any(|k| k.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()))
        {
            return Err(Error::InvalidParameter(
                "Kraus operator contains non-finite entries".into(),
            ));
        }
        let mut sum = CMatrix::zeros((dim_in, dim_in));
        for k in &ops {
            sum = sum + numerics::dagger(k).dot(k);
        }
        if expect_tp {
            let residual = numerics::max_abs_entry(&(&sum - &numerics::identity(dim_in)));
            if residual > tol::HERMITICITY {
                return Err(Error::CompletenessViolation { residual });
            }
        } else {
            let (vals, _) = numerics::eigh(&sum, tol::HERMITICITY)?;
            let top = vals.last().copied().unwrap_or(0.0);
            if top > 1.0 + tol::HERMITICITY {
                return Err(Error::CompletenessViolation {
                    residual: top - 1.0,
                });
            }
        }
        Ok(Self {
            dim_in,
            dim_out,
            ops,
            trace_preserving: expect_tp,
        })
    }

    /// Phase noise: K₁ = diag(ν, 1), K₂ = diag(ω, 0) with ν = exp(-Γt).
    pub fn phase_noise(gamma_t: f64) -> Result<Self> {
        if gamma_t < 0.0 || !gamma_t.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "gamma_t must be a finite nonnegative number, got {gamma_t}"
            )));
        }
        let v = nu(gamma_t);
        let w = omega(gamma_t);
        let k1 = CMatrix::from_shape_fn((2, 2), |(i, j)| match (i, j) {
            (0, 0) => C64::new(v, 0.0),
            (1, 1) => C64::new(1.0, 0.0),
            _ => C64::new(0.0, 0.0),
        });
        let k2 = CMatrix::from_shape_fn((2, 2), |(i, j)| match (i, j) {
            (0, 0) => C64::new(w, 0.0),
            _ => C64::new(0.0, 0.0),
        });
        Self::new(vec![k1, k2], true)
    }

    /// Generalized amplitude damping: dissipation into a finite-temperature
    /// environment, four Kraus operators weighted by p and 1-p.
    pub fn generalized_amplitude_damping(gamma_t: f64, p: f64) -> Result<Self> {
        if gamma_t < 0.0 || !gamma_t.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "gamma_t must be a finite nonnegative number, got {gamma_t}"
            )));
        }
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidParameter(format!(
                "p must lie in [0, 1], got {p}"
            )));
        }
        let v = nu(gamma_t);
        let w = omega(gamma_t);
        let sp = p.sqrt();
        let sq = (1.0 - p).sqrt();
        let mk = |entries: [[f64; 2]; 2], scale: f64| {
            CMatrix::from_shape_fn((2, 2), |(i, j)| C64::new(entries[i][j] * scale, 0.0))
        };
        let k0 = mk([[1.0, 0.0], [0.0, v]], sp);
        let k1 = mk([[0.0, w], [0.0, 0.0]], sp);
        let k2 = mk([[v, 0.0], [0.0, 1.0]], sq);
        let k3 = mk([[0.0, 0.0], [w, 0.0]], sq);
        Self::new(vec![k0, k1, k2, k3], true)
    }

    /// Single-sided relaxation filter M = diag(exp(-Γ₂t), exp(-Γ₁t), 1)
    /// on a three-level system. Not trace preserving; application
    /// renormalizes by the post-selection probability.
    pub fn relaxation_filter(gamma1_t: f64, gamma2_t: f64) -> Result<Self> {
        if !(gamma2_t >= gamma1_t && gamma1_t >= 0.0) {
            return Err(Error::RateOrdering { gamma1_t, gamma2_t });
        }
        let m = CMatrix::from_shape_fn((3, 3), |(i, j)| {
            if i != j {
                return C64::new(0.0, 0.0);
            }
            let d = match i {
                0 => (-gamma2_t).exp(),
                1 => (-gamma1_t).exp(),
                _ => 1.0,
            };
            C64::new(d, 0.0)
        });
        Self::new(vec![m], false)
    }

    /// Haar-random trace-preserving channel on dimension `d` from a random
    /// isometry into `d · n_kraus`.
    pub fn random(d: usize, n_kraus: usize, seed: u64) -> Result<Self> {
        if d < 1 || n_kraus < 1 {
            return Err(Error::InvalidParameter(format!(
                "need d >= 1 and n_kraus >= 1, got d={d}, n_kraus={n_kraus}"
            )));
        }
        let u = numerics::haar_unitary(d * n_kraus, seed);
        let ops = (0..n_kraus)
            .map(|b| CMatrix::from_shape_fn((d, d), |(i, j)| u[[b * d + i, j]]))
            .collect();
        Self::new(ops, true)
    }

    /// Random TP qubit channel whose Kraus operators are all diagonal
    /// (equivalently Tr(σ_x K_i) = Tr(σ_y K_i) = 0 for every i).
    pub fn random_diagonal(n_kraus: usize, seed: u64) -> Result<Self> {
        let (u, v) = two_random_unit_vectors(n_kraus, seed)?;
        let ops = (0..n_kraus)
            .map(|i| {
                CMatrix::from_shape_fn((2, 2), |(r, c)| match (r, c) {
                    (0, 0) => u[i],
                    (1, 1) => v[i],
                    _ => C64::new(0.0, 0.0),
                })
            })
            .collect();
        Self::new(ops, true)
    }

    /// Random TP qubit channel whose Kraus operators are strictly
    /// off-diagonal (Tr K_i = Tr(σ_z K_i) = 0 for every i).
    pub fn random_offdiagonal(n_kraus: usize, seed: u64) -> Result<Self> {
        let (u, v) = two_random_unit_vectors(n_kraus, seed)?;
        let ops = (0..n_kraus)
            .map(|i| {
                CMatrix::from_shape_fn((2, 2), |(r, c)| match (r, c) {
                    (0, 1) => u[i],
                    (1, 0) => v[i],
                    _ => C64::new(0.0, 0.0),
                })
            })
            .collect();
        Self::new(ops, true)
    }

    pub fn dim_in(&self) -> usize {
        self.dim_in
    }

    pub fn dim_out(&self) -> usize {
        self.dim_out
    }

    pub fn ops(&self) -> &[CMatrix] {
        &self.ops
    }

    pub fn kraus_count(&self) -> usize {
        self.ops.len()
    }

    pub fn is_trace_preserving(&self) -> bool {
        self.trace_preserving
    }

    /// Max entry of |Σ K†K - I|.
    pub fn completeness_residual(&self) -> f64 {
        let mut sum = CMatrix::zeros((self.dim_in, self.dim_in));
        for k in &self.ops {
            sum = sum + numerics::dagger(k).dot(k);
        }
        numerics::max_abs_entry(&(&sum - &numerics::identity(self.dim_in)))
    }

    /// The composition self ∘ other (other acts first).
    pub fn compose(&self, other: &KrausChannel) -> Result<KrausChannel> {
        if self.dim_in != other.dim_out {
            return Err(Error::DimensionMismatch(format!(
                "cannot compose: inner dims {} vs {}",
                self.dim_in, other.dim_out
            )));
        }
        let ops = self
            .ops
            .iter()
            .flat_map(|k| other.ops.iter().map(move |l| k.dot(l)))
            .collect();
        KrausChannel::new(ops, self.trace_preserving && other.trace_preserving)
    }

    /// Apply the channel to one side of a bipartite state. Returns the
    /// evolved state and the pre-normalization trace (the post-selection
    /// probability for a non-TP channel).
    pub fn apply_one_sided(
        &self,
        rho: &DensityMatrix,
        side: Subsystem,
    ) -> Result<(DensityMatrix, f64)> {
        let (n1, n2) = rho.dims();
        let acted = match side {
            Subsystem::First => n1,
            Subsystem::Second => n2,
        };
        if acted != self.dim_in {
            return Err(Error::DimensionMismatch(format!(
                "channel acts on dimension {}, subsystem has dimension {}",
                self.dim_in, acted
            )));
        }
        let out_dims = match side {
            Subsystem::First => (self.dim_out, n2),
            Subsystem::Second => (n1, self.dim_out),
        };
        let n_out = out_dims.0 * out_dims.1;
        let mut acc = CMatrix::zeros((n_out, n_out));
        for k in &self.ops {
            let op = match side {
                Subsystem::First => numerics::kron(k, &numerics::identity(n2)),
                Subsystem::Second => numerics::kron(&numerics::identity(n1), k),
            };
            let term = op.dot(rho.mat()).dot(&numerics::dagger(&op));
            acc = acc + term;
        }
        finish_application(acc, out_dims, self.trace_preserving)
    }

    /// Image of the maximally entangled state, ρ_$ = (I ⊗ $)|φ⟩⟨φ|.
    pub fn image(&self) -> Result<DensityMatrix> {
        if self.dim_in < 2 {
            return Err(Error::DimensionTooSmall(self.dim_in));
        }
        let phi = PureState::max_entangled(self.dim_in)?;
        let (rho, _) = self.apply_one_sided(&phi.density(), Subsystem::Second)?;
        Ok(rho)
    }
}

/// Apply $₁ ⊗ $₂. Returns the evolved state and the pre-normalization
/// trace.
pub fn apply_two_sided(
    rho: &DensityMatrix,
    ch1: &KrausChannel,
    ch2: &KrausChannel,
) -> Result<(DensityMatrix, f64)> {
    let (n1, n2) = rho.dims();
    if ch1.dim_in() != n1 || ch2.dim_in() != n2 {
        return Err(Error::DimensionMismatch(format!(
            "channels act on {}x{}, state is {}x{}",
            ch1.dim_in(),
            ch2.dim_in(),
            n1,
            n2
        )));
    }
    let out_dims = (ch1.dim_out(), ch2.dim_out());
    let n_out = out_dims.0 * out_dims.1;
    let mut acc = CMatrix::zeros((n_out, n_out));
    for k in ch1.ops() {
        for l in ch2.ops() {
            let op = numerics::kron(k, l);
            acc = acc + op.dot(rho.mat()).dot(&numerics::dagger(&op));
        }
    }
    let tp = ch1.is_trace_preserving() && ch2.is_trace_preserving();
    finish_application(acc, out_dims, tp)
}

fn finish_application(
    acc: CMatrix,
    out_dims: (usize, usize),
    trace_preserving: bool,
) -> Result<(DensityMatrix, f64)> {
    let probability = numerics::trace(&acc).re;
    if trace_preserving {
        Ok((
            DensityMatrix::from_parts_unchecked(out_dims, acc),
            probability,
        ))
    } else {
        if probability < 1e-14 {
            return Err(Error::ZeroProbability { probability });
        }
        let renorm = acc.mapv(|z| z / probability);
        Ok((
            DensityMatrix::from_parts_unchecked(out_dims, renorm),
            probability,
        ))
    }
}

fn two_random_unit_vectors(n: usize, seed: u64) -> Result<(Vec<C64>, Vec<C64>)> {
    if n < 1 {
        return Err(Error::InvalidParameter("need n_kraus >= 1".into()));
    }
    let mut rng = numerics::rng_from_seed(seed);
    let draw = |rng: &mut rand_chacha::ChaCha8Rng| {
        let g = numerics::complex_gaussian_matrix(rng, n, 1);
        let norm = g.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        g.iter().map(|z| z / norm).collect::<Vec<C64>>()
    };
    let u = draw(&mut rng);
    let v = draw(&mut rng);
    Ok((u, v))
}

// ---------------------------------------------------------------------------
// JSON wire format
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct KrausWire {
    re: Vec<Vec<f64>>,
    im: Vec<Vec<f64>>,
}

#[derive(Serialize, Deserialize)]
struct ChannelWire {
    dim_in: usize,
    dim_out: usize,
    trace_preserving: bool,
    kraus: Vec<KrausWire>,
}

impl TryFrom<ChannelWire> for KrausChannel {
    type Error = Error;

    fn try_from(w: ChannelWire) -> Result<Self> {
        let ops = w
            .kraus
            .iter()
            .map(|k| rows_to_matrix(&k.re, &k.im))
            .collect::<Result<Vec<_>>>()?;
        let ch = KrausChannel::new(ops, w.trace_preserving)?;
        if ch.dim_in() != w.dim_in || ch.dim_out() != w.dim_out {
            return Err(Error::DimensionMismatch(format!(
                "declared dims ({}, {}) do not match Kraus shapes ({}, {})",
                w.dim_in,
                w.dim_out,
                ch.dim_in(),
                ch.dim_out()
            )));
        }
        Ok(ch)
    }
}

impl From<KrausChannel> for ChannelWire {
    fn from(ch: KrausChannel) -> Self {
        let kraus = ch
            .ops
            .iter()
            .map(|k| {
                let (re, im) = matrix_to_rows(k);
                KrausWire { re, im }
            })
            .collect();
        ChannelWire {
            dim_in: ch.dim_in,
            dim_out: ch.dim_out,
            trace_preserving: ch.trace_preserving,
            kraus,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{frob_norm, identity};

    #[test]
    fn nu_omega_pythagoras() {
        for gt in [0.0, 0.1, 0.3, 1.0, 5.0] {
            let (v, w) = (nu(gt), omega(gt));
            assert!(v > 0.0 && v <= 1.0);
            assert!((v * v + w * w - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn make_channel_identity_and_violation() {
        let ch = KrausChannel::new(vec![identity(2)], true).unwrap();
        assert!(ch.is_trace_preserving());
        assert_eq!(ch.kraus_count(), 1);

        let scaled = identity(2).mapv(|z| z * 0.9);
        assert!(matches!(
            KrausChannel::new(vec![scaled], true),
            Err(Error::CompletenessViolation { .. })
        ));

        assert!(matches!(
            KrausChannel::new(vec![], true),
            Err(Error::EmptyKraus)
        ));
    }

    #[test]
    fn phase_noise_kraus_values() {
        let gt = std::f64::consts::LN_2;
        let ch = KrausChannel::phase_noise(gt).unwrap();
        assert!(ch.completeness_residual() < 1e-14);
        assert!((ch.ops()[0][[0, 0]].re - 0.5).abs() < 1e-14);
        assert!((ch.ops()[1][[0, 0]].re - 0.75f64.sqrt()).abs() < 1e-14);

        // Γt = 0 acts as the identity
        let ch = KrausChannel::phase_noise(0.0).unwrap();
        let rho = PureState::random((2, 2), 3).density();
        let (out, p) = ch.apply_one_sided(&rho, Subsystem::Second).unwrap();
        assert!(frob_norm(&(out.mat() - rho.mat())) < 1e-14);
        assert!((p - 1.0).abs() < 1e-14);
    }

    #[test]
    fn gad_is_trace_preserving_and_identity_at_zero() {
        for p in [0.0, 0.3, 0.5, 1.0] {
            let ch = KrausChannel::generalized_amplitude_damping(0.7, p).unwrap();
            assert!(ch.completeness_residual() < 1e-12);
        }
        let ch = KrausChannel::generalized_amplitude_damping(0.0, 0.5).unwrap();
        let rho = PureState::random((2, 2), 4).density();
        let (out, _) = ch.apply_one_sided(&rho, Subsystem::Second).unwrap();
        assert!(frob_norm(&(out.mat() - rho.mat())) < 1e-14);
    }

    #[test]
    fn relaxation_filter_matrix() {
        let ch = KrausChannel::relaxation_filter(0.0, 0.0).unwrap();
        assert!(frob_norm(&(&ch.ops()[0] - &identity(3))) < 1e-15);
        assert!(!ch.is_trace_preserving());

        let ch = KrausChannel::relaxation_filter(0.5, 1.0).unwrap();
        let m = &ch.ops()[0];
        assert!((m[[0, 0]].re - (-1.0f64).exp()).abs() < 1e-15);
        assert!((m[[1, 1]].re - (-0.5f64).exp()).abs() < 1e-15);
        assert!((m[[2, 2]].re - 1.0).abs() < 1e-15);

        let ch = KrausChannel::relaxation_filter(0.3, 0.3).unwrap();
        let m = &ch.ops()[0];
        assert!((m[[0, 0]].re - m[[1, 1]].re).abs() < 1e-15);

        assert!(matches!(
            KrausChannel::relaxation_filter(1.0, 0.5),
            Err(Error::RateOrdering { .. })
        ));
    }

    #[test]
    fn random_channel_completeness_and_image() {
        for n_kraus in 1..=4 {
            let ch = KrausChannel::random(2, n_kraus, 17 + n_kraus as u64).unwrap();
            assert!(ch.completeness_residual() < 1e-12);
            let image = ch.image().unwrap();
            // valid density matrix: accepted by the validating constructor
            assert!(DensityMatrix::new(image.dims(), image.mat().clone()).is_ok());
        }
        // single Kraus operator means a unitary channel and a pure image
        let ch = KrausChannel::random(3, 1, 5).unwrap();
        let u = &ch.ops()[0];
        let gram = numerics::dagger(u).dot(u);
        assert!(frob_norm(&(&gram - &identity(3))) < 1e-12);
        assert!(ch.image().unwrap().purity() > 1.0 - 1e-10);
    }

    #[test]
    fn diagonal_and_offdiagonal_families() {
        let ch = KrausChannel::random_diagonal(3, 8).unwrap();
        assert!(ch.completeness_residual() < 1e-12);
        for k in ch.ops() {
            assert!(k[[0, 1]].norm() == 0.0 && k[[1, 0]].norm() == 0.0);
        }
        let ch = KrausChannel::random_offdiagonal(3, 9).unwrap();
        assert!(ch.completeness_residual() < 1e-12);
        for k in ch.ops() {
            assert!(k[[0, 0]].norm() == 0.0 && k[[1, 1]].norm() == 0.0);
        }
    }

    #[test]
    fn phase_noise_on_bell_gives_x_state() {
        let gt = 0.4;
        let bell = PureState::max_entangled(2).unwrap();
        let ch = KrausChannel::phase_noise(gt).unwrap();
        let (out, _) = ch
            .apply_one_sided(&bell.density(), Subsystem::Second)
            .unwrap();
        let m = out.mat();
        assert!((m[[0, 0]].re - 0.5).abs() < 1e-14);
        assert!((m[[3, 3]].re - 0.5).abs() < 1e-14);
        assert!((m[[0, 3]].re - nu(gt) / 2.0).abs() < 1e-14);
        assert!(m[[1, 1]].norm() < 1e-14);
    }

    #[test]
    fn relaxation_drives_nmr_state_to_ket20() {
        let r3 = 1.0 / 3f64.sqrt();
        let mut raw = CMatrix::zeros((3, 3));
        raw[[0, 2]] = C64::new(r3, 0.0);
        raw[[1, 1]] = C64::new(-r3, 0.0);
        raw[[2, 0]] = C64::new(r3, 0.0);
        let psi = PureState::from_amplitudes((3, 3), raw, false).unwrap();
        let ch = KrausChannel::relaxation_filter(10.0, 20.0).unwrap();
        let (out, p) = ch
            .apply_one_sided(&psi.density(), Subsystem::First)
            .unwrap();
        assert!(p > 0.0 && p < 1.0);
        let mut ket20 = CMatrix::zeros((3, 3));
        ket20[[2, 0]] = C64::new(1.0, 0.0);
        let target = PureState::from_amplitudes((3, 3), ket20, false).unwrap();
        assert!(out.fidelity_with_pure(&target) > 1.0 - 1e-6);
    }

    #[test]
    fn two_sided_consistency() {
        let rho = PureState::random((2, 2), 31).density();
        let id = KrausChannel::new(vec![identity(2)], true).unwrap();
        let (out, _) = apply_two_sided(&rho, &id, &id).unwrap();
        assert!(frob_norm(&(out.mat() - rho.mat())) < 1e-14);

        let ch = KrausChannel::random(2, 3, 77).unwrap();
        let (two, _) = apply_two_sided(&rho, &ch, &id).unwrap();
        let (one, _) = ch.apply_one_sided(&rho, Subsystem::First).unwrap();
        assert!(frob_norm(&(two.mat() - one.mat())) < 1e-14);

        // phase noise on both sides of the Bell state: off-diagonal ν₁ν₂/2
        let bell = PureState::max_entangled(2).unwrap();
        let p1 = KrausChannel::phase_noise(0.3).unwrap();
        let p2 = KrausChannel::phase_noise(0.9).unwrap();
        let (out, _) = apply_two_sided(&bell.density(), &p1, &p2).unwrap();
        let expect = nu(0.3) * nu(0.9) / 2.0;
        assert!((out.mat()[[0, 3]].re - expect).abs() < 1e-14);
    }

    #[test]
    fn channel_wire_roundtrip_and_dims_check() {
        let ch = KrausChannel::phase_noise(0.25).unwrap();
        let json = serde_json::to_value(&ch).unwrap();
        assert!(json.get("kraus").is_some());
        assert_eq!(json["dim_in"], 2);
        let back: KrausChannel = serde_json::from_value(json).unwrap();
        assert_eq!(back.kraus_count(), 2);
        assert!(back.is_trace_preserving());

        let bad = serde_json::json!({
            "dim_in": 3,
            "dim_out": 3,
            "trace_preserving": true,
            "kraus": [{"re": [[1.0, 0.0], [0.0, 1.0]], "im": [[0.0, 0.0], [0.0, 0.0]]}]
        });
        assert!(serde_json::from_value::<KrausChannel>(bad).is_err());
    }
}
