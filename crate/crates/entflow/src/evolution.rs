//! Entanglement-evolution laws for one-sided noisy channels.
//!
//! Everything here reduces the dynamics to the channel image
//! ρ_$ = (I ⊗ $)|φ⟩⟨φ|:
//!
//! * pure image — the evolved concurrence matrix is the true matrix
//!   product C′ = (N₂/2)·C[χ]·C[ρ_$];
//! * N₁ ⊗ 2 initial state, arbitrary channel — the scalar factorization
//!   C[ρ′] = C[χ]·C[ρ_$];
//! * otherwise — Cauchy-type upper bounds (N₂/2)·C·C[ρ_$] for pure and
//!   mixed initial states;
//! * two-sided qubit channels — equalities for Schmidt-form states when
//!   one channel has all-diagonal or all-off-diagonal Kraus operators.
//!
//! Each law comes with an empirical verifier that recomputes both sides
//! from scratch and reports the gap; `sweeps` drives them over seeded
//! random case families.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::channels::{apply_two_sided, KrausChannel};
use crate::concurrence::{
    concurrence_entries, convex_roof_estimate, generator_pairs,
    iconcurrence_pure, wootters_concurrence, ConcurrenceMatrix, RoofBudget,
};
use crate::error::{Error, Result};
use crate::numerics::{self, Subsystem};
use crate::states::{Decomposition, DensityMatrix, PureState};
use crate::tol;

/// How the "direct" side of a comparison was computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DirectMethod {
    #[serde(rename = "wootters-exact")]
    WoottersExact,
    #[serde(rename = "pure-exact")]
    PureExact,
    #[serde(rename = "roof-estimate")]
    RoofEstimate,
}

/// Outcome of one law-vs-direct comparison.
///
/// `gap = direct - predicted`. For exact methods the pass window is
/// symmetric; for the roof estimate it is one-sided, since the estimator
/// upper-bounds the quantity the law pins exactly.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EvolutionReport {
    pub predicted: f64,
    pub direct: f64,
    pub method: DirectMethod,
    pub gap: f64,
    pub pass: bool,
    pub seed: Option<u64>,
    pub dims: (usize, usize),
    #[serde(skip)]
    pub tolerance_used: f64,
}

impl EvolutionReport {
    /// Both sides exact: pass ⟺ |gap| ≤ tolerance.
    pub fn exact(
        predicted: f64,
        direct: f64,
        method: DirectMethod,
        dims: (usize, usize),
    ) -> Self {
        let gap = direct - predicted;
        Self {
            predicted,
            direct,
            method,
            gap,
            pass: gap.abs() <= tol::EXACT_LAW,
            seed: None,
            dims,
            tolerance_used: tol::EXACT_LAW,
        }
    }

    /// Direct side is a roof estimate: pass ⟺ gap ∈ [-1e-9, 5e-3].
    pub fn estimator(predicted: f64, direct: f64, dims: (usize, usize)) -> Self {
        let gap = direct - predicted;
        Self {
            predicted,
            direct,
            method: DirectMethod::RoofEstimate,
            gap,
            pass: gap >= tol::ESTIMATOR_LOWER && gap <= tol::ESTIMATOR_UPPER,
            seed: None,
            dims,
            tolerance_used: tol::ESTIMATOR_UPPER,
        }
    }

    /// Predicted side is an upper bound: pass ⟺ direct ≤ bound + tol.
    pub fn upper_bound(
        bound: f64,
        direct: f64,
        method: DirectMethod,
        dims: (usize, usize),
    ) -> Self {
        let gap = direct - bound;
        Self {
            predicted: bound,
            direct,
            method,
            gap,
            pass: gap <= tol::EXACT_LAW,
            seed: None,
            dims,
            tolerance_used: tol::EXACT_LAW,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }
}

/// Theorem prediction for a pure channel image: the unnormalized evolved
/// concurrence matrix C′ = (N₂/2)·C[χ]·C[ψ_$].
///
/// The entries equal those of the concurrence matrix of
/// (M_χ ⊗ I)|ψ_$⟩ before renormalization; the scalar concurrence of the
/// normalized evolved state is ‖C′‖_F divided by ⟨ψ′|ψ′⟩.
pub fn predict_matrix_pure_channel(
    chi: &PureState,
    image: &DensityMatrix,
) -> Result<ConcurrenceMatrix> {
    if image.n1() != chi.n2() {
        return Err(Error::DimensionMismatch(format!(
            "image lives on {}x{}, initial state has N₂ = {}",
            image.n1(),
            image.n2(),
            chi.n2()
        )));
    }
    let purity = image.purity();
    if purity < 1.0 - tol::EXACT_LAW {
        return Err(Error::ImageNotPure { purity });
    }
    let (_, psi_image) = image.dominant_eigenvector()?;
    let c_chi = concurrence_entries(chi.amps());
    let c_img = concurrence_entries(psi_image.amps());
    let scale = chi.n2() as f64 / 2.0;
    let product = c_chi.dot(&c_img).mapv(|z| z * scale);
    Ok(ConcurrenceMatrix::from_parts(
        generator_pairs(chi.n1()),
        generator_pairs(image.n2()),
        product,
    ))
}

/// Factorization law for N₁ ⊗ 2: the evolved concurrence is
/// c_initial · C[ρ_$], with ρ_$ the 2 ⊗ 2 channel image.
pub fn predict_factorized(c_initial: f64, image: &DensityMatrix) -> Result<f64> {
    if image.dims() != (2, 2) {
        return Err(Error::DimensionMismatch(format!(
            "factorization law needs a 2x2 image, got {}x{}",
            image.n1(),
            image.n2()
        )));
    }
    Ok(c_initial * wootters_concurrence(image)?)
}

/// Cauchy upper bound for a pure initial state and arbitrary channel:
/// C[ρ′] ≤ (N₂/2)·C[χ]·C[ρ_$]. For N₂ = 2 this is the factorization law.
pub fn bound_pure_initial(chi: &PureState, image_concurrence: f64) -> f64 {
    (chi.n2() as f64 / 2.0) * iconcurrence_pure(chi) * image_concurrence
}

/// Same bound with a mixed initial state of concurrence `c0`.
pub fn bound_mixed_initial(c0: f64, image_concurrence: f64, n2: usize) -> f64 {
    (n2 as f64 / 2.0) * c0 * image_concurrence
}

/// Decomposition of the evolved state induced by pushing each branch of
/// an image decomposition through the initial state's filter.
#[derive(Debug, Clone)]
pub struct InducedDecomposition {
    pub decomposition: Decomposition,
    /// Total post-selection probability Σ p_i ‖(M_χ ⊗ I)|ψ_i⟩‖².
    pub post_selection_probability: f64,
    /// Branches annihilated by the filter and dropped with weight zero.
    pub dropped_branches: usize,
}

/// Push a decomposition of the channel image through (M_χ ⊗ I). Branch
/// weights become q_i ∝ p_i‖(M_χ ⊗ I)|ψ_i⟩‖²; the result decomposes the
/// renormalized evolved state.
pub fn induced_decomposition(
    chi: &PureState,
    dec: &Decomposition,
) -> Result<InducedDecomposition> {
    let (d1, d2) = dec.dims();
    if d1 != chi.n2() {
        return Err(Error::DimensionMismatch(format!(
            "decomposition states live on {d1}x{d2}, filter expects first factor {}",
            chi.n2()
        )));
    }
    let filter = chi.filter_operator();
    let mut weights = Vec::new();
    let mut states = Vec::new();
    let mut dropped = 0usize;
    for (p, psi) in dec.weights().iter().zip(dec.states()) {
        let pushed = filter.apply_to_state(psi);
        let norm_sq: f64 = pushed.iter().map(|z| z.norm_sqr()).sum();
        let q = p * norm_sq;
        if q < 1e-14 {
            dropped += 1;
            continue;
        }
        weights.push(q);
        states.push(PureState::from_amplitudes(
            (chi.n1(), d2),
            pushed,
            true,
        )?);
    }
    let total: f64 = weights.iter().sum();
    if total < 1e-14 {
        return Err(Error::ZeroProbability { probability: total });
    }
    for w in &mut weights {
        *w /= total;
    }
    Ok(InducedDecomposition {
        decomposition: Decomposition::new(weights, states)?,
        post_selection_probability: total,
        dropped_branches: dropped,
    })
}

/// Concurrence of a mixed state by the strongest applicable method:
/// pure-exact when ρ is (numerically) a projector, Wootters when 2 ⊗ 2,
/// roof estimate otherwise.
pub fn direct_concurrence(
    rho: &DensityMatrix,
    budget: &RoofBudget,
) -> Result<(f64, DirectMethod)> {
    if rho.is_pure(tol::EXACT_LAW) {
        let (_, psi) = rho.dominant_eigenvector()?;
        Ok((iconcurrence_pure(&psi), DirectMethod::PureExact))
    } else if rho.dims() == (2, 2) {
        Ok((wootters_concurrence(rho)?, DirectMethod::WoottersExact))
    } else {
        Ok((
            convex_roof_estimate(rho, budget)?.value,
            DirectMethod::RoofEstimate,
        ))
    }
}

/// Verify the factorization/theorem prediction for one (state, channel)
/// pair: evolve directly, compute the evolved concurrence by the
/// strongest available method, and compare against the applicable law.
pub fn verify_factorization(
    chi: &PureState,
    ch: &KrausChannel,
    budget: &RoofBudget,
) -> Result<EvolutionReport> {
    let (evolved, _) = ch.apply_one_sided(&chi.density(), Subsystem::Second)?;
    let image = ch.image()?;

    let predicted = if chi.n2() == 2 && ch.dim_out() == 2 {
        // corollary scope: arbitrary channel on a qubit side
        iconcurrence_pure(chi) * wootters_concurrence(&image)?
    } else if image.is_pure(tol::EXACT_LAW) {
        // theorem scope: pure image, any dims
        let cm = predict_matrix_pure_channel(chi, &image)?;
        let (_, psi_image) = image.dominant_eigenvector()?;
        let pushed = chi.filter_operator().apply_to_state(&psi_image);
        let norm_sq: f64 = pushed.iter().map(|z| z.norm_sqr()).sum();
        if norm_sq < 1e-14 {
            return Err(Error::ZeroProbability {
                probability: norm_sq,
            });
        }
        cm.norm() / norm_sq
    } else {
        return Err(Error::OutOfScope {
            n1: chi.n1(),
            n2: chi.n2(),
        });
    };

    let (direct, method) = direct_concurrence(&evolved, budget)?;
    Ok(match method {
        DirectMethod::RoofEstimate => EvolutionReport::estimator(predicted, direct, evolved.dims()),
        _ => EvolutionReport::exact(predicted, direct, method, evolved.dims()),
    })
}

/// Which Schmidt-form two-qubit family the two-sided laws address.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SchmidtFamily {
    /// a|00⟩ + b|11⟩
    Correlated,
    /// a|01⟩ + b|10⟩
    AntiCorrelated,
}

/// Build a|00⟩ + b|11⟩ or a|01⟩ + b|10⟩.
pub fn schmidt_state(a: C64, b: C64, family: SchmidtFamily) -> Result<PureState> {
    let mut amps = crate::numerics::CMatrix::zeros((2, 2));
    match family {
        SchmidtFamily::Correlated => {
            amps[[0, 0]] = a;
            amps[[1, 1]] = b;
        }
        SchmidtFamily::AntiCorrelated => {
            amps[[0, 1]] = a;
            amps[[1, 0]] = b;
        }
    }
    PureState::from_amplitudes((2, 2), amps, false)
}

/// Two-sided equality check. For the correlated family the prediction is
/// C[($₁ ⊗ $₂)|φ⟩⟨φ|]·C[χ] (valid when every Kraus operator of $₁ is
/// diagonal, or strictly off-diagonal); for the anti-correlated family it
/// is the composed-channel form C[(I ⊗ $₂$₁)|φ⟩⟨φ|]·C[χ] (strictly
/// off-diagonal $₁).
pub fn verify_two_sided(
    a: C64,
    b: C64,
    family: SchmidtFamily,
    ch1: &KrausChannel,
    ch2: &KrausChannel,
) -> Result<EvolutionReport> {
    let chi = schmidt_state(a, b, family)?;
    let c0 = iconcurrence_pure(&chi);
    let (evolved, _) = apply_two_sided(&chi.density(), ch1, ch2)?;
    let direct = wootters_concurrence(&evolved)?;

    let predicted = match family {
        SchmidtFamily::Correlated => {
            let phi = PureState::max_entangled(2)?;
            let (img, _) = apply_two_sided(&phi.density(), ch1, ch2)?;
            wootters_concurrence(&img)? * c0
        }
        SchmidtFamily::AntiCorrelated => {
            let composed = ch2.compose(ch1)?;
            let img = composed.image()?;
            wootters_concurrence(&img)? * c0
        }
    };
    Ok(EvolutionReport::exact(
        predicted,
        direct,
        DirectMethod::WoottersExact,
        (2, 2),
    ))
}

/// Seeded verification sweeps over random case families. The CLI and the
/// acceptance suite both drive these.
pub mod sweeps {
    use super::*;
    use rand::Rng;

    /// Aggregate of one sweep; per-case reports are kept for the JSON
    /// verification report.
    #[derive(Debug, Clone, Serialize)]
    pub struct SweepOutcome {
        pub suite: String,
        pub cases: usize,
        pub seed: u64,
        pub passed: usize,
        pub failed: usize,
        pub max_abs_gap: f64,
        pub min_gap: f64,
        pub max_gap: f64,
        pub reports: Vec<EvolutionReport>,
    }

    impl SweepOutcome {
        pub fn all_pass(&self) -> bool {
            self.failed == 0
        }

        fn collect(suite: &str, seed: u64, reports: Vec<EvolutionReport>) -> Self {
            let passed = reports.iter().filter(|r| r.pass).count();
            let failed = reports.len() - passed;
            let max_abs_gap = reports.iter().map(|r| r.gap.abs()).fold(0.0, f64::max);
            let min_gap = reports.iter().map(|r| r.gap).fold(f64::INFINITY, f64::min);
            let max_gap = reports
                .iter()
                .map(|r| r.gap)
                .fold(f64::NEG_INFINITY, f64::max);
            SweepOutcome {
                suite: suite.to_string(),
                cases: reports.len(),
                seed,
                passed,
                failed,
                max_abs_gap,
                min_gap,
                max_gap,
                reports,
            }
        }
    }

    /// Factorization law at 2 ⊗ 2: random pure states against random TP
    /// channels with 1..=4 Kraus operators. Both sides exact.
    pub fn corollary_sweep(cases: usize, seed: u64) -> Result<SweepOutcome> {
        let mut reports = Vec::with_capacity(cases);
        for i in 0..cases {
            let case_seed = numerics::derive_seed(seed, i as u64);
            let mut rng = numerics::rng_from_seed(case_seed);
            let chi = PureState::random_with(&mut rng, (2, 2));
            let n_kraus = rng.gen_range(1..=4);
            let ch = KrausChannel::random(2, n_kraus, numerics::derive_seed(case_seed, 1))?;
            let budget = RoofBudget::new(numerics::derive_seed(case_seed, 2));
            let report = verify_factorization(&chi, &ch, &budget)?.with_seed(case_seed);
            reports.push(report);
        }
        Ok(SweepOutcome::collect("corollary", seed, reports))
    }

    /// Concurrence-matrix product law: random pure states over dims
    /// {2,3,4} x {2,3,4} against random single-Kraus contractions. The gap
    /// recorded is the Frobenius distance between the predicted and the
    /// directly computed (unnormalized) concurrence matrices.
    pub fn theorem_sweep(cases: usize, seed: u64) -> Result<SweepOutcome> {
        let dims_cycle = [2usize, 3, 4];
        let mut reports = Vec::with_capacity(cases);
        for i in 0..cases {
            let case_seed = numerics::derive_seed(seed, i as u64);
            let mut rng = numerics::rng_from_seed(case_seed);
            let n1 = dims_cycle[i % 3];
            let n2 = dims_cycle[(i / 3) % 3];
            let chi = PureState::random_with(&mut rng, (n1, n2));
            let ch = random_contraction(n2, numerics::derive_seed(case_seed, 1))?;
            let image = ch.image()?;

            let predicted = predict_matrix_pure_channel(&chi, &image)?;
            let (_, psi_image) = image.dominant_eigenvector()?;
            let pushed = chi.filter_operator().apply_to_state(&psi_image);
            let direct_entries = concurrence_entries(&pushed);
            let gap = numerics::frob_norm(&(predicted.entries() - &direct_entries));

            let norm_sq: f64 = pushed.iter().map(|z| z.norm_sqr()).sum();
            let report = EvolutionReport {
                predicted: predicted.norm() / norm_sq,
                direct: numerics::frob_norm(&direct_entries) / norm_sq,
                method: DirectMethod::PureExact,
                gap,
                pass: gap <= tol::EXACT_LAW,
                seed: Some(case_seed),
                dims: (n1, n2),
                tolerance_used: tol::EXACT_LAW,
            };
            reports.push(report);
        }
        Ok(SweepOutcome::collect("theorem", seed, reports))
    }

    /// Mixed-initial-state bound at 2 ⊗ 2:
    /// C[(I ⊗ $)ρ₀] ≤ C[ρ₀]·C[ρ_$] on random mixed states and TP channels.
    pub fn bounds_sweep(cases: usize, seed: u64) -> Result<SweepOutcome> {
        let mut reports = Vec::with_capacity(cases);
        for i in 0..cases {
            let case_seed = numerics::derive_seed(seed, i as u64);
            let mut rng = numerics::rng_from_seed(case_seed);
            let rank = rng.gen_range(1..=4);
            let rho0 = DensityMatrix::random_with(&mut rng, (2, 2), rank)
                .expect("rank is within 1..=4");
            let n_kraus = rng.gen_range(1..=4);
            let ch = KrausChannel::random(2, n_kraus, numerics::derive_seed(case_seed, 1))?;

            let (evolved, _) = ch.apply_one_sided(&rho0, Subsystem::Second)?;
            let direct = wootters_concurrence(&evolved)?;
            let c0 = wootters_concurrence(&rho0)?;
            let image_c = wootters_concurrence(&ch.image()?)?;
            let bound = bound_mixed_initial(c0, image_c, 2);

            reports.push(
                EvolutionReport::upper_bound(bound, direct, DirectMethod::WoottersExact, (2, 2))
                    .with_seed(case_seed),
            );
        }
        Ok(SweepOutcome::collect("bounds", seed, reports))
    }

    /// Two-sided equalities: even cases run the correlated family against
    /// diagonal-Kraus $₁, odd cases the anti-correlated family against
    /// strictly off-diagonal $₁ with the composed-channel prediction.
    pub fn two_sided_sweep(cases: usize, seed: u64) -> Result<SweepOutcome> {
        let mut reports = Vec::with_capacity(cases);
        for i in 0..cases {
            let case_seed = numerics::derive_seed(seed, i as u64);
            let mut rng = numerics::rng_from_seed(case_seed);
            let theta = rng.gen_range(0.0..std::f64::consts::FRAC_PI_2);
            let a = C64::new(theta.cos(), 0.0);
            let b = C64::new(theta.sin(), 0.0);
            let n1 = rng.gen_range(1..=4);
            let n2 = rng.gen_range(1..=4);
            let ch2 = KrausChannel::random(2, n2, numerics::derive_seed(case_seed, 1))?;
            let report = if i % 2 == 0 {
                let ch1 =
                    KrausChannel::random_diagonal(n1, numerics::derive_seed(case_seed, 2))?;
                verify_two_sided(a, b, SchmidtFamily::Correlated, &ch1, &ch2)?
            } else {
                let ch1 =
                    KrausChannel::random_offdiagonal(n1, numerics::derive_seed(case_seed, 2))?;
                verify_two_sided(a, b, SchmidtFamily::AntiCorrelated, &ch1, &ch2)?
            };
            reports.push(report.with_seed(case_seed));
        }
        Ok(SweepOutcome::collect("two-sided", seed, reports))
    }

    /// Factorization at N₁ ⊗ 2 with N₁ ∈ {3, 4}: the direct side falls
    /// back to the convex-roof estimator, so the pass window is the
    /// one-sided estimator window.
    pub fn roof_factorization_sweep(cases: usize, seed: u64) -> Result<SweepOutcome> {
        let mut reports = Vec::with_capacity(cases);
        for i in 0..cases {
            let case_seed = numerics::derive_seed(seed, i as u64);
            let mut rng = numerics::rng_from_seed(case_seed);
            let n1 = if i % 2 == 0 { 3 } else { 4 };
            let chi = PureState::random_with(&mut rng, (n1, 2));
            let n_kraus = rng.gen_range(2..=4);
            let ch = KrausChannel::random(2, n_kraus, numerics::derive_seed(case_seed, 1))?;
            let budget = RoofBudget::new(numerics::derive_seed(case_seed, 2));
            let report = verify_factorization(&chi, &ch, &budget)?.with_seed(case_seed);
            reports.push(report);
        }
        Ok(SweepOutcome::collect("roof-factorization", seed, reports))
    }

    fn random_contraction(n: usize, seed: u64) -> Result<KrausChannel> {
        let mut rng = numerics::rng_from_seed(seed);
        let g = numerics::complex_gaussian_matrix(&mut rng, n, n);
        let sv = numerics::singular_values(&g)?;
        let top = sv.first().copied().unwrap_or(1.0).max(1e-12);
        let k = g.mapv(|z| z / (top * 1.02));
        KrausChannel::new(vec![k], false)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::concurrence::concurrence_matrix;
    use crate::numerics::{frob_norm, identity, CMatrix};

    fn identity_channel(n: usize) -> KrausChannel {
        KrausChannel::new(vec![identity(n)], true).unwrap()
    }

    #[test]
    fn identity_image_reproduces_initial_matrix() {
        for dims in [(2usize, 2usize), (3, 3), (4, 3)] {
            let chi = PureState::random(dims, 11 + dims.0 as u64);
            let image = identity_channel(dims.1).image().unwrap();
            let pred = predict_matrix_pure_channel(&chi, &image).unwrap();
            let direct = concurrence_matrix(&chi);
            assert!(
                pred.distance(&direct) < 1e-12,
                "identity channel must leave the concurrence matrix alone"
            );
        }
    }

    #[test]
    fn theorem_matches_direct_for_single_kraus() {
        let chi = PureState::max_entangled(2).unwrap();
        let v = 0.63;
        let mut k = CMatrix::zeros((2, 2));
        k[[0, 0]] = C64::new(v, 0.0);
        k[[1, 1]] = C64::new(1.0, 0.0);
        let ch = KrausChannel::new(vec![k], false).unwrap();
        let image = ch.image().unwrap();

        let pred = predict_matrix_pure_channel(&chi, &image).unwrap();
        let (_, psi) = image.dominant_eigenvector().unwrap();
        let pushed = chi.filter_operator().apply_to_state(&psi);
        let direct = concurrence_entries(&pushed);
        assert!(frob_norm(&(pred.entries() - &direct)) < 1e-10);

        // scalar check: evolved Bell through diag(ν,1) has C = 2ν/(1+ν²)
        let norm_sq: f64 = pushed.iter().map(|z| z.norm_sqr()).sum();
        let c = pred.norm() / norm_sq;
        assert!((c - 2.0 * v / (1.0 + v * v)).abs() < 1e-12);
    }

    #[test]
    fn separable_state_stays_separable() {
        let mut raw = CMatrix::zeros((3, 3));
        raw[[1, 2]] = C64::new(1.0, 0.0);
        let chi = PureState::from_amplitudes((3, 3), raw, false).unwrap();
        let ch = KrausChannel::random(3, 1, 42).unwrap();
        let pred = predict_matrix_pure_channel(&chi, &ch.image().unwrap()).unwrap();
        assert!(pred.norm() < 1e-12);
    }

    #[test]
    fn rejects_mixed_image() {
        let chi = PureState::random((2, 2), 1);
        let ch = KrausChannel::phase_noise(0.8).unwrap();
        assert!(matches!(
            predict_matrix_pure_channel(&chi, &ch.image().unwrap()),
            Err(Error::ImageNotPure { .. })
        ));
    }

    #[test]
    fn factorized_prediction_values() {
        let image = KrausChannel::phase_noise(std::f64::consts::LN_2)
            .unwrap()
            .image()
            .unwrap();
        let pred = predict_factorized(1.0, &image).unwrap();
        assert!((pred - 0.5).abs() < 1e-12);

        let id_image = identity_channel(2).image().unwrap();
        assert!((predict_factorized(0.7, &id_image).unwrap() - 0.7).abs() < 1e-12);

        let big = PureState::max_entangled(3).unwrap().density();
        assert!(predict_factorized(1.0, &big).is_err());
    }

    #[test]
    fn pure_bound_reduces_and_dominates() {
        // N₂ = 2: (N₂/2) = 1, bound is the factorization prediction
        let chi = PureState::random((3, 2), 21);
        let ch = KrausChannel::random(2, 3, 22).unwrap();
        let image_c = wootters_concurrence(&ch.image().unwrap()).unwrap();
        let bound = bound_pure_initial(&chi, image_c);
        let pred = predict_factorized(iconcurrence_pure(&chi), &ch.image().unwrap()).unwrap();
        assert!((bound - pred).abs() < 1e-12);

        // unitary channel on 3⊗3: bound (3/2)·(4/3)·... is not tight
        let chi = PureState::max_entangled(3).unwrap();
        let ch = KrausChannel::random(3, 1, 23).unwrap();
        let image = ch.image().unwrap();
        let (_, psi_img) = image.dominant_eigenvector().unwrap();
        let image_c = iconcurrence_pure(&psi_img);
        let bound = bound_pure_initial(&chi, image_c);
        assert!((bound - 2.0).abs() < 1e-10);

        let (evolved, _) = ch
            .apply_one_sided(&chi.density(), Subsystem::Second)
            .unwrap();
        let (_, psi_out) = evolved.dominant_eigenvector().unwrap();
        let direct = iconcurrence_pure(&psi_out);
        assert!((direct - (4f64 / 3.0).sqrt()).abs() < 1e-10);
        assert!(bound >= direct - 1e-10);

        // separable initial state: bound is zero
        let mut raw = CMatrix::zeros((3, 2));
        raw[[0, 0]] = C64::new(1.0, 0.0);
        let sep = PureState::from_amplitudes((3, 2), raw, false).unwrap();
        assert!(bound_pure_initial(&sep, image_c).abs() < 1e-15);
    }

    #[test]
    fn mixed_bound_trivial_cases() {
        assert_eq!(bound_mixed_initial(0.0, 0.9, 2), 0.0);
        assert!((bound_mixed_initial(0.5, 0.5, 2) - 0.25).abs() < 1e-15);
    }

    #[test]
    fn induced_identity_filter_is_identity() {
        let phi = PureState::max_entangled(2).unwrap();
        let image = KrausChannel::phase_noise(0.5).unwrap().image().unwrap();
        let dec = image.spectral_decomposition().unwrap();
        let induced = induced_decomposition(&phi, &dec).unwrap();
        assert_eq!(induced.dropped_branches, 0);
        assert!((induced.post_selection_probability - 1.0).abs() < 1e-12);
        for (w1, w2) in dec.weights().iter().zip(induced.decomposition.weights()) {
            assert!((w1 - w2).abs() < 1e-12);
        }
        induced
            .decomposition
            .verify_reconstructs(&image, tol::RECONSTRUCTION)
            .unwrap();
    }

    #[test]
    fn induced_average_dominates_prediction() {
        // any decomposition average upper-bounds the roof (convexity)
        let w_amps = {
            let mut raw = CMatrix::zeros((4, 2));
            let r3 = 1.0 / 3f64.sqrt();
            raw[[0, 1]] = C64::new(r3, 0.0);
            raw[[1, 0]] = C64::new(r3, 0.0);
            raw[[2, 0]] = C64::new(r3, 0.0);
            PureState::from_amplitudes((4, 2), raw, false).unwrap()
        };
        let ch = KrausChannel::phase_noise(0.7).unwrap();
        let image = ch.image().unwrap();
        let prediction =
            predict_factorized(iconcurrence_pure(&w_amps), &image).unwrap();

        // eigendecomposition branch
        let eig = image.spectral_decomposition().unwrap();
        let induced = induced_decomposition(&w_amps, &eig).unwrap();
        let avg = induced.decomposition.average(iconcurrence_pure);
        assert!(avg >= prediction - 1e-9, "avg {avg} < prediction {prediction}");

        // roof-witness branch: average reproduces the prediction
        let est = convex_roof_estimate(&image, &RoofBudget::new(3)).unwrap();
        let induced = induced_decomposition(&w_amps, &est.witness).unwrap();
        let avg = induced.decomposition.average(iconcurrence_pure);
        assert!(
            (avg - prediction).abs() < 1e-6,
            "optimal witness should saturate: avg {avg} vs prediction {prediction}"
        );
        // and the induced decomposition rebuilds the evolved state
        let (evolved, _) = ch
            .apply_one_sided(&w_amps.density(), Subsystem::Second)
            .unwrap();
        induced
            .decomposition
            .verify_reconstructs(&evolved, tol::RECONSTRUCTION)
            .unwrap();
    }

    #[test]
    fn verify_factorization_dispatches_methods() {
        // 2⊗2, multi-Kraus: Wootters on both sides
        let chi = PureState::random((2, 2), 61);
        let ch = KrausChannel::random(2, 3, 62).unwrap();
        let report = verify_factorization(&chi, &ch, &RoofBudget::new(63)).unwrap();
        assert_eq!(report.method, DirectMethod::WoottersExact);
        assert!(report.pass, "gap {}", report.gap);

        // 3⊗3 single-Kraus: pure on both sides
        let chi = PureState::random((3, 3), 64);
        let ch = KrausChannel::random(3, 1, 65).unwrap();
        let report = verify_factorization(&chi, &ch, &RoofBudget::new(66)).unwrap();
        assert_eq!(report.method, DirectMethod::PureExact);
        assert!(report.pass, "gap {}", report.gap);

        // 3⊗3 mixed image: no law applies
        let chi = PureState::random((3, 3), 67);
        let ch = KrausChannel::random(3, 2, 68).unwrap();
        assert!(matches!(
            verify_factorization(&chi, &ch, &RoofBudget::new(69)),
            Err(Error::OutOfScope { .. })
        ));
    }

    #[test]
    fn verify_factorization_roof_estimate_path() {
        let chi = PureState::random((3, 2), 71);
        let ch = KrausChannel::random(2, 3, 72).unwrap();
        let report = verify_factorization(&chi, &ch, &RoofBudget::new(73)).unwrap();
        assert_eq!(report.method, DirectMethod::RoofEstimate);
        assert!(
            report.pass,
            "estimator gap {} outside [{}, {}]",
            report.gap,
            tol::ESTIMATOR_LOWER,
            tol::ESTIMATOR_UPPER
        );
    }

    #[test]
    fn two_sided_identity_reduces_to_one_sided() {
        let a = C64::new(0.6, 0.0);
        let b = C64::new(0.8, 0.0);
        let id = identity_channel(2);
        let ch2 = KrausChannel::random(2, 3, 81).unwrap();
        let report =
            verify_two_sided(a, b, SchmidtFamily::Correlated, &id, &ch2).unwrap();
        assert!(report.pass, "gap {}", report.gap);
        // prediction equals the one-sided factorization
        let chi = schmidt_state(a, b, SchmidtFamily::Correlated).unwrap();
        let expected = predict_factorized(iconcurrence_pure(&chi), &ch2.image().unwrap()).unwrap();
        assert!((report.predicted - expected).abs() < 1e-12);
    }

    #[test]
    fn two_sided_families_hold() {
        let a = C64::new(0.6, 0.0);
        let b = C64::new(0.8, 0.0);
        let ch2 = KrausChannel::random(2, 2, 91).unwrap();

        let diag = KrausChannel::random_diagonal(3, 92).unwrap();
        let report = verify_two_sided(a, b, SchmidtFamily::Correlated, &diag, &ch2).unwrap();
        assert!(report.pass, "diagonal family gap {}", report.gap);

        let off = KrausChannel::random_offdiagonal(3, 93).unwrap();
        let report = verify_two_sided(a, b, SchmidtFamily::AntiCorrelated, &off, &ch2).unwrap();
        assert!(report.pass, "off-diagonal family gap {}", report.gap);
    }

    #[test]
    fn sweep_smoke() {
        let out = sweeps::corollary_sweep(25, 7).unwrap();
        assert!(out.all_pass(), "max gap {}", out.max_abs_gap);
        assert!(out.max_abs_gap <= tol::EXACT_LAW);

        let out = sweeps::theorem_sweep(18, 7).unwrap();
        assert!(out.all_pass(), "max gap {}", out.max_abs_gap);

        let out = sweeps::bounds_sweep(40, 7).unwrap();
        assert!(out.all_pass(), "max gap {}", out.max_gap);

        let out = sweeps::two_sided_sweep(10, 7).unwrap();
        assert!(out.all_pass(), "max gap {}", out.max_abs_gap);
    }

    #[test]
    fn report_serialization_shape() {
        let report = EvolutionReport::exact(0.5, 0.5, DirectMethod::WoottersExact, (2, 2));
        let json = serde_json::to_value(&report).unwrap();
        assert_eq!(json["method"], "wootters-exact");
        assert_eq!(json["dims"][0], 2);
        assert!(json.get("predicted").is_some());
        assert!(json.get("direct").is_some());
        assert!(json.get("gap").is_some());
        assert!(json.get("pass").is_some());
        assert!(json.get("tolerance_used").is_none());
    }
}
