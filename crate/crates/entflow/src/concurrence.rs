//! Entanglement quantifiers: SO(N) generators, the concurrence matrix and
//! its Frobenius norm (the I-concurrence), the Wootters concurrence for
//! two-qubit mixed states, and a convex-roof estimator for general mixed
//! states.
//!
//! Two independent routes to the concurrence matrix are kept: the
//! closed-form 2x2-minor expression used everywhere, and the direct
//! contraction ⟨χ|(L_α ⊗ L_β)|χ*⟩ over generator pairs, retained as a
//! cross-check oracle.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{self, CMatrix, CVector};
use crate::states::{Decomposition, DensityMatrix, PureState};
use crate::tol;

/// Index pairs (k, l), k < l, in lexicographic order (0-based storage;
/// the 1-based pair of the formulas is (k+1, l+1)).
pub fn generator_pairs(n: usize) -> Vec<(usize, usize)> {
    let mut pairs = Vec::with_capacity(n.saturating_sub(1) * n / 2);
    for k in 0..n {
        for l in (k + 1)..n {
            pairs.push((k, l));
        }
    }
    pairs
}

/// The N(N-1)/2 antisymmetric generators of SO(N) with the sign convention
/// L_{(kl)} = (-1)^{k+l+1}|k⟩⟨l| + (-1)^{k+l}|l⟩⟨k| for 1-based k < l.
#[derive(Debug, Clone)]
pub struct GeneratorSet {
    dim: usize,
    pairs: Vec<(usize, usize)>,
    generators: Vec<CMatrix>,
}

impl GeneratorSet {
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Bijection α ↔ (k, l) in lexicographic order, 0-based.
    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn generators(&self) -> &[CMatrix] {
        &self.generators
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }
}

/// Build the SO(N) generator set.
pub fn so_generators(n: usize) -> Result<GeneratorSet> {
    if n < 2 {
        return Err(Error::DimensionTooSmall(n));
    }
    let pairs = generator_pairs(n);
    let generators = pairs
        .iter()
        .map(|&(k0, l0)| {
            // 1-based signs: (-1)^{k+l+1} at (k,l), (-1)^{k+l} at (l,k)
            let sign = if (k0 + l0) % 2 == 0 { 1.0 } else { -1.0 };
            let mut m = CMatrix::zeros((n, n));
            m[[k0, l0]] = C64::new(-sign, 0.0);
            m[[l0, k0]] = C64::new(sign, 0.0);
            m
        })
        .collect();
    Ok(GeneratorSet {
        dim: n,
        pairs,
        generators,
    })
}

/// Concurrence matrix of a bipartite pure state, indexed by SO(N₁) x SO(N₂)
/// generator pairs. Its Frobenius norm is the I-concurrence.
#[derive(Debug, Clone)]
pub struct ConcurrenceMatrix {
    row_pairs: Vec<(usize, usize)>,
    col_pairs: Vec<(usize, usize)>,
    entries: CMatrix,
}

impl ConcurrenceMatrix {
    pub fn entries(&self) -> &CMatrix {
        &self.entries
    }

    pub fn row_pairs(&self) -> &[(usize, usize)] {
        &self.row_pairs
    }

    pub fn col_pairs(&self) -> &[(usize, usize)] {
        &self.col_pairs
    }

    /// Frobenius norm; equals the I-concurrence for a normalized state.
    pub fn norm(&self) -> f64 {
        numerics::frob_norm(&self.entries)
    }

    /// Frobenius distance to another concurrence matrix.
    pub fn distance(&self, other: &ConcurrenceMatrix) -> f64 {
        numerics::frob_norm(&(&self.entries - &other.entries))
    }

    /// Largest entrywise deviation from another concurrence matrix.
    pub fn max_entry_deviation(&self, other: &ConcurrenceMatrix) -> f64 {
        numerics::max_abs_entry(&(&self.entries - &other.entries))
    }

    pub(crate) fn from_parts(
        row_pairs: Vec<(usize, usize)>,
        col_pairs: Vec<(usize, usize)>,
        entries: CMatrix,
    ) -> Self {
        Self {
            row_pairs,
            col_pairs,
            entries,
        }
    }
}

/// Symmetric bilinear form underlying the concurrence matrix:
/// B(x, x) has entries 2(-1)^{k+l+k'+l'}(x_{kk'}x_{ll'} - x_{kl'}x_{lk'}),
/// so the concurrence matrix of amplitudes A is conj(B(A, A)) entrywise.
/// Kept bilinear so pair mixings in the roof optimizer cost three
/// precomputed matrices instead of a fresh evaluation per angle.
pub(crate) fn bilinear_form(
    x: &CMatrix,
    y: &CMatrix,
    row_pairs: &[(usize, usize)],
    col_pairs: &[(usize, usize)],
) -> CMatrix {
    let mut out = CMatrix::zeros((row_pairs.len(), col_pairs.len()));
    for (a, &(k, l)) in row_pairs.iter().enumerate() {
        for (b, &(kp, lp)) in col_pairs.iter().enumerate() {
            let sign = if (k + l + kp + lp) % 2 == 0 { 1.0 } else { -1.0 };
            let v = x[[k, kp]] * y[[l, lp]] + y[[k, kp]] * x[[l, lp]]
                - x[[k, lp]] * y[[l, kp]]
                - y[[k, lp]] * x[[l, kp]];
            out[[a, b]] = v * sign;
        }
    }
    out
}

/// Closed-form concurrence-matrix entries for an amplitude matrix that
/// need not be normalized (entries scale with the squared norm).
pub(crate) fn concurrence_entries(amps: &CMatrix) -> CMatrix {
    let row_pairs = generator_pairs(amps.nrows());
    let col_pairs = generator_pairs(amps.ncols());
    bilinear_form(amps, amps, &row_pairs, &col_pairs).mapv(|z| z.conj())
}

/// Concurrence matrix by the closed-form minor expression
/// C_{α_kl β_k'l'} = 2(-1)^{k+l+k'+l'}(A_{kk'}A_{ll'} - A_{kl'}A_{lk'})*.
pub fn concurrence_matrix(chi: &PureState) -> ConcurrenceMatrix {
    ConcurrenceMatrix::from_parts(
        generator_pairs(chi.n1()),
        generator_pairs(chi.n2()),
        concurrence_entries(chi.amps()),
    )
}

/// Concurrence matrix by direct contraction C_{αβ} = ⟨χ|(L_α ⊗ L_β)|χ*⟩.
/// Independent of [`concurrence_matrix`]; the two must agree entrywise.
pub fn concurrence_matrix_via_generators(chi: &PureState) -> Result<ConcurrenceMatrix> {
    let gens1 = so_generators(chi.n1())?;
    let gens2 = so_generators(chi.n2())?;
    let v = chi.state_vector();
    let conj_v: CVector = v.mapv(|z| z.conj());
    let mut entries = CMatrix::zeros((gens1.len(), gens2.len()));
    for (a, la) in gens1.generators().iter().enumerate() {
        for (b, lb) in gens2.generators().iter().enumerate() {
            let op = numerics::kron(la, lb);
            let mut acc = C64::new(0.0, 0.0);
            for i in 0..conj_v.len() {
                for j in 0..conj_v.len() {
                    acc += conj_v[i] * op[[i, j]] * conj_v[j];
                }
            }
            entries[[a, b]] = acc;
        }
    }
    Ok(ConcurrenceMatrix::from_parts(
        gens1.pairs().to_vec(),
        gens2.pairs().to_vec(),
        entries,
    ))
}

/// I-concurrence of a pure state: the Frobenius norm of its concurrence
/// matrix, equal to √(2(1 - Tr ρ_r²)).
pub fn iconcurrence_pure(chi: &PureState) -> f64 {
    numerics::frob_norm(&concurrence_entries(chi.amps()))
}

/// Wootters concurrence of a two-qubit mixed state,
/// C = max(0, λ₁ - λ₂ - λ₃ - λ₄).
///
/// The λ are computed as the singular values of the symmetric matrix
/// τ_kl = ⟨v_k|(σ_y ⊗ σ_y)|v_l*⟩ over subnormalized eigenvectors of ρ.
/// This keeps near-zero λ at absolute machine accuracy; squaring up
/// ρ(σσ)ρ*(σσ) first would cost half the digits exactly where the
/// sudden-death thresholds live.
pub fn wootters_concurrence(rho: &DensityMatrix) -> Result<f64> {
    if rho.dims() != (2, 2) {
        return Err(Error::DimensionMismatch(format!(
            "Wootters concurrence needs a 2x2 system, got {}x{}",
            rho.n1(),
            rho.n2()
        )));
    }
    let (vals, vecs) = rho.eigendecomposition()?;
    if let Some(&lo) = vals.first() {
        if lo < tol::PSD_FLOOR {
            return Err(Error::NotPositiveSemidefinite { eigenvalue: lo });
        }
    }
    // σ_y ⊗ σ_y, real and symmetric
    let mut yy = CMatrix::zeros((4, 4));
    yy[[0, 3]] = C64::new(-1.0, 0.0);
    yy[[1, 2]] = C64::new(1.0, 0.0);
    yy[[2, 1]] = C64::new(1.0, 0.0);
    yy[[3, 0]] = C64::new(-1.0, 0.0);

    let kept: Vec<usize> = (0..4).filter(|&k| vals[k] > 0.0).collect();
    let r = kept.len();
    let mut tau = CMatrix::zeros((r, r));
    for (a, &ka) in kept.iter().enumerate() {
        for (b, &kb) in kept.iter().enumerate() {
            let mut acc = C64::new(0.0, 0.0);
            for i in 0..4 {
                for j in 0..4 {
                    acc += vecs[[i, ka]].conj() * yy[[i, j]] * vecs[[j, kb]].conj();
                }
            }
            tau[[a, b]] = acc * (vals[ka] * vals[kb]).sqrt();
        }
    }
    let sv = numerics::singular_values(&tau)?;
    let total: f64 = sv.iter().sum();
    Ok((2.0 * sv.first().copied().unwrap_or(0.0) - total).max(0.0))
}

/// Budget for the convex-roof estimator. `m` defaults to min(rank², 8),
/// floored at the rank.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct RoofBudget {
    pub m: Option<usize>,
    pub restarts: usize,
    pub max_sweeps: usize,
    pub seed: u64,
}

impl RoofBudget {
    pub fn new(seed: u64) -> Self {
        Self {
            m: None,
            restarts: 32,
            max_sweeps: 200,
            seed,
        }
    }

    pub fn with_restarts(mut self, restarts: usize) -> Self {
        self.restarts = restarts;
        self
    }
}

/// Result of a convex-roof minimization: the best average concurrence
/// found and the decomposition witnessing it.
#[derive(Debug, Clone)]
pub struct RoofEstimate {
    pub value: f64,
    pub witness: Decomposition,
}

/// Upper-bound estimate of the convex-roof concurrence
/// C[ρ] = min Σ p_i C[ψ_i].
///
/// Size-m decompositions are parametrized by matrices W with orthonormal
/// columns acting on the subnormalized eigenvectors of ρ,
/// |ψ̃_i⟩ = Σ_k W*_{ik}√λ_k|e_k⟩, which spans all decompositions. The
/// optimizer runs Haar-seeded random restarts refined by coordinate
/// descent over two-state Givens mixings with a complex phase. The result
/// never undercuts the true roof (any decomposition average is an upper
/// bound); tightness depends on the budget.
pub fn convex_roof_estimate(rho: &DensityMatrix, budget: &RoofBudget) -> Result<RoofEstimate> {
    let (n1, n2) = rho.dims();
    let (vals, vecs) = rho.eigendecomposition()?;
    if let Some(&lo) = vals.first() {
        if lo < tol::PSD_FLOOR {
            return Err(Error::NotPositiveSemidefinite { eigenvalue: lo });
        }
    }
    // subnormalized eigen-states √λ_k |e_k⟩ as amplitude matrices
    let mut basis: Vec<CMatrix> = Vec::new();
    for (k, &lam) in vals.iter().enumerate() {
        if lam > tol::RANK_CUTOFF {
            let root = lam.sqrt();
            basis.push(CMatrix::from_shape_fn((n1, n2), |(i, j)| {
                vecs[[i * n2 + j, k]] * root
            }));
        }
    }
    let rank = basis.len();
    if rank == 0 {
        return Err(Error::InvalidParameter(
            "density matrix has numerical rank zero".into(),
        ));
    }
    let m = budget.m.unwrap_or_else(|| (rank * rank).min(8).max(rank));
    if m < rank {
        return Err(Error::InvalidParameter(format!(
            "decomposition size m = {m} is below rank {rank}"
        )));
    }

    let row_pairs = generator_pairs(n1);
    let col_pairs = generator_pairs(n2);

    let mut best: Option<(f64, Vec<CMatrix>)> = None;
    for restart in 0..budget.restarts.max(1) {
        let seed = numerics::derive_seed(budget.seed, restart as u64);
        let states = optimize_restart(&basis, m, seed, budget.max_sweeps, &row_pairs, &col_pairs);
        let total = objective(&states, &row_pairs, &col_pairs);
        if best.as_ref().map_or(true, |(b, _)| total < *b) {
            best = Some((total, states));
        }
    }

    let (_, states) = best.expect("at least one restart ran");
    let mut weights = Vec::new();
    let mut pure_states = Vec::new();
    for s in &states {
        let p: f64 = s.iter().map(|z| z.norm_sqr()).sum();
        if p < 1e-14 {
            continue;
        }
        weights.push(p);
        pure_states.push(PureState::from_amplitudes((n1, n2), s.clone(), true)?);
    }
    let witness = Decomposition::new(weights, pure_states).map_err(|_| Error::BudgetExhausted)?;
    witness
        .verify_reconstructs(rho, tol::RECONSTRUCTION)
        .map_err(|_| Error::BudgetExhausted)?;
    let value = witness.average(iconcurrence_pure);
    Ok(RoofEstimate { value, witness })
}

fn objective(states: &[CMatrix], rp: &[(usize, usize)], cp: &[(usize, usize)]) -> f64 {
    states
        .iter()
        .map(|s| numerics::frob_norm(&bilinear_form(s, s, rp, cp)))
        .sum()
}

fn optimize_restart(
    basis: &[CMatrix],
    m: usize,
    seed: u64,
    max_sweeps: usize,
    rp: &[(usize, usize)],
    cp: &[(usize, usize)],
) -> Vec<CMatrix> {
    let dims = basis[0].dim();
    let w = numerics::haar_unitary(m, seed);
    let mut states: Vec<CMatrix> = (0..m)
        .map(|i| {
            let mut acc = CMatrix::zeros(dims);
            for (k, b) in basis.iter().enumerate() {
                let coeff = w[[i, k]].conj();
                acc.zip_mut_with(b, |a, &v| *a += v * coeff);
            }
            acc
        })
        .collect();

    let mut total = objective(&states, rp, cp);
    for _ in 0..max_sweeps {
        let before = total;
        for i in 0..m {
            for j in (i + 1)..m {
                mix_pair(&mut states, i, j, rp, cp);
            }
        }
        total = objective(&states, rp, cp);
        if before - total < tol::ROOF_IMPROVEMENT {
            break;
        }
    }
    states
}

/// Squared norm of P + Q·cos2θ + R·sin2θ as a trig polynomial:
/// c₀ + c₂c·cos2θ + c₂s·sin2θ + c₄c·cos4θ + c₄s·sin4θ.
fn trig_coeffs(p: &CMatrix, q: &CMatrix, r: &CMatrix) -> [f64; 5] {
    let mut pp = 0.0;
    let mut qq = 0.0;
    let mut rr = 0.0;
    let mut pq = 0.0;
    let mut pr = 0.0;
    let mut qr = 0.0;
    for ((a, b), c) in p.iter().zip(q.iter()).zip(r.iter()) {
        pp += a.norm_sqr();
        qq += b.norm_sqr();
        rr += c.norm_sqr();
        pq += (a.conj() * b).re;
        pr += (a.conj() * c).re;
        qr += (b.conj() * c).re;
    }
    [
        pp + 0.5 * (qq + rr),
        2.0 * pq,
        2.0 * pr,
        0.5 * (qq - rr),
        qr,
    ]
}

fn eval_trig(c: &[f64; 5], cos2: f64, sin2: f64) -> f64 {
    let cos4 = cos2 * cos2 - sin2 * sin2;
    let sin4 = 2.0 * sin2 * cos2;
    (c[0] + c[1] * cos2 + c[2] * sin2 + c[3] * cos4 + c[4] * sin4).max(0.0)
}

/// θ-scan coefficients for a fixed Givens phase: the rotated pair's
/// bilinear matrices are linear in (cos2θ, sin2θ), so each squared norm
/// is a 5-coefficient trig polynomial.
fn phase_coeffs(bxx: &CMatrix, bxy: &CMatrix, byy: &CMatrix, phi: f64) -> ([f64; 5], [f64; 5]) {
    let e = C64::from_polar(1.0, phi);
    let e2 = e * e;
    // state i' = c·x + s·e·y:  B = (Bxx+e²Byy)/2 + (Bxx-e²Byy)/2·cos2θ + e·Bxy·sin2θ
    let p1 = azip(bxx, byy, |x, y| 0.5 * (x + e2 * y));
    let q1 = azip(bxx, byy, |x, y| 0.5 * (x - e2 * y));
    let r1 = bxy.mapv(|z| z * e);
    // state j' = -s·ē·x + c·y: B = (ē²Bxx+Byy)/2 + (Byy-ē²Bxx)/2·cos2θ - ē·Bxy·sin2θ
    let e2c = e2.conj();
    let p2 = azip(bxx, byy, |x, y| 0.5 * (e2c * x + y));
    let q2 = azip(bxx, byy, |x, y| 0.5 * (y - e2c * x));
    let r2 = bxy.mapv(|z| -(z * e.conj()));
    (trig_coeffs(&p1, &q1, &r1), trig_coeffs(&p2, &q2, &r2))
}

fn pair_cost(c1: &[f64; 5], c2: &[f64; 5], theta: f64) -> f64 {
    let (sin2, cos2) = (2.0 * theta).sin_cos();
    eval_trig(c1, cos2, sin2).sqrt() + eval_trig(c2, cos2, sin2).sqrt()
}

/// Optimize one two-state Givens mixing over rotation angle θ and complex
/// phase φ: coarse scan over 8 phases with an O(1)-per-angle θ grid, then
/// alternating golden refinements of θ and φ. Applies the winner when it
/// improves on leaving the pair alone.
fn mix_pair(
    states: &mut [CMatrix],
    i: usize,
    j: usize,
    rp: &[(usize, usize)],
    cp: &[(usize, usize)],
) {
    let bxx = bilinear_form(&states[i], &states[i], rp, cp);
    let bxy = bilinear_form(&states[i], &states[j], rp, cp);
    let byy = bilinear_form(&states[j], &states[j], rp, cp);
    let base = numerics::frob_norm(&bxx) + numerics::frob_norm(&byy);

    // coarse scan: φ over [0, π) (φ + π is reached by θ → -θ)
    const PHASES: usize = 8;
    let mut best_cost = f64::INFINITY;
    let mut best_theta = 0.0;
    let mut best_phi = 0.0;
    for k in 0..PHASES {
        let phi = k as f64 * std::f64::consts::PI / PHASES as f64;
        let (c1, c2) = phase_coeffs(&bxx, &bxy, &byy, phi);
        let theta = minimize_periodic(&|t| pair_cost(&c1, &c2, t));
        let cost = pair_cost(&c1, &c2, theta);
        if cost < best_cost {
            best_cost = cost;
            best_theta = theta;
            best_phi = phi;
        }
    }

    // alternate: golden in φ at fixed θ, then re-minimize θ at that φ
    for _ in 0..2 {
        let theta = best_theta;
        let phi = golden_min(
            &|phi| {
                let (c1, c2) = phase_coeffs(&bxx, &bxy, &byy, phi);
                pair_cost(&c1, &c2, theta)
            },
            best_phi - std::f64::consts::PI / PHASES as f64,
            best_phi + std::f64::consts::PI / PHASES as f64,
            28,
        );
        let (c1, c2) = phase_coeffs(&bxx, &bxy, &byy, phi);
        let theta = minimize_periodic(&|t| pair_cost(&c1, &c2, t));
        let cost = pair_cost(&c1, &c2, theta);
        if cost < best_cost {
            best_cost = cost;
            best_theta = theta;
            best_phi = phi;
        } else {
            break;
        }
    }

    if best_cost < base {
        let (c, s) = (best_theta.cos(), best_theta.sin());
        let b1 = C64::from_polar(s, best_phi);
        let x = states[i].clone();
        let y = states[j].clone();
        let mut xi = x.mapv(|z| z * c);
        xi.zip_mut_with(&y, |a, &v| *a += v * b1);
        let mut yj = y.mapv(|z| z * c);
        yj.zip_mut_with(&x, |a, &v| *a -= v * b1.conj());
        states[i] = xi;
        states[j] = yj;
    }
}

fn azip<F: Fn(C64, C64) -> C64>(a: &CMatrix, b: &CMatrix, f: F) -> CMatrix {
    let mut out = a.clone();
    out.zip_mut_with(b, |x, &y| *x = f(*x, y));
    out
}

/// Test hook: worst deviation between the trig-coefficient pair cost and
/// a direct evaluation on rotated states, over random pairs and angles.
#[doc(hidden)]
pub fn debug_pair_cost_check(seed: u64, trials: usize) -> f64 {
    use rand::Rng;
    let mut rng = numerics::rng_from_seed(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..trials {
        let (n1, n2) = (2 + rng.gen_range(0..2), 2 + rng.gen_range(0..2));
        let rp = generator_pairs(n1);
        let cp = generator_pairs(n2);
        let x = numerics::complex_gaussian_matrix(&mut rng, n1, n2);
        let y = numerics::complex_gaussian_matrix(&mut rng, n1, n2);
        let bxx = bilinear_form(&x, &x, &rp, &cp);
        let bxy = bilinear_form(&x, &y, &rp, &cp);
        let byy = bilinear_form(&y, &y, &rp, &cp);
        let theta = rng.gen_range(-std::f64::consts::FRAC_PI_2..std::f64::consts::FRAC_PI_2);
        let phi = rng.gen_range(0.0..std::f64::consts::PI);

        let (c1, c2) = phase_coeffs(&bxx, &bxy, &byy, phi);
        let fast = pair_cost(&c1, &c2, theta);

        let (c, s) = (theta.cos(), theta.sin());
        let b1 = C64::from_polar(s, phi);
        let mut u1 = x.mapv(|z| z * c);
        u1.zip_mut_with(&y, |a, &v| *a += v * b1);
        let mut u2 = y.mapv(|z| z * c);
        u2.zip_mut_with(&x, |a, &v| *a -= v * b1.conj());
        let direct = numerics::frob_norm(&bilinear_form(&u1, &u1, &rp, &cp))
            + numerics::frob_norm(&bilinear_form(&u2, &u2, &rp, &cp));
        worst = worst.max((fast - direct).abs());
    }
    worst
}

/// Grid scan plus golden-section refinement on a π-periodic objective.
fn minimize_periodic<F: Fn(f64) -> f64>(f: &F) -> f64 {
    const GRID: usize = 17;
    let step = std::f64::consts::PI / (GRID as f64 - 1.0);
    let mut best_k = 0;
    let mut best_v = f64::INFINITY;
    for k in 0..GRID {
        let t = -std::f64::consts::FRAC_PI_2 + k as f64 * step;
        let v = f(t);
        if v < best_v {
            best_v = v;
            best_k = k;
        }
    }
    let center = -std::f64::consts::FRAC_PI_2 + best_k as f64 * step;
    golden_min(f, center - step, center + step, 40)
}

fn golden_min<F: Fn(f64) -> f64>(f: &F, mut a: f64, mut b: f64, iters: usize) -> f64 {
    let golden = 0.618_033_988_749_894_9;
    let mut c = b - golden * (b - a);
    let mut d = a + golden * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    for _ in 0..iters {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - golden * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + golden * (b - a);
            fd = f(d);
        }
    }
    0.5 * (a + b)
}
