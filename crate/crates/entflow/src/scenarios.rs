//! The worked scenarios: a generalized three-qubit W state with its third
//! qubit exposed to phase noise or generalized amplitude damping (sudden
//! death of entanglement, residual-tangle surface), the X-state equality
//! under phase noise, and the relaxation of a spin-1 NMR ground state.
//!
//! Each scenario produces a rectangular [`ScanGrid`] of columns that pair
//! the direct numerical pipeline (Kraus application, partial traces,
//! Wootters or pure concurrence) with the corresponding closed forms, plus
//! a serializable summary with extrema and pass flags.

use std::io::Write;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::channels::{nu, KrausChannel};
use crate::concurrence::{iconcurrence_pure, wootters_concurrence};
use crate::error::{Error, Result};
use crate::evolution::{predict_factorized, EvolutionReport};
use crate::numerics::{self, CMatrix, Subsystem};
use crate::states::{DensityMatrix, PureState};
use crate::tol;

/// Amplitudes of the generalized W state α|001⟩ + β|010⟩ + γ|100⟩.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct WStateParams {
    pub alpha: C64,
    pub beta: C64,
    pub gamma: C64,
}

impl WStateParams {
    pub fn new(alpha: C64, beta: C64, gamma: C64) -> Result<Self> {
        let norm = alpha.norm_sqr() + beta.norm_sqr() + gamma.norm_sqr();
        if (norm - 1.0).abs() > tol::STATE_NORM {
            return Err(Error::NotNormalized { norm: norm.sqrt() });
        }
        Ok(Self { alpha, beta, gamma })
    }

    /// The |β| = |γ| slice used for the damping surface.
    pub fn symmetric_slice(alpha_abs: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&alpha_abs) {
            return Err(Error::InvalidParameter(format!(
                "|alpha| must lie in [0, 1], got {alpha_abs}"
            )));
        }
        let rest = ((1.0 - alpha_abs * alpha_abs) / 2.0).max(0.0).sqrt();
        Self::new(
            C64::new(alpha_abs, 0.0),
            C64::new(rest, 0.0),
            C64::new(rest, 0.0),
        )
    }

    /// Concurrence of the initial AB:C cut, 2|α|√(|β|² + |γ|²).
    pub fn cut_concurrence(&self) -> f64 {
        2.0 * self.alpha.norm() * (self.beta.norm_sqr() + self.gamma.norm_sqr()).sqrt()
    }
}

/// The W state as a bipartite 4 ⊗ 2 state across the AB:C cut
/// (qubit C, the noisy one, is the second factor).
pub fn w_state(params: &WStateParams) -> Result<PureState> {
    let mut amps = CMatrix::zeros((4, 2));
    amps[[0, 1]] = params.alpha; // |00⟩_AB ⊗ |1⟩_C
    amps[[1, 0]] = params.beta; // |01⟩_AB ⊗ |0⟩_C
    amps[[2, 0]] = params.gamma; // |10⟩_AB ⊗ |0⟩_C
    PureState::from_amplitudes((4, 2), amps, false)
}

/// Which qubit to trace out of an evolved three-qubit (4 ⊗ 2) state.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Qubit {
    A,
    B,
    C,
}

/// Two-qubit marginal of a three-qubit state held as 4 ⊗ 2 (AB:C). The
/// remaining qubits keep their A < B < C order.
pub fn qubit_pair_marginal(rho: &DensityMatrix, drop: Qubit) -> Result<DensityMatrix> {
    if rho.dims() != (4, 2) {
        return Err(Error::DimensionMismatch(format!(
            "expected a 4x2 three-qubit state, got {}x{}",
            rho.n1(),
            rho.n2()
        )));
    }
    let bits = |n: usize| ((n >> 2) & 1, (n >> 1) & 1, n & 1);
    let mut out = CMatrix::zeros((4, 4));
    for i in 0..8 {
        for j in 0..8 {
            let (ai, bi, ci) = bits(i);
            let (aj, bj, cj) = bits(j);
            let (traced_equal, row, col) = match drop {
                Qubit::A => (ai == aj, bi * 2 + ci, bj * 2 + cj),
                Qubit::B => (bi == bj, ai * 2 + ci, aj * 2 + cj),
                Qubit::C => (ci == cj, ai * 2 + bi, aj * 2 + bj),
            };
            if traced_equal {
                out[[row, col]] += rho.mat()[[i, j]];
            }
        }
    }
    Ok(DensityMatrix::new((2, 2), out)?)
}

// ---------------------------------------------------------------------------
// Scan grids and CSV output
// ---------------------------------------------------------------------------

/// One scan axis.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AxisSpec {
    pub name: String,
    pub min: f64,
    pub max: f64,
    pub points: usize,
}

impl AxisSpec {
    pub fn new(name: &str, min: f64, max: f64, points: usize) -> Self {
        Self {
            name: name.to_string(),
            min,
            max,
            points,
        }
    }

    /// Evenly spaced values including both endpoints.
    pub fn linspace(&self) -> Vec<f64> {
        if self.points <= 1 {
            return vec![self.min];
        }
        let step = (self.max - self.min) / (self.points - 1) as f64;
        (0..self.points).map(|i| self.min + i as f64 * step).collect()
    }

    /// Evenly spaced values on the open interval (min, max).
    pub fn linspace_open(&self) -> Vec<f64> {
        let n = self.points;
        let span = self.max - self.min;
        (0..n)
            .map(|i| self.min + span * (i + 1) as f64 / (n + 1) as f64)
            .collect()
    }
}

/// Rectangular record set over one or two axes, written as CSV with
/// 12-significant-digit floats (row-major by the first axis).
#[derive(Debug, Clone, Serialize)]
pub struct ScanGrid {
    pub axes: Vec<AxisSpec>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

/// 12 significant digits, lowercase exponent, locale independent.
pub fn format_float(x: f64) -> String {
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.11e}")
}

impl ScanGrid {
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "{}", self.columns.join(","))?;
        for row in &self.rows {
            let line: Vec<String> = row.iter().map(|&x| format_float(x)).collect();
            writeln!(w, "{}", line.join(","))?;
        }
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("CSV is ASCII")
    }
}

// ---------------------------------------------------------------------------
// W state under phase noise
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize)]
pub struct WDephasingSummary {
    pub max_gap_c_bc: f64,
    pub max_gap_c_ac: f64,
    pub max_gap_c_abc: f64,
    pub max_abs_tau: f64,
    pub pass: bool,
}

/// Dephase qubit C of the W state across a Γt grid. Pairwise concurrences
/// come from the direct pipeline (evolve, trace, Wootters); the AB:C cut
/// uses the factorization prediction. The residual tangle uses the pairs
/// that contain the noisy qubit; the {AB, AC} pairing is emitted alongside
/// for comparison.
pub fn w_dephasing_scan(
    params: &WStateParams,
    gamma_t: &[f64],
) -> Result<(ScanGrid, WDephasingSummary)> {
    let chi = w_state(params)?;
    let rho0 = chi.density();
    let c0 = params.cut_concurrence();
    let ab_amp = 2.0 * (params.alpha * params.beta).norm();
    let ag_amp = 2.0 * (params.alpha * params.gamma).norm();

    let mut rows = Vec::with_capacity(gamma_t.len());
    let mut summary = WDephasingSummary {
        max_gap_c_bc: 0.0,
        max_gap_c_ac: 0.0,
        max_gap_c_abc: 0.0,
        max_abs_tau: 0.0,
        pass: false,
    };

    for &gt in gamma_t {
        let ch = KrausChannel::phase_noise(gt)?;
        let (evolved, _) = ch.apply_one_sided(&rho0, Subsystem::Second)?;
        let c_bc = wootters_concurrence(&qubit_pair_marginal(&evolved, Qubit::A)?)?;
        let c_ac = wootters_concurrence(&qubit_pair_marginal(&evolved, Qubit::B)?)?;
        let c_ab = wootters_concurrence(&qubit_pair_marginal(&evolved, Qubit::C)?)?;
        let c_abc = predict_factorized(c0, &ch.image()?)?;

        let v = nu(gt);
        let c_bc_closed = ab_amp * v;
        let c_ac_closed = ag_amp * v;
        let c_abc_closed = c0 * v;

        let tau_noisy = c_abc * c_abc - c_bc * c_bc - c_ac * c_ac;
        let tau_paper = c_abc * c_abc - c_ab * c_ab - c_ac * c_ac;

        summary.max_gap_c_bc = summary.max_gap_c_bc.max((c_bc - c_bc_closed).abs());
        summary.max_gap_c_ac = summary.max_gap_c_ac.max((c_ac - c_ac_closed).abs());
        summary.max_gap_c_abc = summary.max_gap_c_abc.max((c_abc - c_abc_closed).abs());
        summary.max_abs_tau = summary.max_abs_tau.max(tau_noisy.abs());

        rows.push(vec![
            gt,
            c_bc,
            c_bc_closed,
            c_ac,
            c_ac_closed,
            c_abc,
            c_abc_closed,
            c_ab,
            tau_noisy,
            tau_paper,
        ]);
    }

    summary.pass = summary.max_gap_c_bc <= tol::EXACT_LAW
        && summary.max_gap_c_ac <= tol::EXACT_LAW
        && summary.max_gap_c_abc <= tol::EXACT_LAW
        && summary.max_abs_tau <= tol::TAU_ZERO;

    let (lo, hi) = grid_extent(gamma_t);
    let grid = ScanGrid {
        axes: vec![AxisSpec::new("gamma_t", lo, hi, gamma_t.len())],
        columns: vec![
            "gamma_t".into(),
            "c_bc_direct".into(),
            "c_bc_closed".into(),
            "c_ac_direct".into(),
            "c_ac_closed".into(),
            "c_abc_pred".into(),
            "c_abc_closed".into(),
            "c_ab_direct".into(),
            "tau_noisy_pairing".into(),
            "tau_paper_gad_pairing".into(),
        ],
        rows,
    };
    Ok((grid, summary))
}

// ---------------------------------------------------------------------------
// W state under generalized amplitude damping
// ---------------------------------------------------------------------------

/// Location and value of the residual-tangle maximum.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct TauMax {
    pub gamma_t: f64,
    pub alpha: f64,
    pub tau: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct WGadSummary {
    pub max_gap_c_abc: f64,
    pub esd_time: Option<f64>,
    pub esd_time_analytic: Option<f64>,
    pub tau_max: TauMax,
    pub min_tau: f64,
    /// Only meaningful at p = 1/2, where the reference point is known.
    pub tau_max_near_reference: Option<bool>,
    pub pass: bool,
}

/// Interior of the damping-image concurrence before clamping:
/// ν - (1 - ν²)√(p(1-p)). At p = 1/2 this is (ν² + 2ν - 1)/2.
fn gad_interior(gt: f64, p: f64) -> f64 {
    let v = nu(gt);
    v - (1.0 - v * v) * (p * (1.0 - p)).sqrt()
}

/// Closed-form AB:C concurrence under damping, clamped at zero. At
/// p = 1/2 this is max(0, |α|√(1-|α|²)·(exp(-2Γt) + 2exp(-Γt) - 1)).
fn gad_closed_form(alpha: f64, gt: f64, p: f64) -> f64 {
    let c0 = 2.0 * alpha * (1.0 - alpha * alpha).max(0.0).sqrt();
    (c0 * gad_interior(gt, p)).max(0.0)
}

/// Analytic sudden-death time: the positive root of the interior in
/// ν = exp(-Γt). None when the channel never kills the entanglement.
pub fn esd_time_analytic(p: f64) -> Option<f64> {
    let s = (p * (1.0 - p)).sqrt();
    if s <= 0.0 {
        return None;
    }
    // s·ν² + ν - s = 0, positive root
    let v = (-1.0 + (1.0 + 4.0 * s * s).sqrt()) / (2.0 * s);
    Some(-v.ln())
}

/// Sudden-death time by bisection on the interior expression.
pub fn esd_time(alpha: f64, p: f64, tolerance: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "need 0 < |alpha| < 1 for a nonzero initial concurrence, got {alpha}"
        )));
    }
    if tolerance <= 0.0 {
        return Err(Error::InvalidParameter("tolerance must be positive".into()));
    }
    // the interior tends to -√(p(1-p)) as t grows; no root when that is 0
    if p * (1.0 - p) <= 0.0 {
        return Err(Error::NoSignChange {
            lo: 0.0,
            hi: f64::INFINITY,
        });
    }
    let scale = alpha * (1.0 - alpha * alpha).sqrt();
    let f = |gt: f64| scale * gad_interior(gt, p);
    let mut lo = 0.0f64;
    let mut hi = 1.0f64;
    let mut tries = 0;
    while f(hi) > 0.0 {
        lo = hi;
        hi *= 2.0;
        tries += 1;
        if tries > 60 {
            return Err(Error::NoSignChange { lo, hi });
        }
    }
    if f(lo) <= 0.0 {
        if f(lo) == 0.0 {
            return Ok(lo);
        }
        return Err(Error::NoSignChange { lo, hi });
    }
    while hi - lo > tolerance {
        let mid = 0.5 * (lo + hi);
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// τ components for one (Γt, |α|) point of the damping surface:
/// the clamped factorized C_{AB:C} plus the three directly computed
/// pairwise concurrences.
fn gad_point(
    alpha: f64,
    gt_channel: &KrausChannel,
    image_c: f64,
) -> Result<(f64, f64, f64, f64)> {
    let params = WStateParams::symmetric_slice(alpha)?;
    let chi = w_state(&params)?;
    let (evolved, _) = gt_channel.apply_one_sided(&chi.density(), Subsystem::Second)?;
    let c_bc = wootters_concurrence(&qubit_pair_marginal(&evolved, Qubit::A)?)?;
    let c_ac = wootters_concurrence(&qubit_pair_marginal(&evolved, Qubit::B)?)?;
    let c_ab = wootters_concurrence(&qubit_pair_marginal(&evolved, Qubit::C)?)?;
    let c_abc = params.cut_concurrence() * image_c;
    Ok((c_abc, c_bc, c_ac, c_ab))
}

/// Damping surface over (Γt, |α|) for the |β| = |γ| slice. Emits the
/// factorized C_{AB:C} (direct image pipeline and closed form), the
/// directly computed pairwise concurrences, and both tangle pairings.
pub fn w_gad_scan(
    alpha: &[f64],
    gamma_t: &[f64],
    p: f64,
) -> Result<(ScanGrid, WGadSummary)> {
    let mut rows = Vec::with_capacity(alpha.len() * gamma_t.len());
    let mut max_gap: f64 = 0.0;
    let mut min_tau = f64::INFINITY;

    for &gt in gamma_t {
        let ch = KrausChannel::generalized_amplitude_damping(gt, p)?;
        let image_c = wootters_concurrence(&ch.image()?)?;
        for &al in alpha {
            let (c_abc, c_bc, c_ac, c_ab) = gad_point(al, &ch, image_c)?;
            let closed = gad_closed_form(al, gt, p);
            max_gap = max_gap.max((c_abc - closed).abs());
            let tau_noisy = c_abc * c_abc - c_bc * c_bc - c_ac * c_ac;
            let tau_paper = c_abc * c_abc - c_ab * c_ab - c_ac * c_ac;
            min_tau = min_tau.min(tau_noisy);
            rows.push(vec![
                gt, al, c_abc, closed, c_bc, c_ac, c_ab, tau_noisy, tau_paper,
            ]);
        }
    }

    let tau_max = tau_max_search(p)?;
    let esd = esd_time(0.5, p, tol::ESD_TIME).ok();
    let esd_analytic = esd_time_analytic(p);
    let esd_ok = match (esd, esd_analytic) {
        (Some(t), Some(t_ref)) => (t - t_ref).abs() <= tol::ESD_TIME,
        (None, None) => true,
        _ => false,
    };
    let tau_near = if (p - 0.5).abs() < 1e-12 {
        Some((tau_max.gamma_t - 0.0936).abs() <= 0.01 && (tau_max.alpha - 0.4996).abs() <= 0.01)
    } else {
        None
    };

    let summary = WGadSummary {
        max_gap_c_abc: max_gap,
        esd_time: esd,
        esd_time_analytic: esd_analytic,
        tau_max,
        min_tau,
        tau_max_near_reference: tau_near,
        pass: max_gap <= tol::CLOSED_FORM
            && esd_ok
            && min_tau >= -tol::TAU_ZERO
            && tau_near.unwrap_or(true),
    };

    let (glo, ghi) = grid_extent(gamma_t);
    let (alo, ahi) = grid_extent(alpha);
    let grid = ScanGrid {
        axes: vec![
            AxisSpec::new("gamma_t", glo, ghi, gamma_t.len()),
            AxisSpec::new("alpha", alo, ahi, alpha.len()),
        ],
        columns: vec![
            "gamma_t".into(),
            "alpha".into(),
            "c_abc_direct".into(),
            "c_abc_closed".into(),
            "c_bc".into(),
            "c_ac".into(),
            "c_ab".into(),
            "tau_noisy_pairing".into(),
            "tau_paper_gad_pairing".into(),
        ],
        rows,
    };
    Ok((grid, summary))
}

/// Locate the residual-tangle maximum on the |β| = |γ| damping slice:
/// 201x201 coarse grid over Γt ∈ [0, 0.5], |α| ∈ (0, 1), then shrinking
/// neighborhood refinement down to a 1e-5 step.
pub fn tau_max_search(p: f64) -> Result<TauMax> {
    let tau_at = |gt: f64, al: f64| -> Result<f64> {
        let ch = KrausChannel::generalized_amplitude_damping(gt, p)?;
        let image_c = wootters_concurrence(&ch.image()?)?;
        let (c_abc, c_bc, c_ac, _) = gad_point(al, &ch, image_c)?;
        Ok(c_abc * c_abc - c_bc * c_bc - c_ac * c_ac)
    };
    // row-cached variant for the coarse scan
    let gts = AxisSpec::new("gamma_t", 0.0, 0.5, 201).linspace();
    let als = AxisSpec::new("alpha", 0.0, 1.0, 201).linspace_open();
    let mut best = TauMax {
        gamma_t: 0.0,
        alpha: als[0],
        tau: f64::NEG_INFINITY,
    };
    for &gt in &gts {
        let ch = KrausChannel::generalized_amplitude_damping(gt, p)?;
        let image_c = wootters_concurrence(&ch.image()?)?;
        for &al in &als {
            let (c_abc, c_bc, c_ac, _) = gad_point(al, &ch, image_c)?;
            let tau = c_abc * c_abc - c_bc * c_bc - c_ac * c_ac;
            if tau > best.tau {
                best = TauMax {
                    gamma_t: gt,
                    alpha: al,
                    tau,
                };
            }
        }
    }

    let mut step = 0.5 / 200.0;
    while step > 1e-5 {
        let mut improved = false;
        for dg in [-step, 0.0, step] {
            for da in [-step, 0.0, step] {
                let gt = (best.gamma_t + dg).max(0.0);
                let al = best.alpha + da;
                if !(0.0 < al && al < 1.0) {
                    continue;
                }
                let tau = tau_at(gt, al)?;
                if tau > best.tau {
                    best = TauMax {
                        gamma_t: gt,
                        alpha: al,
                        tau,
                    };
                    improved = true;
                }
            }
        }
        if !improved {
            step /= 2.0;
        }
    }
    Ok(best)
}

// ---------------------------------------------------------------------------
// NMR ground-state relaxation
// ---------------------------------------------------------------------------

/// The spin-1 NMR ground state (|02⟩ - |11⟩ + |20⟩)/√3.
pub fn nmr_ground_state() -> PureState {
    let r3 = 1.0 / 3f64.sqrt();
    let mut amps = CMatrix::zeros((3, 3));
    amps[[0, 2]] = C64::new(r3, 0.0);
    amps[[1, 1]] = C64::new(-r3, 0.0);
    amps[[2, 0]] = C64::new(r3, 0.0);
    PureState::from_amplitudes((3, 3), amps, false).expect("state is normalized")
}

/// Closed-form concurrence of the relaxed NMR state.
pub fn nmr_closed_form(g1t: f64, g2t: f64) -> f64 {
    let e1 = (-2.0 * g1t).exp();
    let e2 = (-2.0 * g2t).exp();
    (4.0 * ((e1 + 1.0) * (e2 + 1.0) - 1.0)).sqrt() / (1.0 + e1 + e2)
}

#[derive(Debug, Clone, Serialize)]
pub struct NmrSummary {
    pub max_gap: f64,
    pub c_at_t0: f64,
    pub fidelity_ket20_at_g1t_10: f64,
    pub pass: bool,
}

/// Relaxation of the NMR ground state: per grid point, apply the
/// post-selected filter, renormalize, and compare the pure I-concurrence
/// against the closed form. The decayed subsystem is the one whose level
/// |2⟩ survives, so the state approaches |20⟩ at long times.
pub fn nmr_scenario(gamma1_t: &[f64], ratio: f64) -> Result<(ScanGrid, NmrSummary)> {
    if ratio < 1.0 {
        return Err(Error::RateOrdering {
            gamma1_t: 1.0,
            gamma2_t: ratio,
        });
    }
    let psi = nmr_ground_state();
    let rho0 = psi.density();
    let ket20 = {
        let mut amps = CMatrix::zeros((3, 3));
        amps[[2, 0]] = C64::new(1.0, 0.0);
        PureState::from_amplitudes((3, 3), amps, false).expect("basis state")
    };

    let evolve = |g1t: f64| -> Result<(f64, f64)> {
        let ch = KrausChannel::relaxation_filter(g1t, ratio * g1t)?;
        let (evolved, _) = ch.apply_one_sided(&rho0, Subsystem::First)?;
        let (_, pure) = evolved.dominant_eigenvector()?;
        Ok((
            iconcurrence_pure(&pure),
            evolved.fidelity_with_pure(&ket20),
        ))
    };

    let mut rows = Vec::with_capacity(gamma1_t.len());
    let mut max_gap: f64 = 0.0;
    for &g1t in gamma1_t {
        let g2t = ratio * g1t;
        let (direct, fid) = evolve(g1t)?;
        let closed = nmr_closed_form(g1t, g2t);
        max_gap = max_gap.max((direct - closed).abs());
        rows.push(vec![g1t, g2t, direct, closed, fid]);
    }

    let (c_at_t0, _) = evolve(0.0)?;
    let (_, fid10) = evolve(10.0)?;
    let summary = NmrSummary {
        max_gap,
        c_at_t0,
        fidelity_ket20_at_g1t_10: fid10,
        pass: max_gap <= tol::EXACT_LAW
            && (c_at_t0 - 2.0 / 3f64.sqrt()).abs() <= 1e-12
            && fid10 >= 1.0 - 1e-6,
    };

    let (lo, hi) = grid_extent(gamma1_t);
    let grid = ScanGrid {
        axes: vec![AxisSpec::new("gamma1_t", lo, hi, gamma1_t.len())],
        columns: vec![
            "gamma1_t".into(),
            "gamma2_t".into(),
            "c_direct".into(),
            "c_closed".into(),
            "fidelity_ket20".into(),
        ],
        rows,
    };
    Ok((grid, summary))
}

// ---------------------------------------------------------------------------
// X states under phase noise
// ---------------------------------------------------------------------------

/// Parameters of the X-form initial state
/// diag(a, [b d; d* c], 0) on the |00⟩,|01⟩,|10⟩,|11⟩ basis.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct XStateParams {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: C64,
}

impl XStateParams {
    pub fn new(a: f64, b: f64, c: f64, d: C64) -> Result<Self> {
        if a < 0.0 || b < 0.0 || c < 0.0 {
            return Err(Error::InvalidParameter(
                "populations must be nonnegative".into(),
            ));
        }
        if (a + b + c - 1.0).abs() > tol::STATE_NORM {
            return Err(Error::TraceNotOne { trace: a + b + c });
        }
        if d.norm_sqr() > b * c + 1e-12 {
            return Err(Error::NotPositiveSemidefinite {
                eigenvalue: b * c - d.norm_sqr(),
            });
        }
        Ok(Self { a, b, c, d })
    }

    /// Seeded random valid parameter set (coherence drawn inside the PSD
    /// disc |d|² ≤ bc).
    pub fn random(seed: u64) -> Self {
        use rand::Rng;
        let mut rng = numerics::rng_from_seed(seed);
        let mut draws = [0.0f64; 3];
        for d in &mut draws {
            *d = -(1.0 - rng.gen::<f64>()).ln();
        }
        let total: f64 = draws.iter().sum();
        let (a, b, c) = (draws[0] / total, draws[1] / total, draws[2] / total);
        let mag = (b * c).sqrt() * rng.gen::<f64>();
        let phase = rng.gen::<f64>() * std::f64::consts::TAU;
        let d = C64::from_polar(mag, phase);
        Self::new(a, b, c, d).expect("construction keeps the PSD constraint")
    }

    pub fn to_density(&self) -> Result<DensityMatrix> {
        let mut m = CMatrix::zeros((4, 4));
        m[[0, 0]] = C64::new(self.a, 0.0);
        m[[1, 1]] = C64::new(self.b, 0.0);
        m[[2, 2]] = C64::new(self.c, 0.0);
        m[[1, 2]] = self.d;
        m[[2, 1]] = self.d.conj();
        DensityMatrix::new((2, 2), m)
    }
}

/// Equality check C[(I ⊗ $_p)ρ₀] = C[ρ₀]·C[ρ_$p] for the X-state family
/// under phase noise. Both sides are exact Wootters evaluations.
pub fn xstate_phase_noise(params: &XStateParams, gamma_t: f64) -> Result<EvolutionReport> {
    let rho0 = params.to_density()?;
    let ch = KrausChannel::phase_noise(gamma_t)?;
    let (evolved, _) = ch.apply_one_sided(&rho0, Subsystem::Second)?;
    let direct = wootters_concurrence(&evolved)?;
    let predicted = wootters_concurrence(&rho0)? * wootters_concurrence(&ch.image()?)?;
    Ok(EvolutionReport::exact(
        predicted,
        direct,
        crate::evolution::DirectMethod::WoottersExact,
        (2, 2),
    ))
}

#[derive(Debug, Clone, Serialize)]
pub struct XStateSummary {
    pub max_abs_gap: f64,
    pub pass: bool,
}

/// X-state equality across a Γt grid for fixed parameters.
pub fn xstate_scan(
    params: &XStateParams,
    gamma_t: &[f64],
) -> Result<(ScanGrid, XStateSummary)> {
    let mut rows = Vec::with_capacity(gamma_t.len());
    let mut max_abs_gap: f64 = 0.0;
    for &gt in gamma_t {
        let report = xstate_phase_noise(params, gt)?;
        max_abs_gap = max_abs_gap.max(report.gap.abs());
        rows.push(vec![gt, report.direct, report.predicted, report.gap]);
    }
    let summary = XStateSummary {
        max_abs_gap,
        pass: max_abs_gap <= tol::EXACT_LAW,
    };
    let (lo, hi) = grid_extent(gamma_t);
    let grid = ScanGrid {
        axes: vec![AxisSpec::new("gamma_t", lo, hi, gamma_t.len())],
        columns: vec![
            "gamma_t".into(),
            "c_evolved_direct".into(),
            "c_product_pred".into(),
            "gap".into(),
        ],
        rows,
    };
    Ok((grid, summary))
}

fn grid_extent(values: &[f64]) -> (f64, f64) {
    let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if lo.is_finite() {
        (lo, hi)
    } else {
        (0.0, 0.0)
    }
}
