//! Dense complex linear algebra kernel.
//!
//! Everything in the crate is built on small dense matrices (nothing here
//! exceeds 12x12), so the solvers favour robustness over asymptotics: the
//! Hermitian eigenproblem is handled by a cyclic Jacobi iteration with a
//! phase rotation per pivot, and Haar sampling orthonormalizes a complex
//! Gaussian matrix.

use ndarray::{Array1, Array2};
use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::tol;

/// Dense complex matrix, row-major.
pub type CMatrix = Array2<C64>;
/// Dense complex vector.
pub type CVector = Array1<C64>;

/// Which tensor factor an operation addresses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    First,
    Second,
}

/// n x n identity.
pub fn identity(n: usize) -> CMatrix {
    Array2::eye(n)
}

/// Conjugate transpose.
pub fn dagger(m: &CMatrix) -> CMatrix {
    m.t().mapv(|z| z.conj())
}

/// Frobenius norm.
pub fn frob_norm(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Largest entry modulus.
pub fn max_abs_entry(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Max entry of |m - m†|.
pub fn hermiticity_deviation(m: &CMatrix) -> f64 {
    let n = m.nrows();
    let mut dev: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            dev = dev.max((m[[i, j]] - m[[j, i]].conj()).norm());
        }
    }
    dev
}

/// Trace.
pub fn trace(m: &CMatrix) -> C64 {
    m.diag().sum()
}

/// Kronecker product a ⊗ b.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    let (ar, ac) = a.dim();
    let (br, bc) = b.dim();
    let mut out = CMatrix::zeros((ar * br, ac * bc));
    for i in 0..ar {
        for j in 0..ac {
            let aij = a[[i, j]];
            for k in 0..br {
                for l in 0..bc {
                    out[[i * br + k, j * bc + l]] = aij * b[[k, l]];
                }
            }
        }
    }
    out
}

/// Partial trace of a bipartite operator on C^{n1} ⊗ C^{n2}.
pub fn partial_trace(rho: &CMatrix, dims: (usize, usize), keep: Subsystem) -> Result<CMatrix> {
    let (n1, n2) = dims;
    let n = n1 * n2;
    if rho.dim() != (n, n) {
        return Err(Error::DimensionMismatch(format!(
            "operator is {}x{} but dims ({}, {}) require {}x{}",
            rho.nrows(),
            rho.ncols(),
            n1,
            n2,
            n,
            n
        )));
    }
    match keep {
        Subsystem::First => {
            let mut out = CMatrix::zeros((n1, n1));
            for i in 0..n1 {
                for ip in 0..n1 {
                    let mut acc = C64::new(0.0, 0.0);
                    for j in 0..n2 {
                        acc += rho[[i * n2 + j, ip * n2 + j]];
                    }
                    out[[i, ip]] = acc;
                }
            }
            Ok(out)
        }
        Subsystem::Second => {
            let mut out = CMatrix::zeros((n2, n2));
            for j in 0..n2 {
                for jp in 0..n2 {
                    let mut acc = C64::new(0.0, 0.0);
                    for i in 0..n1 {
                        acc += rho[[i * n2 + j, i * n2 + jp]];
                    }
                    out[[j, jp]] = acc;
                }
            }
            Ok(out)
        }
    }
}

fn off_diag_norm(a: &CMatrix) -> f64 {
    let n = a.nrows();
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                acc += a[[i, j]].norm_sqr();
            }
        }
    }
    acc.sqrt()
}

/// Hermitian eigendecomposition by cyclic Jacobi with phased rotations.
///
/// Returns eigenvalues in ascending order and the unitary of eigenvectors
/// as columns, so that `m = V diag(λ) V†`. The input must be Hermitian to
/// within `tol` (max entry of |m - m†|); the iteration itself runs on the
/// Hermitian average (m + m†)/2.
pub fn eigh(m: &CMatrix, tol: f64) -> Result<(Vec<f64>, CMatrix)> {
    let (rows, cols) = m.dim();
    if rows != cols {
        return Err(Error::NonSquare { rows, cols });
    }
    let n = rows;
    let deviation = hermiticity_deviation(m);
    if deviation > tol {
        return Err(Error::NotHermitian { deviation, tol });
    }

    let mut a = CMatrix::zeros((n, n));
    for i in 0..n {
        for j in 0..n {
            a[[i, j]] = 0.5 * (m[[i, j]] + m[[j, i]].conj());
        }
    }
    let mut v = identity(n);
    let scale = frob_norm(&a);
    if n == 1 || scale == 0.0 {
        let vals = a.diag().iter().map(|z| z.re).collect();
        return Ok((vals, v));
    }
    let threshold = tol::JACOBI_OFF_DIAG * scale;

    for _ in 0..tol::JACOBI_MAX_SWEEPS {
        if off_diag_norm(&a) <= threshold {
            return Ok(sorted_eigh(a, v));
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[[p, q]];
                let abs = apq.norm();
                if abs == 0.0 {
                    continue;
                }
                // phase rotation makes the 2x2 pivot block real symmetric
                let phase = apq / abs;
                let app = a[[p, p]].re;
                let aqq = a[[q, q]].re;
                let tau = (aqq - app) / (2.0 * abs);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                let jpp = phase * c;
                let jpq = phase * s;

                // A <- J† A J, columns then rows
                for i in 0..n {
                    let aip = a[[i, p]];
                    let aiq = a[[i, q]];
                    a[[i, p]] = aip * jpp - aiq * s;
                    a[[i, q]] = aip * jpq + aiq * c;
                }
                for i in 0..n {
                    let api = a[[p, i]];
                    let aqi = a[[q, i]];
                    a[[p, i]] = jpp.conj() * api - s * aqi;
                    a[[q, i]] = jpq.conj() * api + c * aqi;
                }
                for i in 0..n {
                    let vip = v[[i, p]];
                    let viq = v[[i, q]];
                    v[[i, p]] = vip * jpp - viq * s;
                    v[[i, q]] = vip * jpq + viq * c;
                }
            }
        }
    }

    let off = off_diag_norm(&a);
    if off <= threshold {
        Ok(sorted_eigh(a, v))
    } else {
        Err(Error::NoConvergence {
            sweeps: tol::JACOBI_MAX_SWEEPS,
            off,
        })
    }
}

fn sorted_eigh(a: CMatrix, v: CMatrix) -> (Vec<f64>, CMatrix) {
    let n = a.nrows();
    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = a.diag().iter().map(|z| z.re).collect();
    order.sort_by(|&i, &j| diag[i].partial_cmp(&diag[j]).unwrap());
    let vals: Vec<f64> = order.iter().map(|&i| diag[i]).collect();
    let mut vs = CMatrix::zeros((n, n));
    for (dst, &src) in order.iter().enumerate() {
        for i in 0..n {
            vs[[i, dst]] = v[[i, src]];
        }
    }
    (vals, vs)
}

/// Principal square root of a PSD Hermitian matrix.
///
/// Eigenvalues in [-1e-10, 0) are clamped to zero; anything lower is a
/// hard error rather than a silent repair.
pub fn sqrt_psd(m: &CMatrix) -> Result<CMatrix> {
    let (vals, v) = eigh(m, tol::HERMITICITY)?;
    if let Some(&lo) = vals.first() {
        if lo < tol::PSD_FLOOR {
            return Err(Error::NotPositiveSemidefinite { eigenvalue: lo });
        }
    }
    let n = m.nrows();
    let mut out = CMatrix::zeros((n, n));
    for (k, &lam) in vals.iter().enumerate() {
        let r = lam.max(0.0).sqrt();
        if r == 0.0 {
            continue;
        }
        for i in 0..n {
            for j in 0..n {
                out[[i, j]] += v[[i, k]] * v[[j, k]].conj() * r;
            }
        }
    }
    Ok(out)
}

/// Singular values in descending order, computed through the Hermitian
/// embedding [[0, m], [m†, 0]] whose spectrum is ±σ. Backward stable, so
/// tiny singular values come out with absolute (not relative) accuracy.
pub fn singular_values(m: &CMatrix) -> Result<Vec<f64>> {
    let (r, c) = m.dim();
    if r == 0 || c == 0 {
        return Ok(Vec::new());
    }
    let n = r + c;
    let mut h = CMatrix::zeros((n, n));
    for i in 0..r {
        for j in 0..c {
            h[[i, r + j]] = m[[i, j]];
            h[[r + j, i]] = m[[i, j]].conj();
        }
    }
    let (vals, _) = eigh(&h, tol::HERMITICITY)?;
    let mut sv: Vec<f64> = vals
        .iter()
        .rev()
        .take(r.min(c))
        .map(|&l| l.max(0.0))
        .collect();
    sv.sort_by(|a, b| b.partial_cmp(a).unwrap());
    Ok(sv)
}

/// Deterministic per-task seed derivation (splitmix64 over master ⊕ index).
pub fn derive_seed(master: u64, index: u64) -> u64 {
    let mut z = master ^ index.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seeded RNG used everywhere randomness is needed.
pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Matrix of independent standard complex Gaussians (unit variance per entry).
pub fn complex_gaussian_matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize) -> CMatrix {
    let scale = std::f64::consts::FRAC_1_SQRT_2;
    CMatrix::from_shape_fn((rows, cols), |_| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        C64::new(re * scale, im * scale)
    })
}

/// Haar-random unitary drawn with the given seed.
pub fn haar_unitary(n: usize, seed: u64) -> CMatrix {
    let mut rng = rng_from_seed(seed);
    haar_unitary_with(&mut rng, n)
}

/// Haar-random unitary drawn from an existing RNG stream.
///
/// Orthonormalizes a complex Ginibre matrix column by column; the positive
/// real diagonal of the implicit R factor makes the distribution Haar.
pub fn haar_unitary_with<R: Rng>(rng: &mut R, n: usize) -> CMatrix {
    let g = complex_gaussian_matrix(rng, n, n);
    let mut q = g;
    for j in 0..n {
        // two orthogonalization passes keep the columns orthonormal to
        // machine precision
        for _ in 0..2 {
            for k in 0..j {
                let mut overlap = C64::new(0.0, 0.0);
                for i in 0..n {
                    overlap += q[[i, k]].conj() * q[[i, j]];
                }
                for i in 0..n {
                    let qik = q[[i, k]];
                    q[[i, j]] -= qik * overlap;
                }
            }
        }
        let norm = (0..n).map(|i| q[[i, j]].norm_sqr()).sum::<f64>().sqrt();
        for i in 0..n {
            q[[i, j]] /= norm;
        }
    }
    q
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cm(rows: usize, cols: usize, re: &[f64]) -> CMatrix {
        CMatrix::from_shape_fn((rows, cols), |(i, j)| C64::new(re[i * cols + j], 0.0))
    }

    fn random_hermitian(n: usize, seed: u64) -> CMatrix {
        let mut rng = rng_from_seed(seed);
        let g = complex_gaussian_matrix(&mut rng, n, n);
        let mut h = CMatrix::zeros((n, n));
        for i in 0..n {
            for j in 0..n {
                h[[i, j]] = 0.5 * (g[[i, j]] + g[[j, i]].conj());
            }
        }
        h
    }

    #[test]
    fn eigh_diagonal_input() {
        let m = cm(2, 2, &[3.0, 0.0, 0.0, 1.0]);
        let (vals, v) = eigh(&m, 1e-12).unwrap();
        assert!((vals[0] - 1.0).abs() < 1e-14);
        assert!((vals[1] - 3.0).abs() < 1e-14);
        // columns are permuted identity vectors
        assert!((v[[1, 0]].norm() - 1.0).abs() < 1e-12);
        assert!((v[[0, 1]].norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn eigh_pauli_x_spectrum() {
        let m = cm(2, 2, &[0.0, 1.0, 1.0, 0.0]);
        let (vals, v) = eigh(&m, 1e-12).unwrap();
        assert!((vals[0] + 1.0).abs() < 1e-13);
        assert!((vals[1] - 1.0).abs() < 1e-13);
        for col in 0..2 {
            let ratio = v[[0, col]].norm() / v[[1, col]].norm();
            assert!((ratio - 1.0).abs() < 1e-10, "eigenvectors are (1, ∓1)/√2");
        }
    }

    #[test]
    fn eigh_reconstructs_random_hermitian() {
        for n in [2, 5, 9, 16] {
            let h = random_hermitian(n, 100 + n as u64);
            let (vals, v) = eigh(&h, 1e-10).unwrap();
            let mut rec = CMatrix::zeros((n, n));
            for k in 0..n {
                for i in 0..n {
                    for j in 0..n {
                        rec[[i, j]] += v[[i, k]] * v[[j, k]].conj() * vals[k];
                    }
                }
            }
            let resid = frob_norm(&(&rec - &h));
            assert!(
                resid <= tol::EIGH_RECONSTRUCTION * frob_norm(&h),
                "n={n}: residual {resid:.3e}"
            );
            let gram = dagger(&v).dot(&v);
            let dev = frob_norm(&(&gram - &identity(n)));
            assert!(dev < tol::UNITARITY, "n={n}: V†V deviates {dev:.3e}");
        }
    }

    #[test]
    fn eigh_rejects_non_square_and_non_hermitian() {
        let m = CMatrix::zeros((2, 3));
        assert!(matches!(eigh(&m, 1e-10), Err(Error::NonSquare { .. })));
        let m = cm(2, 2, &[0.0, 1.0, 0.0, 0.0]);
        assert!(matches!(eigh(&m, 1e-10), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn sqrt_psd_basics() {
        let m = identity(3);
        let r = sqrt_psd(&m).unwrap();
        assert!(frob_norm(&(&r - &identity(3))) < 1e-12);

        let m = cm(2, 2, &[4.0, 0.0, 0.0, 9.0]);
        let r = sqrt_psd(&m).unwrap();
        assert!((r[[0, 0]].re - 2.0).abs() < 1e-12);
        assert!((r[[1, 1]].re - 3.0).abs() < 1e-12);
    }

    #[test]
    fn sqrt_psd_squares_back() {
        let mut rng = rng_from_seed(7);
        let g = complex_gaussian_matrix(&mut rng, 5, 5);
        let mut psd = g.dot(&dagger(&g));
        let tr = trace(&psd).re;
        psd.mapv_inplace(|z| z / tr);
        let r = sqrt_psd(&psd).unwrap();
        let sq = r.dot(&r);
        assert!(frob_norm(&(&sq - &psd)) < tol::SQRT_RESIDUAL);
    }

    #[test]
    fn sqrt_psd_rejects_negative() {
        let m = cm(2, 2, &[1.0, 0.0, 0.0, -1e-6]);
        assert!(matches!(
            sqrt_psd(&m),
            Err(Error::NotPositiveSemidefinite { .. })
        ));
    }

    #[test]
    fn sqrt_psd_fixes_projectors() {
        // P² = P  =>  sqrt(P) = P
        let p = cm(2, 2, &[0.5, 0.5, 0.5, 0.5]);
        let r = sqrt_psd(&p).unwrap();
        assert!(frob_norm(&(&r - &p)) < 1e-12);
    }

    #[test]
    fn kron_blocks() {
        let out = kron(&identity(2), &identity(2));
        assert!(frob_norm(&(&out - &identity(4))) < 1e-15);

        let d = cm(2, 2, &[1.0, 0.0, 0.0, 2.0]);
        let n = cm(2, 2, &[0.0, 1.0, 0.0, 0.0]);
        let out = kron(&d, &n);
        assert_eq!(out.dim(), (4, 4));
        assert!((out[[0, 1]].re - 1.0).abs() < 1e-15);
        assert!((out[[2, 3]].re - 2.0).abs() < 1e-15);
        assert!((frob_norm(&out) - (5.0f64).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn kron_mixed_product_identity() {
        let mut rng = rng_from_seed(11);
        let a = complex_gaussian_matrix(&mut rng, 2, 2);
        let b = complex_gaussian_matrix(&mut rng, 2, 2);
        let c = complex_gaussian_matrix(&mut rng, 2, 2);
        let d = complex_gaussian_matrix(&mut rng, 2, 2);
        let lhs = kron(&a, &b).dot(&kron(&c, &d));
        let rhs = kron(&a.dot(&c), &b.dot(&d));
        assert!(frob_norm(&(&lhs - &rhs)) < 1e-12);
    }

    #[test]
    fn partial_trace_maximally_mixed_marginals() {
        // |φ⟩ = (|00⟩ + |11⟩)/√2
        let mut rho = CMatrix::zeros((4, 4));
        for &i in &[0usize, 3] {
            for &j in &[0usize, 3] {
                rho[[i, j]] = C64::new(0.5, 0.0);
            }
        }
        for keep in [Subsystem::First, Subsystem::Second] {
            let red = partial_trace(&rho, (2, 2), keep).unwrap();
            let half = identity(2).mapv(|z| z * 0.5);
            assert!(frob_norm(&(&red - &half)) < 1e-14);
        }
    }

    #[test]
    fn partial_trace_product_state() {
        let mut rng = rng_from_seed(21);
        let mk_density = |rng: &mut ChaCha8Rng, n: usize| {
            let g = complex_gaussian_matrix(rng, n, n);
            let mut r = g.dot(&dagger(&g));
            let t = trace(&r).re;
            r.mapv_inplace(|z| z / t);
            r
        };
        let ra = mk_density(&mut rng, 3);
        let rb = mk_density(&mut rng, 2);
        let joint = kron(&ra, &rb);
        let back = partial_trace(&joint, (3, 2), Subsystem::First).unwrap();
        assert!(frob_norm(&(&back - &ra)) < 1e-12);
        let tr_full = trace(&joint).re;
        let tr_red = trace(&back).re;
        assert!((tr_full - tr_red).abs() < 1e-12);
    }

    #[test]
    fn partial_trace_dim_mismatch() {
        let rho = identity(4);
        assert!(partial_trace(&rho, (3, 2), Subsystem::First).is_err());
    }

    #[test]
    fn haar_unitary_is_unitary_and_deterministic() {
        for n in [1, 2, 4, 7] {
            let u = haar_unitary(n, 42);
            let gram = dagger(&u).dot(&u);
            assert!(frob_norm(&(&gram - &identity(n))) < tol::UNITARITY);
            let again = haar_unitary(n, 42);
            assert!(frob_norm(&(&u - &again)) == 0.0, "same seed, same matrix");
        }
        let u1 = haar_unitary(1, 5);
        assert!((u1[[0, 0]].norm() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn haar_first_entry_moment() {
        // E|U_00|² = 1/n for Haar; 10⁴ samples at n=4, 3σ window
        let n = 4;
        let samples = 10_000;
        let mut rng = rng_from_seed(2024);
        let mut acc = 0.0;
        for _ in 0..samples {
            let u = haar_unitary_with(&mut rng, n);
            acc += u[[0, 0]].norm_sqr();
        }
        let mean = acc / samples as f64;
        // Var |U_00|² = 3/80 for n = 4 (Beta(1,3))
        let sigma = (0.0375f64 / samples as f64).sqrt();
        assert!(
            (mean - 0.25).abs() < 3.0 * sigma,
            "mean {mean} outside 3σ of 1/4"
        );
    }

    #[test]
    fn derived_seeds_differ() {
        let a = derive_seed(7, 0);
        let b = derive_seed(7, 1);
        let c = derive_seed(8, 0);
        assert_ne!(a, b);
        assert_ne!(a, c);
        assert_eq!(a, derive_seed(7, 0));
    }
}
