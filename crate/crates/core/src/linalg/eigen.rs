//! Symmetric eigenvalue routines.
//!
//! Two tools with different jobs: a shifted power iteration that only
//! estimates the two ends of the spectrum in `O(n²)` per step, and a cyclic
//! Jacobi solver for complete decompositions of small matrices.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::matrix::{dot, norm, DenseMatrix, SymmetricMatrix};
use crate::error::{Error, Result};

/// Default convergence tolerance on the Rayleigh quotient change.
pub const POWER_TOL: f64 = 1e-10;
/// Default iteration cap for each power-iteration run.
pub const POWER_MAX_ITER: usize = 5000;

const START_SEED: u64 = 0x005e_ed0f_e16e;

/// Estimates of the largest and smallest eigenvalue of a symmetric matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExtremeEigenvalues {
    pub lambda_max: f64,
    pub lambda_min: f64,
    /// `false` when either power run hit `max_iter` before meeting `tol`.
    pub converged: bool,
}

impl ExtremeEigenvalues {
    /// Largest eigenvalue magnitude, i.e. the spectral norm of the matrix.
    pub fn spectral_radius(&self) -> f64 {
        self.lambda_max.abs().max(self.lambda_min.abs())
    }
}

/// Start vectors carried between calls on slowly changing matrices.
///
/// Seeding each power run with the previous dominant vector makes repeated
/// estimates (one per solver iteration) converge in a handful of steps.
#[derive(Debug, Clone, Default)]
pub struct EigenWarmStart {
    upper: Option<Vec<f64>>,
    lower: Option<Vec<f64>>,
}

/// Largest and smallest eigenvalue by Gershgorin-shifted power iteration.
///
/// With `c = max_i Σ_j |s_ij|`, both `S + cI` and `cI - S` are PSD, so each
/// run converges to a simple-magnitude dominant eigenvalue even when `S` has
/// eigenvalues `±t`.
pub fn extreme_eigenvalues(
    s: &SymmetricMatrix,
    tol: f64,
    max_iter: usize,
) -> Result<ExtremeEigenvalues> {
    extreme_eigenvalues_warm(s, tol, max_iter, &mut EigenWarmStart::default())
}

/// [`extreme_eigenvalues`] starting from (and updating) `warm`.
pub fn extreme_eigenvalues_warm(
    s: &SymmetricMatrix,
    tol: f64,
    max_iter: usize,
    warm: &mut EigenWarmStart,
) -> Result<ExtremeEigenvalues> {
    if !(tol > 0.0) || max_iter == 0 {
        return Err(Error::InvalidInput(format!(
            "power iteration needs tol > 0 and max_iter >= 1 (got {tol}, {max_iter})"
        )));
    }
    if !s.is_finite() {
        return Err(Error::InvalidInput(
            "eigenvalue estimate of a matrix with non-finite entries".into(),
        ));
    }
    let n = s.dim();
    let c = s.gershgorin_radius();
    if n == 0 || c == 0.0 {
        return Ok(ExtremeEigenvalues {
            lambda_max: 0.0,
            lambda_min: 0.0,
            converged: true,
        });
    }

    let upper_start = take_start(&mut warm.upper, n);
    let (top, v_top, conv_top) = power_run(
        |x, y| shifted_apply(s, c, 1.0, x, y),
        upper_start,
        tol,
        max_iter,
    );
    let lower_start = take_start(&mut warm.lower, n);
    let (bottom, v_bottom, conv_bottom) = power_run(
        |x, y| shifted_apply(s, c, -1.0, x, y),
        lower_start,
        tol,
        max_iter,
    );
    warm.upper = Some(v_top);
    warm.lower = Some(v_bottom);

    let lambda_max = (top - c).clamp(-c, c);
    let lambda_min = (c - bottom).clamp(-c, lambda_max);
    Ok(ExtremeEigenvalues {
        lambda_max,
        lambda_min,
        converged: conv_top && conv_bottom,
    })
}

fn take_start(slot: &mut Option<Vec<f64>>, n: usize) -> Vec<f64> {
    match slot.take() {
        Some(v) if v.len() == n && norm(&v) > 0.0 => v,
        _ => seeded_start(n),
    }
}

fn seeded_start(n: usize) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(START_SEED);
    let mut v: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let nv = norm(&v);
    v.iter_mut().for_each(|x| *x /= nv);
    v
}

/// `y = sign * S x + c x`.
fn shifted_apply(s: &SymmetricMatrix, c: f64, sign: f64, x: &[f64], y: &mut [f64]) {
    for (i, yi) in y.iter_mut().enumerate() {
        *yi = sign * dot(s.row(i), x) + c * x[i];
    }
}

/// Power iteration on a PSD operator. Returns (Rayleigh quotient, unit vector, converged).
fn power_run(
    apply: impl Fn(&[f64], &mut [f64]),
    mut v: Vec<f64>,
    tol: f64,
    max_iter: usize,
) -> (f64, Vec<f64>, bool) {
    let n = v.len();
    let nv = norm(&v);
    v.iter_mut().for_each(|x| *x /= nv);
    let mut w = vec![0.0; n];
    let mut prev = f64::NAN;
    for _ in 0..max_iter {
        apply(&v, &mut w);
        let rq = dot(&v, &w);
        let nw = norm(&w);
        if nw == 0.0 {
            return (0.0, v, true);
        }
        if (rq - prev).abs() <= tol * rq.abs().max(1.0) {
            return (rq, v, true);
        }
        prev = rq;
        for (vi, wi) in v.iter_mut().zip(&w) {
            *vi = wi / nw;
        }
    }
    apply(&v, &mut w);
    (dot(&v, &w), v, false)
}

/// Full eigendecomposition of a small symmetric matrix.
#[derive(Debug, Clone)]
pub struct SymmetricEigen {
    /// Eigenvalues in descending order.
    pub values: Vec<f64>,
    /// Orthonormal eigenvectors stored as columns, matching `values`.
    pub vectors: DenseMatrix,
}

impl SymmetricEigen {
    /// `V diag(f(λ)) Vᵀ`.
    pub fn reconstruct_with(&self, f: impl Fn(f64) -> f64) -> DenseMatrix {
        let scaled = DenseMatrix::from_fn(self.vectors.rows(), self.vectors.cols(), |i, j| {
            self.vectors[(i, j)] * f(self.values[j])
        });
        scaled.matmul_t(&self.vectors)
    }
}

const JACOBI_MAX_SWEEPS: usize = 100;
const JACOBI_REL_TOL: f64 = 1e-14;

/// Cyclic Jacobi eigensolver.
///
/// Sweeps plane rotations over every off-diagonal pair until the
/// off-diagonal Frobenius mass drops below `1e-14 * ‖S‖_F`. Intended for
/// small `k x k` Gram matrices and as a reference for the power iteration.
pub fn jacobi_eigh(s: &SymmetricMatrix) -> Result<SymmetricEigen> {
    if !s.is_finite() {
        return Err(Error::InvalidInput(
            "eigendecomposition of a matrix with non-finite entries".into(),
        ));
    }
    let n = s.dim();
    let mut a = s.as_dense().clone();
    let mut v = DenseMatrix::identity(n);
    let threshold = JACOBI_REL_TOL * a.frobenius_norm();

    for _ in 0..JACOBI_MAX_SWEEPS {
        if off_diagonal_norm(&a) <= threshold {
            break;
        }
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let (app, aqq) = (a[(p, p)], a[(q, q)]);
                // Rotations below this size no longer change the diagonal.
                if apq.abs() <= f64::EPSILON * 1e-3 * (app.abs() + aqq.abs()) {
                    a[(p, q)] = 0.0;
                    a[(q, p)] = 0.0;
                    continue;
                }
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let sn = t * c;
                rotate(&mut a, &mut v, p, q, c, sn);
                rotated = true;
            }
        }
        if !rotated {
            break;
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(j, j)].total_cmp(&a[(i, i)]));
    let values = order.iter().map(|&i| a[(i, i)]).collect();
    let vectors = DenseMatrix::from_fn(n, n, |r, c| v[(r, order[c])]);
    Ok(SymmetricEigen { values, vectors })
}

fn off_diagonal_norm(a: &DenseMatrix) -> f64 {
    let n = a.rows();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)] * a[(i, j)];
            }
        }
    }
    s.sqrt()
}

/// Applies `A ← Jᵀ A J` and `V ← V J` for the rotation in the `(p, q)` plane.
fn rotate(a: &mut DenseMatrix, v: &mut DenseMatrix, p: usize, q: usize, c: f64, s: f64) {
    let n = a.rows();
    for k in 0..n {
        let (akp, akq) = (a[(k, p)], a[(k, q)]);
        a[(k, p)] = c * akp - s * akq;
        a[(k, q)] = s * akp + c * akq;
    }
    for k in 0..n {
        let (apk, aqk) = (a[(p, k)], a[(q, k)]);
        a[(p, k)] = c * apk - s * aqk;
        a[(q, k)] = s * apk + c * aqk;
    }
    a[(p, q)] = 0.0;
    a[(q, p)] = 0.0;
    for k in 0..n {
        let (vkp, vkq) = (v[(k, p)], v[(k, q)]);
        v[(k, p)] = c * vkp - s * vkq;
        v[(k, q)] = s * vkp + c * vkq;
    }
}
