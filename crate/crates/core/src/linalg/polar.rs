use super::eigen::jacobi_eigh;
use super::matrix::{DenseMatrix, SymmetricMatrix};
use crate::error::{shape_err, Error, Result};

/// Smallest admissible ratio `λ_min(BᵀB) / λ_max(BᵀB)`.
pub const RANK_TOL: f64 = 1e-12;

/// Orthogonal polar factor `U Vᵀ` of the thin SVD `B = U Σ Vᵀ`.
///
/// This is the matrix with orthonormal columns nearest to `B` in Frobenius
/// norm. It is formed from the `k x k` Gram matrix as `B V Σ⁻¹ Vᵀ`, then
/// polished with Newton-Schulz steps so that `QᵀQ = I` to rounding.
pub fn polar_orthogonal_factor(b: &DenseMatrix) -> Result<DenseMatrix> {
    let (n, k) = b.shape();
    if k == 0 || n < k {
        return Err(shape_err("n x k with n >= k >= 1", format!("{n}x{k}")));
    }
    b.check_finite("polar factor input")?;
    let gram = SymmetricMatrix::inner_gram(b);
    let eig = jacobi_eigh(&gram)?;
    let top = eig.values[0];
    let bottom = eig.values[k - 1];
    if !(top > 0.0) || bottom <= RANK_TOL * top {
        return Err(Error::Singular(format!(
            "rank-deficient {n}x{k} matrix (Gram eigenvalues {top:e} .. {bottom:e})"
        )));
    }
    let inv_sqrt = eig.reconstruct_with(|x| 1.0 / x.sqrt());
    let mut q = b.matmul(&inv_sqrt);

    let eye = DenseMatrix::identity(k);
    for _ in 0..3 {
        let qtq = q.t_matmul(&q);
        if qtq.sub(&eye).frobenius_norm() <= 1e-15 * k as f64 {
            break;
        }
        // Q ← Q (3I - QᵀQ) / 2
        let corr = eye.scale(1.5).sub(&qtq.scale(0.5));
        q = q.matmul(&corr);
    }
    Ok(q)
}
