//! The factorization objective and the quantities derived from it.

use crate::error::{shape_err, Error, Result};
use crate::linalg::{
    dot, extreme_eigenvalues_warm, jacobi_eigh, DenseMatrix, EigenWarmStart, SymmetricMatrix,
    POWER_MAX_ITER, POWER_TOL,
};

pub(crate) fn check_factor(m: &SymmetricMatrix, h: &DenseMatrix, what: &str) -> Result<()> {
    if h.rows() != m.dim() {
        return Err(shape_err(
            format!("{what} with {} rows", m.dim()),
            format!("{}x{}", h.rows(), h.cols()),
        ));
    }
    Ok(())
}

/// `‖M − H Hᵀ‖²_F`.
pub fn objective(m: &SymmetricMatrix, h: &DenseMatrix) -> Result<f64> {
    check_factor(m, h, "H")?;
    Ok(residual_sq(m, h, h))
}

/// `‖M − H Pᵀ‖²_F`, accumulated without forming the product.
fn residual_sq(m: &SymmetricMatrix, h: &DenseMatrix, p: &DenseMatrix) -> f64 {
    let n = m.dim();
    let mut total = 0.0;
    for i in 0..n {
        let hi = h.row(i);
        let mi = m.row(i);
        for j in 0..n {
            let r = mi[j] - dot(hi, p.row(j));
            total += r * r;
        }
    }
    total
}

/// `‖M − H Pᵀ‖²_F + μ ‖H − P‖²_F`.
pub fn split_objective(
    m: &SymmetricMatrix,
    h: &DenseMatrix,
    p: &DenseMatrix,
    mu: f64,
) -> Result<f64> {
    check_factor(m, h, "H")?;
    if p.shape() != h.shape() {
        return Err(shape_err(
            format!("P of shape {}x{}", h.rows(), h.cols()),
            format!("{}x{}", p.rows(), p.cols()),
        ));
    }
    if !(mu > 0.0) {
        return Err(Error::InvalidInput(format!(
            "penalty mu must be > 0, got {mu}"
        )));
    }
    Ok(residual_sq(m, h, p) + mu * h.sub(p).frobenius_norm_sq())
}

/// `‖M − H Hᵀ‖²_F / ‖M‖²_F`; falls back to the absolute error when `M = 0`.
pub fn relative_error(m: &SymmetricMatrix, h: &DenseMatrix) -> Result<f64> {
    let f = objective(m, h)?;
    let scale = m.frobenius_norm_sq();
    Ok(if scale > 0.0 { f / scale } else { f })
}

/// `∇f(H) = 4 (H HᵀH − M H)`.
pub fn gradient(m: &SymmetricMatrix, h: &DenseMatrix) -> Result<DenseMatrix> {
    check_factor(m, h, "H")?;
    let gram = h.t_matmul(h);
    let mut g = h.matmul(&gram);
    g.axpy(-1.0, &m.matmul(h));
    Ok(g.scale(4.0))
}

/// `L = 4 σ_max(H Hᵀ − M) + 8 σ_max(Hᵀ H)`, a local Lipschitz bound for `∇f`.
pub fn lipschitz_constant(m: &SymmetricMatrix, h: &DenseMatrix) -> Result<f64> {
    lipschitz_constant_warm(m, h, &mut EigenWarmStart::default())
}

/// [`lipschitz_constant`] reusing power-iteration start vectors across calls.
pub fn lipschitz_constant_warm(
    m: &SymmetricMatrix,
    h: &DenseMatrix,
    warm: &mut EigenWarmStart,
) -> Result<f64> {
    check_factor(m, h, "H")?;
    let residual = SymmetricMatrix::from_fn(m.dim(), |i, j| dot(h.row(i), h.row(j)) - m[(i, j)]);
    let est = extreme_eigenvalues_warm(&residual, POWER_TOL, POWER_MAX_ITER, warm)?;
    let sigma_residual = if est.converged {
        est.spectral_radius()
    } else {
        // Gershgorin radius bounds the spectral norm from above.
        residual.gershgorin_radius()
    };
    let sigma_gram = if h.cols() == 0 {
        0.0
    } else {
        jacobi_eigh(&SymmetricMatrix::inner_gram(h))?.values[0].max(0.0)
    };
    Ok(4.0 * sigma_residual + 8.0 * sigma_gram)
}

/// `‖(H − H_next) / t‖_F`, the projected-gradient stationarity measure.
pub fn gradient_mapping_norm(h: &DenseMatrix, h_next: &DenseMatrix, t: f64) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::InvalidInput(format!(
            "stepsize must be > 0, got {t}"
        )));
    }
    if h.shape() != h_next.shape() {
        return Err(shape_err(
            format!("{}x{}", h.rows(), h.cols()),
            format!("{}x{}", h_next.rows(), h_next.cols()),
        ));
    }
    Ok(h.sub(h_next).frobenius_norm() / t)
}
