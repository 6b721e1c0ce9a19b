use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::linalg::{extreme_eigenvalues, DenseMatrix, SymmetricMatrix, POWER_MAX_ITER, POWER_TOL};

const SCALE_FLOOR: f64 = 1e-6;

/// Seeded starting factor with entries `U(0,1) · sqrt(max(λ_max(M), 1e-6) / k)`,
/// so that `H₀H₀ᵀ` has roughly the spectral scale of `M`.
pub fn initial_factor(m: &SymmetricMatrix, k: usize, seed: u64) -> Result<DenseMatrix> {
    let top = extreme_eigenvalues(m, POWER_TOL, POWER_MAX_ITER)?.lambda_max;
    let scale = (top.max(SCALE_FLOOR) / k as f64).sqrt();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(DenseMatrix::from_fn(m.dim(), k, |_, _| {
        rng.gen_range(0.0..1.0) * scale
    }))
}
