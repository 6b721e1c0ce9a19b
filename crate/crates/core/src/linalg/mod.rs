//! Dense linear algebra: matrix containers, symmetric eigen-solvers and the
//! orthogonal polar factor.

mod eigen;
mod matrix;
mod polar;

pub use eigen::{
    extreme_eigenvalues, extreme_eigenvalues_warm, jacobi_eigh, EigenWarmStart, ExtremeEigenvalues,
    SymmetricEigen, POWER_MAX_ITER, POWER_TOL,
};
pub use matrix::{dot, norm, DenseMatrix, SymmetricMatrix, SYMMETRY_TOL};
pub use polar::{polar_orthogonal_factor, RANK_TOL};
