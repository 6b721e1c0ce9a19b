//! Graph-regularized symmetric matrix factorization for clustering.
//!
//! Given a symmetric similarity matrix `A`, its Laplacian `L = D - A` and a
//! weight `λ ≥ 0`, the factor `H ∈ ℝ^{n×k}` minimizes `‖A − λL − HHᵀ‖²_F`.
//! Two solvers are provided:
//!
//! * [`solver::solve_columnwise`]: alternating exact column updates on the
//!   penalized split problem `‖M − HPᵀ‖²_F + μ‖H − P‖²_F`;
//! * [`solver::solve_pgd`]: projected gradient with the adaptive step
//!   `1/(2 L_i)` over one of several constraint sets.
//!
//! [`clustering`] turns factors into labels and scores them.

// `!(x > 0.0)` deliberately rejects NaN; index loops mirror the math.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod cli;
pub mod clustering;
pub mod error;
pub mod graph;
pub mod linalg;
pub mod solver;

pub use error::{Error, Result};
