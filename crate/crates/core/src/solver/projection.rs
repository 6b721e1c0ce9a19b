use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::config::ConstraintSpec;
use crate::error::{shape_err, Error, Result};
use crate::linalg::{norm, polar_orthogonal_factor, DenseMatrix};

const PERTURB_SEED: u64 = 0x0b7a_0c0d;
/// Relative size of the jitter added to a rank-deficient point before the
/// polar factor is retried. Gram eigenvalues scale with its square, so this
/// clears the `1e-12` rank threshold of the polar factor.
const PERTURB_REL: f64 = 1e-4;
const UNIT_TOL: f64 = 1e-8;

/// Result of a projection, with the number of rows the unit-norm
/// projection had to freeze at their previous value.
#[derive(Debug, Clone, PartialEq)]
pub struct Projection {
    pub h: DenseMatrix,
    pub frozen_rows: usize,
}

/// Projects `stepped = H − t∇f(H)` onto the feasible set of `c`.
///
/// `h` is the iterate the step was taken from; it is only consulted when a
/// row of `stepped` is zero under [`ConstraintSpec::UnitRowNorm`], in which
/// case that row keeps its previous (feasible) value.
pub fn project(h: &DenseMatrix, c: &ConstraintSpec, stepped: DenseMatrix) -> Result<DenseMatrix> {
    project_tracked(h, c, stepped).map(|p| p.h)
}

pub fn project_tracked(
    h: &DenseMatrix,
    c: &ConstraintSpec,
    mut stepped: DenseMatrix,
) -> Result<Projection> {
    if h.shape() != stepped.shape() {
        return Err(shape_err(
            format!("stepped point of shape {}x{}", h.rows(), h.cols()),
            format!("{}x{}", stepped.rows(), stepped.cols()),
        ));
    }
    stepped.check_finite("projection input")?;
    c.validate(h.rows(), h.cols())?;
    let mut frozen_rows = 0;
    match *c {
        ConstraintSpec::Unconstrained => {}
        ConstraintSpec::Nonnegative => {
            stepped
                .as_mut_slice()
                .iter_mut()
                .for_each(|x| *x = x.max(0.0));
        }
        ConstraintSpec::UnitRowNorm => {
            for i in 0..stepped.rows() {
                let nr = norm(stepped.row(i));
                if nr > 0.0 {
                    stepped.row_mut(i).iter_mut().for_each(|x| *x /= nr);
                } else {
                    let prev = h.row(i);
                    if (norm(prev) - 1.0).abs() > UNIT_TOL {
                        return Err(Error::DegenerateRow {
                            row: i,
                            reason: "zero row cannot be projected onto the unit sphere".into(),
                        });
                    }
                    stepped.row_mut(i).copy_from_slice(prev);
                    frozen_rows += 1;
                }
            }
        }
        ConstraintSpec::RowSparsity(s) => {
            let k = stepped.cols();
            let mut order: Vec<usize> = Vec::with_capacity(k);
            for i in 0..stepped.rows() {
                let row = stepped.row_mut(i);
                order.clear();
                order.extend(0..k);
                // Stable sort: equal magnitudes keep the lower column first.
                order.sort_by(|&a, &b| row[b].abs().total_cmp(&row[a].abs()));
                for &j in &order[s..] {
                    row[j] = 0.0;
                }
            }
        }
        ConstraintSpec::Orthogonal => {
            stepped = match polar_orthogonal_factor(&stepped) {
                Ok(q) => q,
                Err(Error::Singular(_)) => {
                    let scale = PERTURB_REL * stepped.frobenius_norm().max(f64::MIN_POSITIVE);
                    let mut rng = ChaCha8Rng::seed_from_u64(PERTURB_SEED);
                    let jitter = DenseMatrix::from_fn(stepped.rows(), stepped.cols(), |_, _| {
                        rng.gen_range(-1.0..1.0)
                    });
                    stepped.axpy(scale, &jitter);
                    polar_orthogonal_factor(&stepped)?
                }
                Err(e) => return Err(e),
            };
        }
    }
    Ok(Projection {
        h: stepped,
        frozen_rows,
    })
}

/// Whether `h` lies in the feasible set of `c` up to `tol`.
pub fn is_feasible(h: &DenseMatrix, c: &ConstraintSpec, tol: f64) -> bool {
    match *c {
        ConstraintSpec::Unconstrained => true,
        ConstraintSpec::Nonnegative => h.as_slice().iter().all(|&x| x >= 0.0),
        ConstraintSpec::UnitRowNorm => (0..h.rows()).all(|i| (norm(h.row(i)) - 1.0).abs() <= tol),
        ConstraintSpec::RowSparsity(s) => {
            (0..h.rows()).all(|i| h.row(i).iter().filter(|&&x| x != 0.0).count() <= s)
        }
        ConstraintSpec::Orthogonal => {
            h.t_matmul(h)
                .sub(&DenseMatrix::identity(h.cols()))
                .frobenius_norm()
                <= tol
        }
    }
}
