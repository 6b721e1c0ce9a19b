//! Similarity graphs, Laplacians and the regularized target `M = A − λL`.

use crate::clustering::LabelVector;
use crate::error::{Error, Result};
use crate::linalg::{dot, norm, DenseMatrix, SymmetricMatrix};

/// Samples stored as rows of `x`, with optional ground-truth labels.
#[derive(Debug, Clone)]
pub struct Dataset {
    x: DenseMatrix,
    truth: Option<LabelVector>,
}

impl Dataset {
    pub fn new(x: DenseMatrix, truth: Option<LabelVector>) -> Result<Self> {
        if x.rows() < 2 {
            return Err(Error::InvalidInput(format!(
                "dataset needs at least 2 samples, got {}",
                x.rows()
            )));
        }
        x.check_finite("dataset features")?;
        if let Some(t) = &truth {
            if t.len() != x.rows() {
                return Err(Error::InvalidInput(format!(
                    "{} truth labels for {} samples",
                    t.len(),
                    x.rows()
                )));
            }
        }
        Ok(Self { x, truth })
    }

    pub fn features(&self) -> &DenseMatrix {
        &self.x
    }

    pub fn truth(&self) -> Option<&LabelVector> {
        self.truth.as_ref()
    }

    pub fn len(&self) -> usize {
        self.x.rows()
    }

    pub fn is_empty(&self) -> bool {
        self.x.rows() == 0
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Similarity {
    /// `⟨xᵢ, xⱼ⟩`
    InnerProduct,
    /// `⟨xᵢ, xⱼ⟩ / (‖xᵢ‖ ‖xⱼ‖)`
    Cosine,
    /// `exp(−‖xᵢ − xⱼ‖² / (2σ²))`
    Rbf { sigma: f64 },
}

/// Pairwise similarity matrix of the samples. Signs are kept as computed.
pub fn build_similarity(data: &Dataset, kind: Similarity) -> Result<SymmetricMatrix> {
    let x = data.features();
    let n = x.rows();
    match kind {
        Similarity::InnerProduct => Ok(SymmetricMatrix::from_fn(n, |i, j| dot(x.row(i), x.row(j)))),
        Similarity::Cosine => {
            let norms: Vec<f64> = (0..n).map(|i| norm(x.row(i))).collect();
            if let Some(i) = norms.iter().position(|&v| v == 0.0) {
                return Err(Error::InvalidInput(format!(
                    "cosine similarity undefined: row {i} has zero norm"
                )));
            }
            Ok(SymmetricMatrix::from_fn(n, |i, j| {
                if i == j {
                    1.0
                } else {
                    dot(x.row(i), x.row(j)) / (norms[i] * norms[j])
                }
            }))
        }
        Similarity::Rbf { sigma } => {
            if !(sigma > 0.0 && sigma.is_finite()) {
                return Err(Error::InvalidInput(format!(
                    "rbf bandwidth must be positive, got {sigma}"
                )));
            }
            let denom = 2.0 * sigma * sigma;
            Ok(SymmetricMatrix::from_fn(n, |i, j| {
                let d2: f64 = x
                    .row(i)
                    .iter()
                    .zip(x.row(j))
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum();
                (-d2 / denom).exp()
            }))
        }
    }
}

/// Degree matrix `D = diag(Σ_j a_ij)` and Laplacian `L = D − A`.
pub fn laplacian(a: &SymmetricMatrix) -> (SymmetricMatrix, SymmetricMatrix) {
    let n = a.dim();
    let degrees: Vec<f64> = (0..n).map(|i| a.row(i).iter().sum()).collect();
    let d = SymmetricMatrix::diag(&degrees);
    let l = SymmetricMatrix::from_fn(n, |i, j| {
        if i == j {
            degrees[i] - a[(i, i)]
        } else {
            -a[(i, j)]
        }
    });
    (d, l)
}

/// Everything derived from `A` for a given regularization weight.
#[derive(Debug, Clone)]
pub struct GraphRegularizedTarget {
    pub a: SymmetricMatrix,
    pub d: SymmetricMatrix,
    pub l: SymmetricMatrix,
    pub lambda_reg: f64,
    /// `A − λ L`, the matrix the solvers factorize.
    pub m: SymmetricMatrix,
}

pub fn regularized_target(a: SymmetricMatrix, lambda_reg: f64) -> Result<GraphRegularizedTarget> {
    if !(lambda_reg >= 0.0 && lambda_reg.is_finite()) {
        return Err(Error::InvalidInput(format!(
            "lambda_reg must be a finite value >= 0, got {lambda_reg}"
        )));
    }
    let (d, l) = laplacian(&a);
    let m = SymmetricMatrix::from_fn(a.dim(), |i, j| a[(i, j)] - lambda_reg * l[(i, j)]);
    Ok(GraphRegularizedTarget {
        a,
        d,
        l,
        lambda_reg,
        m,
    })
}

/// `Σ_{i,j} a_ij ‖hⁱ − hʲ‖²`, the row-smoothness penalty written pairwise.
pub fn pairwise_smoothness(a: &SymmetricMatrix, h: &DenseMatrix) -> f64 {
    let n = a.dim();
    let mut total = 0.0;
    for i in 0..n {
        for j in 0..n {
            let d2: f64 = h
                .row(i)
                .iter()
                .zip(h.row(j))
                .map(|(x, y)| (x - y) * (x - y))
                .sum();
            total += a[(i, j)] * d2;
        }
    }
    total
}

/// `trace(Hᵀ L H)`.
pub fn laplacian_quadratic_form(l: &SymmetricMatrix, h: &DenseMatrix) -> f64 {
    h.inner(&l.matmul(h))
}
