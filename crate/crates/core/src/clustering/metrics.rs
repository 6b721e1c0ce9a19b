use serde::Serialize;

use super::hungarian::max_weight_assignment;
use crate::error::{Error, Result};
use crate::linalg::DenseMatrix;

/// Zero-based cluster ids, one per sample.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct LabelVector(Vec<usize>);

impl LabelVector {
    pub fn new(labels: Vec<usize>) -> Result<Self> {
        if labels.is_empty() {
            return Err(Error::InvalidInput("label vector is empty".into()));
        }
        Ok(Self(labels))
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `max label + 1`.
    pub fn num_clusters(&self) -> usize {
        self.0.iter().max().map_or(0, |m| m + 1)
    }
}

/// Row-wise argmax of the signed factor; ties go to the lowest column.
///
/// A negative entry marks a point as unlikely to belong to that cluster, so
/// magnitudes are deliberately not used.
pub fn assign_labels(h: &DenseMatrix) -> LabelVector {
    let labels = (0..h.rows())
        .map(|i| {
            h.row(i)
                .iter()
                .enumerate()
                .fold((0, f64::NEG_INFINITY), |(bj, bv), (j, &v)| {
                    if v > bv {
                        (j, v)
                    } else {
                        (bj, bv)
                    }
                })
                .0
        })
        .collect();
    LabelVector(labels)
}

/// `confusion[p][t] = #{i : pred_i = p, truth_i = t}`, padded square.
pub fn confusion_matrix(pred: &LabelVector, truth: &LabelVector) -> Result<Vec<Vec<usize>>> {
    check_lengths(pred, truth)?;
    let k = pred.num_clusters().max(truth.num_clusters());
    let mut c = vec![vec![0usize; k]; k];
    for (&p, &t) in pred.0.iter().zip(&truth.0) {
        c[p][t] += 1;
    }
    Ok(c)
}

fn check_lengths(pred: &LabelVector, truth: &LabelVector) -> Result<()> {
    if pred.len() != truth.len() {
        return Err(Error::InvalidInput(format!(
            "label length mismatch: {} predicted vs {} truth",
            pred.len(),
            truth.len()
        )));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct Accuracy {
    pub ac: f64,
    /// `permutation[p]` is the truth label matched to predicted cluster `p`.
    pub permutation: Vec<usize>,
    pub confusion: Vec<Vec<usize>>,
}

/// Clustering accuracy under the best one-to-one relabeling of `pred`.
pub fn accuracy(pred: &LabelVector, truth: &LabelVector) -> Result<Accuracy> {
    let confusion = confusion_matrix(pred, truth)?;
    let weights: Vec<Vec<f64>> = confusion
        .iter()
        .map(|r| r.iter().map(|&c| c as f64).collect())
        .collect();
    let permutation = max_weight_assignment(&weights);
    let matched: usize = permutation
        .iter()
        .enumerate()
        .map(|(p, &t)| confusion[p][t])
        .sum();
    Ok(Accuracy {
        ac: matched as f64 / pred.len() as f64,
        permutation,
        confusion,
    })
}

/// Normalized mutual information, `I(P;T) / sqrt(H(P) H(T))`, natural log.
///
/// Two single-cluster partitions score 1; otherwise a zero entropy on
/// either side scores 0.
pub fn nmi(pred: &LabelVector, truth: &LabelVector) -> Result<f64> {
    let joint = confusion_matrix(pred, truth)?;
    let n = pred.len() as f64;
    let k = joint.len();
    let row: Vec<f64> = joint
        .iter()
        .map(|r| r.iter().sum::<usize>() as f64)
        .collect();
    let col: Vec<f64> = (0..k)
        .map(|t| joint.iter().map(|r| r[t]).sum::<usize>() as f64)
        .collect();
    let entropy = |counts: &[f64]| -> f64 {
        counts
            .iter()
            .filter(|&&c| c > 0.0)
            .map(|&c| {
                let p = c / n;
                -p * p.ln()
            })
            .sum()
    };
    let (hp, ht) = (entropy(&row), entropy(&col));
    if hp == 0.0 || ht == 0.0 {
        return Ok(if hp == 0.0 && ht == 0.0 { 1.0 } else { 0.0 });
    }
    let mut mi = 0.0;
    for (p, r) in joint.iter().enumerate() {
        for (t, &c) in r.iter().enumerate() {
            if c > 0 {
                let c = c as f64;
                mi += c / n * (n * c / (row[p] * col[t])).ln();
            }
        }
    }
    Ok((mi / (hp * ht).sqrt()).clamp(0.0, 1.0))
}

/// Labels plus their scores against a reference partition.
#[derive(Debug, Clone, Serialize)]
pub struct ClusteringReport {
    pub predicted: LabelVector,
    pub ac: f64,
    pub nmi: f64,
    pub confusion: Vec<Vec<usize>>,
    pub permutation: Vec<usize>,
}

pub fn evaluate(pred: LabelVector, truth: &LabelVector) -> Result<ClusteringReport> {
    let acc = accuracy(&pred, truth)?;
    let nmi = nmi(&pred, truth)?;
    Ok(ClusteringReport {
        predicted: pred,
        ac: acc.ac,
        nmi,
        confusion: acc.confusion,
        permutation: acc.permutation,
    })
}
