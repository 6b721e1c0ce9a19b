use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::metrics::LabelVector;
use crate::error::{Error, Result};
use crate::linalg::DenseMatrix;

#[derive(Debug, Clone)]
pub struct KMeansResult {
    pub labels: LabelVector,
    pub centroids: DenseMatrix,
    /// Within-cluster sum of squares after each assignment step.
    pub wcss: Vec<f64>,
    pub iterations: usize,
}

fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Lloyd's algorithm from a seeded k-means++ start.
///
/// Stops once assignments repeat or after `max_iter` assignment steps. A
/// cluster left empty by an update is re-seeded at the point farthest from
/// its current centroid.
pub fn kmeans(x: &DenseMatrix, k: usize, seed: u64, max_iter: usize) -> Result<KMeansResult> {
    let n = x.rows();
    if k == 0 || k > n {
        return Err(Error::InvalidInput(format!(
            "k-means needs 1 <= k <= n, got k = {k}, n = {n}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut centroids = plus_plus_init(x, k, &mut rng);
    let mut labels = vec![usize::MAX; n];
    let mut wcss = Vec::new();
    let mut iterations = 0;

    for _ in 0..max_iter.max(1) {
        iterations += 1;
        let mut changed = false;
        let mut total = 0.0;
        for i in 0..n {
            let (best, d) = nearest(x.row(i), &centroids);
            if labels[i] != best {
                labels[i] = best;
                changed = true;
            }
            total += d;
        }
        wcss.push(total);
        if !changed {
            break;
        }
        update_centroids(x, &labels, &mut centroids);
    }

    Ok(KMeansResult {
        labels: LabelVector::new(labels)?,
        centroids,
        wcss,
        iterations,
    })
}

fn nearest(p: &[f64], centroids: &DenseMatrix) -> (usize, f64) {
    let mut best = (0, f64::INFINITY);
    for c in 0..centroids.rows() {
        let d = sq_dist(p, centroids.row(c));
        if d < best.1 {
            best = (c, d);
        }
    }
    best
}

fn plus_plus_init(x: &DenseMatrix, k: usize, rng: &mut ChaCha8Rng) -> DenseMatrix {
    let n = x.rows();
    let mut centroids = DenseMatrix::zeros(k, x.cols());
    let first = rng.gen_range(0..n);
    centroids.row_mut(0).copy_from_slice(x.row(first));
    let mut d2: Vec<f64> = (0..n).map(|i| sq_dist(x.row(i), x.row(first))).collect();
    for c in 1..k {
        let total: f64 = d2.iter().sum();
        let pick = if total > 0.0 {
            let mut target = rng.gen_range(0.0..total);
            let mut chosen = n - 1;
            for (i, &d) in d2.iter().enumerate() {
                if target < d {
                    chosen = i;
                    break;
                }
                target -= d;
            }
            chosen
        } else {
            rng.gen_range(0..n)
        };
        centroids.row_mut(c).copy_from_slice(x.row(pick));
        for (i, d) in d2.iter_mut().enumerate() {
            *d = d.min(sq_dist(x.row(i), x.row(pick)));
        }
    }
    centroids
}

fn update_centroids(x: &DenseMatrix, labels: &[usize], centroids: &mut DenseMatrix) {
    let (k, m) = centroids.shape();
    let mut sums = DenseMatrix::zeros(k, m);
    let mut counts = vec![0usize; k];
    for (i, &l) in labels.iter().enumerate() {
        counts[l] += 1;
        for (s, &v) in sums.row_mut(l).iter_mut().zip(x.row(i)) {
            *s += v;
        }
    }
    let mut taken = vec![false; labels.len()];
    for c in 0..k {
        if counts[c] > 0 {
            let inv = 1.0 / counts[c] as f64;
            for (dst, &s) in centroids.row_mut(c).iter_mut().zip(sums.row(c)) {
                *dst = s * inv;
            }
        }
    }
    for c in 0..k {
        if counts[c] > 0 {
            continue;
        }
        let far = (0..labels.len())
            .filter(|&i| !taken[i])
            .map(|i| (i, sq_dist(x.row(i), centroids.row(labels[i]))))
            .fold(
                (0, f64::NEG_INFINITY),
                |b, (i, d)| if d > b.1 { (i, d) } else { b },
            )
            .0;
        taken[far] = true;
        centroids.row_mut(c).copy_from_slice(x.row(far));
    }
}

/// Within-cluster sum of squares of a labeling around its cluster means.
pub fn wcss(x: &DenseMatrix, labels: &LabelVector) -> f64 {
    let k = labels.num_clusters();
    let mut centroids = DenseMatrix::zeros(k, x.cols());
    let mut counts = vec![0usize; k];
    for (i, &l) in labels.as_slice().iter().enumerate() {
        counts[l] += 1;
        for (s, &v) in centroids.row_mut(l).iter_mut().zip(x.row(i)) {
            *s += v;
        }
    }
    for (c, &cnt) in counts.iter().enumerate() {
        if cnt > 0 {
            centroids
                .row_mut(c)
                .iter_mut()
                .for_each(|v| *v /= cnt as f64);
        }
    }
    labels
        .as_slice()
        .iter()
        .enumerate()
        .map(|(i, &l)| sq_dist(x.row(i), centroids.row(l)))
        .sum()
}
