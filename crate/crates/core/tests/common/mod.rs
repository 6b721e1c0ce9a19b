//! Instance generators and independent oracles shared by the integration tests.
#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use symfact::clustering::LabelVector;
use symfact::graph::Dataset;
use symfact::linalg::{DenseMatrix, SymmetricMatrix};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_dense(rng: &mut ChaCha8Rng, n: usize, k: usize) -> DenseMatrix {
    DenseMatrix::from_fn(n, k, |_, _| rng.gen_range(-1.0..1.0))
}

/// Symmetric with entries uniform in `(-1, 1)`.
pub fn random_symmetric(rng: &mut ChaCha8Rng, n: usize) -> SymmetricMatrix {
    SymmetricMatrix::from_fn(n, |_, _| rng.gen_range(-1.0..1.0))
}

/// `H̄H̄ᵀ` with `H̄` uniform in `(-1, 1)`.
pub fn planted(seed: u64, n: usize, k: usize) -> SymmetricMatrix {
    let mut r = rng(seed);
    SymmetricMatrix::outer_gram(&random_dense(&mut r, n, k))
}

/// `H̄H̄ᵀ + E` with `H̄` uniform in `(0, scale)` and symmetric `E` uniform in
/// `(-noise, noise)`.
pub fn noisy_planted(seed: u64, n: usize, k: usize, scale: f64, noise: f64) -> SymmetricMatrix {
    let mut r = rng(seed);
    let h = DenseMatrix::from_fn(n, k, |_, _| r.gen_range(0.0..1.0) * scale);
    let e = SymmetricMatrix::from_fn(n, |_, _| r.gen_range(-1.0..1.0) * noise);
    SymmetricMatrix::outer_gram(&h).sym_add(&e)
}

/// Three Gaussian clusters of `n_per` points in the plane with labels.
pub fn blobs(n_per: usize, spread: f64, seed: u64) -> Dataset {
    let mut r = rng(seed);
    let centers = [[0.0, 0.0], [3.0, 0.0], [1.5, 2.598]];
    let mut rows = Vec::new();
    let mut labels = Vec::new();
    for (c, ctr) in centers.iter().enumerate() {
        for _ in 0..n_per {
            let u1: f64 = r.gen_range(1e-12..1.0);
            let u2: f64 = r.gen_range(0.0..1.0);
            let rad = (-2.0 * u1.ln()).sqrt();
            let ang = std::f64::consts::TAU * u2;
            rows.push(vec![
                ctr[0] + spread * rad * ang.cos(),
                ctr[1] + spread * rad * ang.sin(),
            ]);
            labels.push(c);
        }
    }
    Dataset::new(
        DenseMatrix::from_rows(&rows).unwrap(),
        Some(LabelVector::new(labels).unwrap()),
    )
    .unwrap()
}

pub fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

/// `‖M − HHᵀ‖²_F` by explicit triple loop.
pub fn objective_oracle(m: &SymmetricMatrix, h: &DenseMatrix) -> f64 {
    let (n, k) = h.shape();
    let mut total = 0.0;
    for i in 0..n {
        for j in 0..n {
            let mut hh = 0.0;
            for t in 0..k {
                hh += h[(i, t)] * h[(j, t)];
            }
            let r = m[(i, j)] - hh;
            total += r * r;
        }
    }
    total
}

/// `L = D − A` built entry by entry.
pub fn laplacian_oracle(a: &SymmetricMatrix) -> DenseMatrix {
    let n = a.dim();
    DenseMatrix::from_fn(n, n, |i, j| {
        let deg: f64 = (0..n).map(|t| a[(i, t)]).sum();
        if i == j {
            deg - a[(i, j)]
        } else {
            -a[(i, j)]
        }
    })
}

/// `trace(HᵀLH)` by explicit loops.
pub fn trace_htlh_oracle(l: &DenseMatrix, h: &DenseMatrix) -> f64 {
    let (n, k) = h.shape();
    let mut total = 0.0;
    for t in 0..k {
        for i in 0..n {
            for j in 0..n {
                total += h[(i, t)] * l[(i, j)] * h[(j, t)];
            }
        }
    }
    total
}

fn permutations(k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(k - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, k - 1);
            out.push(q);
        }
    }
    out
}

/// Best number of matches over every relabeling of `pred`.
pub fn brute_force_matches(pred: &[usize], truth: &[usize]) -> usize {
    let k = pred.iter().chain(truth).max().map_or(0, |&m| m + 1);
    permutations(k)
        .iter()
        .map(|perm| {
            pred.iter()
                .zip(truth)
                .filter(|(&p, &t)| perm[p] == t)
                .count()
        })
        .max()
        .unwrap_or(0)
}

fn entropy(counts: impl Iterator<Item = usize>, n: f64) -> f64 {
    counts
        .filter(|&c| c > 0)
        .map(|c| {
            let p = c as f64 / n;
            -p * p.ln()
        })
        .sum()
}

/// NMI through `I = H(a) + H(b) − H(a, b)`, geometric-mean normalized.
pub fn nmi_oracle(a: &[usize], b: &[usize]) -> f64 {
    use std::collections::HashMap;
    let n = a.len() as f64;
    let mut ca: HashMap<usize, usize> = HashMap::new();
    let mut cb: HashMap<usize, usize> = HashMap::new();
    let mut cab: HashMap<(usize, usize), usize> = HashMap::new();
    for (&x, &y) in a.iter().zip(b) {
        *ca.entry(x).or_default() += 1;
        *cb.entry(y).or_default() += 1;
        *cab.entry((x, y)).or_default() += 1;
    }
    let ha = entropy(ca.values().copied(), n);
    let hb = entropy(cb.values().copied(), n);
    let hab = entropy(cab.values().copied(), n);
    if ha == 0.0 && hb == 0.0 {
        return 1.0;
    }
    if ha == 0.0 || hb == 0.0 {
        return 0.0;
    }
    ((ha + hb - hab) / (ha * hb).sqrt()).clamp(0.0, 1.0)
}
