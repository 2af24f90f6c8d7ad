//! Independent reference implementations shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeMap;

use tweet_emotion::rng::SplitMix64;
use tweet_emotion::sparse::SparseVector;

pub fn dense_rbf(x: &[f64], z: &[f64], gamma: f64) -> f64 {
    let d: f64 = x.iter().zip(z).map(|(a, b)| (a - b) * (a - b)).sum();
    (-gamma * d).exp()
}

pub fn gram(points: &[Vec<f64>], gamma: f64) -> Vec<Vec<f64>> {
    points
        .iter()
        .map(|x| points.iter().map(|z| dense_rbf(x, z, gamma)).collect())
        .collect()
}

/// `Σα − ½ Σ α_i α_j y_i y_j K_ij`.
pub fn dual_value(k: &[Vec<f64>], y: &[f64], alpha: &[f64]) -> f64 {
    let n = alpha.len();
    let mut quad = 0.0;
    for i in 0..n {
        for j in 0..n {
            quad += alpha[i] * alpha[j] * y[i] * y[j] * k[i][j];
        }
    }
    alpha.iter().sum::<f64>() - 0.5 * quad
}

/// Euclidean projection onto `{0 ≤ α ≤ C, yᵀα = 0}` by bisection on the
/// hyperplane multiplier.
fn project(v: &[f64], y: &[f64], c: f64) -> Vec<f64> {
    let at = |lambda: f64| -> Vec<f64> {
        v.iter()
            .zip(y)
            .map(|(vi, yi)| (vi - lambda * yi).clamp(0.0, c))
            .collect()
    };
    let residual = |a: &[f64]| a.iter().zip(y).map(|(ai, yi)| ai * yi).sum::<f64>();
    let span = v.iter().map(|x| x.abs()).fold(0.0, f64::max) + c + 1.0;
    let (mut lo, mut hi) = (-span, span);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if residual(&at(mid)) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    at(0.5 * (lo + hi))
}

/// Accelerated projected gradient ascent on the SVM dual; returns α.
pub fn qp_oracle(k: &[Vec<f64>], y: &[f64], c: f64) -> Vec<f64> {
    let n = y.len();
    // Row-sum bound on the largest eigenvalue of Q.
    let lipschitz = (0..n)
        .map(|i| (0..n).map(|j| k[i][j].abs()).sum::<f64>())
        .fold(0.0, f64::max);
    let step = 1.0 / lipschitz;
    let grad = |a: &[f64]| -> Vec<f64> {
        (0..n)
            .map(|i| 1.0 - y[i] * (0..n).map(|j| k[i][j] * y[j] * a[j]).sum::<f64>())
            .collect()
    };
    let mut alpha = vec![0.0; n];
    let mut momentum = alpha.clone();
    let mut t = 1.0f64;
    let mut best = alpha.clone();
    let mut best_value = dual_value(k, y, &alpha);
    for _ in 0..200_000 {
        let g = grad(&momentum);
        let stepped: Vec<f64> = momentum.iter().zip(&g).map(|(a, gi)| a + step * gi).collect();
        let next = project(&stepped, y, c);
        let t_next = 0.5 * (1.0 + (1.0 + 4.0 * t * t).sqrt());
        momentum = next
            .iter()
            .zip(&alpha)
            .map(|(a, prev)| a + (t - 1.0) / t_next * (a - prev))
            .collect();
        let moved = next.iter().zip(&alpha).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        alpha = next;
        t = t_next;
        let value = dual_value(k, y, &alpha);
        if value > best_value {
            best_value = value;
            best = alpha.clone();
        }
        if moved < 1e-14 {
            break;
        }
    }
    best
}

/// Offset for `f(x) = Σ α_j y_j K(x_j, x) + b` from an oracle solution.
pub fn oracle_bias(k: &[Vec<f64>], y: &[f64], alpha: &[f64], c: f64) -> f64 {
    let n = y.len();
    let f0 = |i: usize| (0..n).map(|j| alpha[j] * y[j] * k[i][j]).sum::<f64>();
    let margin = 1e-6 * c;
    let free: Vec<usize> = (0..n).filter(|&i| alpha[i] > margin && alpha[i] < c - margin).collect();
    if !free.is_empty() {
        return free.iter().map(|&i| y[i] - f0(i)).sum::<f64>() / free.len() as f64;
    }
    // Bounds on b from the inactive and saturated points.
    let (mut lo, mut hi) = (f64::NEG_INFINITY, f64::INFINITY);
    for i in 0..n {
        let r = y[i] - f0(i);
        let at_zero = alpha[i] <= margin;
        if (y[i] > 0.0) == at_zero {
            lo = lo.max(r);
        } else {
            hi = hi.min(r);
        }
    }
    0.5 * (lo + hi)
}

pub struct BinaryProblem {
    pub points: Vec<Vec<f64>>,
    pub labels: Vec<f64>,
    pub c: f64,
}

impl BinaryProblem {
    pub fn sparse_points(&self) -> Vec<SparseVector> {
        self.points.iter().map(|p| SparseVector::from_dense(p)).collect()
    }
}

/// 6–12 points in 2–5 dimensions, both labels present, C from {0.5, 1, 2}.
pub fn random_binary_problem(rng: &mut SplitMix64) -> BinaryProblem {
    let n = 6 + rng.below(7) as usize;
    let d = 2 + rng.below(4) as usize;
    let c = [0.5, 1.0, 2.0][rng.below(3) as usize];
    let points: Vec<Vec<f64>> = (0..n)
        .map(|_| (0..d).map(|_| rng.next_f64() * 4.0 - 2.0).collect())
        .collect();
    let mut labels: Vec<f64> = points
        .iter()
        .map(|p| {
            let s = p[0] + 0.5 * p[1] + (rng.next_f64() - 0.5);
            if s > 0.0 { 1.0 } else { -1.0 }
        })
        .collect();
    labels[0] = 1.0;
    labels[1] = -1.0;
    BinaryProblem { points, labels, c }
}

/// Smoothed-idf, raw-count, L2-normalized TF-IDF written directly from the
/// definitions over dense rows.
pub fn brute_force_tfidf(docs: &[Vec<String>]) -> (Vec<String>, Vec<Vec<f64>>) {
    let mut vocab: Vec<String> = docs.iter().flatten().cloned().collect();
    vocab.sort();
    vocab.dedup();
    let n = docs.len() as f64;
    let idf: Vec<f64> = vocab
        .iter()
        .map(|t| {
            let df = docs.iter().filter(|d| d.contains(t)).count() as f64;
            ((1.0 + n) / (1.0 + df)).ln() + 1.0
        })
        .collect();
    let rows = docs
        .iter()
        .map(|d| {
            let mut counts: BTreeMap<&str, f64> = BTreeMap::new();
            for t in d {
                *counts.entry(t.as_str()).or_default() += 1.0;
            }
            let raw: Vec<f64> = vocab
                .iter()
                .zip(&idf)
                .map(|(t, w)| counts.get(t.as_str()).copied().unwrap_or(0.0) * w)
                .collect();
            let norm = raw.iter().map(|v| v * v).sum::<f64>().sqrt();
            raw.iter().map(|v| if norm > 0.0 { v / norm } else { 0.0 }).collect()
        })
        .collect();
    (vocab, rows)
}
