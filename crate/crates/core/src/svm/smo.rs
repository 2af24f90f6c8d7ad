//! Sequential minimal optimization for the C-SVM dual.
//!
//! Solves `min ½ αᵀQα − eᵀα` subject to `0 ≤ α ≤ C` and `yᵀα = 0`, with
//! `Q_ij = y_i y_j K(x_i, x_j)`. Each iteration updates the maximal
//! violating pair analytically; the loop stops when the KKT gap
//! `max_{I_up} −y_t G_t − min_{I_low} −y_t G_t` drops below `tol`.

use super::kernel::KernelCache;
use crate::error::{Error, Result};

/// Floor on the curvature of a two-variable subproblem.
const TAU: f64 = 1e-12;

#[derive(Debug, Clone)]
pub struct SmoSolution {
    pub alpha: Vec<f64>,
    /// Decision offset: `f(x) = Σ α_i y_i K(x_i, x) − rho`.
    pub rho: f64,
    pub iterations: usize,
    /// KKT gap at termination.
    pub violation: f64,
}

pub struct SmoParams {
    pub c: f64,
    pub tol: f64,
    pub max_iterations: usize,
}

/// Solves the dual over `subset` (indices into the cache's point set).
/// `y` holds ±1 per subset entry.
pub fn solve(cache: &KernelCache<'_>, subset: &[usize], y: &[f64], params: &SmoParams) -> Result<SmoSolution> {
    assert_eq!(subset.len(), y.len());
    let n = subset.len();
    if !(y.iter().any(|&v| v > 0.0) && y.iter().any(|&v| v < 0.0)) {
        return Err(Error::SingleClass);
    }
    let c = params.c;
    let mut alpha = vec![0.0; n];
    let mut grad = vec![-1.0; n];
    let mut iterations = 0;

    let in_up = |a: f64, yt: f64| (yt > 0.0 && a < c) || (yt < 0.0 && a > 0.0);
    let in_low = |a: f64, yt: f64| (yt > 0.0 && a > 0.0) || (yt < 0.0 && a < c);

    loop {
        let mut i = usize::MAX;
        let mut g_max = f64::NEG_INFINITY;
        let mut j = usize::MAX;
        let mut g_min = f64::INFINITY;
        for t in 0..n {
            let v = -y[t] * grad[t];
            if in_up(alpha[t], y[t]) && v > g_max {
                g_max = v;
                i = t;
            }
            if in_low(alpha[t], y[t]) && v < g_min {
                g_min = v;
                j = t;
            }
        }
        let gap = g_max - g_min;
        if i == usize::MAX || j == usize::MAX || gap < params.tol {
            let rho = compute_rho(&alpha, &grad, y, c);
            return Ok(SmoSolution {
                alpha,
                rho,
                iterations,
                violation: gap.max(0.0),
            });
        }
        if iterations >= params.max_iterations {
            return Err(Error::NotConverged {
                iterations,
                violation: gap,
            });
        }
        iterations += 1;

        let row_i = cache.row(subset[i]);
        let row_j = cache.row(subset[j]);
        let k_ii = row_i[subset[i]];
        let k_jj = row_j[subset[j]];
        let k_ij = row_i[subset[j]];
        let (old_ai, old_aj) = (alpha[i], alpha[j]);

        if y[i] != y[j] {
            let quad = (k_ii + k_jj - 2.0 * k_ij).max(TAU);
            let delta = (-grad[i] - grad[j]) / quad;
            let diff = alpha[i] - alpha[j];
            alpha[i] += delta;
            alpha[j] += delta;
            if diff > 0.0 {
                if alpha[j] < 0.0 {
                    alpha[j] = 0.0;
                    alpha[i] = diff;
                }
            } else if alpha[i] < 0.0 {
                alpha[i] = 0.0;
                alpha[j] = -diff;
            }
            if diff > 0.0 {
                if alpha[i] > c {
                    alpha[i] = c;
                    alpha[j] = c - diff;
                }
            } else if alpha[j] > c {
                alpha[j] = c;
                alpha[i] = c + diff;
            }
        } else {
            let quad = (k_ii + k_jj - 2.0 * k_ij).max(TAU);
            let delta = (grad[i] - grad[j]) / quad;
            let sum = alpha[i] + alpha[j];
            alpha[i] -= delta;
            alpha[j] += delta;
            if sum > c {
                if alpha[i] > c {
                    alpha[i] = c;
                    alpha[j] = sum - c;
                }
            } else if alpha[j] < 0.0 {
                alpha[j] = 0.0;
                alpha[i] = sum;
            }
            if sum > c {
                if alpha[j] > c {
                    alpha[j] = c;
                    alpha[i] = sum - c;
                }
            } else if alpha[i] < 0.0 {
                alpha[i] = 0.0;
                alpha[j] = sum;
            }
        }

        let d_i = (alpha[i] - old_ai) * y[i];
        let d_j = (alpha[j] - old_aj) * y[j];
        for t in 0..n {
            grad[t] += y[t] * (row_i[subset[t]] * d_i + row_j[subset[t]] * d_j);
        }
    }
}

fn compute_rho(alpha: &[f64], grad: &[f64], y: &[f64], c: f64) -> f64 {
    let mut ub = f64::INFINITY;
    let mut lb = f64::NEG_INFINITY;
    let mut free_sum = 0.0;
    let mut free_count = 0usize;
    for t in 0..alpha.len() {
        let yg = y[t] * grad[t];
        if alpha[t] >= c {
            if y[t] < 0.0 {
                ub = ub.min(yg);
            } else {
                lb = lb.max(yg);
            }
        } else if alpha[t] <= 0.0 {
            if y[t] > 0.0 {
                ub = ub.min(yg);
            } else {
                lb = lb.max(yg);
            }
        } else {
            free_count += 1;
            free_sum += yg;
        }
    }
    if free_count > 0 {
        free_sum / free_count as f64
    } else {
        (ub + lb) / 2.0
    }
}

/// `Σα − ½ Σ_ij α_i α_j y_i y_j K_ij` over `subset`.
pub fn dual_objective(cache: &KernelCache<'_>, subset: &[usize], y: &[f64], alpha: &[f64]) -> f64 {
    let mut quad = 0.0;
    for (a, &gi) in subset.iter().enumerate() {
        if alpha[a] == 0.0 {
            continue;
        }
        let row = cache.row(gi);
        for (b, &gj) in subset.iter().enumerate() {
            quad += alpha[a] * alpha[b] * y[a] * y[b] * row[gj];
        }
    }
    alpha.iter().sum::<f64>() - 0.5 * quad
}
