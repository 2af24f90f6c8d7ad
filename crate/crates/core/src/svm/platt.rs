//! Platt scaling: fits `P(y = +1 | f) = σ(a·f + b)` to decision values.
//!
//! Targets are Platt's smoothed labels `(N₊ + 1)/(N₊ + 2)` and `1/(N₋ + 2)`,
//! which keep the maximum-likelihood problem bounded on separable data.
//! Newton's method with backtracking line search (Lin, Lin & Weng's
//! formulation, written for `σ(a·f + b)` rather than `1/(1 + e^{Af+B})`).

/// `ln σ(z)` without overflow.
pub fn log_sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        -(-z).exp().ln_1p()
    } else {
        z - z.exp().ln_1p()
    }
}

/// Binary cross-entropy of σ(z) against target t.
fn loss_term(z: f64, t: f64) -> f64 {
    -(t * log_sigmoid(z) + (1.0 - t) * log_sigmoid(-z))
}

fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

/// Returns `(a, b)`. `labels` are ±1.
pub fn fit_sigmoid(decision: &[f64], labels: &[f64]) -> (f64, f64) {
    assert_eq!(decision.len(), labels.len());
    let positives = labels.iter().filter(|&&y| y > 0.0).count() as f64;
    let negatives = labels.len() as f64 - positives;
    let hi = (positives + 1.0) / (positives + 2.0);
    let lo = 1.0 / (negatives + 2.0);
    let targets: Vec<f64> = labels.iter().map(|&y| if y > 0.0 { hi } else { lo }).collect();

    const MAX_ITER: usize = 100;
    const MIN_STEP: f64 = 1e-10;
    const HESSIAN_RIDGE: f64 = 1e-12;
    const EPS: f64 = 1e-5;

    let objective = |a: f64, b: f64| -> f64 {
        decision
            .iter()
            .zip(&targets)
            .map(|(&f, &t)| loss_term(a * f + b, t))
            .sum()
    };

    let mut a = 0.0;
    let mut b = ((positives + 1.0) / (negatives + 1.0)).ln();
    let mut fval = objective(a, b);

    for _ in 0..MAX_ITER {
        // Gradient and Hessian of the loss with respect to (a, b).
        let (mut h11, mut h22, mut h21) = (HESSIAN_RIDGE, HESSIAN_RIDGE, 0.0);
        let (mut g1, mut g2) = (0.0, 0.0);
        for (&f, &t) in decision.iter().zip(&targets) {
            let p = sigmoid(a * f + b);
            let d2 = p * (1.0 - p);
            h11 += f * f * d2;
            h22 += d2;
            h21 += f * d2;
            let d1 = p - t;
            g1 += f * d1;
            g2 += d1;
        }
        if g1.abs() < EPS && g2.abs() < EPS {
            break;
        }
        let det = h11 * h22 - h21 * h21;
        let da = -(h22 * g1 - h21 * g2) / det;
        let db = -(-h21 * g1 + h11 * g2) / det;
        let gd = g1 * da + g2 * db;

        let mut step = 1.0;
        let mut improved = false;
        while step >= MIN_STEP {
            let (na, nb) = (a + step * da, b + step * db);
            let nf = objective(na, nb);
            if nf < fval + 1e-4 * step * gd {
                a = na;
                b = nb;
                fval = nf;
                improved = true;
                break;
            }
            step /= 2.0;
        }
        if !improved {
            log::debug!("platt line search failed to make progress");
            break;
        }
    }
    (a, b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log_sigmoid_is_stable() {
        assert_eq!(log_sigmoid(0.0), (0.5f64).ln());
        assert!(log_sigmoid(800.0) <= 0.0 && log_sigmoid(800.0) > -1e-300);
        assert!((log_sigmoid(-800.0) + 800.0).abs() < 1e-9);
    }

    #[test]
    fn separated_scores_give_increasing_sigmoid() {
        let f = [-2.0, -1.5, -1.0, -0.5, 0.5, 1.0, 1.5, 2.0];
        let y = [-1.0, -1.0, -1.0, -1.0, 1.0, 1.0, 1.0, 1.0];
        let (a, b) = fit_sigmoid(&f, &y);
        assert!(a > 0.0);
        assert!(b.abs() < 1e-6, "symmetric data gives b≈0, got {b}");
    }

    #[test]
    fn stationary_point_of_the_smoothed_likelihood() {
        let f = [-1.2, -0.3, 0.1, 0.4, -0.8, 1.1, 0.9, -0.1, 2.0, 0.2];
        let y = [-1.0, -1.0, 1.0, 1.0, -1.0, 1.0, -1.0, -1.0, 1.0, 1.0];
        let (a, b) = fit_sigmoid(&f, &y);
        let hi = 6.0 / 7.0;
        let lo = 1.0 / 7.0;
        let (mut g1, mut g2) = (0.0, 0.0);
        for (&fi, &yi) in f.iter().zip(&y) {
            let t = if yi > 0.0 { hi } else { lo };
            let p = 1.0 / (1.0 + (-(a * fi + b)).exp());
            g1 += fi * (p - t);
            g2 += p - t;
        }
        assert!(g1.abs() < 1e-5 && g2.abs() < 1e-5, "gradient ({g1}, {g2})");
    }
}
