//! Multinomial and Gaussian Naive Bayes over sparse features.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::ensemble::LogProbVector;
use crate::error::{Error, Result};
use crate::label::EmotionLabel;
use crate::sparse::SparseVector;

pub const NB_FORMAT_VERSION: u32 = 1;

/// Sorted distinct classes and, per class, the rows that carry it.
fn group_by_class(labels: &[EmotionLabel]) -> (Vec<EmotionLabel>, Vec<Vec<usize>>) {
    let mut classes = labels.to_vec();
    classes.sort();
    classes.dedup();
    let mut rows = vec![Vec::new(); classes.len()];
    for (i, l) in labels.iter().enumerate() {
        let k = classes.binary_search(l).unwrap();
        rows[k].push(i);
    }
    (classes, rows)
}

fn check_shapes(x: &[SparseVector], y: &[EmotionLabel]) -> Result<usize> {
    if x.is_empty() {
        return Err(Error::Config("no training documents".into()));
    }
    if x.len() != y.len() {
        return Err(Error::Config("features and labels differ in length".into()));
    }
    let dim = x[0].dim();
    if x.iter().any(|v| v.dim() != dim) {
        return Err(Error::Config("feature vectors differ in dimension".into()));
    }
    Ok(dim)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MultinomialNb {
    pub version: u32,
    pub alpha: f64,
    pub classes: Vec<EmotionLabel>,
    pub class_log_priors: Vec<f64>,
    /// `ln P(feature | class)`, one row per class.
    pub feature_log_likelihood: Vec<Vec<f64>>,
}

impl MultinomialNb {
    /// Feature values are treated as (possibly fractional) counts.
    pub fn fit(x: &[SparseVector], y: &[EmotionLabel], alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(Error::Config("alpha must be positive".into()));
        }
        let dim = check_shapes(x, y)?;
        for v in x {
            if let Some((column, value)) = v.iter().find(|&(_, value)| value < 0.0) {
                return Err(Error::NegativeFeature { column, value });
            }
        }
        let (classes, rows) = group_by_class(y);
        let n = x.len() as f64;
        let mut class_log_priors = Vec::with_capacity(classes.len());
        let mut feature_log_likelihood = Vec::with_capacity(classes.len());
        for members in &rows {
            class_log_priors.push((members.len() as f64 / n).ln());
            let mut counts = vec![0.0; dim];
            for &i in members {
                for (j, v) in x[i].iter() {
                    counts[j] += v;
                }
            }
            let total: f64 = counts.iter().sum();
            let denom = (total + alpha * dim as f64).ln();
            feature_log_likelihood.push(counts.iter().map(|c| (c + alpha).ln() - denom).collect());
        }
        Ok(Self {
            version: NB_FORMAT_VERSION,
            alpha,
            classes,
            class_log_priors,
            feature_log_likelihood,
        })
    }

    /// Unnormalized joint log-likelihood per class.
    pub fn joint_log_likelihood(&self, x: &SparseVector) -> Vec<f64> {
        self.class_log_priors
            .iter()
            .zip(&self.feature_log_likelihood)
            .map(|(prior, loglik)| prior + x.iter().map(|(j, v)| v * loglik[j]).sum::<f64>())
            .collect()
    }

    pub fn predict_log_proba(&self, x: &SparseVector) -> LogProbVector {
        LogProbVector::from_log_scores(self.classes.clone(), self.joint_log_likelihood(x))
    }

    pub fn predict(&self, x: &SparseVector) -> EmotionLabel {
        self.predict_log_proba(x).argmax()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaussianNb {
    pub version: u32,
    pub smoothing: f64,
    /// Added to every variance: `smoothing` times the largest feature
    /// variance over the whole training set.
    pub epsilon: f64,
    pub classes: Vec<EmotionLabel>,
    pub class_log_priors: Vec<f64>,
    pub means: Vec<Vec<f64>>,
    pub variances: Vec<Vec<f64>>,
}

/// Per-feature mean and population variance over `rows`, zeros included.
fn moments(x: &[SparseVector], rows: &[usize], dim: usize) -> (Vec<f64>, Vec<f64>) {
    let n = rows.len() as f64;
    let mut sum = vec![0.0; dim];
    let mut nnz = vec![0usize; dim];
    for &i in rows {
        for (j, v) in x[i].iter() {
            sum[j] += v;
            nnz[j] += 1;
        }
    }
    let mean: Vec<f64> = sum.iter().map(|s| s / n).collect();
    let mut sq = vec![0.0; dim];
    for &i in rows {
        for (j, v) in x[i].iter() {
            sq[j] += (v - mean[j]) * (v - mean[j]);
        }
    }
    let var = (0..dim)
        .map(|j| (sq[j] + (rows.len() - nnz[j]) as f64 * mean[j] * mean[j]) / n)
        .collect();
    (mean, var)
}

impl GaussianNb {
    pub fn fit(x: &[SparseVector], y: &[EmotionLabel], smoothing: f64) -> Result<Self> {
        if !(smoothing >= 0.0 && smoothing.is_finite()) {
            return Err(Error::Config("smoothing must be non-negative".into()));
        }
        let dim = check_shapes(x, y)?;
        let all: Vec<usize> = (0..x.len()).collect();
        let (_, overall) = moments(x, &all, dim);
        let epsilon = smoothing * overall.iter().copied().fold(0.0, f64::max);

        let (classes, rows) = group_by_class(y);
        let n = x.len() as f64;
        let mut class_log_priors = Vec::new();
        let mut means = Vec::new();
        let mut variances = Vec::new();
        for members in &rows {
            class_log_priors.push((members.len() as f64 / n).ln());
            let (mean, mut var) = moments(x, members, dim);
            for v in &mut var {
                *v += epsilon;
            }
            means.push(mean);
            variances.push(var);
        }
        Ok(Self {
            version: NB_FORMAT_VERSION,
            smoothing,
            epsilon,
            classes,
            class_log_priors,
            means,
            variances,
        })
    }

    pub fn joint_log_likelihood(&self, x: &SparseVector) -> Vec<f64> {
        self.class_log_priors
            .iter()
            .zip(self.means.iter().zip(&self.variances))
            .map(|(prior, (mean, var))| {
                // Density at the origin, then corrected at the non-zero columns.
                let mut ll = prior
                    - 0.5
                        * mean
                            .iter()
                            .zip(var)
                            .map(|(m, v)| (2.0 * PI * v).ln() + m * m / v)
                            .sum::<f64>();
                for (j, xj) in x.iter() {
                    let (m, v) = (mean[j], var[j]);
                    ll -= 0.5 * ((xj - m) * (xj - m) - m * m) / v;
                }
                ll
            })
            .collect()
    }

    pub fn predict_log_proba(&self, x: &SparseVector) -> LogProbVector {
        LogProbVector::from_log_scores(self.classes.clone(), self.joint_log_likelihood(x))
    }

    pub fn predict(&self, x: &SparseVector) -> EmotionLabel {
        self.predict_log_proba(x).argmax()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use EmotionLabel::*;

    fn dense(rows: &[&[f64]]) -> Vec<SparseVector> {
        rows.iter().map(|r| SparseVector::from_dense(r)).collect()
    }

    #[test]
    fn mnb_smoothing_formula() {
        let m = MultinomialNb::fit(&dense(&[&[1.0, 0.0]]), &[Joy], 1.0).unwrap();
        assert_abs_diff_eq!(m.feature_log_likelihood[0][0].exp(), 2.0 / 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(m.feature_log_likelihood[0][1].exp(), 1.0 / 3.0, epsilon = 1e-15);
        assert_eq!(m.class_log_priors, vec![0.0]);
    }

    #[test]
    fn mnb_balanced_priors_and_huge_alpha() {
        let x = dense(&[&[3.0, 0.0, 1.0], &[0.0, 2.0, 0.0], &[1.0, 1.0, 1.0], &[0.0, 0.0, 5.0]]);
        let y = [Anger, Anger, Fear, Fear];
        let m = MultinomialNb::fit(&x, &y, 1e9).unwrap();
        for p in &m.class_log_priors {
            assert_abs_diff_eq!(*p, (0.5f64).ln(), epsilon = 1e-15);
        }
        for row in &m.feature_log_likelihood {
            for v in row {
                assert_abs_diff_eq!(v.exp(), 1.0 / 3.0, epsilon = 1e-6);
            }
            let total: f64 = row.iter().map(|v| v.exp()).sum();
            assert_abs_diff_eq!(total, 1.0, epsilon = 1e-9);
        }
    }

    #[test]
    fn mnb_rejects_negative_features_and_bad_alpha() {
        let x = dense(&[&[0.0, -0.5]]);
        assert!(matches!(
            MultinomialNb::fit(&x, &[Joy], 1.0),
            Err(Error::NegativeFeature { column: 1, .. })
        ));
        assert!(MultinomialNb::fit(&dense(&[&[1.0]]), &[Joy], 0.0).is_err());
    }

    #[test]
    fn gnb_constant_feature_gets_exact_floor() {
        let x = dense(&[&[1.0, 0.0], &[1.0, 2.0], &[3.0, 0.0], &[3.0, 4.0]]);
        let y = [Anger, Anger, Joy, Joy];
        let m = GaussianNb::fit(&x, &y, 0.5).unwrap();
        // Pooled variances: feature 0 is 1.0, feature 1 is 2.75.
        assert_eq!(m.epsilon, 0.5 * 2.75);
        assert_eq!(m.variances[0][0], m.epsilon);
        assert_eq!(m.variances[1][0], m.epsilon);
        assert_eq!(m.means[1], vec![3.0, 2.0]);
    }

    #[test]
    fn gnb_mirrored_classes() {
        let x = dense(&[&[1.0, 2.0], &[2.0, 0.5], &[-1.0, -2.0], &[-2.0, -0.5]]);
        let y = [Joy, Joy, Sadness, Sadness];
        let m = GaussianNb::fit(&x, &y, 0.1).unwrap();
        for j in 0..2 {
            assert_eq!(m.means[0][j], -m.means[1][j]);
            assert_eq!(m.variances[0][j], m.variances[1][j]);
        }
        let lp = m.predict_log_proba(&SparseVector::zeros(2));
        assert_abs_diff_eq!(lp.values()[0], (0.5f64).ln(), epsilon = 1e-12);
    }

    #[test]
    fn gnb_single_sample_class_stays_finite() {
        let x = dense(&[&[1.0, 0.0], &[0.0, 1.0], &[0.0, 2.0]]);
        let y = [Anger, Fear, Fear];
        let m = GaussianNb::fit(&x, &y, 0.5).unwrap();
        let lp = m.predict_log_proba(&SparseVector::from_dense(&[5.0, -3.0]));
        assert!(lp.values().iter().all(|v| v.is_finite()));
    }
}
