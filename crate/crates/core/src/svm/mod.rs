//! Multi-class RBF support vector machine.
//!
//! One binary SMO problem per class (one-vs-rest). Each binary carries Platt
//! parameters fitted on out-of-fold decision values, so the model emits a
//! calibrated per-class log-probability vector.

mod kernel;
pub mod platt;
pub mod smo;

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub use kernel::{rbf_kernel, KernelCache};
pub use smo::{dual_objective, SmoParams, SmoSolution};

use crate::ensemble::LogProbVector;
use crate::error::{Error, Result};
use crate::label::EmotionLabel;
use crate::rng::SplitMix64;
use crate::sparse::SparseVector;

/// Dual variables at or below this are not kept as support vectors.
pub const SUPPORT_THRESHOLD: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Gamma {
    /// `1 / (n_features · mean per-feature variance)` over the training set.
    Auto,
    Fixed(f64),
}

impl Serialize for Gamma {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Gamma::Auto => s.serialize_str("auto"),
            Gamma::Fixed(g) => s.serialize_f64(*g),
        }
    }
}

impl<'de> Deserialize<'de> for Gamma {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Str(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(g) => Ok(Gamma::Fixed(g)),
            Raw::Str(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}

impl FromStr for Gamma {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.eq_ignore_ascii_case("auto") {
            return Ok(Gamma::Auto);
        }
        s.parse::<f64>()
            .map(Gamma::Fixed)
            .map_err(|_| Error::Config(format!("gamma must be a number or \"auto\", got {s:?}")))
    }
}

impl fmt::Display for Gamma {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Gamma::Auto => f.write_str("auto"),
            Gamma::Fixed(g) => write!(f, "{g}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Calibration {
    Platt,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SvmConfig {
    #[serde(rename = "C")]
    pub c: f64,
    pub gamma: Gamma,
    /// KKT gap at which SMO stops.
    pub tol: f64,
    /// SMO gives up after `max_passes × n` pair updates.
    pub max_passes: usize,
    pub calibration: Calibration,
    pub platt_folds: usize,
    /// Seeds the calibration fold assignment.
    pub seed: u64,
    /// Kernel row cache budget in MiB.
    pub cache_mb: usize,
}

impl Default for SvmConfig {
    fn default() -> Self {
        Self {
            c: 1.0,
            gamma: Gamma::Auto,
            tol: 1e-3,
            max_passes: 1000,
            calibration: Calibration::Platt,
            platt_folds: 3,
            seed: 42,
            cache_mb: 512,
        }
    }
}

impl SvmConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::Config(m.to_string()));
        if !(self.c > 0.0 && self.c.is_finite()) {
            return bad("C must be positive");
        }
        if !(self.tol > 0.0) {
            return bad("tol must be positive");
        }
        if let Gamma::Fixed(g) = self.gamma {
            if !(g > 0.0 && g.is_finite()) {
                return bad("gamma must be positive");
            }
        }
        if self.platt_folds < 2 {
            return bad("platt_folds must be at least 2");
        }
        Ok(())
    }

    pub fn resolve_gamma(&self, points: &[SparseVector]) -> f64 {
        match self.gamma {
            Gamma::Fixed(g) => g,
            Gamma::Auto => auto_gamma(points),
        }
    }

    fn smo_params(&self, n: usize) -> SmoParams {
        SmoParams {
            c: self.c,
            tol: self.tol,
            max_iterations: self.max_passes.saturating_mul(n.max(1)),
        }
    }
}

/// `1 / Σ_j Var(x_j)`, i.e. one over feature count times mean feature
/// variance (population variance). Falls back to 1 for constant data.
pub fn auto_gamma(points: &[SparseVector]) -> f64 {
    let Some(dim) = points.first().map(SparseVector::dim) else {
        return 1.0;
    };
    let n = points.len() as f64;
    let mut sum = vec![0.0; dim];
    let mut sum_sq = vec![0.0; dim];
    for p in points {
        for (j, v) in p.iter() {
            sum[j] += v;
            sum_sq[j] += v * v;
        }
    }
    let total_var: f64 = sum
        .iter()
        .zip(&sum_sq)
        .map(|(s, sq)| (sq / n - (s / n) * (s / n)).max(0.0))
        .sum();
    if total_var > 0.0 {
        1.0 / total_var
    } else {
        1.0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BinarySvm {
    pub support_vectors: Vec<SparseVector>,
    /// Dual variables α of the support vectors.
    pub alphas: Vec<f64>,
    /// α·y per support vector.
    pub dual_coefs: Vec<f64>,
    pub bias: f64,
    pub platt_a: f64,
    pub platt_b: f64,
}

impl BinarySvm {
    pub fn decision(&self, x: &SparseVector, gamma: f64) -> f64 {
        self.support_vectors
            .iter()
            .zip(&self.dual_coefs)
            .map(|(sv, coef)| coef * rbf_kernel(sv, x, gamma))
            .sum::<f64>()
            + self.bias
    }

    /// `ln σ(a·f + b)` for decision value `f`.
    pub fn log_positive(&self, decision: f64) -> f64 {
        platt::log_sigmoid(self.platt_a * decision + self.platt_b)
    }
}

/// A trained binary problem together with the resolved kernel width.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainedBinary {
    pub svm: BinarySvm,
    pub gamma: f64,
}

impl TrainedBinary {
    pub fn decision(&self, x: &SparseVector) -> f64 {
        self.svm.decision(x, self.gamma)
    }
}

/// Trains one binary SVM with Platt calibration. `labels` are ±1.
pub fn train_binary(points: &[SparseVector], labels: &[f64], config: &SvmConfig) -> Result<TrainedBinary> {
    config.validate()?;
    if points.len() != labels.len() {
        return Err(Error::Config("points and labels differ in length".into()));
    }
    let gamma = config.resolve_gamma(points);
    let cache = KernelCache::new(points, gamma, config.cache_mb << 20);
    let svm = train_binary_cached(&cache, labels, config)?;
    Ok(TrainedBinary { svm, gamma })
}

fn stratified_folds(labels: &[f64], folds: usize, seed: u64) -> Vec<usize> {
    let mut rng = SplitMix64::new(seed);
    let mut assignment = vec![0; labels.len()];
    for positive in [true, false] {
        let mut idx: Vec<usize> = (0..labels.len()).filter(|&i| (labels[i] > 0.0) == positive).collect();
        rng.shuffle(&mut idx);
        for (k, i) in idx.into_iter().enumerate() {
            assignment[i] = k % folds;
        }
    }
    assignment
}

/// Decision values for `targets` from a solution over `subset`.
fn decisions_from(cache: &KernelCache<'_>, subset: &[usize], y: &[f64], sol: &SmoSolution, targets: &[usize]) -> Vec<f64> {
    let support: Vec<(usize, f64)> = subset
        .iter()
        .zip(y)
        .zip(&sol.alpha)
        .filter(|(_, &a)| a > 0.0)
        .map(|((&g, &yv), &a)| (g, a * yv))
        .collect();
    targets
        .iter()
        .map(|&t| {
            let row = cache.row(t);
            support.iter().map(|&(g, coef)| coef * row[g]).sum::<f64>() - sol.rho
        })
        .collect()
}

fn train_binary_cached(cache: &KernelCache<'_>, labels: &[f64], config: &SvmConfig) -> Result<BinarySvm> {
    let n = labels.len();
    let all: Vec<usize> = (0..n).collect();
    let full = smo::solve(cache, &all, labels, &config.smo_params(n))?;
    log::debug!(
        "smo: n={n} iterations={} gap={:.2e}",
        full.iterations,
        full.violation
    );

    let assignment = stratified_folds(labels, config.platt_folds, config.seed);
    let mut oof = vec![0.0; n];
    for fold in 0..config.platt_folds {
        let held: Vec<usize> = (0..n).filter(|&i| assignment[i] == fold).collect();
        if held.is_empty() {
            continue;
        }
        let train: Vec<usize> = (0..n).filter(|&i| assignment[i] != fold).collect();
        let train_y: Vec<f64> = train.iter().map(|&i| labels[i]).collect();
        let values = match smo::solve(cache, &train, &train_y, &config.smo_params(train.len())) {
            Ok(sol) => decisions_from(cache, &train, &train_y, &sol, &held),
            // Too few samples of one label to leave a fold out.
            Err(Error::SingleClass) => decisions_from(cache, &all, labels, &full, &held),
            Err(e) => return Err(e),
        };
        for (&i, v) in held.iter().zip(values) {
            oof[i] = v;
        }
    }
    let (platt_a, platt_b) = platt::fit_sigmoid(&oof, labels);

    let mut svm = BinarySvm {
        support_vectors: Vec::new(),
        alphas: Vec::new(),
        dual_coefs: Vec::new(),
        bias: -full.rho,
        platt_a,
        platt_b,
    };
    for i in 0..n {
        if full.alpha[i] > SUPPORT_THRESHOLD {
            svm.support_vectors.push(cache.points()[i].clone());
            svm.alphas.push(full.alpha[i]);
            svm.dual_coefs.push(full.alpha[i] * labels[i]);
        }
    }
    Ok(svm)
}

pub const SVM_FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SvmModel {
    pub version: u32,
    pub config: SvmConfig,
    /// Kernel width actually used (resolved from `config.gamma`).
    pub gamma: f64,
    pub classes: Vec<EmotionLabel>,
    /// One-vs-rest binaries, aligned with `classes`.
    pub binaries: Vec<BinarySvm>,
}

impl SvmModel {
    /// Trains one-vs-rest binaries over the classes present in `labels`.
    /// Binaries are trained in parallel and share one kernel cache.
    pub fn train(points: &[SparseVector], labels: &[EmotionLabel], config: &SvmConfig) -> Result<Self> {
        config.validate()?;
        if points.len() != labels.len() {
            return Err(Error::Config("points and labels differ in length".into()));
        }
        let mut classes: Vec<EmotionLabel> = labels.to_vec();
        classes.sort();
        classes.dedup();
        if classes.len() < 2 {
            return Err(Error::SingleClass);
        }
        let gamma = config.resolve_gamma(points);
        let cache = KernelCache::new(points, gamma, config.cache_mb << 20);
        let binaries = classes
            .par_iter()
            .map(|&class| {
                let y: Vec<f64> = labels.iter().map(|&l| if l == class { 1.0 } else { -1.0 }).collect();
                train_binary_cached(&cache, &y, config)
            })
            .collect::<Result<Vec<_>>>()?;
        let (hits, misses) = cache.stats();
        log::debug!("kernel cache: {hits} hits, {misses} misses");
        Ok(Self {
            version: SVM_FORMAT_VERSION,
            config: config.clone(),
            gamma,
            classes,
            binaries,
        })
    }

    /// Raw one-vs-rest decision values, aligned with `classes`.
    pub fn decision_values(&self, x: &SparseVector) -> Vec<f64> {
        self.binaries.iter().map(|b| b.decision(x, self.gamma)).collect()
    }

    /// `p_k ∝ σ(a_k f_k + b_k)`, normalized and logged.
    pub fn predict_log_proba(&self, x: &SparseVector) -> LogProbVector {
        let decisions = self.decision_values(x);
        let scores: Vec<f64> = self
            .binaries
            .iter()
            .zip(decisions)
            .map(|(b, f)| b.log_positive(f))
            .collect();
        LogProbVector::from_log_scores(self.classes.clone(), scores)
    }

    pub fn predict(&self, x: &SparseVector) -> EmotionLabel {
        self.predict_log_proba(x).argmax()
    }
}
