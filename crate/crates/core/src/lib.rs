//! Tweet emotion classification.
//!
//! A classical pipeline (artifact stripping, emoji translation, ASCII
//! folding, stopword removal, Snowball stemming, TF-IDF) feeds a one-vs-rest
//! RBF SVM trained by SMO and calibrated with Platt scaling. Multinomial and
//! Gaussian Naive Bayes serve as baselines. Per-class log-probabilities from
//! any number of models can be fused by summation.

pub mod bayes;
pub mod cli;
pub mod corpus;
pub mod ensemble;
pub mod error;
pub mod eval;
pub mod label;
pub mod model;
pub mod preprocess;
pub mod rng;
pub mod sparse;
pub mod svm;
pub mod synth;
pub mod vectorizer;

pub use error::{Error, Result};
pub use label::EmotionLabel;
