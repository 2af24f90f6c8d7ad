//! End-to-end text classifiers: classical preprocessing, TF-IDF and one of
//! the three learners, persisted together as one JSON model file.

use std::fmt;
use std::fs;
use std::io::{BufReader, BufWriter, Write};
use std::path::Path;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bayes::{GaussianNb, MultinomialNb};
use crate::corpus::LabeledTweet;
use crate::ensemble::{LogProbRecord, LogProbVector};
use crate::error::{Error, Result};
use crate::label::EmotionLabel;
use crate::preprocess::{preprocess_classical, TokenList};
use crate::sparse::SparseVector;
use crate::svm::{SvmConfig, SvmModel};
use crate::vectorizer::TfIdfModel;

pub const MODEL_FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    Svm,
    Mnb,
    Gnb,
}

impl ModelKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ModelKind::Svm => "svm",
            ModelKind::Mnb => "mnb",
            ModelKind::Gnb => "gnb",
        }
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ModelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "svm" => Ok(ModelKind::Svm),
            "mnb" => Ok(ModelKind::Mnb),
            "gnb" => Ok(ModelKind::Gnb),
            other => Err(Error::Config(format!("unknown model {other:?} (expected svm, mnb or gnb)"))),
        }
    }
}

/// Learner hyperparameters; only the ones for the chosen kind are used.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainParams {
    pub svm: SvmConfig,
    /// Additive smoothing for multinomial NB.
    pub alpha: f64,
    /// Variance smoothing factor for Gaussian NB.
    pub smoothing: f64,
}

impl Default for TrainParams {
    fn default() -> Self {
        Self {
            svm: SvmConfig::default(),
            alpha: 1.0,
            smoothing: 0.5,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "model", rename_all = "lowercase")]
pub enum Classifier {
    Svm(SvmModel),
    Mnb(MultinomialNb),
    Gnb(GaussianNb),
}

impl Classifier {
    pub fn kind(&self) -> ModelKind {
        match self {
            Classifier::Svm(_) => ModelKind::Svm,
            Classifier::Mnb(_) => ModelKind::Mnb,
            Classifier::Gnb(_) => ModelKind::Gnb,
        }
    }

    pub fn fit(kind: ModelKind, x: &[SparseVector], y: &[EmotionLabel], params: &TrainParams) -> Result<Self> {
        Ok(match kind {
            ModelKind::Svm => Classifier::Svm(SvmModel::train(x, y, &params.svm)?),
            ModelKind::Mnb => Classifier::Mnb(MultinomialNb::fit(x, y, params.alpha)?),
            ModelKind::Gnb => Classifier::Gnb(GaussianNb::fit(x, y, params.smoothing)?),
        })
    }

    pub fn classes(&self) -> &[EmotionLabel] {
        match self {
            Classifier::Svm(m) => &m.classes,
            Classifier::Mnb(m) => &m.classes,
            Classifier::Gnb(m) => &m.classes,
        }
    }

    pub fn predict_log_proba(&self, x: &SparseVector) -> LogProbVector {
        match self {
            Classifier::Svm(m) => m.predict_log_proba(x),
            Classifier::Mnb(m) => m.predict_log_proba(x),
            Classifier::Gnb(m) => m.predict_log_proba(x),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmotionModel {
    pub version: u32,
    pub classifier: Classifier,
    pub tfidf: TfIdfModel,
    /// Resolved settings of the run that produced this model.
    pub run_config: serde_json::Value,
}

impl EmotionModel {
    pub fn train(kind: ModelKind, tweets: &[LabeledTweet], params: &TrainParams) -> Result<Self> {
        let docs: Vec<TokenList> = tweets.par_iter().map(|t| preprocess_classical(&t.text)).collect();
        let (tfidf, x) = TfIdfModel::fit_transform(&docs)?;
        let y: Vec<EmotionLabel> = tweets.iter().map(|t| t.label).collect();
        log::info!("training {kind} on {} tweets, {} features", tweets.len(), tfidf.dim());
        let classifier = Classifier::fit(kind, &x, &y, params)?;
        Ok(Self {
            version: MODEL_FORMAT_VERSION,
            classifier,
            tfidf,
            run_config: serde_json::Value::Null,
        })
    }

    pub fn kind(&self) -> ModelKind {
        self.classifier.kind()
    }

    pub fn classes(&self) -> &[EmotionLabel] {
        self.classifier.classes()
    }

    pub fn featurize(&self, text: &str) -> SparseVector {
        self.tfidf.transform(&preprocess_classical(text))
    }

    pub fn predict_log_proba(&self, text: &str) -> LogProbVector {
        self.classifier.predict_log_proba(&self.featurize(text))
    }

    pub fn predict(&self, text: &str) -> EmotionLabel {
        self.predict_log_proba(text).argmax()
    }

    /// One wire record per tweet, in input order.
    pub fn log_prob_records(&self, tweets: &[LabeledTweet], source: &str) -> Vec<LogProbRecord> {
        tweets
            .par_iter()
            .map(|t| LogProbRecord {
                id: t.id.clone(),
                gold: Some(t.label),
                source: source.to_string(),
                logprobs: self.predict_log_proba(&t.text),
            })
            .collect()
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let file = fs::File::create(path).map_err(|e| Error::io(path, e))?;
        let mut w = BufWriter::new(file);
        serde_json::to_writer(&mut w, self)?;
        w.write_all(b"\n").map_err(|e| Error::io(path, e))?;
        w.flush().map_err(|e| Error::io(path, e))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let file = fs::File::open(path).map_err(|e| Error::io(path, e))?;
        let model: Self = serde_json::from_reader(BufReader::new(file))?;
        if model.version != MODEL_FORMAT_VERSION {
            return Err(Error::Format(format!(
                "{}: model format version {} is not supported",
                path.display(),
                model.version
            )));
        }
        Ok(model)
    }
}
