//! TF-IDF vectorization.
//!
//! Raw term counts weighted by the smoothed inverse document frequency
//! `idf(t) = ln((1 + N) / (1 + df(t))) + 1`, then L2-normalized. Documents
//! that are empty (or entirely out of vocabulary) map to the zero vector.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sparse::SparseVector;

pub const TFIDF_FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TfIdfModel {
    pub version: u32,
    /// Token → column; columns follow sorted token order.
    pub vocabulary: BTreeMap<String, u32>,
    pub idf: Vec<f64>,
    pub n_docs_fitted: usize,
}

impl TfIdfModel {
    pub fn fit<D: AsRef<[String]>>(docs: &[D]) -> Result<Self> {
        let mut df: BTreeMap<&str, usize> = BTreeMap::new();
        for doc in docs {
            let distinct: BTreeSet<&str> = doc.as_ref().iter().map(String::as_str).collect();
            for token in distinct {
                *df.entry(token).or_insert(0) += 1;
            }
        }
        if df.is_empty() {
            return Err(Error::EmptyCorpus);
        }
        let n = docs.len() as f64;
        let mut vocabulary = BTreeMap::new();
        let mut idf = Vec::with_capacity(df.len());
        for (col, (token, count)) in df.into_iter().enumerate() {
            vocabulary.insert(token.to_string(), col as u32);
            idf.push(((1.0 + n) / (1.0 + count as f64)).ln() + 1.0);
        }
        Ok(Self {
            version: TFIDF_FORMAT_VERSION,
            vocabulary,
            idf,
            n_docs_fitted: docs.len(),
        })
    }

    pub fn dim(&self) -> usize {
        self.idf.len()
    }

    pub fn column(&self, token: &str) -> Option<usize> {
        self.vocabulary.get(token).map(|&c| c as usize)
    }

    pub fn idf_of(&self, token: &str) -> Option<f64> {
        self.column(token).map(|c| self.idf[c])
    }

    pub fn transform(&self, doc: &[String]) -> SparseVector {
        let mut counts: HashMap<u32, f64> = HashMap::new();
        for token in doc {
            if let Some(&col) = self.vocabulary.get(token) {
                *counts.entry(col).or_insert(0.0) += 1.0;
            }
        }
        let pairs = counts
            .into_iter()
            .map(|(col, tf)| (col, tf * self.idf[col as usize]))
            .collect();
        let mut v = SparseVector::from_pairs(self.dim(), pairs);
        v.normalize();
        v
    }

    pub fn transform_all<D: AsRef<[String]> + Sync>(&self, docs: &[D]) -> Vec<SparseVector> {
        use rayon::prelude::*;
        docs.par_iter().map(|d| self.transform(d.as_ref())).collect()
    }

    pub fn fit_transform<D: AsRef<[String]> + Sync>(docs: &[D]) -> Result<(Self, Vec<SparseVector>)> {
        let model = Self::fit(docs)?;
        let vectors = model.transform_all(docs);
        Ok((model, vectors))
    }
}
