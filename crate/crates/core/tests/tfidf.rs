mod common;

use approx::assert_abs_diff_eq;
use proptest::prelude::*;
use serde::Deserialize;

use common::brute_force_tfidf;
use tweet_emotion::vectorizer::TfIdfModel;

#[derive(Deserialize)]
struct Reference {
    docs: Vec<Vec<String>>,
    probes: Vec<Vec<String>>,
    vocabulary: Vec<String>,
    idf: Vec<f64>,
    rows: Vec<Vec<f64>>,
    probe_rows: Vec<Vec<f64>>,
}

#[test]
fn matches_scikit_learn_reference() {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/fixtures/tfidf_sklearn.json");
    let r: Reference = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    let model = TfIdfModel::fit(&r.docs).unwrap();
    let vocab: Vec<&String> = model.vocabulary.keys().collect();
    assert_eq!(vocab, r.vocabulary.iter().collect::<Vec<_>>());
    for (got, want) in model.idf.iter().zip(&r.idf) {
        assert_abs_diff_eq!(got, want, epsilon = 1e-12);
    }
    for (docs, rows) in [(&r.docs, &r.rows), (&r.probes, &r.probe_rows)] {
        for (doc, row) in docs.iter().zip(rows) {
            let dense = model.transform(doc).to_dense();
            for (got, want) in dense.iter().zip(row) {
                assert_abs_diff_eq!(got, want, epsilon = 1e-12);
            }
        }
    }
}

fn corpus() -> impl Strategy<Value = Vec<Vec<String>>> {
    let token = prop::sample::select(vec!["a", "b", "c", "d", "e", "f", "g", "h"]).prop_map(String::from);
    prop::collection::vec(prop::collection::vec(token, 0..8), 10)
}

proptest! {
    #[test]
    fn matches_brute_force(docs in corpus()) {
        prop_assume!(docs.iter().any(|d| !d.is_empty()));
        let model = TfIdfModel::fit(&docs).unwrap();
        let (vocab, rows) = brute_force_tfidf(&docs);
        prop_assert_eq!(model.vocabulary.keys().cloned().collect::<Vec<_>>(), vocab);
        for (doc, row) in docs.iter().zip(&rows) {
            let v = model.transform(doc);
            for (got, want) in v.to_dense().iter().zip(row) {
                prop_assert!((got - want).abs() <= 1e-9, "{} vs {}", got, want);
            }
            let norm = v.norm();
            prop_assert!(norm == 0.0 || (norm - 1.0).abs() <= 1e-12);
            prop_assert!(v.values().iter().all(|&x| x > 0.0));
        }
    }
}
