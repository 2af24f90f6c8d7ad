//! Multinomial and Gaussian Naive Bayes on the same TF-IDF features.

use tweet_emotion::bayes::{GaussianNb, MultinomialNb};
use tweet_emotion::corpus::balance_and_split;
use tweet_emotion::preprocess::preprocess_classical;
use tweet_emotion::synth::{generate, SynthConfig};
use tweet_emotion::vectorizer::TfIdfModel;
use tweet_emotion::EmotionLabel;

fn main() -> tweet_emotion::Result<()> {
    let tweets = generate(&SynthConfig { per_class: 400, ..Default::default() });
    let split = balance_and_split(&tweets, 400, 42, false)?;
    let docs: Vec<_> = split.train.iter().map(|t| preprocess_classical(&t.text)).collect();
    let (tfidf, x) = TfIdfModel::fit_transform(&docs)?;
    let y: Vec<EmotionLabel> = split.train.iter().map(|t| t.label).collect();
    let test_x: Vec<_> = split.test.iter().map(|t| tfidf.transform(&preprocess_classical(&t.text))).collect();

    let accuracy = |predict: &dyn Fn(usize) -> EmotionLabel| {
        let hits = split.test.iter().enumerate().filter(|(i, t)| predict(*i) == t.label).count();
        hits as f64 / split.test.len() as f64
    };

    for alpha in [0.1, 1.0] {
        let mnb = MultinomialNb::fit(&x, &y, alpha)?;
        println!("multinomial alpha={alpha:<4} accuracy {:.3}", accuracy(&|i| mnb.predict(&test_x[i])));
    }
    for smoothing in [0.1, 0.5] {
        let gnb = GaussianNb::fit(&x, &y, smoothing)?;
        println!(
            "gaussian smoothing={smoothing:<4} accuracy {:.3} (variance floor {:.2e})",
            accuracy(&|i| gnb.predict(&test_x[i])),
            gnb.epsilon
        );
    }
    Ok(())
}
