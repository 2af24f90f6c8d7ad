//! Trains the calibrated RBF SVM on a synthetic corpus and reports test accuracy.
//!
//! ```text
//! cargo run --release --example train_svm -- [per-class] [C]
//! ```

use std::time::Instant;

use tweet_emotion::corpus::balance_and_split;
use tweet_emotion::model::{EmotionModel, ModelKind, TrainParams};
use tweet_emotion::svm::SvmConfig;
use tweet_emotion::synth::{generate, SynthConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let per_class: usize = args.next().map(|s| s.parse()).transpose()?.unwrap_or(300);
    let c: f64 = args.next().map(|s| s.parse()).transpose()?.unwrap_or(1.0);

    let tweets = generate(&SynthConfig { per_class, ..Default::default() });
    let split = balance_and_split(&tweets, per_class, 42, false)?;
    let params = TrainParams { svm: SvmConfig { c, ..Default::default() }, ..Default::default() };

    let start = Instant::now();
    let model = EmotionModel::train(ModelKind::Svm, &split.train, &params)?;
    println!("trained on {} tweets in {:.2?}", split.train.len(), start.elapsed());
    if let tweet_emotion::model::Classifier::Svm(svm) = &model.classifier {
        println!("gamma {:.4}", svm.gamma);
        for (label, b) in svm.classes.iter().zip(&svm.binaries) {
            println!(
                "  {label:<8} {:>4} support vectors, platt a={:+.3} b={:+.3}",
                b.support_vectors.len(),
                b.platt_a,
                b.platt_b
            );
        }
    }
    let correct = split.test.iter().filter(|t| model.predict(&t.text) == t.label).count();
    println!("test accuracy {:.3} ({correct}/{})", correct as f64 / split.test.len() as f64, split.test.len());

    let text = "what a wonderful surprise, so happy :)";
    let lp = model.predict_log_proba(text);
    println!("\n{text:?} -> {}", lp.argmax());
    for (label, p) in lp.classes().iter().zip(lp.probabilities()) {
        println!("  {label:<8} {p:.3}");
    }
    Ok(())
}
