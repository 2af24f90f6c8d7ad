//! End to end in one process: split, train all three models, score, save, reload.
//!
//! ```text
//! cargo run --release --example pipeline -- [per-class] [out-dir]
//! ```

use std::path::PathBuf;

use tweet_emotion::corpus::{balance_and_split, write_jsonl};
use tweet_emotion::ensemble::write_stream;
use tweet_emotion::eval::score;
use tweet_emotion::model::{EmotionModel, ModelKind, TrainParams};
use tweet_emotion::synth::{generate, SynthConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let per_class: usize = args.next().map(|s| s.parse()).transpose()?.unwrap_or(300);
    let out = args.next().map(PathBuf::from).unwrap_or_else(|| std::env::temp_dir().join("tweet-emotion-pipeline"));
    std::fs::create_dir_all(&out)?;

    let tweets = generate(&SynthConfig { per_class, ..Default::default() });
    let split = balance_and_split(&tweets, per_class, 42, false)?;
    write_jsonl(out.join("test.jsonl"), &split.test)?;
    println!(
        "train {} / validation {} / test {}",
        split.train.len(),
        split.validation.len(),
        split.test.len()
    );

    for kind in [ModelKind::Svm, ModelKind::Mnb, ModelKind::Gnb] {
        let model = EmotionModel::train(kind, &split.train, &TrainParams::default())?;
        let path = out.join(format!("{kind}.json"));
        model.save(&path)?;
        let model = EmotionModel::load(&path)?;
        let records = model.log_prob_records(&split.test, kind.as_str());
        write_stream(out.join(format!("{kind}_test.jsonl")), &records)?;
        let pairs: Vec<_> = records.iter().map(|r| (r.gold.unwrap(), r.logprobs.argmax())).collect();
        let report = score(&pairs, model.classes())?;
        let worst = report.per_class.iter().min_by(|a, b| a.f1.total_cmp(&b.f1)).unwrap();
        println!(
            "{kind}: accuracy {:.3}, macro F1 {:.3}, weakest class {} (F1 {:.3})",
            report.accuracy, report.macro_f1, worst.label, worst.f1
        );
    }
    println!("models and streams in {}", out.display());
    Ok(())
}
