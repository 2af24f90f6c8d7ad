//! Scores a set of predictions and renders the report in every format.

use tweet_emotion::eval::{score, EvalReport, ReportFormat};
use tweet_emotion::rng::SplitMix64;
use tweet_emotion::EmotionLabel;

fn main() -> tweet_emotion::Result<()> {
    let mut rng = SplitMix64::new(3);
    let pairs: Vec<(EmotionLabel, EmotionLabel)> = (0..200)
        .map(|_| {
            let gold = EmotionLabel::ALL[rng.below(5) as usize];
            let hit = rng.next_f64() < if gold == EmotionLabel::Neutral { 0.6 } else { 0.85 };
            let pred = if hit { gold } else { EmotionLabel::ALL[rng.below(5) as usize] };
            (gold, pred)
        })
        .collect();
    let report = score(&pairs, &EmotionLabel::ALL)?;
    println!("{}", report.render(ReportFormat::Text));
    println!("micro F1 {:.4} (equals accuracy {:.4})\n", report.micro_f1(), report.accuracy);
    println!("{}", report.render(ReportFormat::Csv));
    let json = report.render(ReportFormat::Json);
    assert_eq!(EvalReport::from_json(&json)?, report);
    println!("{} bytes of JSON, round-trips exactly", json.len());
    Ok(())
}
