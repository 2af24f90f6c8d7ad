//! Fuses two log-probability streams by summing them per tweet.
//!
//! With no arguments, fuses the bundled demo streams; otherwise pass any number
//! of JSONL stream files.
//!
//! ```text
//! cargo run --example ensemble_fusion -- svm.jsonl bertweet.jsonl
//! ```

use std::path::PathBuf;

use tweet_emotion::ensemble::{fuse, validate_stream};
use tweet_emotion::eval::score;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut paths: Vec<PathBuf> = std::env::args().skip(1).map(PathBuf::from).collect();
    if paths.is_empty() {
        let demo = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/demo");
        paths = vec![demo.join("svm_test.jsonl"), demo.join("bertweet_test.jsonl")];
    }
    let streams = paths.iter().map(validate_stream).collect::<Result<Vec<_>, _>>()?;
    for (path, stream) in paths.iter().zip(&streams) {
        let pairs: Vec<_> = stream.iter().filter_map(|r| Some((r.gold?, r.logprobs.argmax()))).collect();
        if !pairs.is_empty() {
            let r = score(&pairs, stream[0].logprobs.classes())?;
            println!("{:<40} accuracy {:.3}", path.display(), r.accuracy);
        }
    }
    let fused = fuse(&streams)?;
    let pairs: Vec<_> = fused.iter().filter_map(|r| Some((r.gold?, r.predicted))).collect();
    if let Some(first) = fused.first() {
        if !pairs.is_empty() {
            let r = score(&pairs, &first.classes)?;
            println!("{:<40} accuracy {:.3}", "fused", r.accuracy);
        }
    }
    for r in fused.iter().take(3) {
        println!("{} -> {} {:?}", r.id, r.predicted, r.scores);
    }
    Ok(())
}
