//! Writes a synthetic corpus in the raw input layouts.
//!
//! ```text
//! cargo run --example synthetic_corpus -- <out-dir> [per-class] [seed]
//! ```
//! produces `<out-dir>/wassa/*-ratings.txt` and `<out-dir>/neutral.csv`,
//! ready for `tweet-emotion prepare`.

use std::path::PathBuf;

use tweet_emotion::synth::{generate, write_neutral_csv, write_wassa_dir, SynthConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let out = PathBuf::from(args.next().unwrap_or_else(|| "synthetic".into()));
    let per_class = args.next().map(|s| s.parse()).transpose()?.unwrap_or(1500);
    let seed = args.next().map(|s| s.parse()).transpose()?.unwrap_or(7);

    let tweets = generate(&SynthConfig { per_class, seed, ..Default::default() });
    write_wassa_dir(out.join("wassa"), &tweets)?;
    write_neutral_csv(out.join("neutral.csv"), &tweets, per_class / 5)?;
    println!("{} tweets written under {}", tweets.len(), out.display());
    for t in tweets.iter().step_by(per_class).take(5) {
        println!("  {:<8} {}", t.label, t.text);
    }
    Ok(())
}
