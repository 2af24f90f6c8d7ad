//! Seeded synthetic tweets in the WASSA and neutral-CSV file layouts.
//!
//! Each emotion has its own cue vocabulary, emoticons and emoji; every tweet
//! mixes a few cues with shared filler, and some borrow cues from another
//! class. Neutral tweets carry the weakest signal, so it is the hardest
//! class. Used for tests, examples and smoke runs when the real corpora are
//! not at hand.

use std::fs;
use std::io::{BufWriter, Write};
use std::path::Path;

use crate::corpus::LabeledTweet;
use crate::error::{Error, Result};
use crate::label::EmotionLabel;
use crate::rng::SplitMix64;

#[derive(Debug, Clone, PartialEq)]
pub struct SynthConfig {
    pub per_class: usize,
    pub seed: u64,
    /// Probability that a cue word is drawn from a different class.
    pub confusion: f64,
    pub classes: Vec<EmotionLabel>,
}

impl Default for SynthConfig {
    fn default() -> Self {
        Self {
            per_class: 100,
            seed: 7,
            confusion: 0.35,
            classes: EmotionLabel::ALL.to_vec(),
        }
    }
}

const FILLER: &[&str] = &[
    "today", "people", "time", "really", "work", "just", "going", "home", "week", "morning", "night",
    "tomorrow", "friend", "phone", "thing", "still", "game", "school", "city", "guess", "everyone",
    "think", "know", "watching", "town", "weekend", "car", "house", "thought", "life", "class",
    "street", "team", "seriously", "literally", "tonight", "minute", "maybe", "anyway", "heard",
];

const SYLLABLES: &[&str] = &[
    "ba", "ko", "ri", "mu", "te", "sa", "lo", "vi", "ne", "du", "pa", "zo", "fi", "ga", "hu", "je",
    "ka", "mi", "no", "ru", "so", "ta", "we", "yo", "bri", "cla", "dro", "ple", "sti", "tra",
];

/// Size of the generated long-tail filler vocabulary.
const LONG_TAIL: usize = 4000;

fn long_tail_word(i: usize) -> String {
    let mut w = String::new();
    let mut k = i + SYLLABLES.len();
    while k > 0 {
        w.push_str(SYLLABLES[k % SYLLABLES.len()]);
        k /= SYLLABLES.len();
    }
    w.push('x');
    w
}

/// Filler word with a roughly Zipfian rank distribution.
fn filler(rng: &mut SplitMix64) -> String {
    if rng.next_f64() < 0.5 {
        return pick(rng, FILLER).to_string();
    }
    let rank = (LONG_TAIL as f64).powf(rng.next_f64()) as usize - 1;
    long_tail_word(rank.min(LONG_TAIL - 1))
}

fn cues(label: EmotionLabel) -> &'static [&'static str] {
    match label {
        EmotionLabel::Anger => &[
            "angry", "furious", "rage", "hate", "annoyed", "outraged", "fuming", "irritated", "mad",
            "livid", "disgusting", "pissed", "unacceptable", "infuriating", "bitter", "resent",
            "offended", "seething", "hostile", "grudge", "temper", "shouting", "insult", "ridiculous",
        ],
        EmotionLabel::Fear => &[
            "scared", "afraid", "terrified", "panic", "nervous", "anxious", "fear", "worried",
            "horror", "frightened", "dread", "shaking", "nightmare", "alarming", "creepy", "threat",
            "uneasy", "terror", "haunted", "trembling", "danger", "spooky", "paranoid", "startled",
        ],
        EmotionLabel::Joy => &[
            "happy", "joy", "delighted", "amazing", "love", "wonderful", "excited", "smile", "laugh",
            "blessed", "cheerful", "awesome", "celebrate", "glad", "fantastic", "grateful",
            "sunshine", "thrilled", "lovely", "fun", "beautiful", "proud", "yay", "brilliant",
        ],
        EmotionLabel::Neutral => &[
            "meeting", "schedule", "update", "weather", "report", "lunch", "bus", "office", "email",
            "traffic", "news", "train", "coffee", "store", "laundry", "errand", "dinner", "season",
            "episode", "calendar", "forecast", "grocery", "appointment", "deadline",
        ],
        EmotionLabel::Sadness => &[
            "sad", "crying", "depressed", "lonely", "miss", "heartbroken", "grief", "tears", "sorrow",
            "gloomy", "hurt", "upset", "unhappy", "mourn", "despair", "miserable", "lost", "empty",
            "broken", "regret", "weep", "melancholy", "pain", "alone",
        ],
    }
}

fn decorations(label: EmotionLabel) -> &'static [&'static str] {
    match label {
        EmotionLabel::Anger => &["😡", "😠", ">:(", "🤬"],
        EmotionLabel::Fear => &["😱", "😨", ":-O", "😰"],
        EmotionLabel::Joy => &["😂", "😊", ":)", ":-D", "❤️"],
        EmotionLabel::Neutral => &["📅", "☕", "🚌"],
        EmotionLabel::Sadness => &["😢", "😭", ":(", "💔"],
    }
}

fn pick<'a>(rng: &mut SplitMix64, items: &[&'a str]) -> &'a str {
    items[rng.below(items.len() as u64) as usize]
}

fn tweet_text(rng: &mut SplitMix64, label: EmotionLabel, cfg: &SynthConfig) -> String {
    let len = 6 + rng.below(9) as usize;
    // Neutral tweets carry fewer cue words.
    let cue_rate = if label == EmotionLabel::Neutral { 0.12 } else { 0.25 };
    let mut words: Vec<String> = Vec::with_capacity(len + 3);
    let mut has_cue = false;
    // Neutral tweets also borrow emotion words more often.
    let confusion = if label == EmotionLabel::Neutral {
        (2.0 * cfg.confusion).min(1.0)
    } else {
        cfg.confusion
    };
    for _ in 0..len {
        if rng.next_f64() < cue_rate {
            let source = if rng.next_f64() < confusion {
                cfg.classes[rng.below(cfg.classes.len() as u64) as usize]
            } else {
                label
            };
            words.push(pick(rng, cues(source)).to_string());
            has_cue |= source == label;
        } else if label != EmotionLabel::Neutral && rng.next_f64() < 0.1 {
            // Everyday topics show up in emotional tweets too.
            words.push(pick(rng, cues(EmotionLabel::Neutral)).to_string());
        } else {
            words.push(filler(rng));
        }
    }
    if !has_cue {
        let at = rng.below(words.len() as u64) as usize;
        words[at] = pick(rng, cues(label)).to_string();
    }
    if rng.next_f64() < 0.3 {
        words.push(pick(rng, decorations(label)).to_string());
    }
    if rng.next_f64() < 0.2 {
        words.insert(0, format!("@user{}", rng.below(1000)));
    }
    if rng.next_f64() < 0.2 {
        let tag = pick(rng, cues(label));
        words.push(format!("#{tag}"));
    }
    if rng.next_f64() < 0.1 {
        words.push(format!("https://t.co/{:x}", rng.next_u64() & 0xffff_ffff));
    }
    let mut text = words.join(" ");
    if let Some(first) = text.get_mut(0..1) {
        first.make_ascii_uppercase();
    }
    text
}

/// `per_class` tweets for each configured class, with unique ids.
pub fn generate(cfg: &SynthConfig) -> Vec<LabeledTweet> {
    let mut rng = SplitMix64::new(cfg.seed);
    let mut out = Vec::with_capacity(cfg.per_class * cfg.classes.len());
    for &label in &cfg.classes {
        let base = 10_000 * (label.index() as u64 + 1) * 10;
        for i in 0..cfg.per_class {
            out.push(LabeledTweet {
                id: (base + i as u64).to_string(),
                text: tweet_text(&mut rng, label, cfg),
                label,
            });
        }
    }
    out
}

/// Writes the emotion tweets as `<emotion>-ratings.txt` (id, tweet, emotion,
/// intensity, tab separated). Neutral tweets are skipped.
pub fn write_wassa_dir(dir: impl AsRef<Path>, tweets: &[LabeledTweet]) -> Result<()> {
    let dir = dir.as_ref();
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut rng = SplitMix64::new(tweets.len() as u64);
    for label in EmotionLabel::EMOTIONS {
        let path = dir.join(format!("{label}-ratings.txt"));
        let file = fs::File::create(&path).map_err(|e| Error::io(&path, e))?;
        let mut w = BufWriter::new(file);
        for t in tweets.iter().filter(|t| t.label == label) {
            let intensity = 0.2 + 0.7 * rng.next_f64();
            writeln!(w, "{}\t{}\t{}\t{:.3}", t.id, t.text, label, intensity).map_err(|e| Error::io(&path, e))?;
        }
        w.flush().map_err(|e| Error::io(&path, e))?;
    }
    Ok(())
}

/// Writes neutral tweets as a sentiment-annotated CSV with the columns
/// `tweet_id,sentiment,author,content`, interleaved with `decoys` rows of
/// other sentiments that a loader must skip.
pub fn write_neutral_csv(path: impl AsRef<Path>, tweets: &[LabeledTweet], decoys: usize) -> Result<()> {
    let path = path.as_ref();
    let mut w = csv::Writer::from_path(path).map_err(|e| Error::Format(format!("{}: {e}", path.display())))?;
    let csv_err = |e: csv::Error| Error::Format(format!("{}: {e}", path.display()));
    w.write_record(["tweet_id", "sentiment", "author", "content"]).map_err(csv_err)?;
    let other = ["worry", "happiness", "surprise", "love", "boredom"];
    let mut rng = SplitMix64::new(decoys as u64 ^ 0x5eed);
    let neutral: Vec<&LabeledTweet> = tweets.iter().filter(|t| t.label == EmotionLabel::Neutral).collect();
    let mut written_decoys = 0;
    for (i, t) in neutral.iter().enumerate() {
        w.write_record([t.id.as_str(), "neutral", &format!("author{}", i % 97), t.text.as_str()])
            .map_err(csv_err)?;
        if written_decoys < decoys && rng.next_f64() < 0.5 {
            let sentiment = other[rng.below(other.len() as u64) as usize];
            w.write_record([
                &format!("9{:08}", written_decoys),
                sentiment,
                "someone",
                "Not a neutral tweet at all, wow",
            ])
            .map_err(csv_err)?;
            written_decoys += 1;
        }
    }
    w.flush().map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{load_neutral, load_wassa, NeutralColumns};

    #[test]
    fn deterministic_and_unique() {
        let cfg = SynthConfig::default();
        let a = generate(&cfg);
        assert_eq!(a, generate(&cfg));
        let mut ids: Vec<&str> = a.iter().map(|t| t.id.as_str()).collect();
        ids.sort();
        ids.dedup();
        assert_eq!(ids.len(), 5 * cfg.per_class);
        assert!(a.iter().all(|t| !t.text.contains('\t') && !t.text.is_empty()));
    }

    #[test]
    fn files_load_back() {
        let dir = tempfile::tempdir().unwrap();
        let tweets = generate(&SynthConfig { per_class: 20, ..Default::default() });
        write_wassa_dir(dir.path().join("wassa"), &tweets).unwrap();
        let csv = dir.path().join("neutral.csv");
        write_neutral_csv(&csv, &tweets, 10).unwrap();
        let mut loaded = load_wassa(dir.path().join("wassa")).unwrap();
        loaded.extend(load_neutral(&csv, &NeutralColumns::default()).unwrap());
        loaded.sort_by(|a, b| a.id.cmp(&b.id));
        let mut expected = tweets.clone();
        expected.sort_by(|a, b| a.id.cmp(&b.id));
        assert_eq!(loaded, expected);
    }
}
