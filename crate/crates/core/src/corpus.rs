//! Dataset ingestion, class balancing and the deterministic train/validation/test split.
//!
//! Two sources feed the corpus: WASSA-style tab-separated emotion files
//! (anger, fear, joy, sadness) and a comma-separated sentiment file from which
//! the neutral class is filtered. Splits are written as JSON Lines, one file
//! per partition.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fs;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::label::EmotionLabel;
use crate::rng::SplitMix64;

pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_PER_CLASS: usize = 1500;

/// File names of the three partitions inside a split directory.
pub const TRAIN_FILE: &str = "train.jsonl";
pub const VALIDATION_FILE: &str = "validation.jsonl";
pub const TEST_FILE: &str = "test.jsonl";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabeledTweet {
    pub id: String,
    pub text: String,
    pub label: EmotionLabel,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Partition {
    Train,
    Validation,
    Test,
}

impl Partition {
    pub fn file_name(self) -> &'static str {
        match self {
            Partition::Train => TRAIN_FILE,
            Partition::Validation => VALIDATION_FILE,
            Partition::Test => TEST_FILE,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Partition::Train => "train",
            Partition::Validation => "validation",
            Partition::Test => "test",
        }
    }
}

impl std::str::FromStr for Partition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "train" => Ok(Partition::Train),
            "validation" => Ok(Partition::Validation),
            "test" => Ok(Partition::Test),
            other => Err(Error::Config(format!(
                "unknown split {other:?} (expected train, validation or test)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DatasetSplit {
    pub train: Vec<LabeledTweet>,
    pub validation: Vec<LabeledTweet>,
    pub test: Vec<LabeledTweet>,
    pub seed: u64,
    /// Retained classes in encoding order.
    pub classes: Vec<EmotionLabel>,
    /// Number of identical (text, label) pairs removed before sampling.
    pub duplicates_removed: usize,
}

impl DatasetSplit {
    pub fn partition(&self, which: Partition) -> &[LabeledTweet] {
        match which {
            Partition::Train => &self.train,
            Partition::Validation => &self.validation,
            Partition::Test => &self.test,
        }
    }
}

/// Per-class sizes of (train, validation, test) for `per_class` samples:
/// validation and test each get `floor(per_class / 10)`, train the rest.
pub fn partition_sizes(per_class: usize) -> (usize, usize, usize) {
    let held_out = per_class / 10;
    (per_class - 2 * held_out, held_out, held_out)
}

/// Loads every `.txt`/`.tsv` file in `dir` (sorted by name) as WASSA data.
pub fn load_wassa(dir: impl AsRef<Path>) -> Result<Vec<LabeledTweet>> {
    let dir = dir.as_ref();
    let mut files: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(|e| Error::io(dir, e))?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| {
            p.is_file()
                && matches!(
                    p.extension().and_then(|e| e.to_str()),
                    Some("txt") | Some("tsv")
                )
        })
        .collect();
    files.sort();
    let mut out = Vec::new();
    for file in files {
        out.extend(load_wassa_file(&file)?);
    }
    Ok(out)
}

/// Parses one WASSA file: `id<TAB>tweet<TAB>emotion<TAB>intensity`.
///
/// A first line whose id field is not numeric is treated as a header. The
/// intensity column must be present but is discarded.
pub fn load_wassa_file(path: impl AsRef<Path>) -> Result<Vec<LabeledTweet>> {
    let path = path.as_ref();
    let content = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let parse_err = |line: usize, message: String| Error::Parse {
        path: path.to_path_buf(),
        line,
        message,
    };

    let mut out = Vec::new();
    for (n, raw) in content.lines().enumerate() {
        let line_no = n + 1;
        let line = raw.strip_suffix('\r').unwrap_or(raw);
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        if line_no == 1 && !fields[0].trim().chars().all(|c| c.is_ascii_digit()) {
            continue;
        }
        if fields.len() != 4 {
            return Err(parse_err(
                line_no,
                format!("expected 4 tab-separated fields, found {}", fields.len()),
            ));
        }
        let id = fields[0].trim();
        let text = fields[1];
        if id.is_empty() {
            return Err(parse_err(line_no, "empty id".into()));
        }
        if text.trim().is_empty() {
            return Err(parse_err(line_no, "empty tweet text".into()));
        }
        let label = match fields[2].trim().parse::<EmotionLabel>() {
            Ok(l) if l != EmotionLabel::Neutral => l,
            _ => {
                return Err(parse_err(
                    line_no,
                    format!("unknown emotion {:?}", fields[2].trim()),
                ))
            }
        };
        out.push(LabeledTweet {
            id: id.to_string(),
            text: text.to_string(),
            label,
        });
    }
    Ok(out)
}

/// Column layout of the neutral-tweet CSV.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NeutralColumns {
    pub text: String,
    pub sentiment: String,
    pub neutral_tag: String,
    /// Used as the tweet id when present; otherwise ids are `neutral-<row>`.
    pub id: String,
}

impl Default for NeutralColumns {
    fn default() -> Self {
        Self {
            text: "content".into(),
            sentiment: "sentiment".into(),
            neutral_tag: "neutral".into(),
            id: "tweet_id".into(),
        }
    }
}

/// Reads a CSV file and keeps rows whose sentiment equals the neutral tag.
pub fn load_neutral(csv_path: impl AsRef<Path>, columns: &NeutralColumns) -> Result<Vec<LabeledTweet>> {
    let path = csv_path.as_ref();
    let file = fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let mut reader = csv::ReaderBuilder::new().flexible(false).from_reader(file);
    let csv_err = |e: csv::Error| {
        let line = e.position().map(|p| p.line() as usize).unwrap_or(0);
        Error::Parse {
            path: path.to_path_buf(),
            line,
            message: e.to_string(),
        }
    };

    let headers: Vec<String> = reader
        .headers()
        .map_err(csv_err)?
        .iter()
        .map(|h| h.trim().to_string())
        .collect();
    let find = |name: &str| headers.iter().position(|h| h == name);
    let (text_col, sentiment_col) = match (find(&columns.text), find(&columns.sentiment)) {
        (Some(t), Some(s)) => (t, s),
        (t, s) => {
            let mut missing = Vec::new();
            if t.is_none() {
                missing.push(columns.text.clone());
            }
            if s.is_none() {
                missing.push(columns.sentiment.clone());
            }
            return Err(Error::MissingColumns {
                path: path.to_path_buf(),
                missing,
                available: headers,
            });
        }
    };
    let id_col = find(&columns.id);

    let mut out = Vec::new();
    for (row, record) in reader.records().enumerate() {
        let record = record.map_err(csv_err)?;
        if record.get(sentiment_col).map(str::trim) != Some(columns.neutral_tag.as_str()) {
            continue;
        }
        let line = record.position().map(|p| p.line() as usize).unwrap_or(row + 2);
        let text = record.get(text_col).unwrap_or_default();
        if text.trim().is_empty() {
            return Err(Error::Parse {
                path: path.to_path_buf(),
                line,
                message: "empty tweet text".into(),
            });
        }
        let id = match id_col.and_then(|c| record.get(c)).map(str::trim) {
            Some(id) if !id.is_empty() => id.to_string(),
            _ => format!("neutral-{}", row + 1),
        };
        out.push(LabeledTweet {
            id,
            text: text.to_string(),
            label: EmotionLabel::Neutral,
        });
    }
    Ok(out)
}

/// Balances the classes and cuts each one 80/10/10.
///
/// Per class, tweets are ordered by id, identical (text, label) pairs are
/// collapsed, the remainder is shuffled with a seeded splitmix64 generator and
/// the first `per_class` are cut contiguously into train, validation and test.
/// The result therefore does not depend on the input order.
pub fn balance_and_split(
    tweets: &[LabeledTweet],
    per_class: usize,
    seed: u64,
    drop_neutral: bool,
) -> Result<DatasetSplit> {
    if per_class == 0 {
        return Err(Error::Config("per_class must be positive".into()));
    }
    let classes: Vec<EmotionLabel> = if drop_neutral {
        EmotionLabel::EMOTIONS.to_vec()
    } else {
        EmotionLabel::ALL.to_vec()
    };

    let mut by_id: HashMap<&str, &LabeledTweet> = HashMap::with_capacity(tweets.len());
    let mut by_class: BTreeMap<EmotionLabel, Vec<&LabeledTweet>> = BTreeMap::new();
    for tweet in tweets {
        if let Some(prev) = by_id.insert(&tweet.id, tweet) {
            if prev != tweet {
                return Err(Error::DuplicateId(tweet.id.clone()));
            }
            continue;
        }
        if classes.contains(&tweet.label) {
            by_class.entry(tweet.label).or_default().push(tweet);
        }
    }

    let mut duplicates_removed = 0;
    let mut pools = Vec::with_capacity(classes.len());
    for &label in &classes {
        let mut pool = by_class.remove(&label).unwrap_or_default();
        pool.sort_by(|a, b| a.id.cmp(&b.id));
        let mut seen = HashSet::with_capacity(pool.len());
        let before = pool.len();
        pool.retain(|t| seen.insert(t.text.as_str()));
        duplicates_removed += before - pool.len();
        if pool.len() < per_class {
            return Err(Error::InsufficientClass {
                label: label.to_string(),
                available: pool.len(),
                required: per_class,
            });
        }
        pools.push(pool);
    }
    if duplicates_removed > 0 {
        log::info!("removed {duplicates_removed} duplicate (text, label) pairs");
    }

    let (n_train, n_val, _) = partition_sizes(per_class);
    let mut split = DatasetSplit {
        train: Vec::with_capacity(n_train * classes.len()),
        validation: Vec::with_capacity(n_val * classes.len()),
        test: Vec::with_capacity(n_val * classes.len()),
        seed,
        classes: classes.clone(),
        duplicates_removed,
    };
    let mut rng = SplitMix64::new(seed);
    for mut pool in pools {
        rng.shuffle(&mut pool);
        pool.truncate(per_class);
        let mut it = pool.into_iter().cloned();
        split.train.extend(it.by_ref().take(n_train));
        split.validation.extend(it.by_ref().take(n_val));
        split.test.extend(it);
    }
    Ok(split)
}

pub fn write_jsonl(path: impl AsRef<Path>, tweets: &[LabeledTweet]) -> Result<()> {
    let path = path.as_ref();
    let file = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    for tweet in tweets {
        serde_json::to_writer(&mut w, tweet)?;
        w.write_all(b"\n").map_err(|e| Error::io(path, e))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

pub fn read_jsonl(path: impl AsRef<Path>) -> Result<Vec<LabeledTweet>> {
    let path = path.as_ref();
    let file = fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let mut out = Vec::new();
    for (n, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| Error::io(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let tweet: LabeledTweet = serde_json::from_str(&line).map_err(|e| Error::Parse {
            path: path.to_path_buf(),
            line: n + 1,
            message: e.to_string(),
        })?;
        out.push(tweet);
    }
    Ok(out)
}

/// Reads one partition from a split directory.
pub fn read_partition(dir: impl AsRef<Path>, which: Partition) -> Result<Vec<LabeledTweet>> {
    read_jsonl(dir.as_ref().join(which.file_name()))
}

/// Per-class counts, in encoding order.
pub fn class_counts(tweets: &[LabeledTweet]) -> BTreeMap<EmotionLabel, usize> {
    let mut counts = BTreeMap::new();
    for t in tweets {
        *counts.entry(t.label).or_insert(0) += 1;
    }
    counts
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tweet(id: &str, text: &str, label: EmotionLabel) -> LabeledTweet {
        LabeledTweet {
            id: id.into(),
            text: text.into(),
            label,
        }
    }

    fn synthetic(per_class: usize, classes: &[EmotionLabel]) -> Vec<LabeledTweet> {
        classes
            .iter()
            .flat_map(|&l| {
                (0..per_class).map(move |i| tweet(&format!("{l}-{i:05}"), &format!("{l} tweet {i}"), l))
            })
            .collect()
    }

    #[test]
    fn wassa_row_maps_columns_and_drops_intensity() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("joy.txt");
        fs::write(&path, "10000\tJust got a promotion!\tjoy\t0.80\n").unwrap();
        let tweets = load_wassa(dir.path()).unwrap();
        assert_eq!(tweets, vec![tweet("10000", "Just got a promotion!", EmotionLabel::Joy)]);
    }

    #[test]
    fn wassa_header_is_skipped() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("anger.tsv");
        fs::write(
            &path,
            "ID\tTweet\tAffect Dimension\tIntensity Score\n10941\tso mad\tanger\t0.5\n",
        )
        .unwrap();
        let tweets = load_wassa_file(&path).unwrap();
        assert_eq!(tweets.len(), 1);
        assert_eq!(tweets[0].label, EmotionLabel::Anger);
    }

    #[test]
    fn wassa_empty_file() {
        let dir = tempfile::tempdir().unwrap();
        fs::write(dir.path().join("fear.txt"), "").unwrap();
        assert!(load_wassa(dir.path()).unwrap().is_empty());
    }

    #[test]
    fn wassa_short_row_names_file_and_line() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("sadness.txt");
        fs::write(&path, "1\tok\tsadness\t0.1\n2\tbroken row\tsadness\n").unwrap();
        let err = load_wassa_file(&path).unwrap_err();
        match &err {
            Error::Parse { line, path: p, .. } => {
                assert_eq!(*line, 2);
                assert_eq!(p, &path);
            }
            other => panic!("unexpected error {other:?}"),
        }
        assert!(err.to_string().contains("sadness.txt:2"));
    }

    #[test]
    fn wassa_unknown_emotion() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("x.txt");
        fs::write(&path, "1\thmm\tsurprise\t0.1\n").unwrap();
        assert!(load_wassa_file(&path).unwrap_err().to_string().contains("surprise"));
        fs::write(&path, "1\thmm\tneutral\t0.1\n").unwrap();
        assert!(load_wassa_file(&path).is_err());
    }

    fn write_csv(content: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(content.as_bytes()).unwrap();
        f
    }

    #[test]
    fn neutral_filter_and_relabel() {
        let f = write_csv(
            "tweet_id,sentiment,author,content\n\
             1,neutral,a,at work\n\
             2,happiness,b,yay\n\
             3,neutral,c,\"commas, inside, text\"\n",
        );
        let tweets = load_neutral(f.path(), &NeutralColumns::default()).unwrap();
        assert_eq!(
            tweets,
            vec![
                tweet("1", "at work", EmotionLabel::Neutral),
                tweet("3", "commas, inside, text", EmotionLabel::Neutral),
            ]
        );
    }

    #[test]
    fn neutral_without_id_column_uses_row_numbers() {
        let f = write_csv("sentiment,content\nneutral,first\nworry,x\nneutral,third\n");
        let ids: Vec<_> = load_neutral(f.path(), &NeutralColumns::default())
            .unwrap()
            .into_iter()
            .map(|t| t.id)
            .collect();
        assert_eq!(ids, vec!["neutral-1", "neutral-3"]);
    }

    #[test]
    fn neutral_missing_columns_lists_headers() {
        let f = write_csv("label,body\nneutral,x\n");
        let err = load_neutral(f.path(), &NeutralColumns::default()).unwrap_err();
        match err {
            Error::MissingColumns {
                missing, available, ..
            } => {
                assert_eq!(missing, vec!["content", "sentiment"]);
                assert_eq!(available, vec!["label", "body"]);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn custom_neutral_tag() {
        let f = write_csv("sentiment,content\nempty,nothing here\nneutral,ignored\n");
        let cols = NeutralColumns {
            neutral_tag: "empty".into(),
            ..Default::default()
        };
        let tweets = load_neutral(f.path(), &cols).unwrap();
        assert_eq!(tweets.len(), 1);
        assert_eq!(tweets[0].text, "nothing here");
    }

    #[test]
    fn full_scale_split_sizes() {
        let tweets = synthetic(1500, &EmotionLabel::ALL);
        let split = balance_and_split(&tweets, 1500, 42, false).unwrap();
        assert_eq!(
            (split.train.len(), split.validation.len(), split.test.len()),
            (6000, 750, 750)
        );
        for part in [&split.train, &split.validation, &split.test] {
            let counts = class_counts(part);
            assert_eq!(counts.len(), 5);
            assert!(counts.values().all(|&c| c == part.len() / 5));
        }
    }

    #[test]
    fn drop_neutral_split_sizes() {
        let tweets = synthetic(1500, &EmotionLabel::ALL);
        let split = balance_and_split(&tweets, 1500, 42, true).unwrap();
        assert_eq!(
            (split.train.len(), split.validation.len(), split.test.len()),
            (4800, 600, 600)
        );
        assert!(split
            .train
            .iter()
            .chain(&split.validation)
            .chain(&split.test)
            .all(|t| t.label != EmotionLabel::Neutral));
        assert_eq!(split.classes, EmotionLabel::EMOTIONS.to_vec());
    }

    #[test]
    fn undersized_class_is_rejected() {
        let mut tweets = synthetic(10, &EmotionLabel::ALL);
        tweets.retain(|t| t.id != "fear-00003");
        let err = balance_and_split(&tweets, 10, 1, false).unwrap_err();
        match err {
            Error::InsufficientClass {
                label,
                available,
                required,
            } => {
                assert_eq!(label, "fear");
                assert_eq!(available, 9);
                assert_eq!(required, 10);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn small_per_class_rounds_down_held_out() {
        assert_eq!(partition_sizes(1500), (1200, 150, 150));
        assert_eq!(partition_sizes(25), (21, 2, 2));
        assert_eq!(partition_sizes(9), (9, 0, 0));
    }

    #[test]
    fn identical_pairs_are_deduplicated() {
        let mut tweets = synthetic(4, &EmotionLabel::ALL);
        tweets.push(tweet("zz-dup", "joy tweet 1", EmotionLabel::Joy));
        // Same text under another label is kept.
        tweets.push(tweet("zz-cross", "joy tweet 1", EmotionLabel::Fear));
        let split = balance_and_split(&tweets, 4, 3, false).unwrap();
        assert_eq!(split.duplicates_removed, 1);
        let all: Vec<_> = split.train.iter().chain(&split.validation).chain(&split.test).collect();
        assert!(!all.iter().any(|t| t.id == "zz-dup"));
    }

    #[test]
    fn conflicting_duplicate_id_is_an_error() {
        let mut tweets = synthetic(3, &EmotionLabel::ALL);
        tweets.push(tweet("joy-00001", "something else", EmotionLabel::Joy));
        assert!(matches!(
            balance_and_split(&tweets, 3, 3, false),
            Err(Error::DuplicateId(_))
        ));
    }

    #[test]
    fn jsonl_round_trip_is_bit_exact() {
        let dir = tempfile::tempdir().unwrap();
        let tweets = vec![
            tweet("1", "quote \" backslash \\ tab\t emoji 😀 café", EmotionLabel::Joy),
            tweet("2", "line\nbreak", EmotionLabel::Sadness),
        ];
        let a = dir.path().join("a.jsonl");
        let b = dir.path().join("b.jsonl");
        write_jsonl(&a, &tweets).unwrap();
        let back = read_jsonl(&a).unwrap();
        assert_eq!(back, tweets);
        write_jsonl(&b, &back).unwrap();
        assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
        let first = fs::read_to_string(&a).unwrap();
        assert!(first.starts_with(r#"{"id":"1","text":"#));
        assert!(first.lines().next().unwrap().ends_with(r#""label":"joy"}"#));
    }
}
