//! Per-class log-probability vectors, their JSON Lines wire format, and
//! late fusion by summation.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fs;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use serde::ser::SerializeMap;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::label::EmotionLabel;

/// Largest entry accepted as a log-probability.
pub const POSITIVE_TOLERANCE: f64 = 1e-9;
/// Allowed distance of a vector's logsumexp from zero.
pub const NORMALIZATION_TOLERANCE: f64 = 1e-6;

/// `ln Σ exp(v)`, stable for large magnitudes. Empty input gives −∞.
pub fn logsumexp(values: &[f64]) -> f64 {
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY || !max.is_finite() {
        return max;
    }
    max + values.iter().map(|v| (v - max).exp()).sum::<f64>().ln()
}

/// Index of the largest value; ties go to the lowest index.
pub fn argmax_index(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, &v) in values.iter().enumerate().skip(1) {
        if v > values[best] {
            best = i;
        }
    }
    best
}

/// Log-probabilities over a set of classes kept in encoding order.
#[derive(Debug, Clone, PartialEq)]
pub struct LogProbVector {
    classes: Vec<EmotionLabel>,
    values: Vec<f64>,
}

impl LogProbVector {
    /// Pairs classes with values and sorts them into encoding order.
    /// Does not check the distribution invariants; see [`validate`](Self::validate).
    pub fn new(classes: Vec<EmotionLabel>, values: Vec<f64>) -> Result<Self> {
        if classes.len() != values.len() {
            return Err(Error::Format(format!(
                "{} classes but {} values",
                classes.len(),
                values.len()
            )));
        }
        let map: BTreeMap<EmotionLabel, f64> = classes.iter().copied().zip(values.iter().copied()).collect();
        if map.len() != classes.len() {
            return Err(Error::Format("repeated class in log-probability vector".into()));
        }
        let (classes, values) = map.into_iter().unzip();
        Ok(Self { classes, values })
    }

    /// Normalizes unnormalized log scores into log-probabilities.
    /// `classes` must already be in encoding order.
    pub fn from_log_scores(classes: Vec<EmotionLabel>, scores: Vec<f64>) -> Self {
        debug_assert!(classes.windows(2).all(|w| w[0] < w[1]));
        let z = logsumexp(&scores);
        let values = scores.into_iter().map(|s| (s - z).min(0.0)).collect();
        Self { classes, values }
    }

    pub fn classes(&self) -> &[EmotionLabel] {
        &self.classes
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, label: EmotionLabel) -> Option<f64> {
        self.classes.iter().position(|&c| c == label).map(|i| self.values[i])
    }

    pub fn logsumexp(&self) -> f64 {
        logsumexp(&self.values)
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.exp()).collect()
    }

    pub fn argmax(&self) -> EmotionLabel {
        self.classes[argmax_index(&self.values)]
    }

    /// Entries must be ≤ 0 (up to [`POSITIVE_TOLERANCE`]), not NaN, and
    /// exponentiate to a distribution (up to [`NORMALIZATION_TOLERANCE`]).
    pub fn validate(&self) -> std::result::Result<(), String> {
        if self.values.is_empty() {
            return Err("empty log-probability vector".into());
        }
        for (c, &v) in self.classes.iter().zip(&self.values) {
            if v.is_nan() || v > POSITIVE_TOLERANCE {
                return Err(format!("{c} has log-probability {v}"));
            }
        }
        let lse = self.logsumexp();
        if !((lse).abs() <= NORMALIZATION_TOLERANCE) {
            return Err(format!("logsumexp is {lse}, expected 0"));
        }
        Ok(())
    }
}

impl Serialize for LogProbVector {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.values.len()))?;
        for (c, v) in self.classes.iter().zip(&self.values) {
            map.serialize_entry(c.as_str(), v)?;
        }
        map.end()
    }
}

impl<'de> Deserialize<'de> for LogProbVector {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let map = BTreeMap::<EmotionLabel, f64>::deserialize(d)?;
        let (classes, values) = map.into_iter().unzip();
        Ok(Self { classes, values })
    }
}

/// One line of a log-probability stream.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LogProbRecord {
    pub id: String,
    pub gold: Option<EmotionLabel>,
    pub source: String,
    pub logprobs: LogProbVector,
}

impl LogProbRecord {
    pub fn validate(&self) -> Result<()> {
        let invalid = |message: String| Error::InvalidRecord {
            id: self.id.clone(),
            message,
        };
        if self.id.is_empty() {
            return Err(invalid("empty id".into()));
        }
        self.logprobs.validate().map_err(invalid)
    }
}

/// Writes records as JSON Lines.
pub fn write_stream(path: impl AsRef<Path>, records: &[LogProbRecord]) -> Result<()> {
    let path = path.as_ref();
    let file = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    for r in records {
        serde_json::to_writer(&mut w, r)?;
        w.write_all(b"\n").map_err(|e| Error::io(path, e))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

/// Parses a JSON Lines stream and checks every record. Ids must be unique
/// and all records must share one class set.
pub fn read_stream<R: BufRead>(reader: R, path: &Path) -> Result<Vec<LogProbRecord>> {
    let mut out: Vec<LogProbRecord> = Vec::new();
    let mut seen = BTreeSet::new();
    for (n, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| Error::io(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let record: LogProbRecord = serde_json::from_str(&line).map_err(|e| Error::Parse {
            path: path.to_path_buf(),
            line: n + 1,
            message: e.to_string(),
        })?;
        record.validate()?;
        if let Some(first) = out.first() {
            if first.logprobs.classes() != record.logprobs.classes() {
                return Err(Error::InvalidRecord {
                    id: record.id,
                    message: "class set differs from the rest of the stream".into(),
                });
            }
        }
        if !seen.insert(record.id.clone()) {
            return Err(Error::InvalidRecord {
                id: record.id,
                message: "duplicate id in stream".into(),
            });
        }
        out.push(record);
    }
    Ok(out)
}

pub fn validate_stream(path: impl AsRef<Path>) -> Result<Vec<LogProbRecord>> {
    let path = path.as_ref();
    let file = fs::File::open(path).map_err(|e| Error::io(path, e))?;
    read_stream(BufReader::new(file), path)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FusedRecord {
    pub id: String,
    pub gold: Option<EmotionLabel>,
    pub classes: Vec<EmotionLabel>,
    /// Raw sums of the component log-probabilities (not renormalized).
    pub scores: Vec<f64>,
    pub predicted: EmotionLabel,
}

/// Sums per-id log-probabilities across streams and takes the argmax.
///
/// Streams are added left to right in order of source name, so the result
/// does not depend on the order of `streams` or of records within them.
/// Output is sorted by id.
pub fn fuse(streams: &[Vec<LogProbRecord>]) -> Result<Vec<FusedRecord>> {
    if streams.is_empty() {
        return Err(Error::StreamMismatch("no input streams".into()));
    }
    let mut order: Vec<usize> = (0..streams.len()).collect();
    order.sort_by(|&a, &b| source_of(&streams[a]).cmp(source_of(&streams[b])).then(a.cmp(&b)));

    let indexed: Vec<HashMap<&str, &LogProbRecord>> = order
        .iter()
        .map(|&s| {
            let mut map = HashMap::with_capacity(streams[s].len());
            for r in &streams[s] {
                if map.insert(r.id.as_str(), r).is_some() {
                    return Err(Error::StreamMismatch(format!("duplicate id {:?} in stream {s}", r.id)));
                }
            }
            Ok(map)
        })
        .collect::<Result<_>>()?;

    let all_ids: BTreeSet<&str> = indexed.iter().flat_map(|m| m.keys().copied()).collect();
    for (k, map) in indexed.iter().enumerate() {
        if let Some(missing) = all_ids.iter().find(|id| !map.contains_key(*id)) {
            return Err(Error::StreamMismatch(format!(
                "id {missing:?} missing from stream {:?}",
                source_of(&streams[order[k]])
            )));
        }
    }

    let mut out = Vec::with_capacity(all_ids.len());
    for id in all_ids {
        let first = indexed[0][id];
        let classes = first.logprobs.classes().to_vec();
        let mut scores = first.logprobs.values().to_vec();
        let mut gold = first.gold;
        for map in &indexed[1..] {
            let r = map[id];
            if r.logprobs.classes() != classes.as_slice() {
                return Err(Error::StreamMismatch(format!(
                    "class sets differ for id {id:?} ({:?} vs {:?})",
                    classes.len(),
                    r.logprobs.len()
                )));
            }
            match (gold, r.gold) {
                (Some(a), Some(b)) if a != b => {
                    return Err(Error::StreamMismatch(format!("conflicting gold labels for id {id:?}")));
                }
                (None, g) => gold = g,
                _ => {}
            }
            for (s, v) in scores.iter_mut().zip(r.logprobs.values()) {
                *s += v;
            }
        }
        let predicted = classes[argmax_index(&scores)];
        out.push(FusedRecord {
            id: id.to_string(),
            gold,
            classes,
            scores,
            predicted,
        });
    }
    Ok(out)
}

fn source_of(stream: &[LogProbRecord]) -> &str {
    stream.first().map(|r| r.source.as_str()).unwrap_or("")
}
