//! Accuracy, confusion matrices and per-class precision/recall/F1.

use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::label::EmotionLabel;

pub const REPORT_FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassMetrics {
    pub label: EmotionLabel,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub support: u64,
    /// False when nothing was predicted as this class (precision reported as 0).
    pub precision_defined: bool,
    /// False when the class never occurs in gold (recall reported as 0).
    pub recall_defined: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub version: u32,
    pub classes: Vec<EmotionLabel>,
    pub total: u64,
    pub accuracy: f64,
    /// Counts; rows are gold, columns predicted.
    pub confusion: Vec<Vec<u64>>,
    /// Each row divided by its support (all zeros for an empty row).
    pub confusion_normalized: Vec<Vec<f64>>,
    pub per_class: Vec<ClassMetrics>,
    pub macro_f1: f64,
    pub weighted_f1: f64,
}

fn ratio(num: u64, den: u64) -> (f64, bool) {
    if den == 0 {
        (0.0, false)
    } else {
        (num as f64 / den as f64, true)
    }
}

fn harmonic(p: f64, r: f64) -> f64 {
    if p + r == 0.0 {
        0.0
    } else {
        2.0 * p * r / (p + r)
    }
}

/// Scores `(gold, predicted)` pairs over `classes`.
pub fn score(pairs: &[(EmotionLabel, EmotionLabel)], classes: &[EmotionLabel]) -> Result<EvalReport> {
    if pairs.is_empty() {
        return Err(Error::EmptyEvaluation);
    }
    let mut classes = classes.to_vec();
    classes.sort();
    classes.dedup();
    let k = classes.len();
    let mut confusion = vec![vec![0u64; k]; k];
    let position = |l: EmotionLabel| {
        classes
            .binary_search(&l)
            .map_err(|_| Error::UnknownLabel(l.to_string()))
    };
    for &(gold, pred) in pairs {
        confusion[position(gold)?][position(pred)?] += 1;
    }
    Ok(EvalReport::from_confusion(classes, confusion))
}

impl EvalReport {
    /// Derives every metric from a confusion matrix. `classes` must be in
    /// encoding order.
    pub fn from_confusion(classes: Vec<EmotionLabel>, confusion: Vec<Vec<u64>>) -> Self {
        let k = classes.len();
        let total: u64 = confusion.iter().flatten().sum();
        let trace: u64 = (0..k).map(|i| confusion[i][i]).sum();
        let mut per_class = Vec::with_capacity(k);
        let mut confusion_normalized = Vec::with_capacity(k);
        for (i, &label) in classes.iter().enumerate() {
            let tp = confusion[i][i];
            let support: u64 = confusion[i].iter().sum();
            let predicted: u64 = (0..k).map(|r| confusion[r][i]).sum();
            let (precision, precision_defined) = ratio(tp, predicted);
            let (recall, recall_defined) = ratio(tp, support);
            per_class.push(ClassMetrics {
                label,
                precision,
                recall,
                f1: harmonic(precision, recall),
                support,
                precision_defined,
                recall_defined,
            });
            confusion_normalized.push(
                confusion[i]
                    .iter()
                    .map(|&c| if support == 0 { 0.0 } else { c as f64 / support as f64 })
                    .collect(),
            );
        }
        let macro_f1 = per_class.iter().map(|m| m.f1).sum::<f64>() / k.max(1) as f64;
        let weighted_f1 = if total == 0 {
            0.0
        } else {
            per_class.iter().map(|m| m.f1 * m.support as f64).sum::<f64>() / total as f64
        };
        Self {
            version: REPORT_FORMAT_VERSION,
            classes,
            total,
            accuracy: ratio(trace, total).0,
            confusion,
            confusion_normalized,
            per_class,
            macro_f1,
            weighted_f1,
        }
    }

    /// Micro-averaged F1 from pooled counts.
    pub fn micro_f1(&self) -> f64 {
        let k = self.classes.len();
        let tp: u64 = (0..k).map(|i| self.confusion[i][i]).sum();
        let fp: u64 = (0..k).map(|i| (0..k).filter(|&r| r != i).map(|r| self.confusion[r][i]).sum::<u64>()).sum();
        let fn_: u64 = (0..k).map(|i| (0..k).filter(|&c| c != i).map(|c| self.confusion[i][c]).sum::<u64>()).sum();
        harmonic(ratio(tp, tp + fp).0, ratio(tp, tp + fn_).0)
    }

    pub fn metrics(&self, label: EmotionLabel) -> Option<&ClassMetrics> {
        self.per_class.iter().find(|m| m.label == label)
    }

    pub fn render(&self, format: ReportFormat) -> String {
        match format {
            ReportFormat::Text => self.to_text(),
            ReportFormat::Json => self.to_json(),
            ReportFormat::Csv => self.to_csv(),
        }
    }

    /// Pretty JSON with keys sorted at every level.
    pub fn to_json(&self) -> String {
        let value = serde_json::to_value(self).expect("report is serializable");
        let mut s = serde_json::to_string_pretty(&value).expect("value is serializable");
        s.push('\n');
        s
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    /// Confusion counts with label names as the header row and first column.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        let mut header = vec!["gold\\predicted".to_string()];
        header.extend(self.classes.iter().map(|c| c.to_string()));
        w.write_record(&header).expect("in-memory write");
        for (label, row) in self.classes.iter().zip(&self.confusion) {
            let mut rec = vec![label.to_string()];
            rec.extend(row.iter().map(|c| c.to_string()));
            w.write_record(&rec).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("ascii output")
    }

    pub fn from_csv(s: &str) -> Result<Self> {
        let mut r = csv::ReaderBuilder::new().has_headers(true).from_reader(s.as_bytes());
        let header = r.headers().map_err(|e| Error::Format(e.to_string()))?.clone();
        let classes = header
            .iter()
            .skip(1)
            .map(EmotionLabel::from_str)
            .collect::<Result<Vec<_>>>()?;
        let mut confusion = Vec::new();
        for (i, rec) in r.records().enumerate() {
            let rec = rec.map_err(|e| Error::Format(e.to_string()))?;
            let gold: EmotionLabel = rec.get(0).unwrap_or_default().parse()?;
            if classes.get(i) != Some(&gold) {
                return Err(Error::Format(format!("row {} is {gold}, expected column order", i + 1)));
            }
            let row = rec
                .iter()
                .skip(1)
                .map(|c| c.parse::<u64>().map_err(|e| Error::Format(format!("{c:?}: {e}"))))
                .collect::<Result<Vec<_>>>()?;
            if row.len() != classes.len() {
                return Err(Error::Format(format!("row {gold} has {} cells", row.len())));
            }
            confusion.push(row);
        }
        if confusion.len() != classes.len() {
            return Err(Error::Format("confusion matrix is not square".into()));
        }
        Ok(Self::from_confusion(classes, confusion))
    }

    /// Per-class table (classes as columns) followed by the confusion matrix.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let width = 10;
        let _ = writeln!(s, "accuracy {:.4} ({} records)", self.accuracy, self.total);
        let _ = writeln!(s, "macro-f1 {:.4}  weighted-f1 {:.4}", self.macro_f1, self.weighted_f1);
        s.push('\n');
        let _ = write!(s, "{:<width$}", "");
        for c in &self.classes {
            let _ = write!(s, "{:>width$}", c.as_str());
        }
        s.push('\n');
        let rows: [(&str, fn(&ClassMetrics) -> String); 4] = [
            ("precision", |m| format!("{:.4}", m.precision)),
            ("recall", |m| format!("{:.4}", m.recall)),
            ("f1-score", |m| format!("{:.4}", m.f1)),
            ("support", |m| m.support.to_string()),
        ];
        for (name, cell) in rows {
            let _ = write!(s, "{name:<width$}");
            for m in &self.per_class {
                let _ = write!(s, "{:>width$}", cell(m));
            }
            s.push('\n');
        }
        let undefined: Vec<String> = self
            .per_class
            .iter()
            .flat_map(|m| {
                let mut notes = Vec::new();
                if !m.precision_defined {
                    notes.push(format!("{} precision (never predicted)", m.label));
                }
                if !m.recall_defined {
                    notes.push(format!("{} recall (absent from gold)", m.label));
                }
                notes
            })
            .collect();
        if !undefined.is_empty() {
            let _ = writeln!(s, "undefined, reported as 0: {}", undefined.join(", "));
        }
        s.push('\n');
        let _ = writeln!(s, "confusion (rows gold, columns predicted)");
        let _ = write!(s, "{:<width$}", "");
        for c in &self.classes {
            let _ = write!(s, "{:>width$}", c.as_str());
        }
        s.push('\n');
        for (label, row) in self.classes.iter().zip(&self.confusion) {
            let _ = write!(s, "{:<width$}", label.as_str());
            for c in row {
                let _ = write!(s, "{c:>width$}");
            }
            s.push('\n');
        }
        s
    }

    /// Rebuilds a report from the confusion section of [`to_text`](Self::to_text).
    pub fn from_text(s: &str) -> Result<Self> {
        let mut lines = s.lines().skip_while(|l| !l.starts_with("confusion"));
        if lines.next().is_none() {
            return Err(Error::Format("no confusion section".into()));
        }
        let classes = lines
            .next()
            .ok_or_else(|| Error::Format("missing confusion header".into()))?
            .split_whitespace()
            .map(EmotionLabel::from_str)
            .collect::<Result<Vec<_>>>()?;
        let mut confusion = Vec::new();
        for line in lines.take(classes.len()) {
            let row = line
                .split_whitespace()
                .skip(1)
                .map(|c| c.parse::<u64>().map_err(|e| Error::Format(format!("{c:?}: {e}"))))
                .collect::<Result<Vec<_>>>()?;
            confusion.push(row);
        }
        if confusion.len() != classes.len() || confusion.iter().any(|r| r.len() != classes.len()) {
            return Err(Error::Format("confusion matrix is not square".into()));
        }
        Ok(Self::from_confusion(classes, confusion))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReportFormat {
    #[default]
    Text,
    Json,
    Csv,
}

impl FromStr for ReportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "text" => Ok(ReportFormat::Text),
            "json" => Ok(ReportFormat::Json),
            "csv" => Ok(ReportFormat::Csv),
            other => Err(Error::Config(format!("unknown format {other:?}"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use EmotionLabel::*;

    fn two_class() -> EvalReport {
        let pairs = [(Anger, Anger), (Anger, Fear), (Fear, Fear), (Fear, Fear)];
        score(&pairs, &[Anger, Fear]).unwrap()
    }

    #[test]
    fn hand_counted_example() {
        let r = two_class();
        assert_eq!(r.accuracy, 0.75);
        assert_eq!(r.confusion, vec![vec![1, 1], vec![0, 2]]);
        let (a, f) = (&r.per_class[0], &r.per_class[1]);
        assert_eq!((a.precision, a.recall), (1.0, 0.5));
        assert_abs_diff_eq!(a.f1, 2.0 / 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(f.precision, 2.0 / 3.0, epsilon = 1e-15);
        assert_eq!(f.recall, 1.0);
        assert_abs_diff_eq!(f.f1, 0.8, epsilon = 1e-15);
        assert_eq!(r.confusion_normalized[0], vec![0.5, 0.5]);
    }

    #[test]
    fn perfect_predictions() {
        let pairs: Vec<_> = (0..10).map(|i| (EmotionLabel::ALL[i % 5], EmotionLabel::ALL[i % 5])).collect();
        let r = score(&pairs, &EmotionLabel::ALL).unwrap();
        assert_eq!(r.accuracy, 1.0);
        for (i, row) in r.confusion.iter().enumerate() {
            for (j, &c) in row.iter().enumerate() {
                assert_eq!(c, if i == j { 2 } else { 0 });
            }
        }
        assert!(r.per_class.iter().all(|m| m.f1 == 1.0));
    }

    #[test]
    fn constant_predictor() {
        let pairs: Vec<_> = EmotionLabel::ALL.iter().flat_map(|&g| [(g, Joy); 3]).collect();
        let r = score(&pairs, &EmotionLabel::ALL).unwrap();
        assert_eq!(r.accuracy, 0.2);
        let joy = r.metrics(Joy).unwrap();
        assert_eq!((joy.recall, joy.precision), (1.0, 0.2));
        let anger = r.metrics(Anger).unwrap();
        assert!(!anger.precision_defined && anger.precision == 0.0 && anger.f1 == 0.0);
    }

    #[test]
    fn empty_and_foreign_labels() {
        assert!(matches!(score(&[], &[Joy]), Err(Error::EmptyEvaluation)));
        assert!(matches!(score(&[(Joy, Neutral)], &[Joy, Fear]), Err(Error::UnknownLabel(_))));
    }

    #[test]
    fn three_format_round_trips() {
        let r = two_class();
        assert_eq!(EvalReport::from_json(&r.to_json()).unwrap(), r);
        assert_eq!(EvalReport::from_csv(&r.to_csv()).unwrap(), r);
        assert_eq!(EvalReport::from_text(&r.to_text()).unwrap(), r);
        assert!(r.to_csv().starts_with("gold\\predicted,anger,fear\nanger,1,1\n"));
    }

    #[test]
    fn json_keys_are_sorted() {
        let json = two_class().to_json();
        let top: Vec<&str> = json
            .lines()
            .filter(|l| l.starts_with("  \"") )
            .map(|l| l.trim().split('"').nth(1).unwrap())
            .collect();
        let mut sorted = top.clone();
        sorted.sort();
        assert_eq!(top, sorted);
        assert!(top.contains(&"version"));
    }
}
