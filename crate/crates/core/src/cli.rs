//! Command-line interface: argument definitions and command implementations.
//!
//! Settings resolve as explicit flag, then `--config` file, then default.
//! The resolved settings of every run are written into its artifacts.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::corpus::{self, LabeledTweet, NeutralColumns, Partition};
use crate::ensemble::{self, LogProbRecord};
use crate::error::{Error, Result};
use crate::eval::{self, EvalReport, ReportFormat};
use crate::label::EmotionLabel;
use crate::model::{EmotionModel, ModelKind, TrainParams};
use crate::svm::{Gamma, SvmConfig};

pub const MANIFEST_FILE: &str = "manifest.json";

#[derive(Debug, Parser)]
#[command(name = "tweet-emotion", version, about = "Tweet emotion classification")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct GlobalArgs {
    /// Seed for splitting and calibration folds [default: 42]
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Worker threads (defaults to the number of CPUs)
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Output format: text, json or csv [default: text]
    #[arg(long, global = true)]
    pub format: Option<ReportFormat>,
    /// TOML file of key = value settings; explicit flags win
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Load the raw corpora, balance classes and write the split files
    Prepare(PrepareArgs),
    /// Fit a model on the training split
    Train(TrainArgs),
    /// Score a model on a split
    Evaluate(EvaluateArgs),
    /// Write per-tweet log-probabilities as JSON Lines
    ExportLogprobs(ExportArgs),
    /// Fuse log-probability streams and score the result
    Ensemble(EnsembleArgs),
    /// Classify one text
    Predict(PredictArgs),
}

#[derive(Debug, Args)]
pub struct PrepareArgs {
    /// Directory of WASSA-format tab-separated files
    #[arg(long)]
    pub wassa_dir: PathBuf,
    /// CSV with a sentiment column containing neutral tweets
    #[arg(long, required_unless_present = "drop_neutral")]
    pub neutral_csv: Option<PathBuf>,
    #[arg(long)]
    pub out_dir: PathBuf,
    /// Tweets sampled per class [default: 1500]
    #[arg(long)]
    pub per_class: Option<usize>,
    /// Four-class variant without neutral tweets
    #[arg(long)]
    pub drop_neutral: bool,
    #[arg(long)]
    pub text_column: Option<String>,
    #[arg(long)]
    pub sentiment_column: Option<String>,
    #[arg(long)]
    pub neutral_tag: Option<String>,
    #[arg(long)]
    pub id_column: Option<String>,
}

#[derive(Debug, Args)]
pub struct TrainArgs {
    #[arg(long)]
    pub model: ModelKind,
    /// Directory written by `prepare`
    #[arg(long)]
    pub data_dir: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    /// SVM regularization [default: 1.0]
    #[arg(long)]
    pub c: Option<f64>,
    /// RBF width, a number or "auto" [default: auto]
    #[arg(long)]
    pub gamma: Option<Gamma>,
    /// SMO stopping tolerance [default: 0.001]
    #[arg(long)]
    pub tol: Option<f64>,
    /// SMO iteration cap in multiples of the sample count [default: 1000]
    #[arg(long)]
    pub max_passes: Option<usize>,
    /// Kernel cache budget in MiB [default: 512]
    #[arg(long)]
    pub cache_mb: Option<usize>,
    /// Calibration folds [default: 3]
    #[arg(long)]
    pub platt_folds: Option<usize>,
    /// Multinomial NB additive smoothing [default: 1.0]
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Gaussian NB variance smoothing [default: 0.5]
    #[arg(long)]
    pub smoothing: Option<f64>,
}

#[derive(Debug, Args)]
pub struct EvaluateArgs {
    /// Model file written by `train`
    #[arg(long)]
    pub model: PathBuf,
    #[arg(long)]
    pub data_dir: PathBuf,
    #[arg(long, default_value = "test")]
    pub split: Partition,
    /// Also write the report here
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ExportArgs {
    #[arg(long)]
    pub model: PathBuf,
    #[arg(long)]
    pub data_dir: PathBuf,
    #[arg(long, default_value = "test")]
    pub split: Partition,
    #[arg(long)]
    pub out: PathBuf,
    /// Source name written into each record [default: the model kind]
    #[arg(long)]
    pub source: Option<String>,
}

#[derive(Debug, Args)]
pub struct EnsembleArgs {
    /// Log-probability streams to fuse
    #[arg(required = true)]
    pub inputs: Vec<PathBuf>,
    /// Write fused scores and predictions as JSON Lines
    #[arg(long)]
    pub predictions: Option<PathBuf>,
    /// Also write the report here
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PredictArgs {
    #[arg(long)]
    pub model: PathBuf,
    pub text: String,
}

/// Settings accepted in a `--config` file.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub seed: Option<u64>,
    pub threads: Option<usize>,
    pub format: Option<ReportFormat>,
    pub per_class: Option<usize>,
    pub drop_neutral: Option<bool>,
    pub text_column: Option<String>,
    pub sentiment_column: Option<String>,
    pub neutral_tag: Option<String>,
    pub id_column: Option<String>,
    #[serde(alias = "C")]
    pub c: Option<f64>,
    pub gamma: Option<Gamma>,
    pub tol: Option<f64>,
    pub max_passes: Option<usize>,
    pub cache_mb: Option<usize>,
    pub platt_folds: Option<usize>,
    pub alpha: Option<f64>,
    pub smoothing: Option<f64>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        toml::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
    }
}

/// Provenance block embedded in every artifact.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub tool: &'static str,
    pub tool_version: &'static str,
    pub command: &'static str,
    pub seed: u64,
    pub settings: Value,
}

struct Context {
    file: FileConfig,
    seed: u64,
    format: ReportFormat,
}

impl Context {
    fn new(global: &GlobalArgs) -> Result<Self> {
        let file = match &global.config {
            Some(p) => FileConfig::load(p)?,
            None => FileConfig::default(),
        };
        Ok(Self {
            seed: global.seed.or(file.seed).unwrap_or(corpus::DEFAULT_SEED),
            format: global.format.or(file.format).unwrap_or_default(),
            file,
        })
    }

    fn run_config(&self, command: &'static str, settings: Value) -> RunConfig {
        RunConfig {
            tool: env!("CARGO_PKG_NAME"),
            tool_version: env!("CARGO_PKG_VERSION"),
            command,
            seed: self.seed,
            settings,
        }
    }
}

/// Thread count from flags or the config file.
pub fn resolve_threads(global: &GlobalArgs) -> Result<Option<usize>> {
    if global.threads.is_some() {
        return Ok(global.threads);
    }
    match &global.config {
        Some(p) => Ok(FileConfig::load(p)?.threads),
        None => Ok(None),
    }
}

pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<()> {
    let ctx = Context::new(&cli.global)?;
    let text = match &cli.command {
        Command::Prepare(a) => prepare(&ctx, a)?,
        Command::Train(a) => train(&ctx, a)?,
        Command::Evaluate(a) => evaluate(&ctx, a)?,
        Command::ExportLogprobs(a) => export_logprobs(&ctx, a)?,
        Command::Ensemble(a) => ensemble_cmd(&ctx, a)?,
        Command::Predict(a) => predict(&ctx, a)?,
    };
    out.write_all(text.as_bytes()).map_err(|e| Error::io("<stdout>", e))
}

fn path_str(p: &Path) -> String {
    p.display().to_string()
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
    }
    fs::write(path, contents).map_err(|e| Error::io(path, e))
}

fn to_json_pretty(value: &impl Serialize) -> String {
    // Round-trip through Value so object keys come out sorted.
    let value = serde_json::to_value(value).expect("serializable");
    let mut s = serde_json::to_string_pretty(&value).expect("serializable");
    s.push('\n');
    s
}

fn sha256_file(path: &Path) -> Result<String> {
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    Ok(Sha256::digest(&bytes).iter().map(|b| format!("{b:02x}")).collect())
}

fn counts_json(tweets: &[LabeledTweet]) -> BTreeMap<String, usize> {
    corpus::class_counts(tweets)
        .into_iter()
        .map(|(k, v)| (k.to_string(), v))
        .collect()
}

fn prepare(ctx: &Context, a: &PrepareArgs) -> Result<String> {
    let f = &ctx.file;
    let per_class = a.per_class.or(f.per_class).unwrap_or(corpus::DEFAULT_PER_CLASS);
    let drop_neutral = a.drop_neutral || f.drop_neutral.unwrap_or(false);
    let defaults = NeutralColumns::default();
    let columns = NeutralColumns {
        text: a.text_column.clone().or(f.text_column.clone()).unwrap_or(defaults.text),
        sentiment: a
            .sentiment_column
            .clone()
            .or(f.sentiment_column.clone())
            .unwrap_or(defaults.sentiment),
        neutral_tag: a.neutral_tag.clone().or(f.neutral_tag.clone()).unwrap_or(defaults.neutral_tag),
        id: a.id_column.clone().or(f.id_column.clone()).unwrap_or(defaults.id),
    };

    if !a.wassa_dir.is_dir() {
        return Err(Error::io(
            &a.wassa_dir,
            std::io::Error::new(std::io::ErrorKind::NotFound, "input directory not found"),
        ));
    }
    let mut tweets = corpus::load_wassa(&a.wassa_dir)?;
    if let Some(csv) = &a.neutral_csv {
        if !drop_neutral {
            tweets.extend(corpus::load_neutral(csv, &columns)?);
        }
    }
    let split = corpus::balance_and_split(&tweets, per_class, ctx.seed, drop_neutral)?;

    fs::create_dir_all(&a.out_dir).map_err(|e| Error::io(&a.out_dir, e))?;
    let mut checksums = BTreeMap::new();
    let mut counts = BTreeMap::new();
    for which in [Partition::Train, Partition::Validation, Partition::Test] {
        let path = a.out_dir.join(which.file_name());
        corpus::write_jsonl(&path, split.partition(which))?;
        checksums.insert(which.file_name().to_string(), sha256_file(&path)?);
        counts.insert(which.as_str().to_string(), counts_json(split.partition(which)));
    }
    let run = ctx.run_config(
        "prepare",
        json!({
            "wassa_dir": path_str(&a.wassa_dir),
            "neutral_csv": a.neutral_csv.as_deref().map(path_str),
            "out_dir": path_str(&a.out_dir),
            "per_class": per_class,
            "drop_neutral": drop_neutral,
            "neutral_columns": columns,
        }),
    );
    let manifest = json!({
        "version": 1,
        "seed": split.seed,
        "per_class": per_class,
        "classes": split.classes,
        "counts": counts,
        "duplicates_removed": split.duplicates_removed,
        "sha256": checksums,
        "run_config": run,
    });
    let manifest_text = to_json_pretty(&manifest);
    write_file(&a.out_dir.join(MANIFEST_FILE), &manifest_text)?;

    Ok(match ctx.format {
        ReportFormat::Json => manifest_text,
        ReportFormat::Csv => {
            let mut s = String::from("class,train,validation,test\n");
            for c in &split.classes {
                let n = |p: &str| counts[p].get(c.as_str()).copied().unwrap_or(0);
                s.push_str(&format!("{c},{},{},{}\n", n("train"), n("validation"), n("test")));
            }
            s
        }
        ReportFormat::Text => {
            let mut s = format!("{:<10}{:>8}{:>12}{:>8}\n", "class", "train", "validation", "test");
            for c in &split.classes {
                let n = |p: &str| counts[p].get(c.as_str()).copied().unwrap_or(0);
                s.push_str(&format!("{:<10}{:>8}{:>12}{:>8}\n", c.as_str(), n("train"), n("validation"), n("test")));
            }
            s.push_str(&format!(
                "seed {}, {} duplicates removed, written to {}\n",
                split.seed,
                split.duplicates_removed,
                a.out_dir.display()
            ));
            s
        }
    })
}

fn train_params(ctx: &Context, a: &TrainArgs) -> TrainParams {
    let f = &ctx.file;
    let d = TrainParams::default();
    TrainParams {
        svm: SvmConfig {
            c: a.c.or(f.c).unwrap_or(d.svm.c),
            gamma: a.gamma.or(f.gamma).unwrap_or(d.svm.gamma),
            tol: a.tol.or(f.tol).unwrap_or(d.svm.tol),
            max_passes: a.max_passes.or(f.max_passes).unwrap_or(d.svm.max_passes),
            calibration: d.svm.calibration,
            platt_folds: a.platt_folds.or(f.platt_folds).unwrap_or(d.svm.platt_folds),
            seed: ctx.seed,
            cache_mb: a.cache_mb.or(f.cache_mb).unwrap_or(d.svm.cache_mb),
        },
        alpha: a.alpha.or(f.alpha).unwrap_or(d.alpha),
        smoothing: a.smoothing.or(f.smoothing).unwrap_or(d.smoothing),
    }
}

fn train(ctx: &Context, a: &TrainArgs) -> Result<String> {
    let params = train_params(ctx, a);
    let tweets = corpus::read_partition(&a.data_dir, Partition::Train)?;
    let mut model = EmotionModel::train(a.model, &tweets, &params)?;
    let hyper = match a.model {
        ModelKind::Svm => serde_json::to_value(&params.svm)?,
        ModelKind::Mnb => json!({ "alpha": params.alpha }),
        ModelKind::Gnb => json!({ "smoothing": params.smoothing }),
    };
    let run = ctx.run_config(
        "train",
        json!({
            "model": a.model,
            "data_dir": path_str(&a.data_dir),
            "out": path_str(&a.out),
            "train_records": tweets.len(),
            "hyperparameters": hyper,
        }),
    );
    model.run_config = serde_json::to_value(&run)?;
    if let Some(parent) = a.out.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
    }
    model.save(&a.out)?;
    let summary = json!({
        "model": a.model,
        "out": path_str(&a.out),
        "train_records": tweets.len(),
        "features": model.tfidf.dim(),
        "classes": model.classes(),
    });
    Ok(match ctx.format {
        ReportFormat::Json => to_json_pretty(&summary),
        _ => format!(
            "trained {} on {} tweets ({} features, {} classes) -> {}\n",
            a.model,
            tweets.len(),
            model.tfidf.dim(),
            model.classes().len(),
            a.out.display()
        ),
    })
}

/// Renders a report with the run provenance attached (JSON and text only;
/// CSV stays a bare matrix).
fn render_report(report: &EvalReport, format: ReportFormat, run: &RunConfig) -> Result<String> {
    Ok(match format {
        ReportFormat::Json => {
            let mut value = serde_json::to_value(report)?;
            value["run_config"] = serde_json::to_value(run)?;
            to_json_pretty(&value)
        }
        ReportFormat::Text => {
            let mut s = report.to_text();
            s.push_str(&format!("\nrun config: {}\n", serde_json::to_string(run)?));
            s
        }
        ReportFormat::Csv => report.to_csv(),
    })
}

/// Predictions of `model` on `split`, paired with gold labels, in file order.
pub fn predictions(model: &EmotionModel, tweets: &[LabeledTweet]) -> Vec<(String, EmotionLabel, EmotionLabel)> {
    model
        .log_prob_records(tweets, model.kind().as_str())
        .into_iter()
        .zip(tweets)
        .map(|(r, t)| (t.id.clone(), t.label, r.logprobs.argmax()))
        .collect()
}

fn evaluate(ctx: &Context, a: &EvaluateArgs) -> Result<String> {
    let model = EmotionModel::load(&a.model)?;
    let tweets = corpus::read_partition(&a.data_dir, a.split)?;
    let pairs: Vec<(EmotionLabel, EmotionLabel)> =
        predictions(&model, &tweets).into_iter().map(|(_, g, p)| (g, p)).collect();
    let report = eval::score(&pairs, &report_classes(model.classes(), &pairs))?;
    let run = ctx.run_config(
        "evaluate",
        json!({
            "model": path_str(&a.model),
            "model_kind": model.kind(),
            "data_dir": path_str(&a.data_dir),
            "split": a.split.as_str(),
        }),
    );
    let text = render_report(&report, ctx.format, &run)?;
    if let Some(out) = &a.out {
        write_file(out, &text)?;
    }
    Ok(text)
}

/// Model classes plus any gold label the model never saw.
fn report_classes(model_classes: &[EmotionLabel], pairs: &[(EmotionLabel, EmotionLabel)]) -> Vec<EmotionLabel> {
    let mut classes = model_classes.to_vec();
    classes.extend(pairs.iter().map(|&(g, _)| g));
    classes.sort();
    classes.dedup();
    classes
}

fn export_logprobs(ctx: &Context, a: &ExportArgs) -> Result<String> {
    let model = EmotionModel::load(&a.model)?;
    let tweets = corpus::read_partition(&a.data_dir, a.split)?;
    let source = a.source.clone().unwrap_or_else(|| model.kind().to_string());
    let records = model.log_prob_records(&tweets, &source);
    if let Some(parent) = a.out.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
    }
    ensemble::write_stream(&a.out, &records)?;
    let checked = ensemble::validate_stream(&a.out)?;
    let run = ctx.run_config(
        "export-logprobs",
        json!({
            "model": path_str(&a.model),
            "model_kind": model.kind(),
            "data_dir": path_str(&a.data_dir),
            "split": a.split.as_str(),
            "out": path_str(&a.out),
            "source": source,
        }),
    );
    let manifest = json!({ "records": checked.len(), "run_config": run });
    write_file(&sidecar_path(&a.out), &to_json_pretty(&manifest))?;
    Ok(match ctx.format {
        ReportFormat::Json => to_json_pretty(&manifest),
        _ => format!("wrote {} records to {}\n", checked.len(), a.out.display()),
    })
}

/// `<stream>.manifest.json` next to an exported stream.
pub fn sidecar_path(stream: &Path) -> PathBuf {
    let mut name = stream.file_name().unwrap_or_default().to_os_string();
    name.push(".manifest.json");
    stream.with_file_name(name)
}

fn ensemble_cmd(ctx: &Context, a: &EnsembleArgs) -> Result<String> {
    let streams: Vec<Vec<LogProbRecord>> =
        a.inputs.iter().map(ensemble::validate_stream).collect::<Result<_>>()?;
    for (path, stream) in a.inputs.iter().zip(&streams) {
        if let Some(r) = stream.iter().find(|r| r.gold.is_none()) {
            return Err(Error::InvalidRecord {
                id: r.id.clone(),
                message: format!("{} has no gold label; cannot score", path.display()),
            });
        }
    }
    let fused = ensemble::fuse(&streams)?;
    let pairs: Vec<(EmotionLabel, EmotionLabel)> = fused
        .iter()
        .map(|r| (r.gold.expect("checked above"), r.predicted))
        .collect();
    let classes = fused.first().map(|r| r.classes.clone()).unwrap_or_default();
    let report = eval::score(&pairs, &report_classes(&classes, &pairs))?;
    if let Some(path) = &a.predictions {
        let mut s = String::new();
        for r in &fused {
            s.push_str(&serde_json::to_string(r)?);
            s.push('\n');
        }
        write_file(path, &s)?;
    }
    let mut sources: Vec<&str> = streams
        .iter()
        .filter_map(|s| s.first().map(|r| r.source.as_str()))
        .collect();
    sources.sort();
    let run = ctx.run_config(
        "ensemble",
        json!({
            "inputs": a.inputs.iter().map(|p| path_str(p)).collect::<Vec<_>>(),
            "sources": sources,
            "predictions": a.predictions.as_deref().map(path_str),
        }),
    );
    let text = render_report(&report, ctx.format, &run)?;
    if let Some(out) = &a.out {
        write_file(out, &text)?;
    }
    Ok(text)
}

fn predict(ctx: &Context, a: &PredictArgs) -> Result<String> {
    let model = EmotionModel::load(&a.model)?;
    let lp = model.predict_log_proba(&a.text);
    let label = lp.argmax();
    Ok(match ctx.format {
        ReportFormat::Json => to_json_pretty(&json!({ "label": label, "logprobs": lp })),
        ReportFormat::Csv => {
            let mut s = String::from("class,logprob,probability\n");
            for (c, v) in lp.classes().iter().zip(lp.values()) {
                s.push_str(&format!("{c},{v},{}\n", v.exp()));
            }
            s
        }
        ReportFormat::Text => {
            let mut s = format!("{label}\n\n");
            for (c, v) in lp.classes().iter().zip(lp.values()) {
                s.push_str(&format!("{:<10}{:>12.6}{:>10.4}\n", c.as_str(), v, v.exp()));
            }
            s
        }
    })
}
