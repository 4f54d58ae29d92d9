//! `tokenlab` command line.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage error, 3 data
//! error. Every output artifact embeds the resolved run configuration.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::analysis::{compare_tokenizers, score_variant, variant_label, LabelledVariant};
use crate::bpe::{tokenize_corpus_with, train_bpe, Execution, UnknownPolicy, WithPolicy};
use crate::corpus::{load_corpora, Corpus};
use crate::error::{Error, Result};
use crate::metrics::{Accounting, EfficiencyConvention, MetricParams, MetricReport};
use crate::model::ModelFile;
use crate::report;
use crate::variants::{inflate_vocab, DuplicationSpec, RandomDropSpec, Variant, VariantTokenizer};
use crate::verify::{self, Fault, VerifyOptions};

pub const EXIT_VERIFY_FAILED: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_DATA: u8 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "tokenlab",
    version,
    about = "BPE tokenizers, adversarial variants and intrinsic metrics"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Train a BPE model on one or more corpora.
    Train(TrainArgs),
    /// Tokenize corpora with a (possibly decorated) model.
    Tokenize(TokenizeArgs),
    /// Build a Random-Drop, Duplication or inflated model from a base model.
    Variant(VariantArgs),
    /// Score a model on corpora (concatenated in argument order).
    Score(ScoreArgs),
    /// Compare variant models against their baseline.
    Compare(CompareArgs),
    /// Run the built-in entropy checks.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Table,
    Structured,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum VariantKind {
    #[value(name = "random_drop", alias = "random-drop")]
    RandomDrop,
    Duplication,
    Inflate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum UnknownArg {
    Reject,
    PassThrough,
}

impl From<UnknownArg> for UnknownPolicy {
    fn from(u: UnknownArg) -> Self {
        match u {
            UnknownArg::Reject => UnknownPolicy::Reject,
            UnknownArg::PassThrough => UnknownPolicy::PassThrough,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct CorpusArgs {
    /// Corpus files; several are concatenated in order.
    #[arg(required = true)]
    pub corpus: Vec<PathBuf>,
    /// Read at most this many lines from each file.
    #[arg(long)]
    pub max_lines: Option<usize>,
}

#[derive(Debug, Clone, Args)]
pub struct MetricArgs {
    #[arg(long, default_value_t = crate::metrics::DEFAULT_ALPHA)]
    pub alpha: f64,
    /// Percentile band `γ1,γ2`.
    #[arg(long, default_value = "0.03,0.83", value_parser = parse_percentiles)]
    pub percentiles: (f64, f64),
    #[arg(long, value_enum, default_value = "surfaced-only")]
    pub accounting: Accounting,
    #[arg(long, value_enum, default_value = "consistent")]
    pub efficiency_convention: EfficiencyConvention,
}

impl MetricArgs {
    fn params(&self) -> MetricParams {
        MetricParams {
            alpha: self.alpha,
            percentiles: self.percentiles,
            accounting: self.accounting,
            efficiency_convention: self.efficiency_convention,
        }
    }
}

fn parse_percentiles(s: &str) -> std::result::Result<(f64, f64), String> {
    let (a, b) = s
        .split_once(',')
        .ok_or_else(|| format!("expected `γ1,γ2`, got {s:?}"))?;
    let a: f64 = a.trim().parse().map_err(|e| format!("{e}"))?;
    let b: f64 = b.trim().parse().map_err(|e| format!("{e}"))?;
    if !(0.0 <= a && a < b && b <= 1.0) {
        return Err(format!("need 0 <= γ1 < γ2 <= 1, got {a},{b}"));
    }
    Ok((a, b))
}

#[derive(Debug, Clone, Args)]
pub struct TrainArgs {
    #[command(flatten)]
    pub input: CorpusArgs,
    #[arg(long)]
    pub merges: usize,
    #[arg(long, short)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct TokenizeArgs {
    #[arg(long, short)]
    pub model: PathBuf,
    #[command(flatten)]
    pub input: CorpusArgs,
    #[arg(long, value_enum, default_value = "reject")]
    pub unknown: UnknownArg,
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct VariantArgs {
    #[arg(long, short)]
    pub model: PathBuf,
    #[arg(long, value_enum)]
    pub kind: VariantKind,
    /// Pool size (random_drop) or number of duplicated tokens (duplication).
    #[arg(short = 'N', long = "top")]
    pub n: Option<usize>,
    /// Drop count (random_drop) or duplication factor (duplication).
    #[arg(short = 'k', long = "k")]
    pub k: Option<usize>,
    /// Comma-separated seeds; one model is written per seed.
    #[arg(long, value_delimiter = ',', default_value = "0")]
    pub seed: Vec<u64>,
    /// Synthetic entries to add (inflate).
    #[arg(long)]
    pub extra: Option<usize>,
    /// Corpus used to rank token frequencies.
    #[arg(long)]
    pub corpus: Vec<PathBuf>,
    #[arg(long)]
    pub max_lines: Option<usize>,
    /// Output path. With several seeds `.seed<S>` is inserted before the
    /// extension.
    #[arg(long, short)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct ScoreArgs {
    #[arg(long, short)]
    pub model: PathBuf,
    #[command(flatten)]
    pub input: CorpusArgs,
    #[command(flatten)]
    pub metrics: MetricArgs,
    #[arg(long, value_enum, default_value = "reject")]
    pub unknown: UnknownArg,
    #[arg(long, value_enum, default_value = "structured")]
    pub format: Format,
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct CompareArgs {
    #[arg(long)]
    pub baseline: PathBuf,
    /// Variant model files built from the baseline.
    #[arg(long = "variant")]
    pub variants: Vec<PathBuf>,
    #[command(flatten)]
    pub input: CorpusArgs,
    #[command(flatten)]
    pub metrics: MetricArgs,
    #[arg(long, value_enum, default_value = "table")]
    pub format: Format,
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[arg(long, default_value_t = verify::DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long, default_value_t = verify::DEFAULT_INSTANCES)]
    pub instances: usize,
    #[arg(long, value_enum, default_value = "table")]
    pub format: Format,
    #[arg(long, short)]
    pub out: Option<PathBuf>,
    /// Corrupt one formula to confirm the checks can fail.
    #[arg(long, value_enum, hide = true)]
    pub inject_fault: Option<Fault>,
}

/// Fully resolved parameters of one invocation.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct RunConfig {
    pub subcommand: String,
    pub inputs: Vec<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub model: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub metrics: Option<MetricParams>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub num_merges: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kind: Option<VariantKind>,
    #[serde(rename = "N", skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub seeds: Vec<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub extra: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_lines: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub unknown: Option<UnknownArg>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub format: Option<Format>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub variants: Vec<PathBuf>,
}

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    config: &'a RunConfig,
    report: &'a T,
}

/// Outcome of a command that ran to completion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Success,
    VerificationFailed,
}

/// Parses `std::env::args` and runs; returns the process exit code.
pub fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(Outcome::Success) => ExitCode::SUCCESS,
        Ok(Outcome::VerificationFailed) => ExitCode::from(EXIT_VERIFY_FAILED),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}

pub fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::Hyperparameter(_) | Error::DropPoolShortfall { .. } | Error::Metric(_) => EXIT_USAGE,
        _ => EXIT_DATA,
    }
}

pub fn run(cli: Cli) -> Result<Outcome> {
    match cli.command {
        Command::Train(a) => cmd_train(&a),
        Command::Tokenize(a) => cmd_tokenize(&a),
        Command::Variant(a) => cmd_variant(&a),
        Command::Score(a) => cmd_score(&a),
        Command::Compare(a) => cmd_compare(&a),
        Command::Verify(a) => cmd_verify(&a),
    }
}

fn write_output(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Error::Io {
            path: p.to_path_buf(),
            source: e,
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn structured<T: Serialize>(config: &RunConfig, report: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(&Envelope { config, report })?;
    s.push('\n');
    Ok(s)
}

fn table_with_config(config: &RunConfig, table: String) -> Result<String> {
    Ok(format!(
        "# config: {}\n{table}",
        serde_json::to_string(config)?
    ))
}

pub fn cmd_train(a: &TrainArgs) -> Result<Outcome> {
    let corpus = load_corpora(&a.input.corpus, a.input.max_lines)?;
    let tok = train_bpe(&corpus, a.merges)?;
    let config = RunConfig {
        subcommand: "train".into(),
        inputs: a.input.corpus.clone(),
        output: Some(a.out.clone()),
        num_merges: Some(a.merges),
        max_lines: a.input.max_lines,
        ..Default::default()
    };
    ModelFile::from_tokenizer(&tok)
        .with_config(&config)?
        .save(&a.out)?;
    Ok(Outcome::Success)
}

fn load_variant(path: &Path) -> Result<VariantTokenizer> {
    ModelFile::load(path)?.variant_tokenizer()
}

pub fn cmd_tokenize(a: &TokenizeArgs) -> Result<Outcome> {
    let model = load_variant(&a.model)?;
    let corpus = load_corpora(&a.input.corpus, a.input.max_lines)?;
    let tokenized = match (&model.variant, UnknownPolicy::from(a.unknown)) {
        (Variant::Baseline | Variant::Inflate(_), UnknownPolicy::PassThrough) => {
            let wrapped = WithPolicy {
                tokenizer: &model.base,
                policy: UnknownPolicy::PassThrough,
            };
            tokenize_corpus_with(&wrapped, &corpus, Execution::Parallel)?
        }
        _ => tokenize_corpus_with(&model, &corpus, Execution::Parallel)?,
    };
    write_output(a.out.as_deref(), &tokenized.render())?;
    Ok(Outcome::Success)
}

fn variant_paths(out: &Path, seeds: &[u64]) -> Vec<PathBuf> {
    if seeds.len() <= 1 {
        return vec![out.to_path_buf()];
    }
    let stem = out
        .file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or("variant");
    let ext = out.extension().and_then(|s| s.to_str());
    seeds
        .iter()
        .map(|seed| {
            let name = match ext {
                Some(ext) => format!("{stem}.seed{seed}.{ext}"),
                None => format!("{stem}.seed{seed}"),
            };
            out.with_file_name(name)
        })
        .collect()
}

fn require(value: Option<usize>, flag: &str, kind: &str) -> Result<usize> {
    value.ok_or_else(|| Error::Hyperparameter(format!("{kind} requires {flag}")))
}

pub fn cmd_variant(a: &VariantArgs) -> Result<Outcome> {
    let base = ModelFile::load(&a.model)?.tokenizer()?;
    let seeds: Vec<u64> = a.seed.clone();
    let mut config = RunConfig {
        subcommand: "variant".into(),
        inputs: a.corpus.clone(),
        model: Some(a.model.clone()),
        kind: Some(a.kind),
        n: a.n,
        k: a.k,
        seeds: seeds.clone(),
        extra: a.extra,
        max_lines: a.max_lines,
        ..Default::default()
    };

    let models: Vec<VariantTokenizer> = match a.kind {
        VariantKind::Inflate => {
            let extra = a
                .extra
                .ok_or_else(|| Error::Hyperparameter("inflate requires --extra".into()))?;
            config.seeds.clear();
            vec![inflate_vocab(&base, extra)]
        }
        VariantKind::RandomDrop | VariantKind::Duplication => {
            if a.corpus.is_empty() {
                return Err(Error::Hyperparameter(
                    "random_drop and duplication need --corpus for frequency ranking".into(),
                ));
            }
            let corpus: Corpus = load_corpora(&a.corpus, a.max_lines)?;
            let tokenized = base.tokenize_corpus(&corpus)?;
            let n = require(a.n, "-N", "this variant")?;
            let k = require(a.k, "-k", "this variant")?;
            seeds
                .iter()
                .map(|&seed| {
                    let variant = match a.kind {
                        VariantKind::RandomDrop => {
                            Variant::RandomDrop(RandomDropSpec::new(&tokenized, &base, n, k, seed)?)
                        }
                        _ => {
                            let factor = u32::try_from(k)
                                .map_err(|_| Error::Hyperparameter(format!("k={k} too large")))?;
                            Variant::Duplication(DuplicationSpec::new(&tokenized, n, factor, seed)?)
                        }
                    };
                    Ok(VariantTokenizer::new(base.clone(), variant))
                })
                .collect::<Result<_>>()?
        }
    };

    let paths = if a.kind == VariantKind::Inflate {
        vec![a.out.clone()]
    } else {
        variant_paths(&a.out, &seeds)
    };
    for (model, path) in models.iter().zip(&paths) {
        let mut cfg = config.clone();
        cfg.output = Some(path.clone());
        ModelFile::from_variant(model)
            .with_config(&cfg)?
            .save(path)?;
    }
    Ok(Outcome::Success)
}

pub fn cmd_score(a: &ScoreArgs) -> Result<Outcome> {
    let model = load_variant(&a.model)?;
    let corpus = load_corpora(&a.input.corpus, a.input.max_lines)?;
    let params = a.metrics.params();
    let metrics: MetricReport = match (&model.variant, UnknownPolicy::from(a.unknown)) {
        (Variant::Baseline | Variant::Inflate(_), UnknownPolicy::PassThrough) => {
            let wrapped = WithPolicy {
                tokenizer: &model.base,
                policy: UnknownPolicy::PassThrough,
            };
            let tokenized = tokenize_corpus_with(&wrapped, &corpus, Execution::Parallel)?;
            MetricReport::compute(&tokenized, &model.vocab_entries(), params)?
        }
        _ => score_variant(&corpus, &model, params, Execution::Parallel)?,
    };
    let config = RunConfig {
        subcommand: "score".into(),
        inputs: a.input.corpus.clone(),
        model: Some(a.model.clone()),
        output: a.out.clone(),
        metrics: Some(params),
        max_lines: a.input.max_lines,
        unknown: Some(a.unknown),
        format: Some(a.format),
        ..Default::default()
    };
    let text = match a.format {
        Format::Structured => structured(&config, &metrics)?,
        Format::Table => table_with_config(
            &config,
            report::metric_table(&[(variant_label(&model.variant), &metrics)]),
        )?,
    };
    write_output(a.out.as_deref(), &text)?;
    Ok(Outcome::Success)
}

pub fn cmd_compare(a: &CompareArgs) -> Result<Outcome> {
    let baseline = ModelFile::load(&a.baseline)?.tokenizer()?;
    let mut variants = Vec::new();
    for path in &a.variants {
        let v = load_variant(path)?;
        if v.base != baseline {
            return Err(Error::InvalidModel(format!(
                "{} does not decorate the baseline model",
                path.display()
            )));
        }
        variants.push(LabelledVariant::new(variant_label(&v.variant), v.variant));
    }
    let corpus = load_corpora(&a.input.corpus, a.input.max_lines)?;
    let params = a.metrics.params();
    let comparison = compare_tokenizers(&corpus, &baseline, &variants, params)?;
    let config = RunConfig {
        subcommand: "compare".into(),
        inputs: a.input.corpus.clone(),
        model: Some(a.baseline.clone()),
        output: a.out.clone(),
        metrics: Some(params),
        max_lines: a.input.max_lines,
        format: Some(a.format),
        variants: a.variants.clone(),
        ..Default::default()
    };
    let text = match a.format {
        Format::Structured => structured(&config, &comparison)?,
        Format::Table => table_with_config(&config, report::comparison_table(&comparison))?,
    };
    write_output(a.out.as_deref(), &text)?;
    Ok(Outcome::Success)
}

pub fn cmd_verify(a: &VerifyArgs) -> Result<Outcome> {
    let report = verify::run_verification(VerifyOptions {
        seed: a.seed,
        instances: a.instances,
        fault: a.inject_fault,
    });
    let config = RunConfig {
        subcommand: "verify".into(),
        output: a.out.clone(),
        seeds: vec![a.seed],
        format: Some(a.format),
        ..Default::default()
    };
    let text = match a.format {
        Format::Structured => structured(&config, &report)?,
        Format::Table => table_with_config(&config, report::verification_table(&report))?,
    };
    write_output(a.out.as_deref(), &text)?;
    Ok(if report.all_passed() {
        Outcome::Success
    } else {
        Outcome::VerificationFailed
    })
}
