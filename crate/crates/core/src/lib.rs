//! Byte-pair-encoding tokenizers, adversarial tokenizer variants and
//! intrinsic metrics over unigram token distributions.
//!
//! The usual flow is corpus, then [`train_bpe`], then an optional
//! [`Variant`], then [`MetricReport::compute`]. See `examples/` for
//! runnable walkthroughs.

pub mod analysis;
pub mod bpe;
pub mod cli;
pub mod corpus;
pub mod error;
pub mod fixtures;
pub mod metrics;
pub mod model;
pub mod report;
pub mod rng;
pub mod variants;
pub mod verify;

/// Marker that renders duplicated tokens as `surface#DUPi`. Corpora may not
/// contain it.
pub const DUP_MARKER: &str = "#DUP";

pub use analysis::{
    compare_tokenizers, drop_condition, score_variant, ComparisonReport, DropConditionReport,
    LabelledVariant,
};
pub use bpe::{
    tokenize_corpus_with, train_bpe, Execution, Merge, TokenizedCorpus, Tokenizer, UnknownPolicy,
    WordTokenizer,
};
pub use corpus::{load_corpora, load_corpus, Corpus};
pub use error::{Error, Result};
pub use metrics::{
    renyi_efficiency, renyi_entropy, shannon_entropy, Accounting, EfficiencyConvention,
    MetricParams, MetricReport, UnigramDistribution,
};
pub use model::ModelFile;
pub use variants::{
    inflate_vocab, DuplicationSpec, InflationSpec, RandomDropSpec, Variant, VariantTokenizer,
};
