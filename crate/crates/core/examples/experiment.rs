//! The full desk-scale experiment: a 4k-merge baseline, Random-Drop over
//! three seeds, a small duplication grid and vocabulary inflation, all
//! scored under identical settings.
//!
//! ```text
//! cargo run --release --example experiment
//! ```

use tokenlab::analysis::variant_label;
use tokenlab::report::comparison_table;
use tokenlab::{
    compare_tokenizers, inflate_vocab, load_corpus, train_bpe, Accounting, DuplicationSpec,
    LabelledVariant, MetricParams, RandomDropSpec, Result, Variant,
};

const DESK: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/data/desk_corpus.txt");

fn main() -> Result<()> {
    let corpus = load_corpus(DESK, None)?;
    let base = train_bpe(&corpus, 4000)?;
    let tokenized = base.tokenize_corpus(&corpus)?;

    let mut variants = Vec::new();
    for seed in [1, 2, 3] {
        let v = Variant::RandomDrop(RandomDropSpec::new(&tokenized, &base, 2000, 500, seed)?);
        variants.push(LabelledVariant::new(variant_label(&v), v));
    }
    for (n, k) in [(100, 3), (100, 5), (500, 3), (500, 5)] {
        let v = Variant::Duplication(DuplicationSpec::new(&tokenized, n, k, 1)?);
        variants.push(LabelledVariant::new(variant_label(&v), v));
    }
    let report = compare_tokenizers(&corpus, &base, &variants, MetricParams::default())?;
    print!("{}", comparison_table(&report));

    println!("\nfull-vocab accounting:");
    let inflated = inflate_vocab(&base, 1000).variant;
    let params = MetricParams {
        accounting: Accounting::FullVocab,
        ..Default::default()
    };
    let report = compare_tokenizers(
        &corpus,
        &base,
        &[LabelledVariant::new("inflate +1000", inflated)],
        params,
    )?;
    print!("{}", comparison_table(&report));
    Ok(())
}
