//! Random-Drop: recursively decompose a set of frequent merged tokens.
//!
//! First the hand-built `ENCODING` structure, then a corpus-level drop set
//! and its effect on the metrics.

use std::collections::BTreeSet;

use tokenlab::fixtures::encoding_tokenizer;
use tokenlab::variants::{decompose, random_drop_tokenize};
use tokenlab::{
    load_corpus, score_variant, train_bpe, Execution, MetricParams, RandomDropSpec, Result,
    Variant, VariantTokenizer,
};

const DESK: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/data/desk_corpus.txt");

fn main() -> Result<()> {
    let tok = encoding_tokenizer();
    println!("ENCODING -> {}", tok.tokenize_word("ENCODING")?.join("/"));
    for drop in [&["ENCOD", "COD"][..], &["ENCOD"], &["COD"]] {
        let spec = RandomDropSpec {
            pool_size: 0,
            drop_count: drop.len(),
            seed: 0,
            drop_set: drop.iter().map(|s| s.to_string()).collect(),
        };
        let out = random_drop_tokenize(&tok, &spec, "ENCODING")?;
        println!("  D = {drop:?}: {}", out.join("/"));
    }
    let d: BTreeSet<String> = ["ENCOD".into(), "COD".into()].into();
    println!(
        "  Dec(ENCOD) with both dropped = {:?}",
        decompose(&d, &tok, "ENCOD")
    );

    let corpus = load_corpus(DESK, Some(4000))?;
    let base = train_bpe(&corpus, 2000)?;
    let tokenized = base.tokenize_corpus(&corpus)?;
    let params = MetricParams::default();
    let baseline = score_variant(
        &corpus,
        &VariantTokenizer::baseline(base.clone()),
        params,
        Execution::Parallel,
    )?;
    println!(
        "\nbaseline           Eff3 {:.4}  PCT {:.4}  SEQ {:.2}",
        baseline.renyi_efficiency, baseline.percentile_freq, baseline.tokens_per_line
    );
    for seed in [1, 2, 3] {
        let spec = RandomDropSpec::new(&tokenized, &base, 1000, 250, seed)?;
        let first: Vec<String> = spec.drop_set.iter().take(4).cloned().collect();
        let vt = VariantTokenizer::new(base.clone(), Variant::RandomDrop(spec));
        let m = score_variant(&corpus, &vt, params, Execution::Parallel)?;
        println!(
            "drop seed {seed}        Eff3 {:.4}  PCT {:.4}  SEQ {:.2}  (D starts {first:?})",
            m.renyi_efficiency, m.percentile_freq, m.tokens_per_line
        );
    }
    Ok(())
}
