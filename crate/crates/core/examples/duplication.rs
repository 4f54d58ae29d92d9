//! Duplication: frequent tokens get `k` same-surface copies, one drawn per
//! occurrence. Sequence length is unchanged while entropy rises.

use tokenlab::analysis::{duplicate_token, predict_duplication_shannon};
use tokenlab::bpe::TokenizedCorpus;
use tokenlab::metrics::shannon_bits;
use tokenlab::variants::{duplication_tokenize, renormalize};
use tokenlab::{
    load_corpus, score_variant, train_bpe, DuplicationSpec, Execution, MetricParams, Result,
    UnigramDistribution, Variant, VariantTokenizer,
};

const DESK: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/data/desk_corpus.txt");

fn main() -> Result<()> {
    let corpus = load_corpus(DESK, Some(3000))?;
    let base = train_bpe(&corpus, 2000)?;
    let tokenized = base.tokenize_corpus(&corpus)?;
    let spec = DuplicationSpec::new(&tokenized, 100, 3, 11)?;
    println!(
        "duplicating {} tokens, e.g. {:?}",
        spec.duplicated.len(),
        spec.duplicated.iter().take(6).collect::<Vec<_>>()
    );

    let words: Vec<&str> = corpus.words_of_line(0).collect();
    let mut line = Vec::new();
    for (w, word) in words.iter().enumerate() {
        let decorated = duplication_tokenize(&base, &spec, word, (0, w))?;
        assert_eq!(renormalize(&decorated), base.tokenize_word(word)?);
        line.extend(decorated.iter().map(|t| t.to_string()));
    }
    println!("line 0: {}", line.join(" "));

    let params = MetricParams::default();
    let before = score_variant(
        &corpus,
        &VariantTokenizer::baseline(base.clone()),
        params,
        Execution::Parallel,
    )?;
    let after = score_variant(
        &corpus,
        &VariantTokenizer::new(base.clone(), Variant::Duplication(spec)),
        params,
        Execution::Parallel,
    )?;
    println!(
        "baseline     Eff3 {:.4}  PCT {:.4}  SEQ {:.2}",
        before.renyi_efficiency, before.percentile_freq, before.tokens_per_line
    );
    println!(
        "duplication  Eff3 {:.4}  PCT {:.4}  SEQ {:.2}",
        after.renyi_efficiency, after.percentile_freq, after.tokens_per_line
    );

    // Shannon entropy grows by exactly p(x) log2 k when x is split k ways.
    let dist = UnigramDistribution::from_tokenized(
        &TokenizedCorpus::from_rendered_lines(&["a a a b b c"]),
        Default::default(),
        None,
    )?;
    for k in [2, 5, 10] {
        let predicted = predict_duplication_shannon(&dist, "a", k)?;
        let direct = shannon_bits(&duplicate_token(&dist, "a", k)?);
        println!("k={k:>2}: predicted H {predicted:.12}  direct {direct:.12}");
    }
    Ok(())
}
