//! Inflating the vocabulary with never-used entries changes nothing about
//! the tokenization but lowers efficiency once unused entries count.

use tokenlab::{
    inflate_vocab, load_corpus, score_variant, train_bpe, Accounting, Execution, MetricParams,
    Result, VariantTokenizer,
};

const DESK: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/data/desk_corpus.txt");

fn main() -> Result<()> {
    let corpus = load_corpus(DESK, Some(3000))?;
    let base = train_bpe(&corpus, 2000)?;
    let inflated = inflate_vocab(&base, 1000);
    println!("|V| {} -> {}", base.vocab_size(), inflated.vocab_size());

    for accounting in [Accounting::SurfacedOnly, Accounting::FullVocab] {
        let params = MetricParams {
            accounting,
            ..Default::default()
        };
        let b = score_variant(
            &corpus,
            &VariantTokenizer::baseline(base.clone()),
            params,
            Execution::Parallel,
        )?;
        let i = score_variant(&corpus, &inflated, params, Execution::Parallel)?;
        assert_eq!(b.tokens_per_line, i.tokens_per_line);
        println!(
            "{accounting:?}: Eff3 {:.4} -> {:.4}, support {} -> {}",
            b.renyi_efficiency, i.renyi_efficiency, b.effective_vocab, i.effective_vocab
        );
    }
    Ok(())
}
