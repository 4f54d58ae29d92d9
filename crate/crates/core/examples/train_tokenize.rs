//! Train a BPE model on the bundled corpus, inspect it, tokenize a few
//! lines and round-trip the model through JSON.
//!
//! ```text
//! cargo run --release --example train_tokenize -- [MERGES]
//! ```

use tokenlab::{load_corpus, train_bpe, ModelFile, Result};

const DESK: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/data/desk_corpus.txt");

fn main() -> Result<()> {
    let merges: usize = std::env::args()
        .nth(1)
        .map_or(4000, |s| s.parse().expect("MERGES"));
    let corpus = load_corpus(DESK, None)?;
    println!(
        "corpus: {} lines, {} words, {} word types",
        corpus.lines().len(),
        corpus.total_words(),
        corpus.word_counts().len()
    );

    let tok = train_bpe(&corpus, merges)?;
    println!(
        "learned {} merges over {} characters, |V| = {}",
        tok.merges().len(),
        tok.alphabet().len(),
        tok.vocab_size()
    );
    for m in tok.merges().iter().take(10) {
        println!("  #{:<3} {} + {} -> {}", m.rank, m.left, m.right, m.result);
    }

    let sample = tokenlab::Corpus::from_text(&corpus.lines()[..3].join("\n"))?;
    print!("{}", tok.tokenize_corpus(&sample)?.render());

    // The literal rank-order scan and the fast path agree.
    for word in ["interstrangeness", "boaldous", "the"] {
        let fast = tok.tokenize_word(word)?;
        assert_eq!(fast, tok.tokenize_word_by_scan(word)?);
        println!("{word:>18} -> {}", fast.join(" "));
    }

    let json = ModelFile::from_tokenizer(&tok).to_json()?;
    let back = ModelFile::from_json(&json)?.tokenizer()?;
    assert_eq!(back, tok);
    println!("model JSON: {} bytes, round trip ok", json.len());
    Ok(())
}
