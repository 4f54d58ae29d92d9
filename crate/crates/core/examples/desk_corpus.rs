//! Generates the bundled desk corpus: seeded, English-like text with a
//! Zipfian lexicon built from syllables plus affixes and function words.
//!
//! ```text
//! cargo run --example desk_corpus -- [OUT] [BYTES] [SEED]
//! ```
//! Defaults: `data/desk_corpus.txt`, 2_000_000 bytes, seed 7.

use std::{env, fs};

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Zipf};

const ONSETS: &[&str] = &[
    "", "b", "c", "d", "f", "g", "h", "j", "k", "l", "m", "n", "p", "r", "s", "t", "v", "w", "y",
    "z", "bl", "br", "ch", "cl", "cr", "dr", "fl", "fr", "gl", "gr", "pl", "pr", "sc", "sh", "sk",
    "sl", "sm", "sn", "sp", "st", "str", "sw", "th", "tr", "wh",
];
const NUCLEI: &[&str] = &[
    "a", "e", "i", "o", "u", "ai", "ea", "ee", "ie", "oa", "oo", "ou", "y",
];
const CODAS: &[&str] = &[
    "", "", "", "b", "ck", "d", "ft", "g", "l", "ld", "m", "n", "nd", "ng", "nk", "nt", "p", "r",
    "rd", "rn", "rt", "s", "sh", "st", "t", "th", "x",
];
const PREFIXES: &[&str] = &[
    "re", "un", "in", "dis", "over", "pre", "mis", "out", "sub", "inter",
];
const SUFFIXES: &[&str] = &[
    "s", "ed", "ing", "er", "ly", "es", "tion", "ment", "ness", "able", "ful", "less", "ity",
    "ous", "al", "ive", "ize",
];
const FUNCTION_WORDS: &[&str] = &[
    "the", "of", "and", "to", "a", "in", "is", "that", "for", "it", "as", "was", "with", "be",
    "by", "on", "not", "he", "she", "this", "are", "or", "his", "her", "from", "at", "which",
    "but", "have", "an", "had", "they", "you", "were", "their", "one", "all", "we", "can", "has",
    "there", "been", "if", "more", "when", "will", "would", "who", "so", "no",
];

fn syllable(rng: &mut ChaCha8Rng, zipf_onset: &Zipf<f64>, zipf_coda: &Zipf<f64>) -> String {
    let onset = ONSETS[zipf_onset.sample(rng) as usize - 1];
    let nucleus = NUCLEI.choose(rng).unwrap();
    let coda = CODAS[zipf_coda.sample(rng) as usize - 1];
    format!("{onset}{nucleus}{coda}")
}

fn lexicon(rng: &mut ChaCha8Rng, size: usize) -> Vec<String> {
    let zo = Zipf::new(ONSETS.len() as f64, 0.8).unwrap();
    let zc = Zipf::new(CODAS.len() as f64, 0.9).unwrap();
    let mut seen = std::collections::HashSet::new();
    let mut out = Vec::with_capacity(size);
    while out.len() < size {
        let syllables = match rng.random_range(0..10) {
            0..=3 => 1,
            4..=7 => 2,
            _ => 3,
        };
        let stem: String = (0..syllables).map(|_| syllable(rng, &zo, &zc)).collect();
        if seen.insert(stem.clone()) {
            out.push(stem);
        }
    }
    out
}

fn main() {
    let args: Vec<String> = env::args().skip(1).collect();
    let out = args
        .first()
        .map(String::as_str)
        .unwrap_or("data/desk_corpus.txt");
    let target: usize = args.get(1).map_or(2_000_000, |s| s.parse().expect("BYTES"));
    let seed: u64 = args.get(2).map_or(7, |s| s.parse().expect("SEED"));

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let stems = lexicon(&mut rng, 12_000);
    let stem_rank = Zipf::new(stems.len() as f64, 1.05).unwrap();
    let fw_rank = Zipf::new(FUNCTION_WORDS.len() as f64, 1.0).unwrap();

    let mut text = String::with_capacity(target + 512);
    let mut lines = 0usize;
    while text.len() < target {
        let words = rng.random_range(5..=40);
        for w in 0..words {
            if w > 0 {
                text.push(' ');
            }
            if rng.random_bool(0.45) {
                text.push_str(FUNCTION_WORDS[fw_rank.sample(&mut rng) as usize - 1]);
                continue;
            }
            let stem = &stems[stem_rank.sample(&mut rng) as usize - 1];
            if rng.random_bool(0.12) {
                text.push_str(PREFIXES.choose(&mut rng).unwrap());
            }
            text.push_str(stem);
            if rng.random_bool(0.35) {
                text.push_str(SUFFIXES.choose(&mut rng).unwrap());
            }
        }
        text.push('\n');
        lines += 1;
    }
    fs::write(out, &text).expect("write corpus");
    println!("{out}: {lines} lines, {} bytes", text.len());
}
