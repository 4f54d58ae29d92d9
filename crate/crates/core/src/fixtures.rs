//! Small hand-built tokenizers and reference numbers used by examples,
//! tests and the verification suite.

use crate::bpe::Tokenizer;

/// Merge structure where `ENCODING` tokenizes to `ENCOD ING`, with
/// `ENCOD = (EN, COD)` and `COD = (CO, D)`.
pub fn encoding_tokenizer() -> Tokenizer {
    Tokenizer::new(
        "ENCODIG".chars(),
        [
            ("E", "N"),
            ("C", "O"),
            ("CO", "D"),
            ("EN", "COD"),
            ("I", "N"),
            ("IN", "G"),
        ],
    )
    .expect("valid fixture")
}

/// The four-token distribution used in the duplication worked example.
pub const EXAMPLE_DISTRIBUTION: [f64; 4] = [0.4, 0.3, 0.2, 0.1];

/// Duplication factors of the worked example rows (1 = untouched).
pub const EXAMPLE_FACTORS: [u32; 3] = [1, 2, 10];

/// Published values per row: `H, H_0.5, H_3, Eff, Eff_0.5, Eff_3`, with
/// efficiency as bits over the natural log of the support size.
pub const EXAMPLE_TABLE: [[f64; 6]; 3] = [
    [1.85, 1.92, 1.66, 1.33, 1.38, 1.20],
    [2.25, 2.28, 2.13, 1.40, 1.42, 1.33],
    [3.18, 3.45, 2.39, 1.24, 1.35, 0.93],
];

/// The two tokenized lines whose tokens-per-line are 5 and 9.
pub const TOKENS_PER_LINE_EXAMPLES: [(&str, f64); 2] = [
    ("the quick fox jump -ed", 5.0),
    ("th -e br -own fox j -u -m -ped", 9.0),
];
