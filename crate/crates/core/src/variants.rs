//! Decorations of a trained BPE tokenizer that move entropy-based scores
//! without improving the segmentation.
//!
//! * **Random-Drop**: after normal tokenization, recursively split tokens
//!   that belong to a randomly chosen set `D` of frequent non-atomic
//!   subwords back into their merge operands.
//! * **Duplication**: the top-`N` tokens each get `k` same-surface
//!   duplicates, and every occurrence is replaced by a uniformly drawn one.
//! * **Inflation**: unused entries are added to the vocabulary; the
//!   tokenization is untouched.
//!
//! All random choices go through [`crate::rng`], keyed on the seed and on
//! the position of the draw, so results are reproducible and independent of
//! parallel scheduling.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::bpe::{TokenizedCorpus, Tokenizer, WordTokenizer};
use crate::error::{Error, Result};
use crate::rng::{self, DOMAIN_DROP_SET, DOMAIN_DUPLICATE};
use crate::DUP_MARKER;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RandomDropSpec {
    /// `N`: size of the frequency-ranked candidate pool.
    pub pool_size: usize,
    /// `k`: number of subwords drawn for decomposition.
    pub drop_count: usize,
    pub seed: u64,
    /// The materialized set `D`.
    pub drop_set: BTreeSet<String>,
}

impl RandomDropSpec {
    pub fn new(
        tokenized: &TokenizedCorpus,
        base: &Tokenizer,
        pool_size: usize,
        drop_count: usize,
        seed: u64,
    ) -> Result<Self> {
        let drop_set = select_drop_set(tokenized, base, pool_size, drop_count, seed)?;
        Ok(RandomDropSpec {
            pool_size,
            drop_count,
            seed,
            drop_set,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DuplicationSpec {
    /// `N`: how many of the most frequent tokens are duplicated.
    pub top_count: usize,
    /// `k`: duplicates per token.
    pub factor: u32,
    pub seed: u64,
    /// The materialized set `X`.
    pub duplicated: BTreeSet<String>,
}

impl DuplicationSpec {
    pub fn new(
        tokenized: &TokenizedCorpus,
        top_count: usize,
        factor: u32,
        seed: u64,
    ) -> Result<Self> {
        if factor < 2 {
            return Err(Error::Hyperparameter(format!(
                "duplication factor must be at least 2, got {factor}"
            )));
        }
        let duplicated = select_duplication_set(tokenized, top_count)?;
        Ok(DuplicationSpec {
            top_count,
            factor,
            seed,
            duplicated,
        })
    }

    /// Index in `1..=k` for the token at `(line, word, position)`.
    pub fn draw_index(&self, line: usize, word: usize, position: usize) -> u32 {
        let key = [DOMAIN_DUPLICATE, line as u64, word as u64, position as u64];
        1 + rng::keyed_below(self.seed, &key, self.factor as u64) as u32
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct InflationSpec {
    pub extra_tokens: usize,
}

impl InflationSpec {
    /// The synthetic entries. They contain the reserved marker, which corpus
    /// ingestion rejects, so no tokenization can ever produce them.
    pub fn synthetic_tokens(&self) -> impl Iterator<Item = String> {
        (0..self.extra_tokens).map(|i| format!("{DUP_MARKER}-inflated-{i:07}"))
    }
}

/// A base tokenizer decoration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Variant {
    Baseline,
    RandomDrop(RandomDropSpec),
    Duplication(DuplicationSpec),
    Inflate(InflationSpec),
}

impl Variant {
    pub fn kind(&self) -> &'static str {
        match self {
            Variant::Baseline => "baseline",
            Variant::RandomDrop(_) => "random_drop",
            Variant::Duplication(_) => "duplication",
            Variant::Inflate(_) => "inflate",
        }
    }
}

// ---------------------------------------------------------------------------
// Frequency ranking
// ---------------------------------------------------------------------------

/// Orders `candidates` by descending count, ties broken lexicographically.
/// Missing counts are zero.
pub fn rank_by_frequency<'a>(
    counts: &BTreeMap<String, u64>,
    candidates: impl IntoIterator<Item = &'a str>,
) -> Vec<(&'a str, u64)> {
    let mut ranked: Vec<(&str, u64)> = candidates
        .into_iter()
        .map(|t| (t, counts.get(t).copied().unwrap_or(0)))
        .collect();
    ranked.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(b.0)));
    ranked
}

/// Picks `D`: `k` non-atomic subwords drawn uniformly from the top `N`
/// vocabulary entries by corpus frequency.
pub fn select_drop_set(
    tokenized: &TokenizedCorpus,
    base: &Tokenizer,
    pool_size: usize,
    drop_count: usize,
    seed: u64,
) -> Result<BTreeSet<String>> {
    let vocab = base.vocab_size();
    if !(1 <= drop_count && drop_count <= pool_size && pool_size <= vocab) {
        return Err(Error::Hyperparameter(format!(
            "random drop needs 1 <= k <= N <= |V|, got k={drop_count}, N={pool_size}, |V|={vocab}"
        )));
    }
    let ranked = rank_by_frequency(
        tokenized.token_counts(),
        base.vocab().iter().map(String::as_str),
    );
    let pool: Vec<&str> = ranked[..pool_size]
        .iter()
        .map(|(t, _)| *t)
        .filter(|t| !base.is_atomic(t))
        .collect();
    if pool.len() < drop_count {
        return Err(Error::DropPoolShortfall {
            pool: pool_size,
            available: pool.len(),
            requested: drop_count,
        });
    }
    Ok(
        rng::sample_without_replacement(seed, DOMAIN_DROP_SET, &pool, drop_count)
            .into_iter()
            .map(str::to_owned)
            .collect(),
    )
}

/// Recursively undoes the merges of any token in `drop_set`.
pub fn decompose(drop_set: &BTreeSet<String>, base: &Tokenizer, token: &str) -> Vec<String> {
    let mut out = Vec::new();
    decompose_into(drop_set, base, token, &mut out);
    out
}

fn decompose_into(
    drop_set: &BTreeSet<String>,
    base: &Tokenizer,
    token: &str,
    out: &mut Vec<String>,
) {
    if drop_set.contains(token) {
        let merge = base
            .merge_for(token)
            .unwrap_or_else(|| panic!("atomic token {token:?} in drop set"));
        decompose_into(drop_set, base, &merge.left, out);
        decompose_into(drop_set, base, &merge.right, out);
    } else {
        out.push(token.to_owned());
    }
}

/// Standard BPE followed by decomposition of every token.
pub fn random_drop_tokenize(
    base: &Tokenizer,
    spec: &RandomDropSpec,
    word: &str,
) -> Result<Vec<String>> {
    let tokens = base.tokenize_word(word)?;
    if spec.drop_set.is_empty() {
        return Ok(tokens);
    }
    let mut out = Vec::with_capacity(tokens.len() + 2);
    for t in &tokens {
        decompose_into(&spec.drop_set, base, t, &mut out);
    }
    Ok(out)
}

/// Picks `X`: the `N` most frequent surfaced tokens.
pub fn select_duplication_set(
    tokenized: &TokenizedCorpus,
    top_count: usize,
) -> Result<BTreeSet<String>> {
    let distinct = tokenized.token_counts().len();
    if top_count < 1 || top_count > distinct {
        return Err(Error::Hyperparameter(format!(
            "duplication needs 1 <= N <= {distinct} (distinct surfaced tokens), got N={top_count}"
        )));
    }
    let counts = tokenized.token_counts();
    Ok(rank_by_frequency(counts, counts.keys().map(String::as_str))
        .into_iter()
        .take(top_count)
        .map(|(t, _)| t.to_owned())
        .collect())
}

/// A token with its duplicate index; index 0 means undecorated.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DecoratedToken {
    pub surface: String,
    pub index: u32,
}

impl DecoratedToken {
    /// Parses the rendered `surface#DUPi` form.
    pub fn parse(text: &str) -> Self {
        if let Some((surface, idx)) = text.rsplit_once(DUP_MARKER) {
            if let Ok(index) = idx.parse() {
                return DecoratedToken {
                    surface: surface.to_owned(),
                    index,
                };
            }
        }
        DecoratedToken {
            surface: text.to_owned(),
            index: 0,
        }
    }
}

impl fmt::Display for DecoratedToken {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.index == 0 {
            f.write_str(&self.surface)
        } else {
            write!(f, "{}{DUP_MARKER}{}", self.surface, self.index)
        }
    }
}

/// Standard BPE, then each token in `X` is replaced by a duplicate drawn
/// from `(seed, line, word, token position)`.
pub fn duplication_tokenize(
    base: &Tokenizer,
    spec: &DuplicationSpec,
    word: &str,
    position: (usize, usize),
) -> Result<Vec<DecoratedToken>> {
    let tokens = base.tokenize_word(word)?;
    Ok(tokens
        .into_iter()
        .enumerate()
        .map(|(pos, surface)| {
            let index = if spec.duplicated.contains(&surface) {
                spec.draw_index(position.0, position.1, pos)
            } else {
                0
            };
            DecoratedToken { surface, index }
        })
        .collect())
}

/// Strips duplicate indices.
pub fn renormalize(seq: &[DecoratedToken]) -> Vec<String> {
    seq.iter().map(|t| t.surface.clone()).collect()
}

/// Adds `extra` never-produced entries to the vocabulary.
pub fn inflate_vocab(base: &Tokenizer, extra: usize) -> VariantTokenizer {
    VariantTokenizer::new(
        base.clone(),
        Variant::Inflate(InflationSpec {
            extra_tokens: extra,
        }),
    )
}

// ---------------------------------------------------------------------------
// Decorated tokenizer
// ---------------------------------------------------------------------------

/// A base tokenizer together with one decoration.
#[derive(Debug, Clone, PartialEq)]
pub struct VariantTokenizer {
    pub base: Tokenizer,
    pub variant: Variant,
}

impl VariantTokenizer {
    pub fn new(base: Tokenizer, variant: Variant) -> Self {
        VariantTokenizer { base, variant }
    }

    pub fn baseline(base: Tokenizer) -> Self {
        Self::new(base, Variant::Baseline)
    }

    /// Tokenizes one word in rendered form (`surface#DUPi` for duplicates).
    pub fn tokenize_word(&self, word: &str, position: (usize, usize)) -> Result<Vec<String>> {
        let mut tokens = self.tokenize_type(word)?;
        self.decorate_occurrence(&mut tokens, position.0, position.1);
        Ok(tokens)
    }

    /// The vocabulary this variant can emit, used for full-vocabulary
    /// accounting.
    pub fn vocab_entries(&self) -> BTreeSet<String> {
        let base = self.base.vocab();
        match &self.variant {
            Variant::Baseline => base.clone(),
            Variant::RandomDrop(spec) => base.difference(&spec.drop_set).cloned().collect(),
            Variant::Duplication(spec) => {
                let mut out: BTreeSet<String> =
                    base.difference(&spec.duplicated).cloned().collect();
                for surface in &spec.duplicated {
                    for index in 1..=spec.factor {
                        out.insert(
                            DecoratedToken {
                                surface: surface.clone(),
                                index,
                            }
                            .to_string(),
                        );
                    }
                }
                out
            }
            Variant::Inflate(spec) => {
                let mut out = base.clone();
                out.extend(spec.synthetic_tokens());
                out
            }
        }
    }

    pub fn vocab_size(&self) -> usize {
        let base = self.base.vocab_size();
        match &self.variant {
            Variant::Baseline => base,
            Variant::RandomDrop(spec) => base - spec.drop_set.len(),
            Variant::Duplication(spec) => base + (spec.factor as usize - 1) * spec.duplicated.len(),
            Variant::Inflate(spec) => base + spec.extra_tokens,
        }
    }
}

impl WordTokenizer for VariantTokenizer {
    fn tokenize_type(&self, word: &str) -> Result<Vec<String>> {
        match &self.variant {
            Variant::RandomDrop(spec) => random_drop_tokenize(&self.base, spec, word),
            _ => self.base.tokenize_word(word),
        }
    }

    fn decorate_occurrence(&self, tokens: &mut [String], line: usize, word: usize) {
        if let Variant::Duplication(spec) = &self.variant {
            for (pos, tok) in tokens.iter_mut().enumerate() {
                if spec.duplicated.contains(tok.as_str()) {
                    let index = spec.draw_index(line, word, pos);
                    tok.push_str(DUP_MARKER);
                    tok.push_str(&index.to_string());
                }
            }
        }
    }
}
