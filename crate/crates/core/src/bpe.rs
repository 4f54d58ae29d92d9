//! Standard BPE: greedy merge training and merge-list application.
//!
//! A trained tokenizer is the triple of an atomic alphabet, the vocabulary
//! it induces, and an ordered merge list. Words are tokenized
//! independently; merges never cross whitespace and there is no
//! end-of-word symbol.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, BinaryHeap, HashMap, HashSet};
use std::rc::Rc;

use rayon::prelude::*;

use crate::corpus::{word_to_characters, Corpus};
use crate::error::{Error, Result};

/// One entry of the merge list.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Merge {
    pub left: String,
    pub right: String,
    pub result: String,
    pub rank: usize,
}

impl Merge {
    pub fn new(left: impl Into<String>, right: impl Into<String>, rank: usize) -> Self {
        let left = left.into();
        let right = right.into();
        let result = format!("{left}{right}");
        Merge {
            left,
            right,
            result,
            rank,
        }
    }
}

/// What to do with a character that is not in the alphabet.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum UnknownPolicy {
    #[default]
    Reject,
    /// Emit the character as its own token and record it as unknown.
    PassThrough,
}

/// A trained BPE tokenizer.
#[derive(Debug, Clone)]
pub struct Tokenizer {
    alphabet: BTreeSet<char>,
    merges: Vec<Merge>,
    vocab: BTreeSet<String>,
    // Interned ids for fast application.
    char_ids: HashMap<char, u32>,
    strings: Vec<String>,
    pair_table: HashMap<(u32, u32), u32>,
    merge_ids: Vec<(u32, u32, u32)>,
    by_result: HashMap<String, usize>,
}

impl PartialEq for Tokenizer {
    fn eq(&self, other: &Self) -> bool {
        self.alphabet == other.alphabet && self.merges == other.merges
    }
}

impl Tokenizer {
    /// Builds a tokenizer from an alphabet and an ordered list of merge pairs.
    ///
    /// Every merge operand must be an alphabet character or the result of an
    /// earlier merge, and every merge must produce a new vocabulary entry
    /// (which also rules out repeated `(left, right)` pairs).
    pub fn new<I, P, L, R>(alphabet: I, pairs: P) -> Result<Self>
    where
        I: IntoIterator<Item = char>,
        P: IntoIterator<Item = (L, R)>,
        L: Into<String>,
        R: Into<String>,
    {
        let alphabet: BTreeSet<char> = alphabet.into_iter().collect();
        let mut strings = Vec::new();
        let mut ids: HashMap<String, u32> = HashMap::new();
        let mut char_ids = HashMap::new();
        for &c in &alphabet {
            let id = strings.len() as u32;
            strings.push(c.to_string());
            ids.insert(c.to_string(), id);
            char_ids.insert(c, id);
        }

        let mut merges = Vec::new();
        let mut pair_table = HashMap::new();
        let mut merge_ids = Vec::new();
        let mut by_result = HashMap::new();
        for (rank, (left, right)) in pairs.into_iter().enumerate() {
            let merge = Merge::new(left, right, rank);
            let l = *ids.get(&merge.left).ok_or_else(|| {
                Error::InvalidModel(format!(
                    "merge {rank} uses {:?} before it exists",
                    merge.left
                ))
            })?;
            let r = *ids.get(&merge.right).ok_or_else(|| {
                Error::InvalidModel(format!(
                    "merge {rank} uses {:?} before it exists",
                    merge.right
                ))
            })?;
            if ids.contains_key(&merge.result) {
                return Err(Error::InvalidModel(format!(
                    "merge {rank} produces {:?}, which is already in the vocabulary",
                    merge.result
                )));
            }
            let res = strings.len() as u32;
            strings.push(merge.result.clone());
            ids.insert(merge.result.clone(), res);
            merge_ids.push((l, r, res));
            if pair_table.insert((l, r), rank as u32).is_some() {
                return Err(Error::InvalidModel(format!(
                    "merge ({:?}, {:?}) appears twice",
                    merge.left, merge.right
                )));
            }
            by_result.insert(merge.result.clone(), rank);
            merges.push(merge);
        }
        let vocab = strings.iter().cloned().collect();
        Ok(Tokenizer {
            alphabet,
            merges,
            vocab,
            char_ids,
            strings,
            pair_table,
            merge_ids,
            by_result,
        })
    }

    pub fn alphabet(&self) -> &BTreeSet<char> {
        &self.alphabet
    }

    pub fn merges(&self) -> &[Merge] {
        &self.merges
    }

    /// Σ together with every merge result.
    pub fn vocab(&self) -> &BTreeSet<String> {
        &self.vocab
    }

    pub fn vocab_size(&self) -> usize {
        self.vocab.len()
    }

    pub fn contains(&self, token: &str) -> bool {
        self.vocab.contains(token)
    }

    /// True for single alphabet characters.
    pub fn is_atomic(&self, token: &str) -> bool {
        let mut chars = token.chars();
        match (chars.next(), chars.next()) {
            (Some(c), None) => self.alphabet.contains(&c),
            _ => false,
        }
    }

    /// The merge producing `token`, if any.
    pub fn merge_for(&self, token: &str) -> Option<&Merge> {
        self.by_result.get(token).map(|&rank| &self.merges[rank])
    }

    /// Tokenizes a word, rejecting characters outside the alphabet.
    pub fn tokenize_word(&self, word: &str) -> Result<Vec<String>> {
        self.tokenize_word_with(word, UnknownPolicy::Reject)
    }

    pub fn tokenize_word_with(&self, word: &str, policy: UnknownPolicy) -> Result<Vec<String>> {
        let mut out = Vec::new();
        let mut segment = Vec::new();
        for c in word.chars() {
            match self.char_ids.get(&c) {
                Some(&id) => segment.push(id),
                None if policy == UnknownPolicy::PassThrough => {
                    self.flush_segment(&mut segment, &mut out);
                    out.push(c.to_string());
                }
                None => {
                    return Err(Error::UnknownCharacter {
                        word: word.to_owned(),
                        ch: c,
                    })
                }
            }
        }
        self.flush_segment(&mut segment, &mut out);
        Ok(out)
    }

    fn flush_segment(&self, segment: &mut Vec<u32>, out: &mut Vec<String>) {
        if segment.is_empty() {
            return;
        }
        self.apply_all(segment);
        out.extend(segment.iter().map(|&id| self.strings[id as usize].clone()));
        segment.clear();
    }

    // Repeatedly applies the lowest-ranked merge present in the sequence.
    // Merge operands always predate the merge, so a newly formed token can
    // only take part in later merges and this matches the rank-order scan.
    fn apply_all(&self, seq: &mut Vec<u32>) {
        while let Some(rank) = seq
            .windows(2)
            .filter_map(|w| self.pair_table.get(&(w[0], w[1])))
            .min()
        {
            let (l, r, res) = self.merge_ids[*rank as usize];
            apply_merge_ids(l, r, res, seq);
        }
    }

    /// Literal merge-list scan: start from characters and apply every merge
    /// in rank order. Slow, kept as the reference route.
    pub fn tokenize_word_by_scan(&self, word: &str) -> Result<Vec<String>> {
        let mut seq = Vec::new();
        for c in word_to_characters(word) {
            if !self.alphabet.contains(&c) {
                return Err(Error::UnknownCharacter {
                    word: word.to_owned(),
                    ch: c,
                });
            }
            seq.push(c.to_string());
        }
        for merge in &self.merges {
            seq = apply_merge(merge, &seq);
        }
        Ok(seq)
    }

    /// Tokenizes a whole corpus in parallel with the default unknown policy.
    pub fn tokenize_corpus(&self, corpus: &Corpus) -> Result<TokenizedCorpus> {
        tokenize_corpus_with(self, corpus, Execution::Parallel)
    }
}

impl WordTokenizer for Tokenizer {
    fn tokenize_type(&self, word: &str) -> Result<Vec<String>> {
        self.tokenize_word(word)
    }
}

/// Replaces each adjacent `(left, right)` with the merge result, scanning
/// left to right and resuming after every newly formed token.
pub fn apply_merge(merge: &Merge, seq: &[String]) -> Vec<String> {
    let mut out = Vec::with_capacity(seq.len());
    let mut i = 0;
    while i < seq.len() {
        if i + 1 < seq.len() && seq[i] == merge.left && seq[i + 1] == merge.right {
            out.push(merge.result.clone());
            i += 2;
        } else {
            out.push(seq[i].clone());
            i += 1;
        }
    }
    out
}

fn apply_merge_ids(l: u32, r: u32, res: u32, seq: &mut Vec<u32>) {
    let mut write = 0;
    let mut read = 0;
    while read < seq.len() {
        if read + 1 < seq.len() && seq[read] == l && seq[read + 1] == r {
            seq[write] = res;
            read += 2;
        } else {
            seq[write] = seq[read];
            read += 1;
        }
        write += 1;
    }
    seq.truncate(write);
}

// ---------------------------------------------------------------------------
// Training
// ---------------------------------------------------------------------------

#[derive(Debug, Eq, PartialEq)]
struct Candidate {
    count: u64,
    result: Rc<str>,
    left: Rc<str>,
    right: Rc<str>,
    pair: (u32, u32),
}

impl Ord for Candidate {
    // Max-heap order: highest count first, then the lexicographically
    // smallest result, then the smallest (left, right).
    fn cmp(&self, other: &Self) -> Ordering {
        self.count
            .cmp(&other.count)
            .then_with(|| other.result.cmp(&self.result))
            .then_with(|| other.left.cmp(&self.left))
            .then_with(|| other.right.cmp(&self.right))
    }
}

impl PartialOrd for Candidate {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

struct Trainer {
    strings: Vec<Rc<str>>,
    ids: HashMap<Rc<str>, u32>,
    words: Vec<(Vec<u32>, u64)>,
    pair_counts: HashMap<(u32, u32), u64>,
    pair_words: HashMap<(u32, u32), Vec<usize>>,
    heap: BinaryHeap<Candidate>,
    rejected: HashSet<(u32, u32)>,
}

impl Trainer {
    fn intern(&mut self, s: &str) -> u32 {
        if let Some(&id) = self.ids.get(s) {
            return id;
        }
        let id = self.strings.len() as u32;
        let rc: Rc<str> = Rc::from(s);
        self.strings.push(rc.clone());
        self.ids.insert(rc, id);
        id
    }

    fn candidate(&self, pair: (u32, u32), count: u64) -> Candidate {
        let left = self.strings[pair.0 as usize].clone();
        let right = self.strings[pair.1 as usize].clone();
        let result: Rc<str> = Rc::from(format!("{left}{right}"));
        Candidate {
            count,
            result,
            left,
            right,
            pair,
        }
    }

    fn add_pairs(&mut self, word: usize, sign: i64, touched: &mut HashSet<(u32, u32)>) {
        let (seq, weight) = &self.words[word];
        let weight = *weight;
        for w in seq.windows(2) {
            let pair = (w[0], w[1]);
            let entry = self.pair_counts.entry(pair).or_insert(0);
            if sign > 0 {
                *entry += weight;
                self.pair_words.entry(pair).or_default().push(word);
            } else {
                *entry -= weight;
            }
            touched.insert(pair);
        }
    }

    fn push_if_eligible(&mut self, pair: (u32, u32)) {
        let count = self.pair_counts.get(&pair).copied().unwrap_or(0);
        if count >= 2 && !self.rejected.contains(&pair) {
            let cand = self.candidate(pair, count);
            self.heap.push(cand);
        }
    }
}

/// Trains a BPE tokenizer with at most `num_merges` merges.
///
/// At each step the pair with the highest word-count-weighted frequency is
/// merged. Ties go to the lexicographically smallest result string, then to
/// the smallest `(left, right)`. Training stops early once the best pair
/// occurs fewer than twice. A pair whose result is already in the vocabulary
/// is skipped, so every merge adds exactly one vocabulary entry.
pub fn train_bpe(corpus: &Corpus, num_merges: usize) -> Result<Tokenizer> {
    if corpus.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    let alphabet: BTreeSet<char> = corpus
        .word_counts()
        .keys()
        .flat_map(|w| w.chars())
        .collect();

    let mut t = Trainer {
        strings: Vec::new(),
        ids: HashMap::new(),
        words: Vec::new(),
        pair_counts: HashMap::new(),
        pair_words: HashMap::new(),
        heap: BinaryHeap::new(),
        rejected: HashSet::new(),
    };
    for c in &alphabet {
        t.intern(&c.to_string());
    }
    for (word, &count) in corpus.word_counts() {
        let seq = word
            .chars()
            .map(|c| t.ids[c.to_string().as_str()])
            .collect();
        t.words.push((seq, count));
    }
    let mut touched = HashSet::new();
    for idx in 0..t.words.len() {
        t.add_pairs(idx, 1, &mut touched);
    }
    let mut initial: Vec<_> = touched.drain().collect();
    initial.sort_unstable();
    for pair in initial {
        t.push_if_eligible(pair);
    }

    let mut pairs: Vec<(String, String)> = Vec::with_capacity(num_merges);
    while pairs.len() < num_merges {
        let Some(best) = t.heap.pop() else { break };
        if t.pair_counts.get(&best.pair).copied() != Some(best.count)
            || t.rejected.contains(&best.pair)
        {
            continue;
        }
        if best.count < 2 {
            break;
        }
        if t.ids.contains_key(&best.result) {
            t.rejected.insert(best.pair);
            continue;
        }
        let (l, r) = best.pair;
        let res = t.intern(&best.result);
        pairs.push((best.left.to_string(), best.right.to_string()));

        let mut affected = t.pair_words.remove(&best.pair).unwrap_or_default();
        affected.sort_unstable();
        affected.dedup();
        let mut touched = HashSet::new();
        for word in affected {
            if !t.words[word].0.windows(2).any(|w| w[0] == l && w[1] == r) {
                continue;
            }
            t.add_pairs(word, -1, &mut touched);
            apply_merge_ids(l, r, res, &mut t.words[word].0);
            t.add_pairs(word, 1, &mut touched);
        }
        let mut touched: Vec<_> = touched.into_iter().collect();
        touched.sort_unstable();
        for pair in touched {
            t.push_if_eligible(pair);
        }
    }

    Tokenizer::new(alphabet, pairs)
}

// ---------------------------------------------------------------------------
// Corpus tokenization
// ---------------------------------------------------------------------------

/// Anything that can tokenize a word type and optionally decorate each
/// occurrence (used by duplication).
pub trait WordTokenizer: Sync {
    fn tokenize_type(&self, word: &str) -> Result<Vec<String>>;

    /// Rewrites the tokens of one word occurrence in place.
    fn decorate_occurrence(&self, _tokens: &mut [String], _line: usize, _word: usize) {}

    /// Tokens that should be flagged as unknown in the output.
    fn is_unknown(&self, _token: &str) -> bool {
        false
    }
}

/// Wraps a tokenizer with a non-default unknown-character policy.
#[derive(Debug, Clone, Copy)]
pub struct WithPolicy<'a> {
    pub tokenizer: &'a Tokenizer,
    pub policy: UnknownPolicy,
}

impl WordTokenizer for WithPolicy<'_> {
    fn tokenize_type(&self, word: &str) -> Result<Vec<String>> {
        self.tokenizer.tokenize_word_with(word, self.policy)
    }

    fn is_unknown(&self, token: &str) -> bool {
        !self.tokenizer.contains(token)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    Sequential,
    #[default]
    Parallel,
}

/// Tokens of one source line plus the index where each word starts.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TokenizedLine {
    pub tokens: Vec<String>,
    pub word_starts: Vec<usize>,
}

impl TokenizedLine {
    /// Space-separated tokens, with non-initial subwords of a word prefixed
    /// by `-`.
    pub fn render(&self) -> String {
        let mut out = String::new();
        let mut starts = self.word_starts.iter().peekable();
        for (i, tok) in self.tokens.iter().enumerate() {
            if i > 0 {
                out.push(' ');
            }
            if starts.peek() == Some(&&i) {
                starts.next();
            } else {
                out.push('-');
            }
            out.push_str(tok);
        }
        out
    }
}

/// The tokenization of a corpus, line by line, with aggregate counts.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TokenizedCorpus {
    lines: Vec<TokenizedLine>,
    token_counts: BTreeMap<String, u64>,
    total_tokens: u64,
    unknown: BTreeSet<String>,
}

impl TokenizedCorpus {
    /// Builds directly from token lines. Each inner line is treated as a
    /// sequence of single-token words unless `-`-prefixed, mirroring the
    /// rendered form.
    pub fn from_rendered_lines<S: AsRef<str>>(lines: &[S]) -> Self {
        let mut lines_out = Vec::new();
        for line in lines {
            let mut tl = TokenizedLine::default();
            for tok in line.as_ref().split_whitespace() {
                match tok.strip_prefix('-') {
                    Some(rest) if !rest.is_empty() && !tl.tokens.is_empty() => {
                        tl.tokens.push(rest.to_owned())
                    }
                    _ => {
                        tl.word_starts.push(tl.tokens.len());
                        tl.tokens.push(tok.to_owned());
                    }
                }
            }
            lines_out.push(tl);
        }
        Self::from_lines(lines_out, BTreeSet::new())
    }

    fn from_lines(lines: Vec<TokenizedLine>, unknown: BTreeSet<String>) -> Self {
        let mut token_counts = BTreeMap::new();
        let mut total_tokens = 0;
        for line in &lines {
            for tok in &line.tokens {
                *token_counts.entry(tok.clone()).or_insert(0) += 1;
                total_tokens += 1;
            }
        }
        TokenizedCorpus {
            lines,
            token_counts,
            total_tokens,
            unknown,
        }
    }

    pub fn lines(&self) -> &[TokenizedLine] {
        &self.lines
    }

    pub fn token_counts(&self) -> &BTreeMap<String, u64> {
        &self.token_counts
    }

    pub fn total_tokens(&self) -> u64 {
        self.total_tokens
    }

    pub fn source_line_count(&self) -> usize {
        self.lines.len()
    }

    /// Tokens emitted for characters outside the alphabet.
    pub fn unknown_tokens(&self) -> &BTreeSet<String> {
        &self.unknown
    }

    /// One rendered line per source line.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for line in &self.lines {
            out.push_str(&line.render());
            out.push('\n');
        }
        out
    }
}

/// Tokenizes every word of `corpus`, memoizing per word type.
pub fn tokenize_corpus_with<T: WordTokenizer + ?Sized>(
    tokenizer: &T,
    corpus: &Corpus,
    exec: Execution,
) -> Result<TokenizedCorpus> {
    let words: Vec<&str> = corpus.word_counts().keys().map(String::as_str).collect();
    let segment = |w: &str| tokenizer.tokenize_type(w);
    let memo: Result<HashMap<&str, Vec<String>>> = match exec {
        Execution::Sequential => words.iter().map(|&w| segment(w).map(|t| (w, t))).collect(),
        Execution::Parallel => words
            .par_iter()
            .map(|&w| segment(w).map(|t| (w, t)))
            .collect(),
    };
    let memo = memo.map_err(|e| locate(corpus, e))?;

    let build = |idx: usize| {
        let mut line = TokenizedLine::default();
        for (w, word) in corpus.words_of_line(idx).enumerate() {
            let start = line.tokens.len();
            line.word_starts.push(start);
            line.tokens.extend(memo[word].iter().cloned());
            tokenizer.decorate_occurrence(&mut line.tokens[start..], idx, w);
        }
        line
    };
    let n = corpus.lines().len();
    let lines: Vec<TokenizedLine> = match exec {
        Execution::Sequential => (0..n).map(build).collect(),
        Execution::Parallel => (0..n).into_par_iter().map(build).collect(),
    };
    let unknown = memo
        .values()
        .flatten()
        .filter(|t| tokenizer.is_unknown(t))
        .cloned()
        .collect();
    Ok(TokenizedCorpus::from_lines(lines, unknown))
}

fn locate(corpus: &Corpus, err: Error) -> Error {
    let word = match &err {
        Error::UnknownCharacter { word, .. } => word.clone(),
        _ => return err,
    };
    for idx in 0..corpus.lines().len() {
        if let Some(pos) = corpus.words_of_line(idx).position(|w| w == word) {
            return Error::InLine {
                line: idx + 1,
                word_index: pos,
                source: Box::new(err),
            };
        }
    }
    err
}
