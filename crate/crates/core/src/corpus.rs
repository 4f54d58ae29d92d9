//! Raw text ingestion and word-frequency tables.
//!
//! Pretokenization is plain whitespace splitting. Words keep their surface
//! form exactly: no case folding, no punctuation splitting, no Unicode
//! normalization.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::DUP_MARKER;

/// A newline-delimited text corpus together with its word counts.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Corpus {
    lines: Vec<String>,
    word_counts: BTreeMap<String, u64>,
    total_words: u64,
}

impl Corpus {
    /// Builds a corpus from in-memory text. Accepts LF and CRLF line endings.
    pub fn from_text(text: &str) -> Result<Self> {
        Self::from_text_capped(text, None)
    }

    fn from_text_capped(text: &str, max_lines: Option<usize>) -> Result<Self> {
        let mut corpus = Corpus::default();
        for (idx, line) in text.lines().enumerate() {
            if max_lines.is_some_and(|cap| idx >= cap) {
                break;
            }
            corpus.push_line(idx, line)?;
        }
        Ok(corpus)
    }

    fn push_line(&mut self, idx: usize, line: &str) -> Result<()> {
        let line = line.strip_suffix('\r').unwrap_or(line);
        if line.contains(DUP_MARKER) {
            return Err(Error::ReservedMarker {
                line: idx + 1,
                marker: DUP_MARKER,
            });
        }
        for word in line.split_whitespace() {
            *self.word_counts.entry(word.to_owned()).or_insert(0) += 1;
            self.total_words += 1;
        }
        self.lines.push(line.to_owned());
        Ok(())
    }

    /// Lines in file order, including empty ones.
    pub fn lines(&self) -> &[String] {
        &self.lines
    }

    pub fn word_counts(&self) -> &BTreeMap<String, u64> {
        &self.word_counts
    }

    pub fn total_words(&self) -> u64 {
        self.total_words
    }

    pub fn is_empty(&self) -> bool {
        self.total_words == 0
    }

    /// Appends `other` after `self`. Word counts add pointwise.
    pub fn concat(mut self, other: Corpus) -> Corpus {
        self.lines.extend(other.lines);
        for (word, count) in other.word_counts {
            *self.word_counts.entry(word).or_insert(0) += count;
        }
        self.total_words += other.total_words;
        self
    }

    /// Iterates the words of line `idx`.
    pub fn words_of_line(&self, idx: usize) -> impl Iterator<Item = &str> {
        self.lines[idx].split_whitespace()
    }
}

/// Reads a UTF-8 corpus file, keeping at most `max_lines` lines when given.
pub fn load_corpus(path: impl AsRef<Path>, max_lines: Option<usize>) -> Result<Corpus> {
    let path = path.as_ref();
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    let text = std::str::from_utf8(&bytes).map_err(|e| Error::InvalidUtf8 {
        path: path.to_path_buf(),
        offset: e.valid_up_to(),
    })?;
    Corpus::from_text_capped(text, max_lines)
}

/// Loads several files and concatenates them in argument order.
pub fn load_corpora<P: AsRef<Path>>(paths: &[P], max_lines: Option<usize>) -> Result<Corpus> {
    let mut out = Corpus::default();
    for path in paths {
        out = out.concat(load_corpus(path, max_lines)?);
    }
    Ok(out)
}

/// Splits a word into its Unicode scalar values.
pub fn word_to_characters(word: &str) -> Vec<char> {
    debug_assert!(!word.is_empty());
    word.chars().collect()
}
