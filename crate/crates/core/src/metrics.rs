//! Intrinsic tokenization metrics over a unigram distribution.
//!
//! Entropies are in bits. Efficiency divides an entropy by the log of the
//! effective vocabulary size, either in the same base (`Consistent`) or in
//! nats (`BitsOverNats`, bits over natural log, which is the convention that
//! reproduces the small worked examples usually quoted for these metrics).

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::bpe::TokenizedCorpus;
use crate::error::{Error, Result};

pub const DEFAULT_ALPHA: f64 = 3.0;
pub const DEFAULT_PERCENTILES: (f64, f64) = (0.03, 0.83);

/// Which tokens count towards the support size.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Accounting {
    /// Only tokens that occur at least once.
    #[default]
    #[value(name = "surfaced-only")]
    SurfacedOnly,
    /// Every vocabulary entry, used or not.
    FullVocab,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum EfficiencyConvention {
    /// Numerator and denominator in the same base.
    #[default]
    Consistent,
    /// Entropy in bits over the natural log of the support size.
    BitsOverNats,
}

/// Token probabilities `p(w) = c(w) / T`.
#[derive(Debug, Clone, PartialEq)]
pub struct UnigramDistribution {
    probs: BTreeMap<String, f64>,
    total: Option<u64>,
    support_size: usize,
    accounting: Accounting,
}

impl UnigramDistribution {
    /// Distribution of a tokenized corpus. `vocab` is required for
    /// full-vocabulary accounting.
    pub fn from_tokenized(
        tokenized: &TokenizedCorpus,
        accounting: Accounting,
        vocab: Option<&BTreeSet<String>>,
    ) -> Result<Self> {
        Self::from_counts(tokenized.token_counts(), accounting, vocab)
    }

    pub fn from_counts(
        counts: &BTreeMap<String, u64>,
        accounting: Accounting,
        vocab: Option<&BTreeSet<String>>,
    ) -> Result<Self> {
        let total: u64 = counts.values().sum();
        if total == 0 {
            return Err(Error::Metric("empty tokenization".into()));
        }
        let probs: BTreeMap<String, f64> = counts
            .iter()
            .filter(|(_, &c)| c > 0)
            .map(|(t, &c)| (t.clone(), c as f64 / total as f64))
            .collect();
        let support_size = match accounting {
            Accounting::SurfacedOnly => probs.len(),
            Accounting::FullVocab => {
                let vocab = vocab.ok_or_else(|| {
                    Error::Metric("full-vocab accounting needs a vocabulary".into())
                })?;
                vocab.len() + probs.keys().filter(|t| !vocab.contains(*t)).count()
            }
        };
        Ok(UnigramDistribution {
            probs,
            total: Some(total),
            support_size,
            accounting,
        })
    }

    /// An abstract distribution with tokens labelled `t0`, `t1`, ...
    pub fn from_probabilities(probs: &[f64]) -> Result<Self> {
        let sum: f64 = probs.iter().sum();
        if probs.iter().any(|p| !(0.0..=1.0).contains(p)) || (sum - 1.0).abs() > 1e-9 {
            return Err(Error::Metric(format!(
                "not a probability vector (sum {sum})"
            )));
        }
        let probs: BTreeMap<String, f64> = probs
            .iter()
            .enumerate()
            .filter(|(_, &p)| p > 0.0)
            .map(|(i, &p)| (format!("t{i:04}"), p))
            .collect();
        let support_size = probs.len();
        Ok(UnigramDistribution {
            probs,
            total: None,
            support_size,
            accounting: Accounting::SurfacedOnly,
        })
    }

    pub fn probs(&self) -> &BTreeMap<String, f64> {
        &self.probs
    }

    pub fn prob(&self, token: &str) -> f64 {
        self.probs.get(token).copied().unwrap_or(0.0)
    }

    /// `T`, when the distribution came from counts.
    pub fn total(&self) -> Option<u64> {
        self.total
    }

    pub fn support_size(&self) -> usize {
        self.support_size
    }

    pub fn accounting(&self) -> Accounting {
        self.accounting
    }

    fn values(&self) -> Vec<f64> {
        self.probs.values().copied().collect()
    }
}

/// `-Σ p log₂ p` over the non-zero entries.
pub fn shannon_bits(probs: &[f64]) -> f64 {
    -probs
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| p * p.log2())
        .sum::<f64>()
}

/// Rényi entropy of order `alpha` in bits; Shannon at `alpha == 1`.
pub fn renyi_bits(probs: &[f64], alpha: f64) -> Result<f64> {
    if !alpha.is_finite() || alpha <= 0.0 {
        return Err(Error::Metric(format!(
            "alpha must be positive, got {alpha}"
        )));
    }
    if alpha == 1.0 {
        return Ok(shannon_bits(probs));
    }
    let power_sum: f64 = probs
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| p.powf(alpha))
        .sum();
    Ok(power_sum.log2() / (1.0 - alpha))
}

pub fn shannon_entropy(dist: &UnigramDistribution) -> f64 {
    shannon_bits(&dist.values())
}

pub fn renyi_entropy(dist: &UnigramDistribution, alpha: f64) -> Result<f64> {
    renyi_bits(&dist.values(), alpha)
}

/// `H_α / log |V|` with `|V|` the support size under the distribution's
/// accounting mode.
pub fn renyi_efficiency(
    dist: &UnigramDistribution,
    alpha: f64,
    convention: EfficiencyConvention,
) -> Result<f64> {
    let n = dist.support_size();
    if n < 2 {
        return Err(Error::Metric(format!(
            "efficiency needs a support of at least 2, got {n}"
        )));
    }
    let h = renyi_entropy(dist, alpha)?;
    let denom = match convention {
        EfficiencyConvention::Consistent => (n as f64).log2(),
        EfficiencyConvention::BitsOverNats => (n as f64).ln(),
    };
    Ok(h / denom)
}

/// Probability mass of the tokens whose 1-based frequency rank `j`
/// satisfies `γ₁·n < j ≤ γ₂·n`, with `n` the support size. Ranks are by
/// descending probability, ties broken lexicographically; unused vocabulary
/// entries (full-vocab accounting) occupy the bottom ranks.
pub fn percentile_freq(dist: &UnigramDistribution, lower: f64, upper: f64) -> Result<f64> {
    if !(0.0 <= lower && lower < upper && upper <= 1.0) {
        return Err(Error::Metric(format!(
            "percentiles must satisfy 0 <= γ1 < γ2 <= 1, got ({lower}, {upper})"
        )));
    }
    let mut ranked: Vec<(&String, f64)> = dist.probs.iter().map(|(t, &p)| (t, p)).collect();
    ranked.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(b.0)));
    let n = dist.support_size() as f64;
    // Small slack so that e.g. 0.83 * 100 lands on 83.
    let lo = (lower * n + 1e-9).floor() as usize;
    let hi = (upper * n + 1e-9).floor() as usize;
    Ok(ranked
        .iter()
        .enumerate()
        .filter(|(i, _)| lo < i + 1 && *i < hi)
        .map(|(_, (_, p))| p)
        .sum())
}

/// Average number of tokens per source line.
pub fn tokens_per_line(tokenized: &TokenizedCorpus) -> Result<f64> {
    match tokenized.source_line_count() {
        0 => Err(Error::Metric("no lines".into())),
        n => Ok(tokenized.total_tokens() as f64 / n as f64),
    }
}

/// Metric parameters. Defaults: α = 3, percentiles (0.03, 0.83).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricParams {
    pub alpha: f64,
    pub percentiles: (f64, f64),
    pub accounting: Accounting,
    pub efficiency_convention: EfficiencyConvention,
}

impl Default for MetricParams {
    fn default() -> Self {
        MetricParams {
            alpha: DEFAULT_ALPHA,
            percentiles: DEFAULT_PERCENTILES,
            accounting: Accounting::default(),
            efficiency_convention: EfficiencyConvention::default(),
        }
    }
}

/// All scalar metrics for one tokenization of one corpus.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricReport {
    pub shannon_entropy: f64,
    pub renyi_entropy: f64,
    pub renyi_efficiency: f64,
    pub percentile_freq: f64,
    pub tokens_per_line: f64,
    pub effective_vocab: usize,
    pub total_tokens: u64,
    pub lines: usize,
    pub params: MetricParams,
    pub log_base: String,
}

impl MetricReport {
    /// Scores `tokenized`. `vocab` is the emitting tokenizer's vocabulary,
    /// only consulted under full-vocab accounting.
    pub fn compute(
        tokenized: &TokenizedCorpus,
        vocab: &BTreeSet<String>,
        params: MetricParams,
    ) -> Result<Self> {
        let dist = UnigramDistribution::from_tokenized(tokenized, params.accounting, Some(vocab))?;
        let (g1, g2) = params.percentiles;
        let log_base = match params.efficiency_convention {
            EfficiencyConvention::Consistent => "entropy bits; efficiency log2/log2",
            EfficiencyConvention::BitsOverNats => "entropy bits; efficiency log2/ln",
        };
        Ok(MetricReport {
            shannon_entropy: shannon_entropy(&dist),
            renyi_entropy: renyi_entropy(&dist, params.alpha)?,
            renyi_efficiency: renyi_efficiency(&dist, params.alpha, params.efficiency_convention)?,
            percentile_freq: percentile_freq(&dist, g1, g2)?,
            tokens_per_line: tokens_per_line(tokenized)?,
            effective_vocab: dist.support_size(),
            total_tokens: tokenized.total_tokens(),
            lines: tokenized.source_line_count(),
            params,
            log_base: log_base.to_owned(),
        })
    }
}
