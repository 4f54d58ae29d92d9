//! Entropy-change checks for single drops and duplications, and
//! baseline-versus-variant metric comparisons.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bpe::{tokenize_corpus_with, Execution, Tokenizer};
use crate::corpus::Corpus;
use crate::error::{Error, Result};
use crate::metrics::{renyi_bits, MetricParams, MetricReport, UnigramDistribution};
use crate::variants::{Variant, VariantTokenizer};

/// Orders used when checking that duplication raises Rényi entropy.
pub const DUPLICATION_ALPHA_GRID: [f64; 9] = [0.25, 0.5, 0.99, 1.0, 1.01, 2.0, 2.7, 3.0, 5.0];

// ---------------------------------------------------------------------------
// Single drop
// ---------------------------------------------------------------------------

/// Closed-form sufficient condition for a drop of `x = (y, z)` to raise
/// `H_α`, next to the directly recomputed entropies.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DropConditionReport {
    pub token: String,
    pub parents: (String, String),
    pub count_x: u64,
    pub count_y: u64,
    pub count_z: u64,
    pub total: u64,
    pub alpha: f64,
    /// `(1 + c(x)/T)^α`
    pub lhs: f64,
    /// `1 + ((c(x)+c(y))^α + (c(x)+c(z))^α - c(x)^α - c(y)^α - c(z)^α) / Σ c(w)^α`
    pub rhs: f64,
    pub condition_holds: bool,
    pub entropy_before: f64,
    pub entropy_after: f64,
    pub actual_increase: bool,
}

/// Evaluates the drop condition for `x` with merge parents `(y, z)`.
///
/// The drop moves every occurrence of `x` onto `y` and `z`:
/// `c'(y) = c(x) + c(y)`, `c'(z) = c(x) + c(z)`, `c'(x) = 0`,
/// `T' = T + c(x)`.
pub fn drop_condition(
    counts: &BTreeMap<String, u64>,
    x: &str,
    parents: (&str, &str),
    alpha: f64,
) -> Result<DropConditionReport> {
    drop_condition_impl(counts, x, parents, alpha, false)
}

pub(crate) fn drop_condition_impl(
    counts: &BTreeMap<String, u64>,
    x: &str,
    (y, z): (&str, &str),
    alpha: f64,
    corrupt: bool,
) -> Result<DropConditionReport> {
    if alpha.is_nan() || alpha <= 1.0 {
        return Err(Error::Metric(format!(
            "drop condition needs alpha > 1, got {alpha}"
        )));
    }
    if y == z {
        return Err(Error::UnsupportedDrop(format!(
            "{x:?} merges {y:?} with itself; the count update assumes distinct parents"
        )));
    }
    if x == y || x == z {
        return Err(Error::UnsupportedDrop(format!("{x:?} is its own parent")));
    }
    let cx = *counts
        .get(x)
        .ok_or_else(|| Error::UnknownToken(x.to_owned()))?;
    let cy = counts.get(y).copied().unwrap_or(0);
    let cz = counts.get(z).copied().unwrap_or(0);
    let total: u64 = counts.values().sum();
    if total == 0 {
        return Err(Error::Metric("empty counts".into()));
    }

    let pow = |c: u64| (c as f64).powf(alpha);
    let power_sum: f64 = counts.values().map(|&c| pow(c)).sum();
    let lhs = (1.0 + cx as f64 / total as f64).powf(alpha);
    let mut numer = pow(cx + cy) + pow(cx + cz) - pow(cx) - pow(cy) - pow(cz);
    if corrupt {
        numer = -numer;
    }
    let rhs = 1.0 + numer / power_sum;

    let mut after = counts.clone();
    after.insert(x.to_owned(), 0);
    *after.entry(y.to_owned()).or_insert(0) += cx;
    *after.entry(z.to_owned()).or_insert(0) += cx;
    let entropy_before = count_renyi(counts, alpha);
    let entropy_after = count_renyi(&after, alpha);

    Ok(DropConditionReport {
        token: x.to_owned(),
        parents: (y.to_owned(), z.to_owned()),
        count_x: cx,
        count_y: cy,
        count_z: cz,
        total,
        alpha,
        lhs,
        rhs,
        condition_holds: lhs > rhs,
        entropy_before,
        entropy_after,
        actual_increase: entropy_after > entropy_before,
    })
}

fn count_renyi(counts: &BTreeMap<String, u64>, alpha: f64) -> f64 {
    let total: u64 = counts.values().sum();
    let probs: Vec<f64> = counts.values().map(|&c| c as f64 / total as f64).collect();
    renyi_bits(&probs, alpha).expect("alpha validated")
}

// ---------------------------------------------------------------------------
// Duplication
// ---------------------------------------------------------------------------

/// Replaces `x` by `k` tokens carrying `p(x)/k` each.
pub fn duplicate_token(dist: &UnigramDistribution, x: &str, k: u32) -> Result<Vec<f64>> {
    if k < 2 {
        return Err(Error::Hyperparameter(format!(
            "duplication factor must be >= 2, got {k}"
        )));
    }
    let px = dist.prob(x);
    if px <= 0.0 {
        return Err(Error::UnknownToken(x.to_owned()));
    }
    let mut out: Vec<f64> = dist
        .probs()
        .iter()
        .filter(|(t, _)| t.as_str() != x)
        .map(|(_, &p)| p)
        .collect();
    out.extend(std::iter::repeat_n(px / k as f64, k as usize));
    Ok(out)
}

/// Predicted Shannon entropy after duplicating `x` `k` ways:
/// `H + p(x)·log₂ k`.
pub fn predict_duplication_shannon(dist: &UnigramDistribution, x: &str, k: u32) -> Result<f64> {
    if k < 2 {
        return Err(Error::Hyperparameter(format!(
            "duplication factor must be >= 2, got {k}"
        )));
    }
    let px = dist.prob(x);
    if px <= 0.0 {
        return Err(Error::UnknownToken(x.to_owned()));
    }
    Ok(crate::metrics::shannon_entropy(dist) + px * (k as f64).log2())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DuplicationVerdict {
    pub alpha: f64,
    pub before: f64,
    pub after: f64,
    pub margin: f64,
    pub increased: bool,
}

/// Recomputes `H_α` after duplicating `x` for every order in `alphas`.
///
/// `margin` is evaluated from the changed terms of the power sum (or of the
/// Shannon sum at α = 1) so that gains far below the magnitude of `H_α`
/// itself are not lost to cancellation.
pub fn check_duplication_renyi(
    dist: &UnigramDistribution,
    x: &str,
    k: u32,
    alphas: &[f64],
) -> Result<Vec<DuplicationVerdict>> {
    let before_probs: Vec<f64> = dist.probs().values().copied().collect();
    let after_probs = duplicate_token(dist, x, k)?;
    let px = dist.prob(x);
    alphas
        .iter()
        .map(|&alpha| {
            let before = renyi_bits(&before_probs, alpha)?;
            let after = renyi_bits(&after_probs, alpha)?;
            let margin = duplication_gain(&before_probs, px, k, alpha);
            Ok(DuplicationVerdict {
                alpha,
                before,
                after,
                margin,
                increased: margin > 0.0,
            })
        })
        .collect()
}

/// `H_α(after) - H_α(before)` when a token of probability `px` is split
/// into `k` equal parts.
fn duplication_gain(before: &[f64], px: f64, k: u32, alpha: f64) -> f64 {
    let q = px / k as f64;
    if alpha == 1.0 {
        return px * px.log2() - k as f64 * q * q.log2();
    }
    let power_sum: f64 = before
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| p.powf(alpha))
        .sum();
    let change = k as f64 * q.powf(alpha) - px.powf(alpha);
    (change / power_sum).ln_1p() / ((1.0 - alpha) * std::f64::consts::LN_2)
}

// ---------------------------------------------------------------------------
// Tokenizer comparison
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RowRole {
    Baseline,
    Variant,
    /// Mean over the seeds of one Random-Drop setting.
    Overall,
    /// The seed with the highest efficiency in one Random-Drop setting.
    BestByEfficiency,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct MetricDelta {
    pub efficiency: f64,
    pub percentile_freq: f64,
    pub tokens_per_line: f64,
    pub shannon_entropy: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub label: String,
    pub kind: String,
    pub role: RowRole,
    pub n: Option<usize>,
    pub k: Option<usize>,
    pub seed: Option<u64>,
    pub efficiency: f64,
    pub percentile_freq: f64,
    pub tokens_per_line: f64,
    pub shannon_entropy: f64,
    pub renyi_entropy: f64,
    pub effective_vocab: f64,
    pub delta: MetricDelta,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub params: MetricParams,
    pub rows: Vec<ComparisonRow>,
}

impl ComparisonReport {
    pub fn baseline(&self) -> &ComparisonRow {
        &self.rows[0]
    }

    pub fn row(&self, label: &str) -> Option<&ComparisonRow> {
        self.rows.iter().find(|r| r.label == label)
    }
}

/// A variant to compare, with a display label.
#[derive(Debug, Clone)]
pub struct LabelledVariant {
    pub label: String,
    pub variant: Variant,
}

impl LabelledVariant {
    pub fn new(label: impl Into<String>, variant: Variant) -> Self {
        LabelledVariant {
            label: label.into(),
            variant,
        }
    }
}

/// Default label for a variant, e.g. `random_drop N=2000 k=500 seed=1`.
pub fn variant_label(variant: &Variant) -> String {
    match variant {
        Variant::Baseline => "baseline".into(),
        Variant::RandomDrop(s) => format!(
            "random_drop N={} k={} seed={}",
            s.pool_size, s.drop_count, s.seed
        ),
        Variant::Duplication(s) => {
            format!(
                "duplication N={} k={} seed={}",
                s.top_count, s.factor, s.seed
            )
        }
        Variant::Inflate(s) => format!("inflate +{}", s.extra_tokens),
    }
}

fn hyperparameters(variant: &Variant) -> (Option<usize>, Option<usize>, Option<u64>) {
    match variant {
        Variant::Baseline => (None, None, None),
        Variant::RandomDrop(s) => (Some(s.pool_size), Some(s.drop_count), Some(s.seed)),
        Variant::Duplication(s) => (Some(s.top_count), Some(s.factor as usize), Some(s.seed)),
        Variant::Inflate(s) => (None, Some(s.extra_tokens), None),
    }
}

/// Scores one decorated tokenizer on `corpus`.
pub fn score_variant(
    corpus: &Corpus,
    tokenizer: &VariantTokenizer,
    params: MetricParams,
    exec: Execution,
) -> Result<MetricReport> {
    let tokenized = tokenize_corpus_with(tokenizer, corpus, exec)?;
    MetricReport::compute(&tokenized, &tokenizer.vocab_entries(), params)
}

fn row_from(label: String, variant: &Variant, role: RowRole, m: &MetricReport) -> ComparisonRow {
    let (n, k, seed) = hyperparameters(variant);
    ComparisonRow {
        label,
        kind: variant.kind().to_owned(),
        role,
        n,
        k,
        seed,
        efficiency: m.renyi_efficiency,
        percentile_freq: m.percentile_freq,
        tokens_per_line: m.tokens_per_line,
        shannon_entropy: m.shannon_entropy,
        renyi_entropy: m.renyi_entropy,
        effective_vocab: m.effective_vocab as f64,
        delta: MetricDelta::default(),
    }
}

/// Scores the baseline and every variant under identical parameters.
///
/// Random-Drop settings that appear with more than one seed also get an
/// `Overall` (mean) row and a `BestByEfficiency` row.
pub fn compare_tokenizers(
    corpus: &Corpus,
    baseline: &Tokenizer,
    variants: &[LabelledVariant],
    params: MetricParams,
) -> Result<ComparisonReport> {
    let base_tok = VariantTokenizer::baseline(baseline.clone());
    let base_metrics = score_variant(corpus, &base_tok, params, Execution::Parallel)?;
    let base_row = row_from(
        "baseline".into(),
        &Variant::Baseline,
        RowRole::Baseline,
        &base_metrics,
    );

    let scored: Vec<ComparisonRow> = variants
        .par_iter()
        .map(|lv| {
            let tok = VariantTokenizer::new(baseline.clone(), lv.variant.clone());
            let m = score_variant(corpus, &tok, params, Execution::Parallel)?;
            Ok(row_from(
                lv.label.clone(),
                &lv.variant,
                RowRole::Variant,
                &m,
            ))
        })
        .collect::<Result<_>>()?;

    let mut rows = vec![base_row];
    rows.extend(scored.iter().cloned());

    // Seed groups for Random-Drop, in first-appearance order.
    let mut groups: Vec<((usize, usize), Vec<&ComparisonRow>)> = Vec::new();
    for row in scored.iter().filter(|r| r.kind == "random_drop") {
        let key = (row.n.unwrap(), row.k.unwrap());
        match groups.iter_mut().find(|(k, _)| *k == key) {
            Some((_, members)) => members.push(row),
            None => groups.push((key, vec![row])),
        }
    }
    for ((n, k), members) in groups.into_iter().filter(|(_, m)| m.len() > 1) {
        let count = members.len() as f64;
        let mean = |f: fn(&ComparisonRow) -> f64| members.iter().map(|r| f(r)).sum::<f64>() / count;
        rows.push(ComparisonRow {
            label: format!("random_drop N={n} k={k} overall"),
            kind: "random_drop".into(),
            role: RowRole::Overall,
            n: Some(n),
            k: Some(k),
            seed: None,
            efficiency: mean(|r| r.efficiency),
            percentile_freq: mean(|r| r.percentile_freq),
            tokens_per_line: mean(|r| r.tokens_per_line),
            shannon_entropy: mean(|r| r.shannon_entropy),
            renyi_entropy: mean(|r| r.renyi_entropy),
            effective_vocab: mean(|r| r.effective_vocab),
            delta: MetricDelta::default(),
        });
        let best = members
            .iter()
            .copied()
            .reduce(|a, b| if b.efficiency > a.efficiency { b } else { a })
            .unwrap();
        rows.push(ComparisonRow {
            label: format!("random_drop N={n} k={k} best-eff"),
            role: RowRole::BestByEfficiency,
            ..best.clone()
        });
    }

    let base = rows[0].clone();
    for row in &mut rows {
        row.delta = MetricDelta {
            efficiency: row.efficiency - base.efficiency,
            percentile_freq: row.percentile_freq - base.percentile_freq,
            tokens_per_line: row.tokens_per_line - base.tokens_per_line,
            shannon_entropy: row.shannon_entropy - base.shannon_entropy,
        };
    }
    Ok(ComparisonReport { params, rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    use crate::metrics::shannon_bits;
    fn counts(pairs: &[(&str, u64)]) -> BTreeMap<String, u64> {
        pairs.iter().map(|(w, c)| (w.to_string(), *c)).collect()
    }

    #[test]
    fn zero_count_drop_is_identity() {
        let c = counts(&[("x", 0), ("y", 3), ("z", 5), ("w", 2)]);
        let r = drop_condition(&c, "x", ("y", "z"), 3.0).unwrap();
        assert_eq!(r.lhs, 1.0);
        assert_eq!(r.rhs, 1.0);
        assert!(!r.condition_holds);
        assert_eq!(r.entropy_before, r.entropy_after);
        assert!(!r.actual_increase);
    }

    #[test]
    fn hand_evaluated_drop() {
        // c = {x:4, y:1, z:1, w:4}, T = 10, α = 3.
        // lhs = 1.4^3 = 2.744
        // Σc^3 = 64 + 1 + 1 + 64 = 130
        // numerator = 5^3 + 5^3 - 64 - 1 - 1 = 184
        // rhs = 1 + 184/130 = 2.415384...
        // after = {y:5, z:5, w:4}: Σp^3 = (125+125+64)/14^3 = 314/2744
        // before Σp^3 = 130/1000; after 0.114431... < 0.13, so H_3 rises.
        let c = counts(&[("x", 4), ("y", 1), ("z", 1), ("w", 4)]);
        let r = drop_condition(&c, "x", ("y", "z"), 3.0).unwrap();
        assert!((r.lhs - 2.744).abs() < 1e-12);
        assert!((r.rhs - (1.0 + 184.0 / 130.0)).abs() < 1e-12);
        assert!(r.condition_holds);
        let before = -0.5 * (130.0f64 / 1000.0).log2();
        let after = -0.5 * (314.0f64 / 2744.0).log2();
        assert!((r.entropy_before - before).abs() < 1e-12);
        assert!((r.entropy_after - after).abs() < 1e-12);
        assert!(r.actual_increase);
    }

    #[test]
    fn drop_errors() {
        let c = counts(&[("x", 2), ("y", 1)]);
        assert!(drop_condition(&c, "x", ("y", "z"), 1.0).is_err());
        assert!(drop_condition(&c, "x", ("y", "y"), 2.0).is_err());
        assert!(matches!(
            drop_condition(&c, "q", ("y", "z"), 2.0),
            Err(Error::UnknownToken(_))
        ));
    }

    fn row() -> UnigramDistribution {
        UnigramDistribution::from_probabilities(&[0.4, 0.3, 0.2, 0.1]).unwrap()
    }

    #[test]
    fn shannon_prediction() {
        let d = row();
        let pred = predict_duplication_shannon(&d, "t0000", 2).unwrap();
        assert!((pred - (crate::metrics::shannon_entropy(&d) + 0.4)).abs() < 1e-12);
        assert!((pred - 2.25).abs() < 0.005);

        let half = UnigramDistribution::from_probabilities(&[0.5, 0.5]).unwrap();
        let pred = predict_duplication_shannon(&half, "t0000", 2).unwrap();
        assert!((pred - 1.5).abs() < 1e-12);
        assert!((shannon_bits(&[0.25, 0.25, 0.5]) - 1.5).abs() < 1e-12);

        assert!(predict_duplication_shannon(&d, "t0000", 1).is_err());
        assert!(predict_duplication_shannon(&d, "nope", 2).is_err());
    }

    #[test]
    fn renyi_duplication_examples() {
        let v = check_duplication_renyi(&row(), "t0000", 2, &[3.0]).unwrap();
        assert!((v[0].before - 1.66).abs() < 0.005);
        assert!((v[0].after - 2.13).abs() < 0.005);
        let v = check_duplication_renyi(&row(), "t0000", 10, &[0.5]).unwrap();
        assert!((v[0].before - 1.92).abs() < 0.005);
        assert!((v[0].after - 3.45).abs() < 0.005);

        let uniform = UnigramDistribution::from_probabilities(&[0.25; 4]).unwrap();
        let v = check_duplication_renyi(&uniform, "t0002", 2, &[1.0]).unwrap();
        assert!((v[0].margin - 0.25).abs() < 1e-12);

        let all = check_duplication_renyi(&row(), "t0003", 3, &DUPLICATION_ALPHA_GRID).unwrap();
        assert!(all.iter().all(|v| v.increased && v.margin > 0.0));
    }
}
