//! Self-contained checks of the entropy results: worked-example
//! regressions plus randomized suites for the drop condition and for
//! duplication. Used by `tokenlab verify`.

use std::collections::BTreeMap;
use std::collections::BTreeSet;

use serde::Serialize;

use crate::analysis::{
    check_duplication_renyi, drop_condition_impl, duplicate_token, predict_duplication_shannon,
    DUPLICATION_ALPHA_GRID,
};
use crate::bpe::TokenizedCorpus;
use crate::fixtures::{
    encoding_tokenizer, EXAMPLE_DISTRIBUTION, EXAMPLE_FACTORS, EXAMPLE_TABLE,
    TOKENS_PER_LINE_EXAMPLES,
};
use crate::metrics::{
    renyi_efficiency, renyi_entropy, shannon_bits, shannon_entropy, tokens_per_line,
    EfficiencyConvention, UnigramDistribution,
};
use crate::rng::{self, keyed_below};
use crate::variants::{random_drop_tokenize, RandomDropSpec};

pub const DEFAULT_SEED: u64 = 20_240_611;
pub const DEFAULT_INSTANCES: usize = 1000;
pub const EXAMPLE_TOLERANCE: f64 = 0.01;
pub const SHANNON_IDENTITY_TOLERANCE: f64 = 1e-9;
pub const DROP_ALPHAS: [f64; 4] = [1.5, 2.0, 3.0, 5.0];

const DOMAIN_DROP_INSTANCE: u64 = 101;
const DOMAIN_DIST_INSTANCE: u64 = 102;

/// Deliberate formula corruptions, used to confirm that a broken
/// implementation makes verification fail.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Fault {
    ExampleTable,
    TokensPerLine,
    DropCondition,
    ShannonIdentity,
    RenyiDuplication,
    Figure,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct VerifyOptions {
    pub seed: u64,
    pub instances: usize,
    pub fault: Option<Fault>,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            seed: DEFAULT_SEED,
            instances: DEFAULT_INSTANCES,
            fault: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub cases: usize,
    pub failures: usize,
    /// Smallest slack seen; negative means a case failed.
    pub worst_margin: f64,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub seed: u64,
    pub instances: usize,
    pub generator: String,
    pub checks: Vec<CheckResult>,
}

impl VerificationReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

pub fn run_verification(opts: VerifyOptions) -> VerificationReport {
    let fault = opts.fault;
    let checks = vec![
        example_table(fault == Some(Fault::ExampleTable)),
        tokens_per_line_examples(fault == Some(Fault::TokensPerLine)),
        figure_cases(fault == Some(Fault::Figure)),
        drop_condition_suite(
            opts.seed,
            opts.instances,
            fault == Some(Fault::DropCondition),
        ),
        shannon_identity_suite(
            opts.seed,
            opts.instances,
            fault == Some(Fault::ShannonIdentity),
        ),
        renyi_duplication_suite(
            opts.seed,
            opts.instances,
            fault == Some(Fault::RenyiDuplication),
        ),
    ];
    VerificationReport {
        seed: opts.seed,
        instances: opts.instances,
        generator: rng::GENERATOR.to_owned(),
        checks,
    }
}

/// The three rows of the worked duplication example: the base
/// distribution, and the first token split 2 and 10 ways.
pub fn example_rows() -> Vec<Vec<f64>> {
    EXAMPLE_FACTORS
        .iter()
        .map(|&k| {
            let mut row = Vec::new();
            let head = EXAMPLE_DISTRIBUTION[0] / k as f64;
            row.extend(std::iter::repeat_n(head, k as usize));
            row.extend_from_slice(&EXAMPLE_DISTRIBUTION[1..]);
            row
        })
        .collect()
}

/// `[H, H_0.5, H_3, Eff, Eff_0.5, Eff_3]` for one row, efficiency under
/// the given convention.
pub fn example_row_values(probs: &[f64], convention: EfficiencyConvention) -> [f64; 6] {
    let dist = UnigramDistribution::from_probabilities(probs).expect("valid row");
    let eff = |a| renyi_efficiency(&dist, a, convention).expect("support >= 2");
    [
        shannon_entropy(&dist),
        renyi_entropy(&dist, 0.5).unwrap(),
        renyi_entropy(&dist, 3.0).unwrap(),
        eff(1.0),
        eff(0.5),
        eff(3.0),
    ]
}

fn example_table(corrupt: bool) -> CheckResult {
    let convention = if corrupt {
        EfficiencyConvention::Consistent
    } else {
        EfficiencyConvention::BitsOverNats
    };
    let mut worst = f64::INFINITY;
    let mut failures = 0;
    let mut cells = Vec::new();
    for (row, expected) in example_rows().iter().zip(EXAMPLE_TABLE) {
        let got = example_row_values(row, convention);
        for (g, e) in got.iter().zip(expected) {
            let slack = EXAMPLE_TOLERANCE - (g - e).abs();
            worst = worst.min(slack);
            if slack < 0.0 {
                failures += 1;
            }
            cells.push(format!("{g:.3}"));
        }
    }
    CheckResult {
        name: "example-table".into(),
        passed: failures == 0,
        cases: 18,
        failures,
        worst_margin: worst,
        detail: format!("cells {}", cells.join(" ")),
    }
}

fn tokens_per_line_examples(corrupt: bool) -> CheckResult {
    let mut failures = 0;
    let mut worst = f64::INFINITY;
    let mut got_all = Vec::new();
    for (line, expected) in TOKENS_PER_LINE_EXAMPLES {
        let tc = TokenizedCorpus::from_rendered_lines(&[line]);
        let got = if corrupt {
            tc.lines()[0].word_starts.len() as f64
        } else {
            tokens_per_line(&tc).expect("one line")
        };
        let slack = -(got - expected).abs();
        worst = worst.min(slack);
        if got != expected {
            failures += 1;
        }
        got_all.push(format!("{got}"));
    }
    CheckResult {
        name: "tokens-per-line".into(),
        passed: failures == 0,
        cases: TOKENS_PER_LINE_EXAMPLES.len(),
        failures,
        worst_margin: worst,
        detail: format!("got {}", got_all.join(", ")),
    }
}

fn figure_cases(corrupt: bool) -> CheckResult {
    let tok = encoding_tokenizer();
    let cases: [(&[&str], &[&str]); 3] = [
        (&["ENCOD", "COD"], &["EN", "CO", "D", "ING"]),
        (&["ENCOD"], &["EN", "COD", "ING"]),
        (&["COD"], &["ENCOD", "ING"]),
    ];
    let mut failures = 0;
    let mut detail = Vec::new();
    for (drop, expected) in cases {
        let drop_set: BTreeSet<String> = if corrupt {
            BTreeSet::new()
        } else {
            drop.iter().map(|s| s.to_string()).collect()
        };
        let spec = RandomDropSpec {
            pool_size: tok.vocab_size(),
            drop_count: drop_set.len(),
            seed: 0,
            drop_set,
        };
        let got = random_drop_tokenize(&tok, &spec, "ENCODING").expect("in alphabet");
        if got != expected {
            failures += 1;
        }
        detail.push(got.join("/"));
    }
    CheckResult {
        name: "random-drop-figure".into(),
        passed: failures == 0,
        cases: 3,
        failures,
        worst_margin: if failures == 0 { 0.0 } else { -1.0 },
        detail: detail.join(", "),
    }
}

/// Random count vector for one drop instance: `t0` is dropped into
/// `(t1, t2)`. Returns the counts and the order to test.
pub fn drop_instance(seed: u64, i: usize) -> (BTreeMap<String, u64>, f64) {
    let draw = |slot: u64, n: u64| keyed_below(seed, &[DOMAIN_DROP_INSTANCE, i as u64, slot], n);
    let size = 3 + draw(0, 6) as usize; // 3..=8 tokens
    let mut counts = BTreeMap::new();
    for t in 0..size {
        let c = if t == 0 {
            1 + draw(1 + t as u64, 20)
        } else {
            draw(1 + t as u64, 21)
        };
        counts.insert(format!("t{t}"), c);
    }
    let alpha = DROP_ALPHAS[draw(100, DROP_ALPHAS.len() as u64) as usize];
    (counts, alpha)
}

fn drop_condition_suite(seed: u64, instances: usize, corrupt: bool) -> CheckResult {
    let mut failures = 0;
    let mut holds = 0;
    let mut worst = f64::INFINITY;
    for i in 0..instances {
        let (counts, alpha) = drop_instance(seed, i);
        let r = drop_condition_impl(&counts, "t0", ("t1", "t2"), alpha, corrupt)
            .expect("valid instance");
        if r.condition_holds != r.actual_increase {
            failures += 1;
        }
        if r.condition_holds {
            holds += 1;
        }
        worst = worst.min((r.lhs - r.rhs).abs());
    }
    CheckResult {
        name: "drop-condition-equivalence".into(),
        passed: failures == 0,
        cases: instances,
        failures,
        worst_margin: if failures == 0 {
            worst
        } else {
            -(failures as f64)
        },
        detail: format!("condition held in {holds}/{instances}; smallest |lhs-rhs| {worst:.3e}"),
    }
}

/// Random distribution, token index and duplication factor for one
/// duplication instance.
pub fn duplication_instance(seed: u64, i: usize) -> (Vec<f64>, usize, u32) {
    let draw = |slot: u64, n: u64| keyed_below(seed, &[DOMAIN_DIST_INSTANCE, i as u64, slot], n);
    let size = 2 + draw(0, 11) as usize; // 2..=12
    let weights: Vec<f64> = (0..size)
        .map(|t| 1.0 + draw(1 + t as u64, 1000) as f64)
        .collect();
    let total: f64 = weights.iter().sum();
    let probs = weights.iter().map(|w| w / total).collect();
    let x = draw(50, size as u64) as usize;
    let k = 2 + draw(51, 9) as u32; // 2..=10
    (probs, x, k)
}

fn shannon_identity_suite(seed: u64, instances: usize, corrupt: bool) -> CheckResult {
    let mut failures = 0;
    let mut cases = 0;
    let mut worst_err: f64 = 0.0;
    for i in 0..instances {
        let (probs, x, _) = duplication_instance(seed, i);
        let dist = UnigramDistribution::from_probabilities(&probs).expect("valid");
        let label = format!("t{x:04}");
        for k in 2..=10u32 {
            let mut predicted = predict_duplication_shannon(&dist, &label, k).expect("valid");
            if corrupt {
                predicted += 1e-3;
            }
            let direct = shannon_bits(&duplicate_token(&dist, &label, k).expect("valid"));
            let err = (predicted - direct).abs();
            worst_err = worst_err.max(err);
            if err > SHANNON_IDENTITY_TOLERANCE {
                failures += 1;
            }
            cases += 1;
        }
    }
    CheckResult {
        name: "shannon-duplication-identity".into(),
        passed: failures == 0,
        cases,
        failures,
        worst_margin: SHANNON_IDENTITY_TOLERANCE - worst_err,
        detail: format!("max |predicted - direct| {worst_err:.3e}"),
    }
}

fn renyi_duplication_suite(seed: u64, instances: usize, corrupt: bool) -> CheckResult {
    let mut failures = 0;
    let mut cases = 0;
    let mut worst = f64::INFINITY;
    for i in 0..instances {
        let (probs, x, k) = duplication_instance(seed, i);
        let dist = UnigramDistribution::from_probabilities(&probs).expect("valid");
        let label = format!("t{x:04}");
        let verdicts =
            check_duplication_renyi(&dist, &label, k, &DUPLICATION_ALPHA_GRID).expect("valid");
        for v in verdicts {
            // A corrupted check compares the distribution with itself.
            let margin = if corrupt { 0.0 } else { v.margin };
            worst = worst.min(margin);
            if margin.is_nan() || margin <= 0.0 {
                failures += 1;
            }
            cases += 1;
        }
    }
    CheckResult {
        name: "renyi-duplication-strict-increase".into(),
        passed: failures == 0,
        cases,
        failures,
        worst_margin: worst,
        detail: format!("alpha grid {DUPLICATION_ALPHA_GRID:?}; smallest increase {worst:.3e}"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_run_passes() {
        let report = run_verification(VerifyOptions::default());
        for c in &report.checks {
            assert!(c.passed, "{c:?}");
        }
    }

    #[test]
    fn every_fault_is_caught() {
        for fault in [
            Fault::ExampleTable,
            Fault::TokensPerLine,
            Fault::DropCondition,
            Fault::ShannonIdentity,
            Fault::RenyiDuplication,
            Fault::Figure,
        ] {
            let report = run_verification(VerifyOptions {
                instances: 200,
                fault: Some(fault),
                ..Default::default()
            });
            assert!(!report.all_passed(), "{fault:?} not detected");
        }
    }

    #[test]
    fn seeded_runs_repeat() {
        let opts = VerifyOptions {
            instances: 50,
            ..Default::default()
        };
        assert_eq!(run_verification(opts), run_verification(opts));
    }
}
