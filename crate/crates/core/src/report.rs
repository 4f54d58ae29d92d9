//! Aligned plain-text tables.

use crate::analysis::ComparisonReport;
use crate::metrics::MetricReport;
use crate::verify::VerificationReport;

/// Left-aligns the first column and right-aligns the rest.
pub fn align(header: &[&str], rows: &[Vec<String>]) -> String {
    let cols = header.len();
    let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let fmt_row = |cells: Vec<&str>| {
        let mut line = String::new();
        for (i, cell) in cells.iter().enumerate() {
            if i > 0 {
                line.push_str("  ");
            }
            let pad = widths[i] - cell.chars().count();
            if i == 0 {
                line.push_str(cell);
                if i + 1 < cols {
                    line.push_str(&" ".repeat(pad));
                }
            } else {
                line.push_str(&" ".repeat(pad));
                line.push_str(cell);
            }
        }
        line.trim_end().to_owned()
    };
    let mut out = fmt_row(header.to_vec());
    out.push('\n');
    out.push_str(&"-".repeat(widths.iter().sum::<usize>() + 2 * (cols - 1)));
    out.push('\n');
    for row in rows {
        out.push_str(&fmt_row(row.iter().map(String::as_str).collect()));
        out.push('\n');
    }
    out
}

fn alpha_label(alpha: f64) -> String {
    format!("Eff{alpha}")
}

fn vocab_cell(v: f64) -> String {
    if v.fract() == 0.0 {
        format!("{v:.0}")
    } else {
        format!("{v:.1}")
    }
}

/// One row per labelled report: `Effα PCT SEQ H |V|`.
pub fn metric_table(rows: &[(String, &MetricReport)]) -> String {
    let alpha = rows.first().map(|(_, r)| r.params.alpha).unwrap_or(3.0);
    let eff = alpha_label(alpha);
    let header = ["tokenizer", eff.as_str(), "PCT", "SEQ", "H", "|V|"];
    let body: Vec<Vec<String>> = rows
        .iter()
        .map(|(label, r)| {
            vec![
                label.clone(),
                format!("{:.4}", r.renyi_efficiency),
                format!("{:.4}", r.percentile_freq),
                format!("{:.2}", r.tokens_per_line),
                format!("{:.4}", r.shannon_entropy),
                r.effective_vocab.to_string(),
            ]
        })
        .collect();
    align(&header, &body)
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_else(|| "-".into())
}

fn signed(v: f64, digits: usize) -> String {
    format!("{v:+.digits$}")
}

pub fn comparison_table(report: &ComparisonReport) -> String {
    let eff = alpha_label(report.params.alpha);
    let header = [
        "tokenizer",
        "N",
        "k",
        "seed",
        eff.as_str(),
        "PCT",
        "SEQ",
        "H",
        "|V|",
        "dEff",
        "dPCT",
        "dSEQ",
    ];
    let body: Vec<Vec<String>> = report
        .rows
        .iter()
        .map(|r| {
            vec![
                r.label.clone(),
                opt(r.n),
                opt(r.k),
                opt(r.seed),
                format!("{:.4}", r.efficiency),
                format!("{:.4}", r.percentile_freq),
                format!("{:.2}", r.tokens_per_line),
                format!("{:.4}", r.shannon_entropy),
                vocab_cell(r.effective_vocab),
                signed(r.delta.efficiency, 4),
                signed(r.delta.percentile_freq, 4),
                signed(r.delta.tokens_per_line, 2),
            ]
        })
        .collect();
    align(&header, &body)
}

pub fn verification_table(report: &VerificationReport) -> String {
    let header = [
        "check",
        "status",
        "cases",
        "failures",
        "worst margin",
        "detail",
    ];
    let body: Vec<Vec<String>> = report
        .checks
        .iter()
        .map(|c| {
            vec![
                c.name.clone(),
                if c.passed { "PASS" } else { "FAIL" }.into(),
                c.cases.to_string(),
                c.failures.to_string(),
                format!("{:.3e}", c.worst_margin + 0.0),
                c.detail.clone(),
            ]
        })
        .collect();
    align(&header, &body)
}
