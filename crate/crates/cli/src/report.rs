//! Rendering reports as JSON, CSV or text.

use std::fmt::Write as _;
use std::path::Path;

use serde::Serialize;

use crate::empirical::EmpiricalReport;
use crate::error::{CliError, Violation};
use crate::solve::SolveReport;
use crate::sweep::SweepReport;

pub const CSV_HEADER: [&str; 4] = ["player_id", "tag", "payoff", "share"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

/// Pretty JSON with keys in sorted order.
pub fn to_json<T: Serialize>(report: &T) -> String {
    // Value's map is ordered, so round-tripping sorts every object's keys.
    let value = serde_json::to_value(report).expect("reports serialize");
    let mut s = serde_json::to_string_pretty(&value).expect("values serialize");
    s.push('\n');
    s
}

fn opt(x: Option<f64>) -> String {
    x.map_or_else(String::new, |v| v.to_string())
}

fn csv_table(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for row in rows {
        w.write_record(&row).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv output is utf-8")
}

pub fn render_solve(r: &SolveReport, format: Format) -> String {
    match format {
        Format::Json => to_json(r),
        Format::Csv => {
            let primary = r.primary();
            let positive = r.grand_value > 0.0;
            csv_table(
                &CSV_HEADER,
                r.players.iter().zip(&primary.payoffs).map(|(p, &x)| {
                    vec![
                        p.id.clone(),
                        p.tag.as_str().to_string(),
                        x.to_string(),
                        opt(positive.then(|| x / r.grand_value)),
                    ]
                }),
            )
        }
        Format::Text => solve_text(r),
    }
}

fn solve_text(r: &SolveReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{} [{}], method {}", r.label, r.model, r.method.as_str());
    let _ = writeln!(out, "grand value: {}", r.grand_value);
    let width = r.players.iter().map(|p| p.id.len()).max().unwrap_or(0).max(6);
    let _ = write!(out, "{:<width$}  {:<10}", "player", "tag");
    for m in &r.results {
        let _ = write!(out, "  {:>20}", m.method);
    }
    out.push('\n');
    for (i, p) in r.players.iter().enumerate() {
        let _ = write!(out, "{:<width$}  {:<10}", p.id, p.tag.as_str());
        for m in &r.results {
            let cell = match &m.stderr {
                Some(se) => format!("{:.6} ±{:.2e}", m.payoffs[i], se[i]),
                None => format!("{:.10}", m.payoffs[i]),
            };
            let _ = write!(out, "  {cell:>20}");
        }
        out.push('\n');
    }
    if let Some(s) = &r.shares {
        match s.founder_share {
            Some(fs) => {
                let _ = writeln!(out, "founder share: {fs:.6}");
            }
            None => {
                let _ = writeln!(out, "founder share: undefined (grand value <= 0)");
            }
        }
        if let Some(a) = &s.asymptote {
            let _ = writeln!(out, "asymptotic founder share: {:.6}", a.founder_share);
        }
    }
    for d in &r.discrepancies {
        let _ = write!(out, "max |{} - {}| = {:.3e}", d.left, d.right, d.max_abs_diff);
        if let Some(z) = d.max_z {
            let _ = write!(out, " (max z {z:.2})");
        }
        out.push('\n');
    }
    if let Some(a) = &r.axioms {
        let mark = |ok: bool| if ok { "ok" } else { "FAILED" };
        let _ = writeln!(
            out,
            "axioms: efficiency {}, null player {} ({} null), symmetry {} ({} pairs)",
            mark(a.efficiency.passed),
            mark(a.null_player.passed),
            a.null_players.len(),
            mark(a.symmetry.passed),
            a.symmetric_pairs.len()
        );
    }
    for n in &r.notes {
        let _ = writeln!(out, "note: {n}");
    }
    out
}

pub fn render_sweep(r: &SweepReport, format: Format) -> String {
    const HEADER: [&str; 9] = [
        "n",
        "grand_value",
        "founder_payoff",
        "crowd_total",
        "founder_share",
        "crowd_share",
        "ratio",
        "asymptote",
        "degenerate",
    ];
    match format {
        Format::Json => to_json(r),
        Format::Csv => csv_table(
            &HEADER,
            r.rows.iter().map(|row| {
                vec![
                    row.n.to_string(),
                    row.grand_value.to_string(),
                    row.founder_payoff.to_string(),
                    row.crowd_total.to_string(),
                    opt(row.founder_share),
                    opt(row.crowd_share),
                    opt(row.ratio),
                    opt(row.asymptote.map(|a| a.founder_share)),
                    row.degenerate.to_string(),
                ]
            }),
        ),
        Format::Text => {
            let mut out = String::new();
            let _ = writeln!(out, "{} [{}] sweep", r.label, r.model);
            let _ = writeln!(
                out,
                "{:>10}  {:>14}  {:>14}  {:>12}",
                "n", "founder_share", "asymptote", ""
            );
            for row in &r.rows {
                let share = row.founder_share.map_or("-".into(), |s| format!("{s:.8}"));
                let asym = row.asymptote.map_or("-".into(), |a| format!("{:.8}", a.founder_share));
                let flag = if row.degenerate { "degenerate" } else { "" };
                let _ = writeln!(out, "{:>10}  {share:>14}  {asym:>14}  {flag:>12}", row.n);
            }
            let _ = writeln!(out, "limit founder share: {:.8}", r.limit.founder_share);
            let _ = writeln!(out, "monotone approach: {}", r.monotone);
            out
        }
    }
}

pub fn render_empirical(r: &EmpiricalReport, format: Format) -> String {
    let b = &r.band;
    let bound = match b.nearest_bound {
        crate::empirical::Bound::Lower => "lower",
        crate::empirical::Bound::Upper => "upper",
    };
    match format {
        Format::Json => to_json(r),
        Format::Csv => csv_table(
            &[
                "entity",
                "payout",
                "denominator",
                "share",
                "lower",
                "upper",
                "inside",
                "nearest_bound",
                "distance",
            ],
            [vec![
                r.entity.clone().unwrap_or_default(),
                opt(r.payout),
                opt(r.denominator),
                b.share.to_string(),
                b.lower.to_string(),
                b.upper.to_string(),
                b.inside.to_string(),
                bound.to_string(),
                b.distance.to_string(),
            ]],
        ),
        Format::Text => {
            let mut out = String::new();
            if let Some(e) = &r.entity {
                let _ = writeln!(out, "entity: {e}");
            }
            for s in &r.spans {
                let _ = writeln!(out, "  {:<8} {}", s.span, s.revenue);
            }
            if let (Some(p), Some(d)) = (r.payout, r.denominator) {
                let _ = writeln!(out, "share = {p} / {d} = {:.6}", b.share);
            } else {
                let _ = writeln!(out, "share = {:.6}", b.share);
            }
            let verdict = if b.inside { "inside" } else { "outside" };
            let _ = writeln!(
                out,
                "{verdict} [{:.6}, {:.6}]; nearest bound {bound} at distance {:.6}",
                b.lower, b.upper, b.distance
            );
            out
        }
    }
}

#[derive(Serialize)]
struct ValidationOutcome<'a> {
    valid: bool,
    violations: &'a [Violation],
}

pub fn render_violations(violations: &[Violation], format: Format) -> String {
    match format {
        Format::Json => to_json(&ValidationOutcome {
            valid: violations.is_empty(),
            violations,
        }),
        Format::Csv => csv_table(
            &["path", "message"],
            violations.iter().map(|v| vec![v.path.clone(), v.message.clone()]),
        ),
        Format::Text => violations.iter().map(|v| format!("{v}\n")).collect(),
    }
}

/// Writes to `out`, or stdout when absent.
pub fn emit(text: &str, out: Option<&Path>) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| CliError::io(path, e)),
        None => {
            use std::io::Write;
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| CliError::io("<stdout>", e))
        }
    }
}
