//! Founder share as the crowd grows.

use fairshare_core::geo::{founder_split, GeoModel};
use fairshare_core::models::{share_sweep, Asymptote, ShareReport};
use serde::Serialize;

use crate::error::CliError;
use crate::scenario::{ModelParams, Scenario};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub n: usize,
    pub grand_value: f64,
    pub founder_payoff: f64,
    pub crowd_total: f64,
    pub founder_share: Option<f64>,
    pub crowd_share: Option<f64>,
    pub ratio: Option<f64>,
    pub asymptote: Option<Asymptote>,
    pub degenerate: bool,
}

impl From<&ShareReport> for SweepRow {
    fn from(r: &ShareReport) -> Self {
        SweepRow {
            n: r.n,
            grand_value: r.grand_value,
            founder_payoff: r.founder_payoff,
            crowd_total: r.crowd_total(),
            founder_share: r.founder_share,
            crowd_share: r.crowd_share,
            ratio: r.ratio,
            asymptote: r.asymptote,
            degenerate: r.degenerate,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepReport {
    pub label: String,
    pub model: String,
    pub limit: Asymptote,
    /// Distance to the limit never grows along the sweep.
    pub monotone: bool,
    pub rows: Vec<SweepRow>,
}

/// Parses `10,100,1000` or an inclusive range `1..20`.
pub fn parse_n_values(text: &str) -> Result<Vec<usize>, CliError> {
    let bad = |part: &str| CliError::Usage(format!("invalid crowd size `{part}` in --n-values"));
    let mut out = Vec::new();
    for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        if let Some((a, b)) = part.split_once("..") {
            let a: usize = a.trim().parse().map_err(|_| bad(part))?;
            let b: usize = b.trim().parse().map_err(|_| bad(part))?;
            if a > b {
                return Err(bad(part));
            }
            out.extend(a..=b);
        } else {
            out.push(part.parse().map_err(|_| bad(part))?);
        }
    }
    if out.is_empty() {
        return Err(CliError::Usage("--n-values needs at least one crowd size".into()));
    }
    if out.contains(&0) {
        return Err(CliError::Usage("crowd sizes in --n-values must be at least 1".into()));
    }
    Ok(out)
}

fn monotone(rows: &[SweepRow], limit: f64) -> bool {
    let gaps: Vec<f64> = rows
        .iter()
        .filter_map(|r| r.founder_share)
        .map(|s| (s - limit).abs())
        .collect();
    gaps.windows(2).all(|w| w[1] <= w[0])
}

pub fn sweep(scenario: &Scenario, n_values: &[usize]) -> Result<SweepReport, CliError> {
    let (limit, rows) = if let Some(model) = scenario.params.css_model() {
        let s = share_sweep(&model, n_values)?;
        (s.limit, s.rows.iter().map(SweepRow::from).collect::<Vec<_>>())
    } else if let ModelParams::GeoFounder(g) = &scenario.params {
        if n_values.windows(2).any(|w| w[0] >= w[1]) {
            return Err(CliError::Usage("crowd sizes must be strictly ascending".into()));
        }
        let base = g.build()?.effective_sizes();
        if base.iter().all(|&s| s == 0.0) {
            return Err(CliError::Usage("census covers no users; nothing to sweep".into()));
        }
        let rows = n_values
            .iter()
            .map(|&n| geo_row(&base, n, g.rho, g.value))
            .collect::<Result<Vec<_>, _>>()?;
        (asymptote(g.value, 0.0), rows)
    } else {
        return Err(CliError::Usage(format!(
            "sweep supports single, weighted, profit and geo_founder scenarios, not {}",
            scenario.model().as_str()
        )));
    };
    Ok(SweepReport {
        label: scenario.display_label(),
        model: scenario.model().as_str().to_string(),
        monotone: monotone(&rows, limit.founder_share),
        limit,
        rows,
    })
}

fn asymptote(model: GeoModel, concentration: f64) -> Asymptote {
    let founder_share = match model {
        GeoModel::Linear => 0.5,
        GeoModel::Metcalfe => 1.0 / 3.0 + concentration / 6.0,
    };
    Asymptote {
        founder_share,
        crowd_share: 1.0 - founder_share,
    }
}

/// Agents' effective sizes tiled cyclically to `n` agents.
fn geo_row(base: &[f64], n: usize, rho: f64, model: GeoModel) -> Result<SweepRow, CliError> {
    let sizes: Vec<f64> = base.iter().copied().cycle().take(n).collect();
    let alloc = founder_split(&sizes, rho, model)?;
    let total: f64 = sizes.iter().sum();
    let concentration = if total > 0.0 {
        sizes.iter().map(|s| (s / total).powi(2)).sum()
    } else {
        0.0
    };
    let s = crate::solve::ShareSummary::from_allocation(&alloc, Some(asymptote(model, concentration)));
    Ok(SweepRow {
        n,
        grand_value: alloc.grand_value,
        founder_payoff: s.founder_payoff,
        crowd_total: s.crowd_total,
        founder_share: s.founder_share,
        crowd_share: s.crowd_share,
        ratio: s.ratio,
        asymptote: s.asymptote,
        degenerate: s.degenerate,
    })
}
