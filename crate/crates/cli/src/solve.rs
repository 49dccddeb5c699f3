//! Allocation of a single scenario by one or more methods.

use fairshare_core::geo::{agent_game, founder_game, geo_founder_shapley, geo_shapley};
use fairshare_core::models::Asymptote;
use fairshare_core::oligopoly::{coarse_game, fine_game, shapley_coarse, shapley_fine_closed, FineGrainRoster};
use fairshare_core::{
    check_axioms, shapley_exact_with, shapley_sample, Allocation, AxiomReport, CoalitionGame, ExactConfig, PlayerTag,
    DEFAULT_EXACT_CAP, MAX_PLAYERS,
};
use serde::Serialize;

use crate::error::CliError;
use crate::scenario::{MethodChoice, ModelParams, SampleConfig, Scenario};

/// Relative tolerance for closed-form against exact agreement.
pub const AGREEMENT_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone)]
pub struct SolveOptions {
    pub method: Option<MethodChoice>,
    pub exact_cap: usize,
    pub permutations: Option<usize>,
    pub seed: Option<u64>,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            method: None,
            exact_cap: DEFAULT_EXACT_CAP,
            permutations: None,
            seed: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PlayerRow {
    pub id: String,
    pub tag: PlayerTag,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MethodResult {
    pub method: String,
    pub payoffs: Vec<f64>,
    pub total: f64,
    pub efficient: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stderr: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub permutations: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl MethodResult {
    fn new(method: &str, alloc: &Allocation, sample: Option<SampleConfig>) -> Self {
        MethodResult {
            method: method.to_string(),
            payoffs: alloc.payoffs.clone(),
            total: alloc.total(),
            efficient: alloc.is_efficient(),
            stderr: alloc.stderr.clone(),
            permutations: sample.map(|s| s.permutations),
            seed: sample.map(|s| s.seed),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Discrepancy {
    pub left: String,
    pub right: String,
    pub max_abs_diff: f64,
    /// Largest `|diff| / stderr` when one side is sampled.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_z: Option<f64>,
}

/// Founder versus crowd split, for rosters with a founder at index 0.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ShareSummary {
    pub founder_payoff: f64,
    pub crowd_total: f64,
    pub founder_share: Option<f64>,
    pub crowd_share: Option<f64>,
    pub ratio: Option<f64>,
    pub asymptote: Option<Asymptote>,
    pub degenerate: bool,
}

impl ShareSummary {
    pub fn from_allocation(alloc: &Allocation, asymptote: Option<Asymptote>) -> Self {
        let founder = alloc.payoffs[0];
        let crowd: f64 = alloc.payoffs[1..].iter().sum();
        let degenerate = alloc.grand_value.is_nan() || alloc.grand_value <= 0.0;
        let founder_share = (!degenerate).then(|| founder / alloc.grand_value);
        ShareSummary {
            founder_payoff: founder,
            crowd_total: crowd,
            founder_share,
            crowd_share: founder_share.map(|s| 1.0 - s),
            ratio: (!degenerate && crowd != 0.0).then(|| founder / crowd),
            asymptote,
            degenerate,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolveReport {
    pub label: String,
    pub model: String,
    pub method: MethodChoice,
    pub players: Vec<PlayerRow>,
    pub grand_value: f64,
    pub results: Vec<MethodResult>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub shares: Option<ShareSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub axioms: Option<AxiomReport>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub discrepancies: Vec<Discrepancy>,
    /// Closed form against exact engine, when both ran.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_discrepancy: Option<f64>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl SolveReport {
    /// The most authoritative result: closed, then exact, then sampled.
    pub fn primary(&self) -> &MethodResult {
        &self.results[0]
    }
}

pub fn roster(scenario: &Scenario) -> Result<Vec<PlayerRow>, CliError> {
    let row = |id: String, tag| PlayerRow { id, tag };
    let with_founder = |n: usize, crowd_tag, prefix: &str| {
        std::iter::once(row("g".into(), PlayerTag::Founder))
            .chain((1..=n).map(|i| row(format!("{prefix}{i}"), crowd_tag)))
            .collect::<Vec<_>>()
    };
    Ok(match &scenario.params {
        ModelParams::Single(p) => with_founder(p.n, PlayerTag::Crowd, "u"),
        ModelParams::Profit(p) => with_founder(p.n, PlayerTag::Crowd, "u"),
        ModelParams::Weighted(p) => with_founder(p.weights.len(), PlayerTag::Crowd, "u"),
        ModelParams::OligopolyCoarse(g) => g
            .vertices
            .iter()
            .map(|v| row(v.id.clone(), PlayerTag::CssVertex))
            .collect(),
        ModelParams::OligopolyFine(g) => {
            let graph = g.build()?;
            let roster = FineGrainRoster::new(&graph)?;
            roster
                .labels(&graph)
                .into_iter()
                .zip(roster.tags())
                .map(|(id, tag)| row(id, tag))
                .collect()
        }
        ModelParams::Geo(g) => (1..=g.m).map(|i| row(format!("a{i}"), PlayerTag::CssVertex)).collect(),
        ModelParams::GeoFounder(g) => with_founder(g.m, PlayerTag::CssVertex, "a"),
    })
}

/// Closed-form allocation, plus a founder/crowd summary where one applies.
pub fn closed(scenario: &Scenario) -> Result<(Allocation, Option<ShareSummary>), CliError> {
    if let Some(model) = scenario.params.css_model() {
        let r = model.closed()?;
        let alloc = r.to_allocation();
        let summary = ShareSummary {
            founder_payoff: r.founder_payoff,
            crowd_total: r.crowd_total(),
            founder_share: r.founder_share,
            crowd_share: r.crowd_share,
            ratio: r.ratio,
            asymptote: r.asymptote,
            degenerate: r.degenerate,
        };
        return Ok((alloc, Some(summary)));
    }
    Ok(match &scenario.params {
        ModelParams::OligopolyCoarse(g) => (shapley_coarse(&g.build()?), None),
        ModelParams::OligopolyFine(g) => (shapley_fine_closed(&g.build()?)?, None),
        ModelParams::Geo(g) => (geo_shapley(&g.build()?, g.rho, g.value)?, None),
        ModelParams::GeoFounder(g) => {
            let alloc = geo_founder_shapley(&g.build()?, g.rho, g.value)?;
            let summary = ShareSummary::from_allocation(&alloc, None);
            (alloc, Some(summary))
        }
        _ => unreachable!("crowd-sourcing models handled above"),
    })
}

/// The characteristic-function game behind a scenario.
pub fn game(scenario: &Scenario) -> Result<CoalitionGame, CliError> {
    if let Some(model) = scenario.params.css_model() {
        return Ok(model.game()?);
    }
    Ok(match &scenario.params {
        ModelParams::OligopolyCoarse(g) => coarse_game(&g.build()?)?,
        ModelParams::OligopolyFine(g) => fine_game(&g.build()?)?,
        ModelParams::Geo(g) => agent_game(&g.build()?, g.rho, g.value)?,
        ModelParams::GeoFounder(g) => founder_game(&g.build()?, g.rho, g.value)?,
        _ => unreachable!("crowd-sourcing models handled above"),
    })
}

fn sample_config(scenario: &Scenario, opts: &SolveOptions) -> SampleConfig {
    let base = scenario.sample.unwrap_or_default();
    SampleConfig {
        permutations: opts.permutations.unwrap_or(base.permutations),
        seed: opts.seed.unwrap_or(base.seed),
    }
}

fn cap_error(players: usize, cap: usize, engine: &str, hint: &str) -> CliError {
    CliError::Cap(format!(
        "roster of {players} players exceeds the {engine} limit of {cap}; {hint}"
    ))
}

fn compare(left: &str, a: &Allocation, right: &str, b: &Allocation) -> Discrepancy {
    let max_z = a.stderr.as_ref().or(b.stderr.as_ref()).map(|se| {
        a.payoffs
            .iter()
            .zip(&b.payoffs)
            .zip(se)
            .map(|((x, y), s)| {
                let d = (x - y).abs();
                if *s > 0.0 {
                    d / s
                } else if d == 0.0 {
                    0.0
                } else {
                    f64::INFINITY
                }
            })
            .fold(0.0, f64::max)
    });
    Discrepancy {
        left: left.into(),
        right: right.into(),
        max_abs_diff: a.max_abs_diff(b),
        max_z,
    }
}

pub fn solve(scenario: &Scenario, opts: &SolveOptions) -> Result<SolveReport, CliError> {
    let method = opts.method.unwrap_or(scenario.method);
    let players = roster(scenario)?;
    let n = players.len();
    let sample = sample_config(scenario, opts);
    if sample.permutations == 0 {
        return Err(CliError::Usage("permutations must be at least 1".into()));
    }
    let exact_config = ExactConfig::with_cap(opts.exact_cap);

    let mut notes = Vec::new();
    let mut runs: Vec<(&str, Allocation, Option<SampleConfig>)> = Vec::new();
    let mut shares = None;
    let mut axioms = None;

    let want = |m: MethodChoice| method == m || method == MethodChoice::All;

    if want(MethodChoice::Closed) {
        match closed(scenario) {
            Ok((alloc, summary)) => {
                shares = summary;
                runs.push(("closed", alloc, None));
            }
            Err(e) if method == MethodChoice::All => notes.push(format!("closed form skipped: {e}")),
            Err(e) => return Err(e),
        }
    }

    if want(MethodChoice::Exact) {
        if n > opts.exact_cap {
            if method == MethodChoice::Exact {
                return Err(cap_error(
                    n,
                    opts.exact_cap,
                    "exact engine",
                    "use method closed or sample",
                ));
            }
            notes.push(format!(
                "exact engine skipped: {n} players exceed the cap of {}",
                opts.exact_cap
            ));
        } else {
            let g = game(scenario)?;
            runs.push(("exact", shapley_exact_with(&g, &exact_config)?, None));
        }
    }

    if want(MethodChoice::Sample) {
        if n > MAX_PLAYERS {
            if method == MethodChoice::Sample {
                return Err(cap_error(n, MAX_PLAYERS, "sampler", "use method closed"));
            }
            notes.push(format!(
                "sampler skipped: {n} players exceed the limit of {MAX_PLAYERS}"
            ));
        } else {
            let g = game(scenario)?;
            runs.push((
                "sampled",
                shapley_sample(&g, sample.permutations, sample.seed)?,
                Some(sample),
            ));
        }
    }

    if method == MethodChoice::All {
        if n <= opts.exact_cap.min(DEFAULT_EXACT_CAP) {
            let g = game(scenario)?;
            let subject = &runs[0].1;
            axioms = Some(check_axioms(&g, subject)?);
        } else {
            notes.push(format!("axiom check skipped: {n} players exceed the cap"));
        }
        if shares.is_none() && matches!(scenario.params, ModelParams::GeoFounder(_)) {
            shares = runs.first().map(|(_, a, _)| ShareSummary::from_allocation(a, None));
        }
    }

    let mut discrepancies = Vec::new();
    for i in 0..runs.len() {
        for j in i + 1..runs.len() {
            discrepancies.push(compare(runs[i].0, &runs[i].1, runs[j].0, &runs[j].1));
        }
    }
    let max_discrepancy = discrepancies
        .iter()
        .find(|d| d.left == "closed" && d.right == "exact")
        .map(|d| d.max_abs_diff);

    let grand_value = runs
        .first()
        .map(|r| r.1.grand_value)
        .ok_or_else(|| CliError::Usage("no method produced an allocation".into()))?;

    Ok(SolveReport {
        label: scenario.display_label(),
        model: scenario.model().as_str().to_string(),
        method,
        players,
        grand_value,
        results: runs.iter().map(|(m, a, s)| MethodResult::new(m, a, *s)).collect(),
        shares,
        axioms,
        discrepancies,
        max_discrepancy,
        notes,
    })
}

/// Whether closed and exact agree to [`AGREEMENT_TOLERANCE`] relative to the
/// grand value.
pub fn agreement_holds(report: &SolveReport) -> Option<bool> {
    report
        .max_discrepancy
        .map(|d| d <= AGREEMENT_TOLERANCE * report.grand_value.abs().max(1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::parse_scenario;

    #[test]
    fn all_methods_on_small_single() {
        let s = parse_scenario(
            r#"{"model":"single","method":"all","sample":{"permutations":4000,"seed":3},"params":{"n":3,"k":2}}"#,
        )
        .unwrap();
        let r = solve(&s, &SolveOptions::default()).unwrap();
        let methods: Vec<_> = r.results.iter().map(|m| m.method.as_str()).collect();
        assert_eq!(methods, ["closed", "exact", "sampled"]);
        assert!(agreement_holds(&r).unwrap());
        assert!(r.axioms.as_ref().unwrap().all_passed());
        assert_eq!(r.players[0].id, "g");
        assert!((r.primary().payoffs[0] - 3.5).abs() < 1e-12);
    }

    #[test]
    fn exact_above_cap_is_a_cap_error() {
        let s = parse_scenario(r#"{"model":"single","method":"exact","params":{"n":30,"k":2}}"#).unwrap();
        let e = solve(&s, &SolveOptions::default()).unwrap_err();
        assert_eq!(e.exit_code(), crate::error::EXIT_CAP);
    }

    #[test]
    fn all_on_large_roster_skips_with_notes() {
        let s = parse_scenario(r#"{"model":"single","method":"all","params":{"n":100,"k":2}}"#).unwrap();
        let r = solve(&s, &SolveOptions::default()).unwrap();
        assert_eq!(r.results.len(), 1);
        assert_eq!(r.notes.len(), 3);
    }

    #[test]
    fn fine_with_empty_crowd_falls_back_to_exact() {
        let s = parse_scenario(
            r#"{"model":"oligopoly_fine","method":"all","params":{"vertices":[{"id":"A","size":0},{"id":"B","size":2}],"edges":[["A","B"]]}}"#,
        )
        .unwrap();
        let r = solve(&s, &SolveOptions::default()).unwrap();
        assert_eq!(r.results[0].method, "exact");
        assert!(r.notes[0].starts_with("closed form skipped"));
    }
}
