//! Single crowd-sourced system games.
//!
//! Every model here has the roster `{g, u_1, .., u_n}` with the founder `g`
//! at index 0 and crowd member `u_i` at index `i`. Coalitions without the
//! founder are worth nothing.
//!
//! * revenue: `rho * m^k` where `m` is the number of crowd members present;
//! * weighted: `rho * (sum of W_i^alpha over present members)^k`;
//! * profit: revenue minus `(K_g + k_u) * m`.

use serde::Serialize;

use crate::coalition::{Coalition, PlayerTag};
use crate::error::{invalid, Error, Result};
use crate::game::{Allocation, CoalitionGame, Method};

fn integral_exponent(k: f64) -> Option<u32> {
    (k >= 1.0 && k.fract() == 0.0 && k <= u32::MAX as f64).then_some(k as u32)
}

fn pow(x: f64, k: f64) -> f64 {
    match integral_exponent(k) {
        Some(ki) if ki <= i32::MAX as u32 => x.powi(ki as i32),
        _ => x.powf(k),
    }
}

fn founder_tags(n: usize) -> Vec<PlayerTag> {
    let mut tags = vec![PlayerTag::Crowd; n + 1];
    tags[0] = PlayerTag::Founder;
    tags
}

fn crowd_count(s: Coalition) -> Option<usize> {
    s.contains(0).then(|| s.len() - 1)
}

/// `sum_{s=0}^{n} s^k` by direct accumulation.
pub fn power_sum(n: usize, k: u32) -> f64 {
    (1..=n).map(|s| (s as f64).powi(k as i32)).sum()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SingleCssParams {
    pub n: usize,
    /// Any real `k > 0` is accepted by the value function; closed forms need
    /// a positive integer.
    pub k: f64,
    pub rho: f64,
}

impl SingleCssParams {
    pub fn new(n: usize, k: f64, rho: f64) -> Result<Self> {
        let p = SingleCssParams { n, k, rho };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 1 {
            return Err(invalid("n", "crowd size must be at least 1"));
        }
        if !(self.k.is_finite() && self.k > 0.0) {
            return Err(invalid("k", format!("exponent must be positive, got {}", self.k)));
        }
        if !(self.rho.is_finite() && self.rho > 0.0) {
            return Err(invalid(
                "rho",
                format!("value scale must be positive, got {}", self.rho),
            ));
        }
        Ok(())
    }

    fn integer_k(&self) -> Result<u32> {
        integral_exponent(self.k).ok_or_else(|| {
            invalid(
                "k",
                format!("closed forms need a positive integer exponent, got {}", self.k),
            )
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WeightedCssParams {
    pub weights: Vec<f64>,
    pub alpha: f64,
    pub rho: f64,
    pub k: f64,
}

impl WeightedCssParams {
    pub fn new(weights: Vec<f64>, alpha: f64, rho: f64) -> Result<Self> {
        let p = WeightedCssParams {
            weights,
            alpha,
            rho,
            k: 2.0,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn n(&self) -> usize {
        self.weights.len()
    }

    pub fn validate(&self) -> Result<()> {
        if self.weights.is_empty() {
            return Err(invalid("weights", "need at least one crowd member"));
        }
        if let Some(w) = self.weights.iter().find(|w| !(w.is_finite() && **w >= 0.0)) {
            return Err(invalid("weights", format!("weights must be finite and >= 0, got {w}")));
        }
        if self.weights.iter().all(|&w| w == 0.0) {
            return Err(invalid("weights", "at least one weight must be positive"));
        }
        if !(self.alpha.is_finite() && self.alpha > 0.0) {
            return Err(invalid(
                "alpha",
                format!("work exponent must be positive, got {}", self.alpha),
            ));
        }
        if !(self.rho.is_finite() && self.rho > 0.0) {
            return Err(invalid(
                "rho",
                format!("value scale must be positive, got {}", self.rho),
            ));
        }
        if !(self.k.is_finite() && self.k > 0.0) {
            return Err(invalid("k", format!("exponent must be positive, got {}", self.k)));
        }
        Ok(())
    }

    /// `W_i^alpha` per crowd member.
    pub fn work(&self) -> Vec<f64> {
        self.weights.iter().map(|w| w.powf(self.alpha)).collect()
    }

    /// Work shares `f_i`, summing to 1.
    pub fn work_shares(&self) -> Vec<f64> {
        let work = self.work();
        let total: f64 = work.iter().sum();
        work.iter().map(|w| w / total).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProfitCssParams {
    pub n: usize,
    pub k: f64,
    pub rho: f64,
    /// Founder cost per participant (`K_g`).
    pub founder_cost: f64,
    /// Cost borne by each participant (`k_u`).
    pub participant_cost: f64,
}

impl ProfitCssParams {
    pub fn new(n: usize, k: f64, rho: f64, founder_cost: f64, participant_cost: f64) -> Result<Self> {
        let p = ProfitCssParams {
            n,
            k,
            rho,
            founder_cost,
            participant_cost,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        SingleCssParams::new(self.n, self.k, self.rho)?;
        for (name, c) in [
            ("founder_cost", self.founder_cost),
            ("participant_cost", self.participant_cost),
        ] {
            if !(c.is_finite() && c >= 0.0) {
                return Err(invalid(name, format!("cost must be finite and >= 0, got {c}")));
            }
        }
        Ok(())
    }

    pub fn unit_cost(&self) -> f64 {
        self.founder_cost + self.participant_cost
    }

    pub fn grand_value(&self) -> f64 {
        let n = self.n as f64;
        self.rho * pow(n, self.k) - self.unit_cost() * n
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CrowdPayoffs {
    Uniform { each: f64, count: usize },
    PerMember { payoffs: Vec<f64> },
}

impl CrowdPayoffs {
    pub fn total(&self) -> f64 {
        match self {
            CrowdPayoffs::Uniform { each, count } => each * *count as f64,
            CrowdPayoffs::PerMember { payoffs } => payoffs.iter().sum(),
        }
    }

    pub fn len(&self) -> usize {
        match self {
            CrowdPayoffs::Uniform { count, .. } => *count,
            CrowdPayoffs::PerMember { payoffs } => payoffs.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn get(&self, i: usize) -> Option<f64> {
        match self {
            CrowdPayoffs::Uniform { each, count } => (i < *count).then_some(*each),
            CrowdPayoffs::PerMember { payoffs } => payoffs.get(i).copied(),
        }
    }
}

/// Founder/crowd shares in the large-crowd limit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Asymptote {
    pub founder_share: f64,
    pub crowd_share: f64,
}

impl Asymptote {
    fn from_founder(founder_share: f64) -> Self {
        Asymptote {
            founder_share,
            crowd_share: 1.0 - founder_share,
        }
    }
}

/// Closed-form founder/crowd split for a single crowd-sourced system.
///
/// Shares and ratio are `None` when the grand value is not positive
/// (`degenerate`), since fractions of a loss are not meaningful.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ShareReport {
    pub n: usize,
    pub grand_value: f64,
    pub founder_payoff: f64,
    pub crowd_payoffs: CrowdPayoffs,
    pub founder_share: Option<f64>,
    pub crowd_share: Option<f64>,
    /// Founder payoff over total crowd payoff.
    pub ratio: Option<f64>,
    pub asymptote: Option<Asymptote>,
    pub degenerate: bool,
}

impl ShareReport {
    fn build(grand_value: f64, founder_payoff: f64, crowd_payoffs: CrowdPayoffs, asymptote: Option<Asymptote>) -> Self {
        let degenerate = grand_value.is_nan() || grand_value <= 0.0;
        let crowd_total = crowd_payoffs.total();
        let (founder_share, crowd_share, ratio) = if degenerate {
            (None, None, None)
        } else {
            let fs = founder_payoff / grand_value;
            let ratio = (crowd_total != 0.0).then(|| founder_payoff / crowd_total);
            (Some(fs), Some(1.0 - fs), ratio)
        };
        ShareReport {
            n: crowd_payoffs.len(),
            grand_value,
            founder_payoff,
            crowd_payoffs,
            founder_share,
            crowd_share,
            ratio,
            asymptote,
            degenerate,
        }
    }

    pub fn crowd_total(&self) -> f64 {
        self.crowd_payoffs.total()
    }

    /// Allocation on `{g, u_1..u_n}`, founder first.
    pub fn to_allocation(&self) -> Allocation {
        let mut payoffs = Vec::with_capacity(self.n + 1);
        payoffs.push(self.founder_payoff);
        payoffs.extend((0..self.n).map(|i| self.crowd_payoffs.get(i).unwrap_or(0.0)));
        Allocation::new(payoffs, self.grand_value, Method::ClosedForm)
    }
}

pub fn value_single(params: &SingleCssParams, s: Coalition) -> f64 {
    crowd_count(s).map_or(0.0, |m| params.rho * pow(m as f64, params.k))
}

pub fn single_game(params: &SingleCssParams) -> Result<CoalitionGame> {
    params.validate()?;
    let p = *params;
    CoalitionGame::new(
        format!("single(n={}, k={}, rho={})", p.n, p.k, p.rho),
        founder_tags(p.n),
        move |s| value_single(&p, s),
    )
}

pub fn closed_single(params: &SingleCssParams) -> Result<ShareReport> {
    params.validate()?;
    let k = params.integer_k()?;
    let n = params.n;
    let grand = params.rho * (n as f64).powi(k as i32);
    let founder = params.rho * power_sum(n, k) / (n + 1) as f64;
    let each = (grand - founder) / n as f64;
    Ok(ShareReport::build(
        grand,
        founder,
        CrowdPayoffs::Uniform { each, count: n },
        Some(Asymptote::from_founder(1.0 / (k as f64 + 1.0))),
    ))
}

pub fn value_weighted(params: &WeightedCssParams, s: Coalition) -> f64 {
    if !s.contains(0) {
        return 0.0;
    }
    let work: f64 = s
        .without(0)
        .members()
        .map(|i| params.weights[i - 1].powf(params.alpha))
        .sum();
    params.rho * pow(work, params.k)
}

pub fn weighted_game(params: &WeightedCssParams) -> Result<CoalitionGame> {
    params.validate()?;
    let work = params.work();
    let (rho, k) = (params.rho, params.k);
    CoalitionGame::new(
        format!("weighted(n={}, alpha={}, rho={})", params.n(), params.alpha, rho),
        founder_tags(params.n()),
        move |s| {
            if !s.contains(0) {
                return 0.0;
            }
            let total: f64 = s.without(0).members().map(|i| work[i - 1]).sum();
            rho * pow(total, k)
        },
    )
}

/// Pairwise coefficient `c_n = sum_{s=2}^{n} s(s-1) / ((n+1) n (n-1))` of the
/// weighted-model crowd payoff; zero when `n < 2` (no pairs exist).
///
/// The sum telescopes to `(n+1) n (n-1) / 3`, so `c_n = 1/3` for every `n >= 2`.
pub fn cross_term_coefficient(n: usize) -> f64 {
    if n < 2 {
        return 0.0;
    }
    let numer: f64 = (2..=n).map(|s| (s * (s - 1)) as f64).sum();
    let nf = n as f64;
    numer / ((nf + 1.0) * nf * (nf - 1.0))
}

/// Exact finite-n Shapley split of the weighted model for `k = 2`:
/// `phi_u_i = rho * (w_i^2 / 2 + 2 c_n w_i sum_{j != i} w_j)` with
/// `w_i = W_i^alpha`, founder by efficiency.
pub fn closed_weighted(params: &WeightedCssParams) -> Result<ShareReport> {
    params.validate()?;
    if params.k != 2.0 {
        return Err(Error::Unsupported(format!(
            "closed-form weighted allocation needs k = 2, got k = {}; use the exact engine",
            params.k
        )));
    }
    let work = params.work();
    let total: f64 = work.iter().sum();
    let c = cross_term_coefficient(work.len());
    let rho = params.rho;
    let crowd: Vec<f64> = work
        .iter()
        .map(|&w| rho * (w * w / 2.0 + 2.0 * c * w * (total - w)))
        .collect();
    let grand = rho * total * total;
    let founder = grand - crowd.iter().sum::<f64>();
    let sum_f2: f64 = work.iter().map(|w| (w / total).powi(2)).sum();
    Ok(ShareReport::build(
        grand,
        founder,
        CrowdPayoffs::PerMember { payoffs: crowd },
        Some(Asymptote::from_founder(1.0 / 3.0 + sum_f2 / 6.0)),
    ))
}

pub fn value_profit(params: &ProfitCssParams, s: Coalition) -> f64 {
    crowd_count(s).map_or(0.0, |m| {
        let m = m as f64;
        params.rho * pow(m, params.k) - params.founder_cost * m - params.participant_cost * m
    })
}

pub fn profit_game(params: &ProfitCssParams) -> Result<CoalitionGame> {
    params.validate()?;
    let p = *params;
    CoalitionGame::new(
        format!(
            "profit(n={}, k={}, rho={}, K_g={}, k_u={})",
            p.n, p.k, p.rho, p.founder_cost, p.participant_cost
        ),
        founder_tags(p.n),
        move |s| value_profit(&p, s),
    )
}

/// Large-n founder/crowd split of the profit model at crowd size `n`;
/// `None` when its denominator is not positive.
pub fn profit_share_approximation(params: &ProfitCssParams) -> Option<Asymptote> {
    let n = params.n as f64;
    let revenue = params.rho * pow(n, params.k);
    let cost = params.unit_cost() * n;
    let denom = revenue - cost;
    (denom > 0.0).then(|| {
        let founder = (revenue / (params.k + 1.0) - cost / 2.0) / denom;
        let crowd = (revenue * params.k / (params.k + 1.0) - cost / 2.0) / denom;
        Asymptote {
            founder_share: founder,
            crowd_share: crowd,
        }
    })
}

pub fn closed_profit(params: &ProfitCssParams) -> Result<ShareReport> {
    params.validate()?;
    let k = SingleCssParams::new(params.n, params.k, params.rho)?.integer_k()?;
    let n = params.n;
    let nf = n as f64;
    let founder = (params.rho * power_sum(n, k) - params.unit_cost() * nf * (nf + 1.0) / 2.0) / (nf + 1.0);
    let grand = params.rho * nf.powi(k as i32) - params.unit_cost() * nf;
    let each = (grand - founder) / nf;
    Ok(ShareReport::build(
        grand,
        founder,
        CrowdPayoffs::Uniform { each, count: n },
        profit_share_approximation(params),
    ))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "model", rename_all = "snake_case")]
pub enum CssModel {
    Single(SingleCssParams),
    Weighted(WeightedCssParams),
    Profit(ProfitCssParams),
}

impl CssModel {
    /// The same model resized to a crowd of `n`. Weighted models repeat their
    /// weight pattern cyclically.
    pub fn resized(&self, n: usize) -> CssModel {
        match self {
            CssModel::Single(p) => CssModel::Single(SingleCssParams { n, ..*p }),
            CssModel::Profit(p) => CssModel::Profit(ProfitCssParams { n, ..*p }),
            CssModel::Weighted(p) => CssModel::Weighted(WeightedCssParams {
                weights: p.weights.iter().copied().cycle().take(n).collect(),
                ..p.clone()
            }),
        }
    }

    pub fn closed(&self) -> Result<ShareReport> {
        match self {
            CssModel::Single(p) => closed_single(p),
            CssModel::Weighted(p) => closed_weighted(p),
            CssModel::Profit(p) => closed_profit(p),
        }
    }

    pub fn game(&self) -> Result<CoalitionGame> {
        match self {
            CssModel::Single(p) => single_game(p),
            CssModel::Weighted(p) => weighted_game(p),
            CssModel::Profit(p) => profit_game(p),
        }
    }

    /// Founder share as the crowd grows without bound.
    pub fn limit(&self) -> Asymptote {
        match self {
            CssModel::Single(p) => Asymptote::from_founder(1.0 / (p.k + 1.0)),
            CssModel::Profit(p) => Asymptote::from_founder(1.0 / (p.k + 1.0)),
            // assumes the tiled workload is not concentrated: sum f_i^2 -> 0
            CssModel::Weighted(_) => Asymptote::from_founder(1.0 / 3.0),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ShareSweep {
    pub rows: Vec<ShareReport>,
    pub limit: Asymptote,
    /// Whether `|founder_share - limit|` is nonincreasing over the
    /// non-degenerate rows.
    pub monotone: bool,
}

pub fn share_sweep(model: &CssModel, n_values: &[usize]) -> Result<ShareSweep> {
    if n_values.is_empty() {
        return Err(invalid("n_values", "need at least one crowd size"));
    }
    if n_values.windows(2).any(|w| w[0] >= w[1]) {
        return Err(invalid("n_values", "crowd sizes must be strictly ascending"));
    }
    let rows = n_values
        .iter()
        .map(|&n| model.resized(n).closed())
        .collect::<Result<Vec<_>>>()?;
    let limit = model.limit();
    let gaps: Vec<f64> = rows
        .iter()
        .filter_map(|r| r.founder_share)
        .map(|fs| (fs - limit.founder_share).abs())
        .collect();
    let monotone = gaps.windows(2).all(|w| w[1] <= w[0]);
    Ok(ShareSweep { rows, limit, monotone })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shapley::shapley_exact;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() <= 1e-9 * a.abs().max(b.abs()).max(1.0)
    }

    #[test]
    fn value_single_examples() {
        let p = SingleCssParams::new(4, 2.0, 3.0).unwrap();
        assert_eq!(value_single(&p, Coalition::from_members([1, 2, 3, 4])), 0.0);
        assert_eq!(value_single(&p, Coalition::singleton(0)), 0.0);
        assert_eq!(value_single(&p, Coalition::from_members([0, 1, 2])), 12.0);
    }

    #[test]
    fn params_validation() {
        assert!(SingleCssParams::new(0, 2.0, 1.0).is_err());
        assert!(SingleCssParams::new(3, 0.0, 1.0).is_err());
        assert!(SingleCssParams::new(3, 2.0, -1.0).is_err());
        assert!(WeightedCssParams::new(vec![0.0, 0.0], 1.0, 1.0).is_err());
        assert!(WeightedCssParams::new(vec![], 1.0, 1.0).is_err());
        assert!(WeightedCssParams::new(vec![1.0, -2.0], 1.0, 1.0).is_err());
        assert!(ProfitCssParams::new(3, 2.0, 1.0, -1.0, 0.0).is_err());
    }

    #[test]
    fn closed_single_linear_is_half() {
        for n in [1, 2, 7, 1000] {
            let r = closed_single(&SingleCssParams::new(n, 1.0, 2.5).unwrap()).unwrap();
            assert_eq!(r.founder_share, Some(0.5));
        }
    }

    #[test]
    fn closed_single_metcalfe_values() {
        let r = closed_single(&SingleCssParams::new(1000, 2.0, 1.0).unwrap()).unwrap();
        assert!(close(r.founder_payoff, 333_500.0));
        assert!(close(r.founder_share.unwrap(), 2001.0 / 6000.0));
        assert_eq!(r.founder_share.unwrap() + r.crowd_share.unwrap(), 1.0);
        assert!(close(r.asymptote.unwrap().founder_share, 1.0 / 3.0));
        let small = closed_single(&SingleCssParams::new(3, 2.0, 1.0).unwrap()).unwrap();
        assert!(close(small.founder_payoff, 3.5));
        assert!(close(small.crowd_payoffs.get(0).unwrap(), 11.0 / 6.0));
    }

    #[test]
    fn closed_single_rejects_fractional_k() {
        let p = SingleCssParams::new(3, 1.5, 1.0).unwrap();
        assert!(closed_single(&p).is_err());
        // the exact engine still handles it
        let a = shapley_exact(&single_game(&p).unwrap()).unwrap();
        assert!(a.is_efficient());
    }

    #[test]
    fn weighted_value_examples() {
        let p = WeightedCssParams::new(vec![1.0, 1.0, 2.0], 1.0, 1.0).unwrap();
        assert_eq!(value_weighted(&p, Coalition::from_members([1, 2, 3])), 0.0);
        assert_eq!(value_weighted(&p, Coalition::full(4)), 16.0);
    }

    #[test]
    fn closed_weighted_example() {
        let p = WeightedCssParams::new(vec![1.0, 1.0, 2.0], 1.0, 1.0).unwrap();
        let r = closed_weighted(&p).unwrap();
        let crowd: Vec<f64> = (0..3).map(|i| r.crowd_payoffs.get(i).unwrap()).collect();
        assert!(close(crowd[0], 2.5) && close(crowd[1], 2.5) && close(crowd[2], 14.0 / 3.0));
        assert!(close(r.founder_payoff, 19.0 / 3.0));
        assert!(close(r.founder_share.unwrap(), 19.0 / 48.0));
        let f2 = 2.0 * (0.25f64).powi(2) + 0.25;
        assert!(close(r.asymptote.unwrap().founder_share, 1.0 / 3.0 + f2 / 6.0));
    }

    #[test]
    fn closed_weighted_single_member_splits_evenly() {
        let r = closed_weighted(&WeightedCssParams::new(vec![3.0], 0.5, 2.0).unwrap()).unwrap();
        assert!(close(r.founder_payoff, r.grand_value / 2.0));
        assert!(close(r.crowd_total(), r.grand_value / 2.0));
    }

    #[test]
    fn closed_weighted_rejects_other_k() {
        let mut p = WeightedCssParams::new(vec![1.0, 2.0], 1.0, 1.0).unwrap();
        p.k = 3.0;
        assert!(matches!(closed_weighted(&p), Err(Error::Unsupported(_))));
    }

    #[test]
    fn cross_coefficient_is_one_third() {
        assert_eq!(cross_term_coefficient(1), 0.0);
        for n in 2..200 {
            assert!((cross_term_coefficient(n) - 1.0 / 3.0).abs() < 1e-14, "n={n}");
        }
    }

    #[test]
    fn uniform_weights_approach_one_third() {
        let p = WeightedCssParams::new(vec![1.0; 600], 1.3, 1.0).unwrap();
        let r = closed_weighted(&p).unwrap();
        assert!(close(r.founder_share.unwrap(), 1.0 / 3.0 + 1.0 / (6.0 * 600.0)));
    }

    #[test]
    fn profit_examples() {
        let p = ProfitCssParams::new(3, 2.0, 1.0, 1.0, 0.0).unwrap();
        assert_eq!(value_profit(&p, Coalition::full(4)), 6.0);
        assert_eq!(value_profit(&p, Coalition::singleton(0)), 0.0);
        let r = closed_profit(&p).unwrap();
        assert!(close(r.founder_payoff, 2.0));
        assert!(close(r.crowd_total(), 4.0));
        assert!(close(r.ratio.unwrap(), 0.5));
    }

    #[test]
    fn cost_free_profit_matches_single() {
        let s = closed_single(&SingleCssParams::new(9, 3.0, 1.5).unwrap()).unwrap();
        let p = closed_profit(&ProfitCssParams::new(9, 3.0, 1.5, 0.0, 0.0).unwrap()).unwrap();
        assert_eq!(s.founder_payoff, p.founder_payoff);
        assert_eq!(s.crowd_payoffs, p.crowd_payoffs);
    }

    #[test]
    fn linear_profit_splits_evenly() {
        for (kg, ku) in [(0.1, 0.0), (0.3, 0.2), (0.0, 0.5)] {
            let r = closed_profit(&ProfitCssParams::new(40, 1.0, 1.0, kg, ku).unwrap()).unwrap();
            assert!(close(r.founder_share.unwrap(), 0.5));
            assert!(close(r.asymptote.unwrap().founder_share, 0.5));
        }
    }

    #[test]
    fn negative_profit_is_degenerate() {
        let r = closed_profit(&ProfitCssParams::new(2, 2.0, 1.0, 5.0, 0.0).unwrap()).unwrap();
        assert!(r.degenerate);
        assert!(r.founder_share.is_none() && r.ratio.is_none() && r.asymptote.is_none());
        assert!(r.grand_value < 0.0);
    }

    #[test]
    fn sweep_single_metcalfe() {
        let model = CssModel::Single(SingleCssParams::new(1, 2.0, 1.0).unwrap());
        let sweep = share_sweep(&model, &[10, 100, 1000]).unwrap();
        let shares: Vec<f64> = sweep.rows.iter().map(|r| r.founder_share.unwrap()).collect();
        for (s, n) in shares.iter().zip([10.0, 100.0, 1000.0]) {
            assert!(close(*s, (2.0 * n + 1.0) / (6.0 * n)));
        }
        assert!(sweep.monotone);
        assert!(close(sweep.limit.founder_share, 1.0 / 3.0));
    }

    #[test]
    fn sweep_linear_is_constant() {
        let model = CssModel::Single(SingleCssParams::new(1, 1.0, 1.0).unwrap());
        let sweep = share_sweep(&model, &[1, 5, 50, 500]).unwrap();
        assert!(sweep.rows.iter().all(|r| r.founder_share == Some(0.5)));
    }

    #[test]
    fn sweep_flags_degenerate_profit_rows() {
        let model = CssModel::Profit(ProfitCssParams::new(1, 2.0, 1.0, 10.0, 0.0).unwrap());
        let sweep = share_sweep(&model, &[2, 5, 10, 50]).unwrap();
        let flags: Vec<bool> = sweep.rows.iter().map(|r| r.degenerate).collect();
        assert_eq!(flags, vec![true, true, true, false]);
    }

    #[test]
    fn sweep_rejects_bad_sizes() {
        let model = CssModel::Single(SingleCssParams::new(1, 2.0, 1.0).unwrap());
        assert!(share_sweep(&model, &[]).is_err());
        assert!(share_sweep(&model, &[10, 5]).is_err());
    }

    #[test]
    fn weighted_sweep_tiles_pattern() {
        let p = WeightedCssParams::new(vec![1.0, 3.0], 1.0, 1.0).unwrap();
        match CssModel::Weighted(p).resized(5) {
            CssModel::Weighted(q) => assert_eq!(q.weights, vec![1.0, 3.0, 1.0, 3.0, 1.0]),
            _ => unreachable!(),
        }
    }
}
