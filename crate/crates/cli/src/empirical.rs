//! Observed payout shares checked against the `[1/2, 2/3]` band.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::CliError;

pub const BUNDLED_TABLE: &str = include_str!("../data/revenue.json");
pub const DEFAULT_ENTITY: &str = "YouTube";
pub const BAND: (f64, f64) = (0.5, 2.0 / 3.0);

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RevenueRecord {
    pub year: i32,
    pub entity: String,
    /// Billions USD.
    pub revenue: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub payout: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RevenueTable {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unit: Option<String>,
    pub records: Vec<RevenueRecord>,
}

impl RevenueTable {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let table: RevenueTable =
            serde_json::from_str(text).map_err(|e| CliError::Parse(format!("revenue records: {e}")))?;
        table.validate()?;
        Ok(table)
    }

    pub fn bundled() -> Self {
        Self::parse(BUNDLED_TABLE).expect("bundled table is valid")
    }

    fn validate(&self) -> Result<(), CliError> {
        let mut problems = Vec::new();
        let mut seen = BTreeSet::new();
        for (i, r) in self.records.iter().enumerate() {
            let path = format!("$.records[{i}]");
            if !(r.revenue.is_finite() && r.revenue > 0.0) {
                problems.push(violation(&path, "revenue must be > 0"));
            }
            if let Some(p) = r.payout {
                if !(p.is_finite() && p >= 0.0 && p <= r.revenue) {
                    problems.push(violation(&path, "payout must lie in [0, revenue]"));
                }
            }
            if !seen.insert((r.entity.clone(), r.year)) {
                problems.push(violation(
                    &path,
                    format!("duplicate record for {} {}", r.entity, r.year),
                ));
            }
        }
        if problems.is_empty() {
            Ok(())
        } else {
            Err(CliError::Validation(problems))
        }
    }

    fn find(&self, entity: &str, year: i32) -> Option<&RevenueRecord> {
        self.records.iter().find(|r| r.entity == entity && r.year == year)
    }
}

fn violation(path: &str, message: impl Into<String>) -> crate::error::Violation {
    crate::error::Violation {
        path: path.to_string(),
        message: message.into(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum Half {
    H1,
    H2,
}

/// A full fiscal year or one half of it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Span {
    pub year: i32,
    pub half: Option<Half>,
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.half {
            None => write!(f, "{}", self.year),
            Some(h) => write!(f, "{}{:?}", self.year, h),
        }
    }
}

impl Span {
    fn fraction(&self) -> f64 {
        if self.half.is_some() {
            0.5
        } else {
            1.0
        }
    }
}

fn parse_point(text: &str) -> Option<Span> {
    let t = text.trim();
    let (year, half) = match t.len().checked_sub(2).map(|i| t.split_at(i)) {
        Some((y, "H1")) => (y, Some(Half::H1)),
        Some((y, "H2")) => (y, Some(Half::H2)),
        _ => (t, None),
    };
    Some(Span {
        year: year.parse().ok()?,
        half,
    })
}

/// Parses windows such as `2018H2..2021H1`, `2019..2020`, or `2019,2020H1`.
///
/// Ranges expand to whole years where both halves are covered.
pub fn parse_window(text: &str) -> Result<Vec<Span>, CliError> {
    let bad = |part: &str| CliError::Usage(format!("invalid window `{part}`; expected e.g. 2018H2..2021H1"));
    let mut halves: Vec<(i32, Half)> = Vec::new();
    for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (start, end) = match part.split_once("..") {
            Some((a, b)) => (
                parse_point(a).ok_or_else(|| bad(part))?,
                parse_point(b).ok_or_else(|| bad(part))?,
            ),
            None => {
                let p = parse_point(part).ok_or_else(|| bad(part))?;
                (p, p)
            }
        };
        let first = (start.year, start.half.unwrap_or(Half::H1));
        let last = (end.year, end.half.unwrap_or(Half::H2));
        if first > last {
            return Err(bad(part));
        }
        let mut cur = first;
        loop {
            halves.push(cur);
            if cur == last {
                break;
            }
            cur = match cur.1 {
                Half::H1 => (cur.0, Half::H2),
                Half::H2 => (cur.0 + 1, Half::H1),
            };
        }
    }
    if halves.is_empty() {
        return Err(CliError::Usage("window must name at least one year".into()));
    }
    halves.sort_unstable();
    if halves.windows(2).any(|w| w[0] == w[1]) {
        return Err(CliError::Usage(format!("window `{text}` covers a half-year twice")));
    }
    let mut spans = Vec::new();
    let mut i = 0;
    while i < halves.len() {
        let (year, half) = halves[i];
        if half == Half::H1 && halves.get(i + 1) == Some(&(year, Half::H2)) {
            spans.push(Span { year, half: None });
            i += 2;
        } else {
            spans.push(Span { year, half: Some(half) });
            i += 1;
        }
    }
    Ok(spans)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Bound {
    Lower,
    Upper,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BandCheck {
    pub share: f64,
    pub lower: f64,
    pub upper: f64,
    pub inside: bool,
    pub nearest_bound: Bound,
    /// Distance from `share` to `nearest_bound`.
    pub distance: f64,
}

pub fn band_check(share: f64) -> BandCheck {
    let (lower, upper) = BAND;
    let (dl, du) = ((share - lower).abs(), (share - upper).abs());
    let (nearest_bound, distance) = if dl <= du {
        (Bound::Lower, dl)
    } else {
        (Bound::Upper, du)
    };
    BandCheck {
        share,
        lower,
        upper,
        inside: (lower..=upper).contains(&share),
        nearest_bound,
        distance,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpanRevenue {
    pub span: String,
    pub revenue: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EmpiricalReport {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub entity: Option<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub spans: Vec<SpanRevenue>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub payout: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub denominator: Option<f64>,
    pub band: BandCheck,
}

impl EmpiricalReport {
    /// A share observed directly, without revenue records.
    pub fn from_share(share: f64) -> Result<Self, CliError> {
        if !share.is_finite() {
            return Err(CliError::Usage(format!("share must be finite, got {share}")));
        }
        Ok(EmpiricalReport {
            entity: None,
            spans: Vec::new(),
            payout: None,
            denominator: None,
            band: band_check(share),
        })
    }
}

/// `payout / Σ revenue` over `window`. Without an explicit payout the
/// records' own payouts are summed over the same spans.
pub fn empirical(
    table: &RevenueTable,
    entity: &str,
    payout: Option<f64>,
    window: &[Span],
) -> Result<EmpiricalReport, CliError> {
    let mut spans = Vec::with_capacity(window.len());
    let mut denominator = 0.0;
    let mut recorded_payout = Some(0.0);
    for span in window {
        let r = table.find(entity, span.year).ok_or_else(|| {
            CliError::Usage(format!(
                "no {entity} record for year {} in the revenue table",
                span.year
            ))
        })?;
        let revenue = r.revenue * span.fraction();
        denominator += revenue;
        recorded_payout = recorded_payout.zip(r.payout).map(|(acc, p)| acc + p * span.fraction());
        spans.push(SpanRevenue {
            span: span.to_string(),
            revenue,
        });
    }
    let payout = match payout.or(recorded_payout) {
        Some(p) if p.is_finite() && p >= 0.0 => p,
        Some(p) => return Err(CliError::Usage(format!("payout must be a finite amount >= 0, got {p}"))),
        None => {
            return Err(CliError::Usage(
                "no payout given and the records carry none for this window".into(),
            ))
        }
    };
    if denominator == 0.0 {
        return Err(CliError::Usage("windowed revenue sums to zero".into()));
    }
    Ok(EmpiricalReport {
        entity: Some(entity.to_string()),
        spans,
        payout: Some(payout),
        denominator: Some(denominator),
        band: band_check(payout / denominator),
    })
}
