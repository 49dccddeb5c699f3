//! Geographic crowd-sourced systems.
//!
//! `m` agents each cover a region ("disk"); users covered by several disks
//! are split equally among them. Disk ids are 1-based in census inputs
//! (placements and region tables) and 0-based everywhere else, so agent `i`
//! of the census is player `i` of the agent game and player `i + 1` of the
//! founder game (founder at index 0).

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::coalition::{Coalition, PlayerTag, MAX_PLAYERS};
use crate::error::{invalid, Error, Result};
use crate::game::{Allocation, CoalitionGame, Method};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GeoModel {
    #[serde(rename = "lin")]
    Linear,
    #[serde(rename = "met")]
    Metcalfe,
}

impl fmt::Display for GeoModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GeoModel::Linear => "lin",
            GeoModel::Metcalfe => "met",
        })
    }
}

/// Counts `d_S` of users covered by exactly the disks in `S`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiskCensus {
    m: usize,
    counts: BTreeMap<Coalition, u64>,
    uncovered: u64,
}

fn region_key(disks: &[usize], m: usize) -> Result<Coalition> {
    let mut key = Coalition::empty();
    for &d in disks {
        if d == 0 || d > m {
            return Err(Error::DiskOutOfRange { disk: d, m });
        }
        key = key.with(d - 1);
    }
    Ok(key)
}

/// Sorted comma-joined 1-based disk ids, e.g. `"1,2"`.
pub fn region_label(key: Coalition) -> String {
    key.members().map(|i| (i + 1).to_string()).collect::<Vec<_>>().join(",")
}

impl DiskCensus {
    fn check_m(m: usize) -> Result<()> {
        if m == 0 {
            return Err(invalid("m", "need at least one agent"));
        }
        if m > MAX_PLAYERS {
            return Err(Error::TooManyPlayers {
                players: m,
                max: MAX_PLAYERS,
            });
        }
        Ok(())
    }

    /// Census from a direct `d_S` table; keys are 1-based disk id lists.
    pub fn from_table<I>(m: usize, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<usize>, u64)>,
    {
        Self::check_m(m)?;
        let mut counts = BTreeMap::new();
        for (disks, d) in entries {
            let key = region_key(&disks, m)?;
            if key.is_empty() {
                return Err(invalid("d", "region keys must name at least one disk"));
            }
            if counts.insert(key, d).is_some() {
                return Err(Error::DuplicateRegion(region_label(key)));
            }
        }
        counts.retain(|_, d| *d > 0);
        Ok(DiskCensus {
            m,
            counts,
            uncovered: 0,
        })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn count(&self, region: Coalition) -> u64 {
        self.counts.get(&region).copied().unwrap_or(0)
    }

    /// Nonzero regions in ascending key order.
    pub fn regions(&self) -> impl Iterator<Item = (Coalition, u64)> + '_ {
        self.counts.iter().map(|(&k, &d)| (k, d))
    }

    /// Users in no disk; excluded from every count.
    pub fn uncovered(&self) -> u64 {
        self.uncovered
    }

    pub fn total_users(&self) -> u64 {
        self.counts.values().sum()
    }

    /// Equal-split user mass of every agent.
    pub fn effective_sizes(&self) -> Vec<f64> {
        let mut sizes = vec![0.0; self.m];
        for (&key, &d) in &self.counts {
            let share = d as f64 / key.len() as f64;
            for i in key.members() {
                sizes[i] += share;
            }
        }
        sizes
    }
}

/// Builds the census from the disk memberships of each user.
pub fn region_census(placements: &[Vec<usize>], m: usize) -> Result<DiskCensus> {
    DiskCensus::check_m(m)?;
    let mut counts = BTreeMap::new();
    let mut uncovered = 0u64;
    for disks in placements {
        let key = region_key(disks, m)?;
        if key.is_empty() {
            uncovered += 1;
        } else {
            *counts.entry(key).or_insert(0u64) += 1;
        }
    }
    Ok(DiskCensus { m, counts, uncovered })
}

/// `n_i = sum_{S containing i} d_S / |S|` for agent `i` (0-based).
pub fn effective_size(census: &DiskCensus, agent: usize) -> Result<f64> {
    if agent >= census.m {
        return Err(Error::UnknownPlayer {
            player: agent,
            players: census.m,
        });
    }
    Ok(census
        .regions()
        .filter(|(key, _)| key.contains(agent))
        .map(|(key, d)| d as f64 / key.len() as f64)
        .sum())
}

fn mass(sizes: &[f64], s: Coalition) -> f64 {
    s.members().map(|i| sizes[i]).sum()
}

pub fn nu_lin(census: &DiskCensus, s: Coalition, rho: f64) -> f64 {
    rho * mass(&census.effective_sizes(), s)
}

pub fn nu_met(census: &DiskCensus, s: Coalition, rho: f64) -> Result<f64> {
    check_rho(rho)?;
    let lin = nu_lin(census, s, rho);
    Ok(lin * lin / rho)
}

fn check_rho(rho: f64) -> Result<()> {
    if rho.is_finite() && rho > 0.0 {
        Ok(())
    } else {
        Err(invalid("rho", format!("value scale must be positive, got {rho}")))
    }
}

fn model_value(model: GeoModel, rho: f64, total: f64) -> f64 {
    match model {
        GeoModel::Linear => rho * total,
        GeoModel::Metcalfe => rho * total * total,
    }
}

pub fn agent_game(census: &DiskCensus, rho: f64, model: GeoModel) -> Result<CoalitionGame> {
    check_rho(rho)?;
    let sizes = census.effective_sizes();
    CoalitionGame::uniform(format!("geo_{model}"), census.m, PlayerTag::CssVertex, move |s| {
        model_value(model, rho, mass(&sizes, s))
    })
}

/// `lin: phi_i = rho n_i`; `met: phi_i = rho n_i sum_j n_j`.
pub fn geo_shapley(census: &DiskCensus, rho: f64, model: GeoModel) -> Result<Allocation> {
    check_rho(rho)?;
    let sizes = census.effective_sizes();
    let total: f64 = sizes.iter().sum();
    let payoffs = sizes
        .iter()
        .map(|&n| match model {
            GeoModel::Linear => rho * n,
            GeoModel::Metcalfe => rho * n * total,
        })
        .collect();
    Ok(Allocation::new(
        payoffs,
        model_value(model, rho, total),
        Method::ClosedForm,
    ))
}

/// Founder-gated value: zero unless the founder (index 0) is present,
/// otherwise the agent value of `s - {g}`.
pub fn geo_founder_value(census: &DiskCensus, rho: f64, model: GeoModel, s: Coalition) -> Result<f64> {
    check_rho(rho)?;
    if !s.contains(0) {
        return Ok(0.0);
    }
    let sizes = census.effective_sizes();
    let total: f64 = s.without(0).members().map(|i| sizes[i - 1]).sum();
    Ok(model_value(model, rho, total))
}

pub fn founder_game(census: &DiskCensus, rho: f64, model: GeoModel) -> Result<CoalitionGame> {
    check_rho(rho)?;
    if census.m + 1 > MAX_PLAYERS {
        return Err(Error::TooManyPlayers {
            players: census.m + 1,
            max: MAX_PLAYERS,
        });
    }
    let sizes = census.effective_sizes();
    let mut tags = vec![PlayerTag::CssVertex; census.m + 1];
    tags[0] = PlayerTag::Founder;
    CoalitionGame::new(format!("geo_founder_{model}"), tags, move |s| {
        if !s.contains(0) {
            return 0.0;
        }
        let total: f64 = s.without(0).members().map(|i| sizes[i - 1]).sum();
        model_value(model, rho, total)
    })
}

/// Founder allocation, founder first:
///
/// * lin: `phi_g = rho sum n_i / 2`, `phi_i = rho n_i / 2`;
/// * met: `phi_g = rho ((sum n_i)^2 / 3 + sum n_i^2 / 6)`,
///   `phi_i = rho (2 (sum n_j) n_i / 3 - n_i^2 / 6)`.
pub fn geo_founder_shapley(census: &DiskCensus, rho: f64, model: GeoModel) -> Result<Allocation> {
    founder_split(&census.effective_sizes(), rho, model)
}

/// [`geo_founder_shapley`] from effective sizes alone.
pub fn founder_split(sizes: &[f64], rho: f64, model: GeoModel) -> Result<Allocation> {
    check_rho(rho)?;
    let total: f64 = sizes.iter().sum();
    let squares: f64 = sizes.iter().map(|n| n * n).sum();
    let mut payoffs = Vec::with_capacity(sizes.len() + 1);
    match model {
        GeoModel::Linear => {
            payoffs.push(rho * total / 2.0);
            payoffs.extend(sizes.iter().map(|n| rho * n / 2.0));
        }
        GeoModel::Metcalfe => {
            payoffs.push(rho * (total * total / 3.0 + squares / 6.0));
            payoffs.extend(sizes.iter().map(|n| rho * (2.0 * total * n / 3.0 - n * n / 6.0)));
        }
    }
    Ok(Allocation::new(
        payoffs,
        model_value(model, rho, total),
        Method::ClosedForm,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn five_disk_census() -> DiskCensus {
        // d_1..d_5, d_12, d_13, d_23, d_123, d_45
        DiskCensus::from_table(
            5,
            vec![
                (vec![1], 6),
                (vec![2], 5),
                (vec![3], 7),
                (vec![4], 3),
                (vec![5], 2),
                (vec![1, 2], 4),
                (vec![1, 3], 2),
                (vec![2, 3], 8),
                (vec![1, 2, 3], 3),
                (vec![4, 5], 10),
            ],
        )
        .unwrap()
    }

    #[test]
    fn census_from_placements() {
        let placements = vec![vec![1], vec![2], vec![2], vec![1]];
        let c = region_census(&placements, 3).unwrap();
        assert!(c.regions().all(|(k, _)| k.len() == 1));
        assert_eq!(c.total_users(), 4);
        let empty = region_census(&[], 4).unwrap();
        assert_eq!(empty.total_users(), 0);
        assert!(empty.effective_sizes().iter().all(|&n| n == 0.0));
    }

    #[test]
    fn census_drops_uncovered_and_dedups() {
        let c = region_census(&[vec![], vec![2, 1, 2], vec![1, 2]], 2).unwrap();
        assert_eq!(c.uncovered(), 1);
        assert_eq!(c.count(Coalition::from_members([0, 1])), 2);
        assert_eq!(
            region_census(&[vec![3]], 2).unwrap_err(),
            Error::DiskOutOfRange { disk: 3, m: 2 }
        );
    }

    #[test]
    fn table_rejects_duplicates_and_empty_keys() {
        assert!(matches!(
            DiskCensus::from_table(2, vec![(vec![1, 2], 1), (vec![2, 1], 3)]),
            Err(Error::DuplicateRegion(_))
        ));
        assert!(DiskCensus::from_table(2, vec![(vec![], 1)]).is_err());
    }

    #[test]
    fn effective_size_examples() {
        let c = DiskCensus::from_table(
            3,
            vec![(vec![1], 6), (vec![1, 2], 4), (vec![1, 3], 2), (vec![1, 2, 3], 3)],
        )
        .unwrap();
        assert!((effective_size(&c, 0).unwrap() - 10.0).abs() < 1e-12);
        let overlap = DiskCensus::from_table(2, vec![(vec![1, 2], 10)]).unwrap();
        assert_eq!(overlap.effective_sizes(), vec![5.0, 5.0]);
        assert!(effective_size(&c, 3).is_err());
    }

    #[test]
    fn five_disk_census_worked_example() {
        let c = five_disk_census();
        let (d2, d3, d12, d13, d23, d123) = (5.0, 7.0, 4.0, 2.0, 8.0, 3.0);
        let rho = 1.7;
        let expect = rho * (d2 + d3 + (d12 + d13) / 2.0 + d23 + 2.0 * d123 / 3.0);
        let s = Coalition::from_members([1, 2]);
        assert!((nu_lin(&c, s, rho) - expect).abs() < 1e-12);
        assert!((nu_met(&c, s, rho).unwrap() - expect * expect / rho).abs() < 1e-9);
        assert_eq!(nu_lin(&c, Coalition::empty(), rho), 0.0);
        assert!((nu_lin(&c, Coalition::full(5), rho) - rho * c.total_users() as f64).abs() < 1e-9);
        assert!(nu_met(&c, s, 0.0).is_err());
    }

    #[test]
    fn geo_shapley_examples() {
        let c = DiskCensus::from_table(2, vec![(vec![1], 10), (vec![2], 6)]).unwrap();
        let met = geo_shapley(&c, 1.0, GeoModel::Metcalfe).unwrap();
        assert_eq!(met.payoffs, vec![160.0, 96.0]);
        assert_eq!(met.grand_value, 256.0);
        let lin = geo_shapley(&c, 2.0, GeoModel::Linear).unwrap();
        assert_eq!(lin.payoffs, vec![20.0, 12.0]);
        let one = DiskCensus::from_table(1, vec![(vec![1], 9)]).unwrap();
        assert_eq!(geo_shapley(&one, 1.0, GeoModel::Metcalfe).unwrap().payoffs, vec![81.0]);
    }

    #[test]
    fn founder_value_gating() {
        let c = five_disk_census();
        let full = Coalition::full(6);
        assert_eq!(
            geo_founder_value(&c, 1.0, GeoModel::Linear, full.without(0)).unwrap(),
            0.0
        );
        assert_eq!(
            geo_founder_value(&c, 1.0, GeoModel::Metcalfe, Coalition::singleton(0)).unwrap(),
            0.0
        );
        let agents = Coalition::full(5);
        assert!(
            (geo_founder_value(&c, 1.0, GeoModel::Metcalfe, full).unwrap() - nu_met(&c, agents, 1.0).unwrap()).abs()
                < 1e-9
        );
    }

    #[test]
    fn founder_shapley_examples() {
        let c = DiskCensus::from_table(2, vec![(vec![1], 10), (vec![2], 6)]).unwrap();
        let lin = geo_founder_shapley(&c, 1.0, GeoModel::Linear).unwrap();
        assert_eq!(lin.payoffs, vec![8.0, 5.0, 3.0]);
        let one = DiskCensus::from_table(1, vec![(vec![1], 12)]).unwrap();
        let met = geo_founder_shapley(&one, 1.0, GeoModel::Metcalfe).unwrap();
        assert!((met.payoffs[0] - 72.0).abs() < 1e-12);
        assert!((met.payoffs[1] - 72.0).abs() < 1e-12);
    }
}
