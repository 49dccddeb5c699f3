//! Checkers for the fairness axioms (efficiency, symmetry, null player,
//! linearity) and for supermodularity.
//!
//! Null players and interchangeable pairs are detected exhaustively from the
//! tabulated characteristic function, so both checks share the exact-engine
//! roster cap.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::game::{Allocation, CoalitionGame};
use crate::shapley::{check_cap, shapley_exact_with, value_table, ExactConfig, DEFAULT_EXACT_CAP};

pub const DEFAULT_SUPERMODULAR_CAP: usize = 14;

/// Payoff tolerance for the symmetry and null-player axioms, relative to
/// `max(1, |v(N)|)`.
pub const AXIOM_TOLERANCE: f64 = 1e-9;

/// Relative slack used when deciding whether two coalition values coincide.
const DETECTION_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AxiomCheck {
    pub passed: bool,
    /// Largest observed violation measure.
    pub worst: f64,
    pub tolerance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AxiomReport {
    pub efficiency: AxiomCheck,
    pub null_player: AxiomCheck,
    pub null_players: Vec<usize>,
    pub symmetry: AxiomCheck,
    pub symmetric_pairs: Vec<(usize, usize)>,
}

impl AxiomReport {
    pub fn all_passed(&self) -> bool {
        self.efficiency.passed && self.null_player.passed && self.symmetry.passed
    }
}

fn table_scale(table: &[f64]) -> f64 {
    table.iter().fold(1.0f64, |m, v| m.max(v.abs()))
}

fn is_null(table: &[f64], i: usize, tol: f64) -> bool {
    let bit = 1usize << i;
    (0..table.len())
        .filter(|s| s & bit == 0)
        .all(|s| (table[s | bit] - table[s]).abs() <= tol)
}

fn interchangeable(table: &[f64], i: usize, j: usize, tol: f64) -> bool {
    let (bi, bj) = (1usize << i, 1usize << j);
    (0..table.len())
        .filter(|s| s & (bi | bj) == 0)
        .all(|s| (table[s | bi] - table[s | bj]).abs() <= tol)
}

/// Null players and interchangeable pairs, in ascending order.
pub type Structure = (Vec<usize>, Vec<(usize, usize)>);

/// Detected null players and interchangeable pairs of `game`.
pub fn detect_structure(game: &CoalitionGame) -> Result<Structure> {
    check_cap(game.n_players(), DEFAULT_EXACT_CAP, "axiom-check")?;
    let table = value_table(game, true);
    Ok(structure_from_table(&table, game.n_players()))
}

fn structure_from_table(table: &[f64], n: usize) -> (Vec<usize>, Vec<(usize, usize)>) {
    let tol = DETECTION_TOLERANCE * table_scale(table);
    let nulls = (0..n).filter(|&i| is_null(table, i, tol)).collect();

    // Interchangeability is an equivalence relation; test each player
    // against one representative per class.
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for i in 0..n {
        match classes
            .iter_mut()
            .find(|class| interchangeable(table, class[0], i, tol))
        {
            Some(class) => class.push(i),
            None => classes.push(vec![i]),
        }
    }
    let mut pairs = Vec::new();
    for class in &classes {
        for (a, &i) in class.iter().enumerate() {
            for &j in &class[a + 1..] {
                pairs.push((i, j));
            }
        }
    }
    pairs.sort_unstable();
    (nulls, pairs)
}

pub fn check_axioms(game: &CoalitionGame, alloc: &Allocation) -> Result<AxiomReport> {
    let n = game.n_players();
    if alloc.n_players() != n {
        return Err(Error::RosterMismatch {
            left: n,
            right: alloc.n_players(),
        });
    }
    check_cap(n, DEFAULT_EXACT_CAP, "axiom-check")?;
    let table = value_table(game, true);
    let grand = table[table.len() - 1];
    let (null_players, symmetric_pairs) = structure_from_table(&table, n);

    let eff_gap = (alloc.total() - grand).abs();
    let eff_tol = Allocation {
        grand_value: grand,
        ..alloc.clone()
    }
    .efficiency_tolerance();

    let base = AXIOM_TOLERANCE * grand.abs().max(1.0);
    let se = |i: usize| alloc.stderr.as_ref().map_or(0.0, |s| 3.0 * s[i]);

    let mut null_ok = true;
    let mut null_worst = 0.0f64;
    let mut null_tol = base;
    for &i in &null_players {
        let tol = base + se(i);
        let dev = alloc.payoffs[i].abs();
        null_worst = null_worst.max(dev);
        null_tol = null_tol.max(tol);
        null_ok &= dev <= tol;
    }

    let mut sym_ok = true;
    let mut sym_worst = 0.0f64;
    let mut sym_tol = base;
    for &(i, j) in &symmetric_pairs {
        let tol = base + se(i) + se(j);
        let dev = (alloc.payoffs[i] - alloc.payoffs[j]).abs();
        sym_worst = sym_worst.max(dev);
        sym_tol = sym_tol.max(tol);
        sym_ok &= dev <= tol;
    }

    Ok(AxiomReport {
        efficiency: AxiomCheck {
            passed: eff_gap <= eff_tol,
            worst: eff_gap,
            tolerance: eff_tol,
        },
        null_player: AxiomCheck {
            passed: null_ok,
            worst: null_worst,
            tolerance: null_tol,
        },
        null_players,
        symmetry: AxiomCheck {
            passed: sym_ok,
            worst: sym_worst,
            tolerance: sym_tol,
        },
        symmetric_pairs,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LinearityReport {
    pub passed: bool,
    pub max_deviation: f64,
    pub tolerance: f64,
}

/// Compares `exact(a + b)` against `exact(a) + exact(b)` player by player.
pub fn check_linearity(game_a: &CoalitionGame, game_b: &CoalitionGame) -> Result<LinearityReport> {
    let sum = game_a.sum(game_b)?;
    let config = ExactConfig::default();
    let joint = shapley_exact_with(&sum, &config)?;
    let left = shapley_exact_with(game_a, &config)?;
    let right = shapley_exact_with(game_b, &config)?;
    let max_deviation = joint
        .payoffs
        .iter()
        .zip(left.payoffs.iter().zip(&right.payoffs))
        .map(|(j, (a, b))| (j - (a + b)).abs())
        .fold(0.0, f64::max);
    let scale = joint
        .grand_value
        .abs()
        .max(left.grand_value.abs())
        .max(right.grand_value.abs())
        .max(1.0);
    let tolerance = AXIOM_TOLERANCE * scale;
    Ok(LinearityReport {
        passed: max_deviation <= tolerance,
        max_deviation,
        tolerance,
    })
}

pub fn is_supermodular(game: &CoalitionGame) -> Result<bool> {
    is_supermodular_with(game, DEFAULT_SUPERMODULAR_CAP)
}

/// Supermodularity through the pairwise condition
/// `v(S+i+j) - v(S+j) >= v(S+i) - v(S)` for all `S` and `i != j` outside `S`,
/// which is equivalent to increasing marginals along every chain.
pub fn is_supermodular_with(game: &CoalitionGame, cap: usize) -> Result<bool> {
    let n = game.n_players();
    check_cap(n, cap, "supermodularity-check")?;
    let table = value_table(game, true);
    let tol = DETECTION_TOLERANCE * table_scale(&table);
    for s in 0..table.len() {
        for i in 0..n {
            let bi = 1usize << i;
            if s & bi != 0 {
                continue;
            }
            let gain = table[s | bi] - table[s];
            for j in (i + 1)..n {
                let bj = 1usize << j;
                if s & bj != 0 {
                    continue;
                }
                if table[s | bi | bj] - table[s | bj] < gain - tol {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coalition::PlayerTag;
    use crate::shapley::{anonymous_game, shapley_exact};

    fn metcalfe(n: usize, k: i32) -> CoalitionGame {
        anonymous_game("metcalfe", n, move |s| (s as f64).powi(k)).unwrap()
    }

    #[test]
    fn exact_allocation_passes() {
        let g = metcalfe(5, 2);
        let report = check_axioms(&g, &shapley_exact(&g).unwrap()).unwrap();
        assert!(report.all_passed(), "{report:?}");
        assert!(report.null_players.is_empty());
        // all crowd members are interchangeable: C(5,2) pairs
        assert_eq!(report.symmetric_pairs.len(), 10);
    }

    #[test]
    fn doubled_payoffs_fail_efficiency() {
        let g = metcalfe(4, 2);
        let mut alloc = shapley_exact(&g).unwrap();
        alloc.payoffs.iter_mut().for_each(|p| *p *= 2.0);
        let report = check_axioms(&g, &alloc).unwrap();
        assert!(!report.efficiency.passed);
        assert!(report.symmetry.passed);
    }

    #[test]
    fn detects_null_player() {
        // player 3 never changes the value
        let g = CoalitionGame::uniform("null3", 4, PlayerTag::Crowd, |s| {
            let core = s.without(3);
            (core.len() * core.len()) as f64
        })
        .unwrap();
        let alloc = shapley_exact(&g).unwrap();
        let report = check_axioms(&g, &alloc).unwrap();
        assert_eq!(report.null_players, vec![3]);
        assert!(report.null_player.passed);
        assert!(alloc.payoffs[3].abs() < 1e-12);
    }

    #[test]
    fn asymmetric_payoffs_fail_symmetry() {
        let g = metcalfe(3, 1);
        let mut alloc = shapley_exact(&g).unwrap();
        alloc.payoffs[1] += 0.25;
        alloc.payoffs[2] -= 0.25;
        let report = check_axioms(&g, &alloc).unwrap();
        assert!(report.efficiency.passed);
        assert!(!report.symmetry.passed);
    }

    #[test]
    fn linearity_with_zero_game() {
        let a = metcalfe(4, 3);
        let zero = CoalitionGame::uniform("zero", 5, PlayerTag::Crowd, |_| 0.0).unwrap();
        let report = check_linearity(&a, &zero).unwrap();
        assert!(report.passed);
        assert_eq!(report.max_deviation, 0.0);
    }

    #[test]
    fn linearity_roster_mismatch() {
        assert!(matches!(
            check_linearity(&metcalfe(3, 1), &metcalfe(4, 1)),
            Err(Error::RosterMismatch { .. })
        ));
    }

    #[test]
    fn supermodularity_examples() {
        assert!(is_supermodular(&metcalfe(5, 2)).unwrap());
        assert!(is_supermodular(&metcalfe(5, 1)).unwrap());
        let concave = CoalitionGame::uniform("sqrt", 4, PlayerTag::Crowd, |s| (s.len() as f64).sqrt()).unwrap();
        assert!(!is_supermodular(&concave).unwrap());
    }

    #[test]
    fn supermodularity_cap() {
        let g = CoalitionGame::uniform("big", 15, PlayerTag::Crowd, |_| 0.0).unwrap();
        assert!(matches!(
            is_supermodular(&g),
            Err(Error::RosterTooLarge { cap: 14, .. })
        ));
        assert!(is_supermodular_with(&g, 15).unwrap());
    }
}
