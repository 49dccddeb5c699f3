//! Shapley value engines.
//!
//! [`shapley_exact`] enumerates every coalition once, caching the
//! characteristic function in a table of `2^n` values, then accumulates each
//! player's weighted marginals in ascending bit-set order. The per-player
//! reduction order is fixed, so parallel and sequential runs are bitwise
//! identical.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::coalition::Coalition;
use crate::error::{invalid, Error, Result};
use crate::game::{Allocation, CoalitionGame, Method};

pub const DEFAULT_EXACT_CAP: usize = 22;

/// Permutations per independently seeded stream in [`shapley_sample`].
const SAMPLE_CHUNK: usize = 1024;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExactConfig {
    pub cap: usize,
    pub parallel: bool,
}

impl Default for ExactConfig {
    fn default() -> Self {
        ExactConfig {
            cap: DEFAULT_EXACT_CAP,
            parallel: true,
        }
    }
}

impl ExactConfig {
    pub fn sequential() -> Self {
        ExactConfig {
            parallel: false,
            ..Self::default()
        }
    }

    pub fn with_cap(cap: usize) -> Self {
        ExactConfig { cap, ..Self::default() }
    }
}

pub fn marginal_value(game: &CoalitionGame, s: Coalition, i: usize) -> Result<f64> {
    let n = game.n_players();
    if i >= n {
        return Err(Error::UnknownPlayer { player: i, players: n });
    }
    if let Some(stray) = s.members().find(|&j| j >= n) {
        return Err(Error::UnknownPlayer {
            player: stray,
            players: n,
        });
    }
    if s.contains(i) {
        return Err(Error::PlayerInCoalition { player: i });
    }
    Ok(game.value(s.with(i)) - game.value(s))
}

/// `w[s] = s! (n-s-1)! / n!` for `s = 0..n`.
pub(crate) fn shapley_weights(n: usize) -> Vec<f64> {
    // w[s] = 1 / (n * C(n-1, s)), with the binomial built up incrementally.
    let mut weights = Vec::with_capacity(n);
    let mut binom = 1.0f64;
    for s in 0..n {
        weights.push(1.0 / (n as f64 * binom));
        binom = binom * (n - 1 - s) as f64 / (s + 1) as f64;
    }
    weights
}

pub(crate) fn check_cap(n: usize, cap: usize, engine: &'static str) -> Result<()> {
    if n > cap {
        Err(Error::RosterTooLarge {
            players: n,
            cap,
            engine,
        })
    } else {
        Ok(())
    }
}

/// Characteristic function tabulated over all `2^n` coalitions, indexed by bits.
pub(crate) fn value_table(game: &CoalitionGame, parallel: bool) -> Vec<f64> {
    let size = 1usize << game.n_players();
    if parallel {
        (0..size)
            .into_par_iter()
            .map(|b| game.value(Coalition::from_bits(b as u64)))
            .collect()
    } else {
        (0..size).map(|b| game.value(Coalition::from_bits(b as u64))).collect()
    }
}

fn player_payoff(table: &[f64], weights: &[f64], i: usize) -> f64 {
    let bit = 1usize << i;
    let mut acc = 0.0;
    for s in 0..table.len() {
        if s & bit == 0 {
            acc += weights[s.count_ones() as usize] * (table[s | bit] - table[s]);
        }
    }
    acc
}

pub fn shapley_exact(game: &CoalitionGame) -> Result<Allocation> {
    shapley_exact_with(game, &ExactConfig::default())
}

pub fn shapley_exact_with(game: &CoalitionGame, config: &ExactConfig) -> Result<Allocation> {
    let n = game.n_players();
    check_cap(n, config.cap, "exact-engine")?;
    let table = value_table(game, config.parallel);
    let weights = shapley_weights(n);
    let payoffs = if config.parallel {
        (0..n)
            .into_par_iter()
            .map(|i| player_payoff(&table, &weights, i))
            .collect()
    } else {
        (0..n).map(|i| player_payoff(&table, &weights, i)).collect()
    };
    Ok(Allocation::new(payoffs, table[table.len() - 1], Method::Exact))
}

/// Founder and per-crowd-member payoffs of an anonymous founder game.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnonymousShapley {
    pub founder: f64,
    pub per_crowd: f64,
}

/// Shapley values of the game with roster `{g, u_1..u_n}` where coalitions
/// without `g` are worth nothing and a coalition with `g` and `s` crowd
/// members is worth `f(s)`.
///
/// The founder receives the plain average of `f(0..=n)`; by symmetry each
/// crowd member gets an equal share of the remainder.
pub fn shapley_anonymous<F: Fn(usize) -> f64>(f: F, n: usize) -> Result<AnonymousShapley> {
    if n == 0 {
        return Err(Error::DegenerateCrowd { founder_payoff: f(0) });
    }
    let founder = (0..=n).map(&f).sum::<f64>() / (n + 1) as f64;
    Ok(AnonymousShapley {
        founder,
        per_crowd: (f(n) - founder) / n as f64,
    })
}

impl AnonymousShapley {
    /// Allocation on the `{g, u_1..u_n}` roster, founder at index 0.
    pub fn to_allocation(self, n: usize, grand_value: f64) -> Allocation {
        let mut payoffs = vec![self.per_crowd; n + 1];
        payoffs[0] = self.founder;
        Allocation::new(payoffs, grand_value, Method::Anonymous)
    }
}

/// Game on `{g, u_1..u_n}` (founder at index 0) valued by `f(|S - {g}|)`.
pub fn anonymous_game<F>(label: impl Into<String>, n: usize, f: F) -> Result<CoalitionGame>
where
    F: Fn(usize) -> f64 + Send + Sync + 'static,
{
    let mut tags = vec![crate::PlayerTag::Crowd; n + 1];
    tags[0] = crate::PlayerTag::Founder;
    CoalitionGame::new(label, tags, move |s| if s.contains(0) { f(s.len() - 1) } else { 0.0 })
}

#[derive(Clone)]
struct Moments {
    count: u64,
    mean: Vec<f64>,
    m2: Vec<f64>,
}

impl Moments {
    fn new(n: usize) -> Self {
        Moments {
            count: 0,
            mean: vec![0.0; n],
            m2: vec![0.0; n],
        }
    }

    fn push(&mut self, sample: &[f64]) {
        self.count += 1;
        let c = self.count as f64;
        for ((mean, m2), &x) in self.mean.iter_mut().zip(self.m2.iter_mut()).zip(sample) {
            let delta = x - *mean;
            *mean += delta / c;
            *m2 += delta * (x - *mean);
        }
    }

    fn merge(mut self, other: &Moments) -> Moments {
        if other.count == 0 {
            return self;
        }
        if self.count == 0 {
            return other.clone();
        }
        let (na, nb) = (self.count as f64, other.count as f64);
        let total = na + nb;
        for i in 0..self.mean.len() {
            let delta = other.mean[i] - self.mean[i];
            self.mean[i] += delta * nb / total;
            self.m2[i] += other.m2[i] + delta * delta * na * nb / total;
        }
        self.count += other.count;
        self
    }
}

fn sample_chunk(game: &CoalitionGame, seed: u64, stream: u64, permutations: usize) -> Moments {
    let n = game.n_players();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    let mut order: Vec<usize> = (0..n).collect();
    let mut marginals = vec![0.0; n];
    let mut moments = Moments::new(n);
    for _ in 0..permutations {
        order.shuffle(&mut rng);
        let mut s = Coalition::empty();
        let mut last = game.value(s);
        for &i in &order {
            s = s.with(i);
            let v = game.value(s);
            marginals[i] = v - last;
            last = v;
        }
        moments.push(&marginals);
    }
    moments
}

/// Monte Carlo estimate of the Shapley value from uniformly random join
/// orders.
///
/// Permutations are drawn in fixed-size chunks, chunk `c` from the ChaCha8
/// stream `c` of `seed`, and merged in chunk order; the result depends only on
/// `(game, n_permutations, seed)`, never on the thread count. With a single
/// permutation the standard error is undefined and reported as 0.
pub fn shapley_sample(game: &CoalitionGame, n_permutations: usize, seed: u64) -> Result<Allocation> {
    if n_permutations == 0 {
        return Err(invalid("n_permutations", "must be at least 1"));
    }
    let n = game.n_players();
    let chunks = n_permutations.div_ceil(SAMPLE_CHUNK);
    let parts: Vec<Moments> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let len = SAMPLE_CHUNK.min(n_permutations - c * SAMPLE_CHUNK);
            sample_chunk(game, seed, c as u64, len)
        })
        .collect();
    let moments = parts.iter().fold(Moments::new(n), |acc, part| acc.merge(part));
    let count = moments.count as f64;
    let stderr = moments
        .m2
        .iter()
        .map(|&m2| {
            if moments.count < 2 {
                0.0
            } else {
                (m2.max(0.0) / (count - 1.0) / count).sqrt()
            }
        })
        .collect();
    Ok(Allocation {
        payoffs: moments.mean,
        grand_value: game.grand_value(),
        method: Method::Sampled,
        stderr: Some(stderr),
    })
}
