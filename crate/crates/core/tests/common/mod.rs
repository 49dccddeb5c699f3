//! Independent reference implementations shared by the integration tests.
#![allow(dead_code)]

use fairshare_core::{Coalition, CoalitionGame};
use num_rational::Ratio;

/// Shapley value as the average marginal contribution over all `n!` join
/// orders, enumerated with Heap's algorithm. Shares nothing with the
/// subset-weighted engine beyond the characteristic function.
pub fn permutation_shapley(game: &CoalitionGame) -> Vec<f64> {
    let n = game.n_players();
    assert!(n <= 9, "permutation oracle is factorial in n");
    let mut order: Vec<usize> = (0..n).collect();
    // Neumaier-compensated running sums; n! terms per player
    let mut totals = vec![0.0; n];
    let mut comp = vec![0.0; n];
    let mut count = 0u64;
    let mut visit = |order: &[usize]| {
        let mut s = Coalition::empty();
        let mut last = game.value(s);
        for &i in order {
            s = s.with(i);
            let v = game.value(s);
            let x = v - last;
            let t = totals[i] + x;
            if totals[i].abs() >= x.abs() {
                comp[i] += (totals[i] - t) + x;
            } else {
                comp[i] += (x - t) + totals[i];
            }
            totals[i] = t;
            last = v;
        }
        count += 1;
    };
    // iterative Heap's algorithm
    let mut c = vec![0usize; n];
    visit(&order);
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                order.swap(0, i);
            } else {
                order.swap(c[i], i);
            }
            visit(&order);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    totals.iter().zip(&comp).map(|(t, c)| (t + c) / count as f64).collect()
}

/// Faulhaber closed forms of `sum_{s=1}^{n} s^k` for `k <= 3`.
pub fn faulhaber(n: u64, k: u32) -> u128 {
    let n = n as u128;
    match k {
        1 => n * (n + 1) / 2,
        2 => n * (n + 1) * (2 * n + 1) / 6,
        3 => (n * (n + 1) / 2).pow(2),
        _ => panic!("faulhaber only tabulated for k <= 3"),
    }
}

/// Founder payoff of the anonymous game `f(s) = s^k` in exact rationals:
/// `(1 / (n + 1)) * sum_{s=0}^{n} s^k`.
pub fn rational_founder_payoff(n: u64, k: u32) -> Ratio<i128> {
    let sum: i128 = (0..=n as i128).map(|s| s.pow(k)).sum();
    Ratio::new(sum, n as i128 + 1)
}

pub fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}

pub fn assert_payoffs_close(got: &[f64], want: &[f64], tol: f64, context: &str) {
    assert_eq!(got.len(), want.len(), "{context}: roster size");
    for (i, (g, w)) in got.iter().zip(want).enumerate() {
        assert!(rel_close(*g, *w, tol), "{context}: player {i}: {g} vs {w}");
    }
}
