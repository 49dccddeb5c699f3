mod common;

use common::{assert_payoffs_close, faulhaber, permutation_shapley, rational_founder_payoff, rel_close};
use fairshare_core::models::{
    closed_profit, closed_single, closed_weighted, power_sum, profit_game, single_game, weighted_game, ProfitCssParams,
    SingleCssParams, WeightedCssParams,
};
use fairshare_core::{is_supermodular, shapley_exact};
use num_traits::ToPrimitive;
use proptest::prelude::*;

#[test]
fn power_sums_match_faulhaber() {
    for k in 1..=3 {
        for n in [0usize, 1, 2, 5, 17, 100, 1000, 12345] {
            assert_eq!(power_sum(n, k), faulhaber(n as u64, k) as f64, "n={n} k={k}");
        }
    }
}

#[test]
fn closed_single_matches_rational_sums() {
    for k in 1..=3u32 {
        for n in [1u64, 2, 3, 10, 50, 1000] {
            let r = closed_single(&SingleCssParams::new(n as usize, k as f64, 1.0).unwrap()).unwrap();
            let exact = rational_founder_payoff(n, k).to_f64().unwrap();
            assert!(rel_close(r.founder_payoff, exact, 1e-14), "n={n} k={k}");
        }
    }
}

#[test]
fn closed_single_matches_exact_engine_on_grid() {
    for n in 1..=10 {
        for k in [1.0, 2.0, 3.0] {
            for rho in [1.0, 2.5] {
                let p = SingleCssParams::new(n, k, rho).unwrap();
                let closed = closed_single(&p).unwrap().to_allocation();
                let exact = shapley_exact(&single_game(&p).unwrap()).unwrap();
                assert_payoffs_close(&closed.payoffs, &exact.payoffs, 1e-9, &format!("n={n} k={k} rho={rho}"));
                assert!(rel_close(closed.grand_value, exact.grand_value, 1e-12));
            }
        }
    }
}

#[test]
fn closed_single_small_case_from_permutations() {
    let p = SingleCssParams::new(3, 2.0, 1.0).unwrap();
    let oracle = permutation_shapley(&single_game(&p).unwrap());
    let r = closed_single(&p).unwrap();
    assert!(rel_close(oracle[0], 3.5, 1e-12));
    assert_payoffs_close(&r.to_allocation().payoffs, &oracle, 1e-12, "n=3 k=2");
}

#[test]
fn weighted_example_from_permutations() {
    let p = WeightedCssParams::new(vec![1.0, 1.0, 2.0], 1.0, 1.0).unwrap();
    let oracle = permutation_shapley(&weighted_game(&p).unwrap());
    assert_payoffs_close(&oracle, &[19.0 / 3.0, 2.5, 2.5, 14.0 / 3.0], 1e-12, "oracle");
    let closed = closed_weighted(&p).unwrap();
    assert_payoffs_close(&closed.to_allocation().payoffs, &oracle, 1e-12, "closed");
    let f = p.work_shares();
    let limit = 1.0 / 3.0 + f.iter().map(|x| x * x).sum::<f64>() / 6.0;
    assert!(rel_close(closed.founder_share.unwrap(), limit, 1e-12));
    assert!(rel_close(limit, 19.0 / 48.0, 1e-12));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn closed_weighted_matches_exact(
        weights in prop::collection::vec(0.05f64..10.0, 1..=8),
        alpha_idx in 0usize..3,
        rho in 0.5f64..3.0,
    ) {
        let alpha = [0.5, 1.0, 2.0][alpha_idx];
        let p = WeightedCssParams::new(weights, alpha, rho).unwrap();
        let closed = closed_weighted(&p).unwrap().to_allocation();
        let exact = shapley_exact(&weighted_game(&p).unwrap()).unwrap();
        for (c, e) in closed.payoffs.iter().zip(&exact.payoffs) {
            prop_assert!(rel_close(*c, *e, 1e-9), "{c} vs {e}");
        }
    }

    #[test]
    fn scaling_rho_scales_payoffs(scale in 0.1f64..20.0, n in 1usize..=9, k in 1u32..=3) {
        let base = SingleCssParams::new(n, k as f64, 1.3).unwrap();
        let scaled = SingleCssParams { rho: base.rho * scale, ..base };
        let a = closed_single(&base).unwrap().to_allocation();
        let b = closed_single(&scaled).unwrap().to_allocation();
        for (x, y) in a.payoffs.iter().zip(&b.payoffs) {
            prop_assert!(rel_close(x * scale, *y, 1e-12));
        }

        let pw = WeightedCssParams::new((1..=n).map(|i| i as f64).collect(), 1.5, 1.3).unwrap();
        let pws = WeightedCssParams { rho: pw.rho * scale, ..pw.clone() };
        let a = closed_weighted(&pw).unwrap().to_allocation();
        let b = closed_weighted(&pws).unwrap().to_allocation();
        for (x, y) in a.payoffs.iter().zip(&b.payoffs) {
            prop_assert!(rel_close(x * scale, *y, 1e-12));
        }

        let pp = ProfitCssParams::new(n, k as f64, 1.3, 0.4, 0.1).unwrap();
        let pps = ProfitCssParams { rho: pp.rho * scale, founder_cost: pp.founder_cost * scale, participant_cost: pp.participant_cost * scale, ..pp };
        let a = closed_profit(&pp).unwrap().to_allocation();
        let b = closed_profit(&pps).unwrap().to_allocation();
        for (x, y) in a.payoffs.iter().zip(&b.payoffs) {
            prop_assert!((x * scale - y).abs() <= 1e-9 * y.abs().max(scale));
        }
    }
}

#[test]
fn closed_profit_matches_exact_on_grid() {
    for n in 1..=10 {
        for k in [1.0, 2.0, 3.0] {
            for founder_cost in [0.0, 0.5, 3.0] {
                for participant_cost in [0.0, 0.25, 1.0] {
                    let p = ProfitCssParams::new(n, k, 1.0, founder_cost, participant_cost).unwrap();
                    let closed = closed_profit(&p).unwrap().to_allocation();
                    let exact = shapley_exact(&profit_game(&p).unwrap()).unwrap();
                    let ctx = format!("n={n} k={k} K_g={founder_cost} k_u={participant_cost}");
                    assert_payoffs_close(&closed.payoffs, &exact.payoffs, 1e-9, &ctx);
                }
            }
        }
    }
}

#[test]
fn profit_example_from_permutations() {
    let p = ProfitCssParams::new(3, 2.0, 1.0, 1.0, 0.0).unwrap();
    let oracle = permutation_shapley(&profit_game(&p).unwrap());
    assert!(rel_close(oracle[0], 2.0, 1e-12));
    assert!(rel_close(oracle[1..].iter().sum::<f64>(), 4.0, 1e-12));
}

#[test]
fn equal_weights_reproduce_single() {
    for n in [1usize, 3, 8, 40] {
        for alpha in [0.5, 1.0, 3.0] {
            let w = closed_weighted(&WeightedCssParams::new(vec![1.0; n], alpha, 2.0).unwrap()).unwrap();
            let s = closed_single(&SingleCssParams::new(n, 2.0, 2.0).unwrap()).unwrap();
            assert!(rel_close(w.founder_payoff, s.founder_payoff, 1e-12));
            for i in 0..n {
                assert!(rel_close(
                    w.crowd_payoffs.get(i).unwrap(),
                    s.crowd_payoffs.get(i).unwrap(),
                    1e-12
                ));
            }
        }
    }
}

#[test]
fn founder_share_approaches_limit_monotonically() {
    for k in [2.0, 3.0] {
        let mut last = f64::INFINITY;
        for n in 1..=300 {
            let r = closed_single(&SingleCssParams::new(n, k, 1.0).unwrap()).unwrap();
            let gap = (r.founder_share.unwrap() - 1.0 / (k + 1.0)).abs();
            assert!(gap <= last, "k={k} n={n}");
            last = gap;
        }
    }
}

#[test]
fn power_law_games_are_supermodular() {
    for k in [1.0, 2.0, 3.0] {
        let g = single_game(&SingleCssParams::new(6, k, 1.0).unwrap()).unwrap();
        assert!(is_supermodular(&g).unwrap(), "k={k}");
    }
}
