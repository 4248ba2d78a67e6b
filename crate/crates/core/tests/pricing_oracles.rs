mod common;

use efficient_index::gtp::{self, Numeraire, TerminalEvent};
use efficient_index::hedging::replicate;
use efficient_index::market::{sample_path, sample_terminal};
use efficient_index::mc::Runner;
use efficient_index::normal;
use efficient_index::pricing::{claim_price, payoff, ClaimSpec};
use efficient_index::{Interval, IntervalUnion, MarketParams, MeasureKind, PathSeed};
use proptest::prelude::*;

fn mc_probability(params: &MarketParams, kind: MeasureKind, set: &IntervalUnion, seed: u64) -> (f64, f64) {
    let m = Runner::new(200_000, seed)
        .run_experiment(|_, rng| Ok(if set.contains(sample_terminal(params, kind, rng)) { 1.0 } else { 0.0 }))
        .unwrap();
    (m.mean, m.std_error)
}

#[test]
fn at_the_money_price_matches_monte_carlo() {
    let params = MarketParams::new(0.0, 0.2, 0.0, 1.0, 1.0).unwrap();
    let spec = ClaimSpec::new(IntervalUnion::at_least(1.0), params).unwrap();
    let m = Runner::new(1_000_000, 99)
        .run_experiment(|_, rng| Ok(payoff(&spec, sample_terminal(&params, MeasureKind::RiskNeutral, rng))))
        .unwrap();
    let closed = claim_price(&spec, 0.0, 1.0).unwrap();
    assert!((closed - 0.5398).abs() < 1e-4);
    assert!((m.mean - closed).abs() < 4.0 * m.std_error, "{} vs {closed}", m.mean);
}

#[test]
fn price_per_unit_is_eih_probability() {
    let params = MarketParams::new(0.0, 0.25, 0.02, 3.0, 1.0).unwrap();
    let set: IntervalUnion = "(0,0.9]u[1.2,1.5]u[2.5,inf)".parse().unwrap();
    let spec = ClaimSpec::new(set.clone(), params).unwrap();
    let (p, se) = mc_probability(&params, MeasureKind::Eih, &set, 4);
    let price = claim_price(&spec, 0.0, 1.0).unwrap();
    assert!((p - price).abs() < 4.0 * se);
}

#[test]
fn bond_numeraire_example_matches_risk_neutral_simulation() {
    let r: f64 = 0.02;
    let params = MarketParams::new(0.0, 0.2, r, 1.0, 1.0).unwrap();
    let event = TerminalEvent::new(IntervalUnion::at_least(r.exp()));
    let up = gtp::upper_prob_bond(&params, &event).unwrap();
    assert!((up - normal::cdf(-0.1)).abs() < 1e-14);
    let (p, se) = mc_probability(&params, MeasureKind::RiskNeutral, &event.set, 5);
    assert!((p - up).abs() < 4.0 * se);
}

#[test]
fn index_numeraire_example_matches_eih_simulation() {
    let r: f64 = 0.02;
    let params = MarketParams::new(0.0, 0.2, r, 1.0, 1.0).unwrap();
    let event = TerminalEvent::new(IntervalUnion::new([Interval::new(0.0, r.exp(), false, true)]));
    let up = gtp::upper_prob_index(&params, &event).unwrap();
    assert!((up - 0.4602).abs() < 1e-4);
    let (p, se) = mc_probability(&params, MeasureKind::Eih, &event.set, 6);
    assert!((p - up).abs() < 4.0 * se);
}

#[test]
fn index_probability_is_hedge_capital() {
    let params = MarketParams::new(0.05, 0.2, 0.01, 5.0, 2.0).unwrap();
    let mut rng = common::rng(12);
    for k in 0..20 {
        let set = common::random_level_set(&mut rng, 2.0, 1.0, 3);
        let event = TerminalEvent::new(set.clone());
        let spec = ClaimSpec::new(set, params).unwrap();
        let up = gtp::upper_prob_index(&params, &event).unwrap();
        if up == 0.0 {
            continue;
        }
        let path = sample_path(&params, MeasureKind::Physical, 8, PathSeed::new(k, 0)).unwrap();
        let ledger = replicate(&spec, &path, 8).unwrap();
        assert!((up * params.i0 - ledger.initial_value()).abs() <= 1e-12 * params.i0);
    }
}

fn arb_set() -> impl Strategy<Value = IntervalUnion> {
    any::<u64>().prop_map(|seed| common::random_level_set(&mut common::rng(seed), 1.0, 1.2, 5))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn bond_and_index_probabilities_are_reciprocal(
        set in arb_set(),
        sigma in 0.05..0.6f64,
        r in -0.03..0.08f64,
        horizon in 0.1..20.0f64,
        i0 in 0.5..3.0f64,
    ) {
        let params = MarketParams::new(0.0, sigma, r, horizon, i0).unwrap();
        let event = TerminalEvent::new(set.clone());
        let mirrored = TerminalEvent::new(gtp::reciprocal_image(&params, &set).unwrap());
        let b = gtp::upper_prob_bond(&params, &event).unwrap();
        let i = gtp::upper_prob_index(&params, &mirrored).unwrap();
        prop_assert!((b - i).abs() < 1e-10);
        // and the other way round
        let b2 = gtp::upper_prob_bond(&params, &mirrored).unwrap();
        let i2 = gtp::upper_prob_index(&params, &event).unwrap();
        prop_assert!((b2 - i2).abs() < 1e-10);
    }

    #[test]
    fn probabilities_are_coherent(a in arb_set(), b in arb_set()) {
        let params = MarketParams::new(0.0, 0.2, 0.01, 2.0, 1.0).unwrap();
        // b minus a, written as a complement of a union
        let b_minus_a = b.complement().union(&a).complement();
        let joined = a.union(&b);
        for n in [Numeraire::Bond, Numeraire::Index] {
            let p = |s: &IntervalUnion| gtp::upper_prob(&params, &TerminalEvent::new(s.clone()), n).unwrap();
            prop_assert!((p(&a) + p(&b_minus_a) - p(&joined)).abs() < 1e-12);
            prop_assert!(p(&a) <= p(&joined) + 1e-15);
            prop_assert_eq!(p(&IntervalUnion::positive()), 1.0);
            let low = gtp::lower_prob(&params, &TerminalEvent::new(a.clone()), n).unwrap();
            prop_assert!((low - p(&a)).abs() < 1e-12);
        }
    }
}

#[test]
fn closed_form_matches_discounted_payoff_for_random_claims() {
    let mut rng = common::rng(2024);
    for k in 0..20 {
        let sigma = 0.1 + 0.3 * rng.uniform();
        let r = -0.01 + 0.06 * rng.uniform();
        let horizon = 0.5 + 9.5 * rng.uniform();
        let params = MarketParams::new(0.0, sigma, r, horizon, 1.0).unwrap();
        let spec = ClaimSpec::new(common::random_level_set(&mut rng, 1.0, 1.0, 4), params).unwrap();
        let discount = (-r * horizon).exp();
        let m = Runner::new(100_000, 500 + k)
            .run_experiment(|_, rng| {
                Ok(discount * payoff(&spec, sample_terminal(&params, MeasureKind::RiskNeutral, rng)))
            })
            .unwrap();
        let closed = claim_price(&spec, 0.0, 1.0).unwrap();
        assert!(
            (m.mean - closed).abs() <= 4.0 * m.std_error + 1e-12,
            "claim {k} on {}: mc {} ± {} vs {closed}",
            spec.set,
            m.mean,
            m.std_error
        );
    }
}
