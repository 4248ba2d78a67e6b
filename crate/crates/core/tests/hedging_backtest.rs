use efficient_index::bounds::two_sided_interval;
use efficient_index::hedging::{backtest, replicate};
use efficient_index::market::sample_path;
use efficient_index::mc::Runner;
use efficient_index::pricing::{thresholds_ab, ClaimSpec};
use efficient_index::{IntervalUnion, MarketParams, MeasureKind, PathSeed};

fn exclusion_claim(params: MarketParams) -> ClaimSpec {
    ClaimSpec::two_sided(params, 0.1).unwrap()
}

#[test]
fn replication_error_shrinks_with_rebalancing() {
    let params = MarketParams::new(0.07, 0.2, 0.02, 10.0, 1.0).unwrap();
    let spec = exclusion_claim(params);
    let steps = [64, 256, 512, 1024];
    let runs = backtest(&spec, MeasureKind::Physical, &steps, 1, &Runner::new(10_000, 31)).unwrap();
    for s in &runs {
        eprintln!(
            "steps {:>5}: median {:.4} rms {:.4} p99 {:.4} near-boundary {} (p99 {:?})",
            s.steps, s.median_error, s.rms_error, s.p99_error, s.near_boundary_paths, s.near_boundary_p99_error
        );
    }
    let at_512 = &runs[2];
    assert!(at_512.median_error <= 0.02 * params.i0, "median {}", at_512.median_error);
    let study = [&runs[0], &runs[1], &runs[3]];
    for w in study.windows(2) {
        assert!(w[1].median_error < w[0].median_error);
        assert!(w[1].rms_error < w[0].rms_error);
    }
}

#[test]
fn wealth_in_index_units_is_a_martingale_under_eih() {
    let params = MarketParams::new(0.0, 0.2, 0.02, 10.0, 1.0).unwrap();
    let spec = exclusion_claim(params);
    let runs = backtest(&spec, MeasureKind::Eih, &[256], 1, &Runner::new(10_000, 32)).unwrap();
    let b = runs[0].beat_stats;
    assert!((b.initial_ratio - 0.1).abs() < 1e-12);
    assert!(
        (b.mean_terminal_ratio - b.initial_ratio).abs() < 4.0 * b.terminal_ratio_se,
        "{} vs {} (se {})",
        b.mean_terminal_ratio,
        b.initial_ratio,
        b.terminal_ratio_se
    );
}

#[test]
fn terminal_wealth_is_initial_capital_plus_discounted_gains() {
    let params = MarketParams::new(0.05, 0.3, 0.03, 4.0, 2.5).unwrap();
    let set: IntervalUnion = "(0,1.8]u[2.6,3.4)u[6,inf)".parse().unwrap();
    let spec = ClaimSpec::new(set, params).unwrap();
    for k in 0..25 {
        let path = sample_path(&params, MeasureKind::Physical, 400, PathSeed::new(77, k)).unwrap();
        let ledger = replicate(&spec, &path, 100).unwrap();
        assert!(ledger.self_financing_residual() < 1e-12);

        // gains of the discounted index, accumulated independently of the ledger values
        let disc = |i: usize| ledger.index_levels[i] * (-params.r * ledger.times[i]).exp();
        let gains: f64 = (0..ledger.times.len() - 1).map(|i| ledger.index_units[i] * (disc(i + 1) - disc(i))).sum();
        let expected = (ledger.initial_value() + gains) * (params.r * params.horizon).exp();
        assert!((ledger.terminal_value() - expected).abs() < 1e-10 * params.i0);

        // holdings never go negative in value
        assert!(ledger.value.iter().all(|&v| v >= -ledger.prudence_slack - 1e-12));
    }
}

#[test]
fn strategy_claim_set_matches_interval() {
    let params = MarketParams::new(0.0, 0.2, 0.02, 10.0, 1.0).unwrap();
    let pi = two_sided_interval(&params, 0.1).unwrap();
    let via_interval = pi.claim(&params).unwrap();
    let (a, b) = thresholds_ab(&params, 0.1).unwrap();
    let direct = ClaimSpec::new(IntervalUnion::at_most(a).union(&IntervalUnion::at_least(b)), params).unwrap();
    assert_eq!(via_interval.set.intervals().len(), 2);
    for (x, y) in via_interval.set.intervals().iter().zip(direct.set.intervals()) {
        assert!(x.lo == y.lo || (x.lo - y.lo).abs() <= 1e-12 * y.lo.abs());
        assert!(x.hi == y.hi || (x.hi - y.hi).abs() <= 1e-12 * y.hi.abs());
    }
}
