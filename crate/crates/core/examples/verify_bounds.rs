//! Monte Carlo check of the drift bounds under the physical measure.

use efficient_index::bounds::{mu_bound, verify_proposition, Variant};
use efficient_index::MarketParams;

fn main() -> efficient_index::Result<()> {
    let (delta, epsilon) = (0.1, 0.05);
    let base = MarketParams::eih(0.2, 0.02, 10.0)?;
    for variant in [Variant::Prop3, Variant::Prop4] {
        let bound = mu_bound(&base, delta, epsilon, variant)?;
        for mu in [bound.center, bound.center + 1.2 * bound.halfwidth] {
            let report = verify_proposition(&base.with_mu(mu), delta, epsilon, variant, 100_000, 1)?;
            println!(
                "{variant:?} mu={mu:.4}: event {:.4} [{:.4}, {:.4}]  beat {:.4} [{:.4}, {:.4}]",
                report.event_freq,
                report.event_ci.0,
                report.event_ci.1,
                report.beat_freq,
                report.beat_ci.0,
                report.beat_ci.1
            );
        }
    }
    Ok(())
}
