//! Price and delta of a claim paying the index level on a set of terminal levels.

use efficient_index::pricing::{claim_delta, claim_price, ClaimSpec};
use efficient_index::{IntervalUnion, MarketParams};

fn main() -> efficient_index::Result<()> {
    let params = MarketParams::new(0.06, 0.2, 0.02, 1.0, 100.0)?;
    let set: IntervalUnion = "(0,85]u[120,inf)".parse()?;
    let spec = ClaimSpec::new(set, params)?;

    println!("claim on {}", spec.set);
    println!("{:>8} {:>10} {:>10}", "spot", "price", "delta");
    for spot in [70.0, 85.0, 100.0, 110.0, 120.0, 150.0] {
        let price = claim_price(&spec, 0.5, spot)?;
        let delta = claim_delta(&spec, 0.5, spot)?;
        println!("{spot:>8.1} {price:>10.4} {delta:>10.4}");
    }
    Ok(())
}
