//! How tightly the drift is pinned to r + sigma^2 at various horizons.

use efficient_index::bounds::{mu_bound, Variant};
use efficient_index::MarketParams;

fn main() -> efficient_index::Result<()> {
    let (delta, epsilon) = (0.1, 0.05);
    println!("{:>6} {:>10} {:>10}", "T", "prop3 +/-", "prop4 +/-");
    for horizon in [1.0, 10.0, 50.0, 122.0] {
        let params = MarketParams::eih(0.2, 0.01, horizon)?;
        let p3 = mu_bound(&params, delta, epsilon, Variant::Prop3)?;
        let p4 = mu_bound(&params, delta, epsilon, Variant::Prop4)?;
        println!("{horizon:>6} {:>10.4} {:>10.4}", p3.halfwidth, p4.halfwidth);
    }
    Ok(())
}
