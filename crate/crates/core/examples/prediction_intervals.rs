//! Where the index should end up relative to the bond if no simple strategy
//! beats it by a large factor.

use efficient_index::bounds::{one_sided_intervals, two_sided_interval};
use efficient_index::pricing::thresholds_ab;
use efficient_index::MarketParams;

fn main() -> efficient_index::Result<()> {
    let delta = 0.1;
    for horizon in [1.0, 10.0, 30.0] {
        let params = MarketParams::eih(0.2, 0.02, horizon)?;
        let two = two_sided_interval(&params, delta)?;
        let (lower, upper) = one_sided_intervals(&params, delta)?;
        let (a, b) = thresholds_ab(&params, delta)?;
        println!("T = {horizon}");
        println!("  two-sided  I_T/e^(rT) in ({:.4}, {:.4})", two.lower, two.upper);
        println!("  one-sided  above {:.4}, below {:.4}", lower.lower, upper.upper);
        println!("  levels     A = {a:.4}, B = {b:.4}");
    }
    Ok(())
}
