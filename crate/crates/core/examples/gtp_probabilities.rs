//! Upper and lower probabilities of terminal events under the two numeraires.

use efficient_index::gtp::{probabilities, reciprocal_image, Numeraire, TerminalEvent};
use efficient_index::{IntervalUnion, MarketParams};

fn main() -> efficient_index::Result<()> {
    let params = MarketParams::eih(0.2, 0.02, 1.0)?;
    let growth = params.bond(params.horizon);
    let events = [
        ("I_T >= e^(rT)", IntervalUnion::at_least(growth)),
        ("I_T <= e^(rT)", IntervalUnion::at_most(growth)),
        ("I_T in [0.9, 1.2]", "[0.9,1.2]".parse()?),
    ];
    for (name, set) in events {
        let event = TerminalEvent::new(set.clone());
        let bond = probabilities(&params, &event, Numeraire::Bond)?;
        let index = probabilities(&params, &event, Numeraire::Index)?;
        println!("{name:<18} bond {:.4}  index {:.4}", bond.upper, index.upper);
        let mirrored = TerminalEvent::new(reciprocal_image(&params, &set)?);
        let back = probabilities(&params, &mirrored, Numeraire::Index)?;
        println!("{:<18} reciprocal event {} has index probability {:.4}", "", mirrored.set, back.upper);
    }
    Ok(())
}
