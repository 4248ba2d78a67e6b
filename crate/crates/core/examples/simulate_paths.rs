//! Samples index paths under the three drifts and the reciprocal of a
//! risk-neutral path, which behaves like an EIH path.

use efficient_index::market::{reciprocal_path, sample_path};
use efficient_index::mc::Runner;
use efficient_index::{MarketParams, MeasureKind, PathSeed};

fn main() -> efficient_index::Result<()> {
    let params = MarketParams::new(0.08, 0.2, 0.02, 10.0, 1.0)?;
    for kind in [MeasureKind::Physical, MeasureKind::RiskNeutral, MeasureKind::Eih] {
        let logs = Runner::new(20_000, 3).run_experiment(|seed, _| {
            Ok(sample_path(&params, kind, 1, seed)?.terminal().ln())
        })?;
        println!("{kind:?}: mean ln I_T = {:.4} (se {:.4})", logs.mean, logs.std_error);
    }

    let path = sample_path(&params, MeasureKind::RiskNeutral, 10, PathSeed::new(3, 0))?;
    let rec = reciprocal_path(&path, &params);
    println!("{:>5} {:>9} {:>9}", "t", "I_t", "I*_t");
    for ((t, a), b) in path.times.iter().zip(&path.values).zip(&rec.values) {
        println!("{t:>5.1} {a:>9.4} {b:>9.4}");
    }
    Ok(())
}
