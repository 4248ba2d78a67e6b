//! Compares a realized equity premium with the sigma^2 prediction.
//!
//! Reads `year,equity_return,riskless_return` from the file given as the first
//! argument, or uses a small synthetic series.

use std::fs::File;

use efficient_index::premium::{analyze, ReturnRow, ReturnSeries};

fn main() -> efficient_index::Result<()> {
    let series = match std::env::args().nth(1) {
        Some(path) => ReturnSeries::from_csv(File::open(path)?)?,
        None => ReturnSeries::new(
            (0..60)
                .map(|k| ReturnRow {
                    year: 1960 + k,
                    equity_return: 0.07 + 0.15 * ((k * 7 % 11) as f64 / 10.0 - 0.5),
                    riskless_return: 0.03,
                })
                .collect(),
        )?,
    };
    for sigma in [0.15, 0.2, 0.25] {
        let report = analyze(&series, sigma, 0.1)?;
        println!(
            "sigma {sigma:.2}: predicted {:.4} +/- {:.4}, realized {:.4}, inside: {}",
            report.predicted, report.halfwidth, report.realized, report.inside
        );
    }
    for w in series.warnings() {
        eprintln!("warning: {w}");
    }
    Ok(())
}
