//! Delta-hedges the two-sided exclusion claim on simulated paths and reports
//! how the replication error shrinks with rebalancing.

use efficient_index::hedging::{backtest, replicate};
use efficient_index::market::sample_path;
use efficient_index::mc::Runner;
use efficient_index::pricing::ClaimSpec;
use efficient_index::{MarketParams, MeasureKind, PathSeed};

fn main() -> efficient_index::Result<()> {
    let params = MarketParams::new(0.07, 0.2, 0.02, 10.0, 1.0)?;
    let spec = ClaimSpec::two_sided(params, 0.1)?;

    let runs = backtest(&spec, MeasureKind::Physical, &[64, 256, 1024], 1, &Runner::new(5_000, 7))?;
    println!("{:>6} {:>9} {:>9} {:>9} {:>6}", "steps", "median", "rms", "p99", "hits");
    for s in &runs {
        println!(
            "{:>6} {:>9.4} {:>9.4} {:>9.4} {:>6}",
            s.steps, s.median_error, s.rms_error, s.p99_error, s.beat_stats.hits
        );
    }

    let path = sample_path(&params, MeasureKind::Physical, 256, PathSeed::new(7, 0))?;
    let ledger = replicate(&spec, &path, 256)?;
    println!(
        "one path: K_0 = {:.4}, K_T = {:.4}, I_T = {:.4}",
        ledger.initial_value(),
        ledger.terminal_value(),
        path.terminal()
    );
    ledger.write_csv(std::io::stdout().lock())
}
