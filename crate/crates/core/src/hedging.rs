//! Discrete delta replication of a truncated index claim.
//!
//! The strategy starts with the claim's price, holds `claim_delta` units of
//! index at each rebalance date and keeps the remainder in the bond. Between
//! dates the holdings are frozen, so the value process is self-financing by
//! construction. The path is normally sampled on a finer grid than the
//! rebalancing grid so the strategy's value is also observed between dates.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::market::{sample_path_with, MeasureKind, Path};
use crate::mc::{CompensatedSum, Moments, Runner};
use crate::pricing::{claim_delta_raw, claim_price, payoff, ClaimSpec, DELTA_CAP};

/// Default ratio between the simulation grid and the rebalancing grid.
pub const DEFAULT_REFINE: usize = 4;

/// Holdings and value of the replicating strategy on the rebalancing grid.
///
/// Row `k` carries the value `K` just before rebalancing at `times[k]` and the
/// holdings chosen there. The last row is the horizon, where the holdings are
/// the ones carried in from the previous date.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StrategyLedger {
    pub times: Vec<f64>,
    pub index_levels: Vec<f64>,
    pub index_units: Vec<f64>,
    pub bond_units: Vec<f64>,
    pub value: Vec<f64>,
    /// Rebalance dates whose delta hit `±DELTA_CAP`.
    pub capped: Vec<bool>,
    /// `max(0, −min K)` over every point of the simulation grid.
    pub prudence_slack: f64,
    pub r: f64,
}

impl StrategyLedger {
    pub fn initial_value(&self) -> f64 {
        self.value[0]
    }

    pub fn terminal_value(&self) -> f64 {
        *self.value.last().expect("ledger is never empty")
    }

    pub fn n_capped(&self) -> usize {
        self.capped.iter().filter(|&&c| c).count()
    }

    /// Largest relative mismatch in the self-financing identities: value is
    /// preserved by each rebalance and carried forward by the frozen holdings.
    pub fn self_financing_residual(&self) -> f64 {
        let bond = |t: f64| (self.r * t).exp();
        let mut worst: f64 = 0.0;
        let n = self.times.len();
        for k in 0..n - 1 {
            let (d, b) = (self.index_units[k], self.bond_units[k]);
            let scale_now = (d * self.index_levels[k]).abs() + (b * bond(self.times[k])).abs();
            let held = d * self.index_levels[k] + b * bond(self.times[k]);
            worst = worst.max((held - self.value[k]).abs() / scale_now.max(f64::MIN_POSITIVE));
            let scale_next = (d * self.index_levels[k + 1]).abs() + (b * bond(self.times[k + 1])).abs();
            let carried = d * self.index_levels[k + 1] + b * bond(self.times[k + 1]);
            worst = worst.max((carried - self.value[k + 1]).abs() / scale_next.max(f64::MIN_POSITIVE));
        }
        worst
    }

    /// `t,index_units,bond_units,value`
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["t", "index_units", "bond_units", "value"])?;
        for k in 0..self.times.len() {
            w.write_record([
                self.times[k].to_string(),
                self.index_units[k].to_string(),
                self.bond_units[k].to_string(),
                self.value[k].to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Runs the delta hedge of `spec` along `path`, rebalancing `rebalance_steps`
/// times at evenly spaced dates.
pub fn replicate(spec: &ClaimSpec, path: &Path, rebalance_steps: usize) -> Result<StrategyLedger> {
    if rebalance_steps == 0 {
        return Err(invalid("rebalance_steps", "need at least one rebalance"));
    }
    let n = path.n_steps();
    if !n.is_multiple_of(rebalance_steps) {
        return Err(invalid(
            "rebalance_steps",
            format!("{rebalance_steps} does not divide the path's {n} steps"),
        ));
    }
    let horizon = spec.params.horizon;
    if ((path.horizon() - horizon) / horizon).abs() > 1e-12 {
        return Err(invalid("path", format!("path ends at {} but T = {horizon}", path.horizon())));
    }
    let stride = n / rebalance_steps;
    let r = spec.params.r;
    let bond = |t: f64| (r * t).exp();

    let mut value = claim_price(spec, 0.0, path.values[0])?;
    if !(value > 0.0) {
        return Err(Error::ZeroPriceClaim);
    }
    let rows = rebalance_steps + 1;
    let mut ledger = StrategyLedger {
        times: Vec::with_capacity(rows),
        index_levels: Vec::with_capacity(rows),
        index_units: Vec::with_capacity(rows),
        bond_units: Vec::with_capacity(rows),
        value: Vec::with_capacity(rows),
        capped: Vec::with_capacity(rows),
        prudence_slack: 0.0,
        r,
    };
    let mut min_value = value;
    let (mut units, mut bonds) = (0.0, 0.0);
    for k in 0..rebalance_steps {
        let i = k * stride;
        let (t, level) = (path.times[i], path.values[i]);
        let raw = claim_delta_raw(spec, t, level)?;
        units = raw.clamp(-DELTA_CAP, DELTA_CAP);
        bonds = (value - units * level) / bond(t);
        ledger.times.push(t);
        ledger.index_levels.push(level);
        ledger.index_units.push(units);
        ledger.bond_units.push(bonds);
        ledger.value.push(value);
        ledger.capped.push(raw.abs() > DELTA_CAP);
        for j in i + 1..=i + stride {
            value = units * path.values[j] + bonds * bond(path.times[j]);
            min_value = min_value.min(value);
        }
    }
    ledger.times.push(path.times[n]);
    ledger.index_levels.push(path.values[n]);
    ledger.index_units.push(units);
    ledger.bond_units.push(bonds);
    ledger.value.push(value);
    ledger.capped.push(false);
    ledger.prudence_slack = (-min_value).max(0.0);
    Ok(ledger)
}

/// Outcome of one replicated strategy against the index.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BeatReport {
    /// `(K_T/I_T)/(K_0/I_0)`
    pub beat_factor: f64,
    pub event_hit: bool,
    pub replication_error: f64,
    /// `1/δ`
    pub target_factor: f64,
    pub beats_target: bool,
}

pub fn beat_report(ledger: &StrategyLedger, path: &Path, spec: &ClaimSpec, delta: f64) -> BeatReport {
    let (k0, kt) = (ledger.initial_value(), ledger.terminal_value());
    let (i0, it) = (path.values[0], path.terminal());
    let beat_factor = (kt / it) / (k0 / i0);
    let target_factor = 1.0 / delta;
    BeatReport {
        beat_factor,
        event_hit: spec.set.contains(it),
        replication_error: (kt - payoff(spec, it)).abs(),
        target_factor,
        beats_target: beat_factor >= target_factor,
    }
}

/// Beat statistics over a cohort.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BeatStats {
    pub hits: usize,
    pub hit_rate: f64,
    pub mean_beat_on_hits: f64,
    pub median_beat_on_hits: f64,
    /// Mean and standard error of `K_T/I_T` over all paths.
    pub mean_terminal_ratio: f64,
    pub terminal_ratio_se: f64,
    pub initial_ratio: f64,
}

/// Aggregate replication quality at one rebalancing frequency.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BacktestSummary {
    pub steps: usize,
    pub n_paths: usize,
    pub rms_error: f64,
    pub median_error: f64,
    pub p99_error: f64,
    pub beat_stats: BeatStats,
    pub max_prudence_slack: f64,
    pub capped_rebalances: usize,
    /// Paths ending within 0.1% of a finite boundary of the set.
    pub near_boundary_paths: usize,
    pub near_boundary_p99_error: Option<f64>,
}

/// Nearest-rank quantile of an ascending slice.
pub(crate) fn sorted_quantile(sorted: &[f64], q: f64) -> f64 {
    if sorted.is_empty() {
        return f64::NAN;
    }
    let rank = ((q * sorted.len() as f64).ceil() as usize).clamp(1, sorted.len());
    sorted[rank - 1]
}

#[derive(Debug, Clone, Copy)]
struct PathOutcome {
    error: f64,
    beat: f64,
    hit: bool,
    ratio: f64,
    slack: f64,
    capped: usize,
    near_boundary: bool,
}

/// Hedges the same path cohort at every frequency in `steps`.
///
/// Paths are sampled under `measure` with `refine × max(steps)` grid steps,
/// which every entry of `steps` must divide.
pub fn backtest(
    spec: &ClaimSpec,
    measure: MeasureKind,
    steps: &[usize],
    refine: usize,
    runner: &Runner,
) -> Result<Vec<BacktestSummary>> {
    let finest = steps.iter().copied().max().ok_or_else(|| invalid("steps", "empty"))? * refine.max(1);
    if let Some(&bad) = steps.iter().find(|&&s| s == 0 || !finest.is_multiple_of(s)) {
        return Err(invalid("steps", format!("{bad} does not divide the grid of {finest} steps")));
    }
    let k0 = claim_price(spec, 0.0, spec.params.i0)?;
    if !(k0 > 0.0) {
        return Err(Error::ZeroPriceClaim);
    }
    let boundaries: Vec<f64> = spec
        .set
        .intervals()
        .iter()
        .flat_map(|iv| [iv.lo, iv.hi])
        .filter(|x| x.is_finite() && *x > 0.0)
        .collect();
    let per_path = runner.map(|seed, rng| {
        let path = sample_path_with(&spec.params, measure, finest, seed, rng)?;
        let it = path.terminal();
        let near_boundary = boundaries.iter().any(|b| ((it - b) / b).abs() <= 1e-3);
        steps
            .iter()
            .map(|&s| {
                let ledger = replicate(spec, &path, s)?;
                let report = beat_report(&ledger, &path, spec, k0 / spec.params.i0);
                Ok(PathOutcome {
                    error: report.replication_error,
                    beat: report.beat_factor,
                    hit: report.event_hit,
                    ratio: ledger.terminal_value() / it,
                    slack: ledger.prudence_slack,
                    capped: ledger.n_capped(),
                    near_boundary,
                })
            })
            .collect::<Result<Vec<_>>>()
    })?;

    let n_paths = per_path.len();
    Ok(steps
        .iter()
        .enumerate()
        .map(|(j, &s)| {
            let outcomes: Vec<PathOutcome> = per_path.iter().map(|v| v[j]).collect();
            let mut errors: Vec<f64> = outcomes.iter().map(|o| o.error).collect();
            let sq = errors.iter().map(|e| e * e).collect::<CompensatedSum>().total();
            errors.sort_by(f64::total_cmp);
            let mut beats: Vec<f64> = outcomes.iter().filter(|o| o.hit).map(|o| o.beat).collect();
            let mean_beat = Moments::of(&beats).mean;
            beats.sort_by(f64::total_cmp);
            let ratios = Moments::of(&outcomes.iter().map(|o| o.ratio).collect::<Vec<_>>());
            let mut near: Vec<f64> = outcomes.iter().filter(|o| o.near_boundary).map(|o| o.error).collect();
            near.sort_by(f64::total_cmp);
            BacktestSummary {
                steps: s,
                n_paths,
                rms_error: (sq / n_paths as f64).sqrt(),
                median_error: sorted_quantile(&errors, 0.5),
                p99_error: sorted_quantile(&errors, 0.99),
                beat_stats: BeatStats {
                    hits: beats.len(),
                    hit_rate: beats.len() as f64 / n_paths as f64,
                    mean_beat_on_hits: mean_beat,
                    median_beat_on_hits: sorted_quantile(&beats, 0.5),
                    mean_terminal_ratio: ratios.mean,
                    terminal_ratio_se: ratios.std_error,
                    initial_ratio: k0 / spec.params.i0,
                },
                max_prudence_slack: outcomes.iter().map(|o| o.slack).fold(0.0, f64::max),
                capped_rebalances: outcomes.iter().map(|o| o.capped).sum(),
                near_boundary_paths: near.len(),
                near_boundary_p99_error: (!near.is_empty()).then(|| sorted_quantile(&near, 0.99)),
            }
        })
        .collect())
}
