//! Command-line surface. Each subcommand delegates to one library operation
//! and returns either a JSON report, which embeds the full command that
//! produced it, or CSV.

use std::fs::File;
use std::io::BufReader;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::bounds::{self, Sided, Variant};
use crate::error::{invalid, Result};
use crate::gtp::{self, Numeraire, TerminalEvent};
use crate::hedging::{self, DEFAULT_REFINE};
use crate::interval::IntervalUnion;
use crate::market::{sample_path, MarketParams, MeasureKind};
use crate::mc::{PathSeed, Runner};
use crate::premium;
use crate::pricing::{self, ClaimSpec};

#[derive(Debug, Parser)]
#[command(name = "eih", version, about = "Truncated index claims, prediction intervals and drift bounds under BSM")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Also write tidy `series,x,y` CSV for plotting.
    #[arg(long = "plot-csv", global = true)]
    pub plot_csv: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct MarketArgs {
    #[arg(long, default_value_t = 0.2, allow_negative_numbers = true)]
    pub sigma: f64,
    /// Physical drift; defaults to the EIH drift r + sigma².
    #[arg(long, allow_negative_numbers = true)]
    pub mu: Option<f64>,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub r: f64,
    #[arg(long = "T", default_value_t = 1.0)]
    #[serde(rename = "T")]
    pub horizon: f64,
    #[arg(long, default_value_t = 1.0)]
    pub i0: f64,
}

impl MarketArgs {
    pub fn params(&self) -> Result<MarketParams> {
        let mu = self.mu.unwrap_or(self.r + self.sigma * self.sigma);
        MarketParams::new(mu, self.sigma, self.r, self.horizon, self.i0)
    }
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct SimArgs {
    #[arg(long = "n-paths", default_value_t = 10_000)]
    pub n_paths: usize,
    #[arg(long, env = "EIH_SEED", default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Subcommand, Serialize, Deserialize)]
#[serde(tag = "subcommand", rename_all = "snake_case")]
pub enum Command {
    /// Prediction interval(s) for I_T / e^{rT}.
    Interval {
        #[command(flatten)]
        market: MarketArgs,
        #[arg(long)]
        delta: f64,
        #[arg(long, default_value = "two")]
        sided: String,
    },
    /// Time-t price and delta of the claim paying I_T on a set.
    Price {
        #[command(flatten)]
        market: MarketArgs,
        #[arg(long)]
        set: String,
        #[arg(long, default_value_t = 0.0)]
        t: f64,
        /// Index level at time t; defaults to i0.
        #[arg(long)]
        spot: Option<f64>,
    },
    /// Delta-hedging backtest over a path cohort.
    Hedge {
        #[command(flatten)]
        market: MarketArgs,
        #[command(flatten)]
        sim: SimArgs,
        /// Claim set; defaults to the two-sided exclusion set at --delta.
        #[arg(long)]
        set: Option<String>,
        #[arg(long, default_value_t = 0.1)]
        delta: f64,
        #[arg(long, default_value = "physical")]
        measure: String,
        /// Comma-separated rebalance counts.
        #[arg(long, value_delimiter = ',', default_values_t = vec![64usize, 256, 1024])]
        steps: Vec<usize>,
        #[arg(long, default_value_t = DEFAULT_REFINE)]
        refine: usize,
        /// Export the ledger of path 0 at the finest rebalancing.
        #[arg(long = "ledger-csv")]
        ledger_csv: Option<PathBuf>,
    },
    /// Bound on |r + sigma² − mu|.
    Mu {
        #[command(flatten)]
        market: MarketArgs,
        #[arg(long)]
        delta: f64,
        #[arg(long)]
        epsilon: f64,
        #[arg(long, default_value = "prop3")]
        variant: String,
    },
    /// Monte Carlo check of a drift bound under the physical measure.
    Verify {
        #[command(flatten)]
        market: MarketArgs,
        #[command(flatten)]
        sim: SimArgs,
        #[arg(long)]
        delta: f64,
        #[arg(long)]
        epsilon: f64,
        #[arg(long, default_value = "prop3")]
        variant: String,
    },
    /// Upper and lower probability of {I_T in set}.
    Gtp {
        #[command(flatten)]
        market: MarketArgs,
        #[arg(long)]
        numeraire: String,
        #[arg(long)]
        set: String,
    },
    /// Compare a return series with the sigma² premium prediction.
    Premium {
        #[arg(long)]
        csv: PathBuf,
        #[arg(long, default_value_t = 0.2)]
        sigma: f64,
        #[arg(long, default_value_t = 0.1)]
        delta: f64,
    },
    /// Sample index paths as CSV.
    Simulate {
        #[command(flatten)]
        market: MarketArgs,
        #[arg(long, default_value = "eih")]
        measure: String,
        #[arg(long, default_value_t = 252)]
        steps: usize,
        #[arg(long, default_value_t = 1)]
        n: usize,
        #[arg(long, env = "EIH_SEED", default_value_t = 0)]
        seed: u64,
    },
}

/// What a command produced.
#[derive(Debug, Clone, PartialEq)]
pub enum Output {
    Json { report: Value, plot: Vec<PlotRow> },
    Csv(String),
}

/// One row of tidy plot data.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PlotRow {
    pub series: String,
    pub x: f64,
    pub y: f64,
}

fn row(series: &str, x: f64, y: f64) -> PlotRow {
    PlotRow { series: series.to_owned(), x, y }
}

fn report(command: &Command, result: Value) -> Result<Value> {
    Ok(json!({ "config": serde_json::to_value(command)?, "result": result }))
}

fn parse_set(text: &str) -> Result<IntervalUnion> {
    text.parse()
}

/// Executes one subcommand.
pub fn run(command: &Command) -> Result<Output> {
    match command {
        Command::Interval { market, delta, sided } => {
            let params = market.params()?;
            let sided: Sided = sided.parse()?;
            let chosen = match sided {
                Sided::Two => bounds::two_sided_interval(&params, *delta)?,
                Sided::LowerOnly => bounds::one_sided_intervals(&params, *delta)?.0,
                Sided::UpperOnly => bounds::one_sided_intervals(&params, *delta)?.1,
            };
            let note = chosen
                .trivial
                .then_some("delta >= 1: holding the index already beats it by 1/delta; the interval is trivial");
            let result = json!({
                "interval": chosen,
                "claim_set": chosen.claim_set(&params),
                "note": note,
            });
            let plot = vec![row("log_lower", *delta, chosen.log_lower), row("log_upper", *delta, chosen.log_upper)];
            Ok(Output::Json { report: report(command, result)?, plot })
        }
        Command::Price { market, set, t, spot } => {
            let params = market.params()?;
            let spec = ClaimSpec::new(parse_set(set)?, params)?;
            let spot = spot.unwrap_or(params.i0);
            let price = pricing::claim_price(&spec, *t, spot)?;
            let delta = pricing::claim_delta(&spec, *t, spot)?;
            let result = json!({ "price": price, "delta": delta, "set": spec.set });
            Ok(Output::Json { report: report(command, result)?, plot: vec![row("price", spot, price)] })
        }
        Command::Hedge { market, sim, set, delta, measure, steps, refine, ledger_csv } => {
            let params = market.params()?;
            let spec = match set {
                Some(s) => ClaimSpec::new(parse_set(s)?, params)?,
                None => ClaimSpec::two_sided(params, *delta)?,
            };
            let measure: MeasureKind = measure.parse()?;
            let summaries = hedging::backtest(&spec, measure, steps, *refine, &Runner::new(sim.n_paths, sim.seed))?;
            if let Some(path_out) = ledger_csv {
                let finest = *steps.iter().max().expect("backtest rejected empty steps");
                let path = sample_path(&params, measure, finest * refine.max(&1), PathSeed::new(sim.seed, 0))?;
                let ledger = hedging::replicate(&spec, &path, finest)?;
                ledger.write_csv(File::create(path_out)?)?;
            }
            let plot = summaries
                .iter()
                .flat_map(|s| {
                    [
                        row("rms_error", s.steps as f64, s.rms_error),
                        row("p99_error", s.steps as f64, s.p99_error),
                        row("mean_beat_on_hits", s.steps as f64, s.beat_stats.mean_beat_on_hits),
                    ]
                })
                .collect();
            let result = json!({
                "claim_set": spec.set,
                "initial_price": pricing::claim_price(&spec, 0.0, params.i0)?,
                "summaries": summaries,
            });
            Ok(Output::Json { report: report(command, result)?, plot })
        }
        Command::Mu { market, delta, epsilon, variant } => {
            let params = market.params()?;
            let bound = bounds::mu_bound(&params, *delta, *epsilon, variant.parse()?)?;
            let result = json!({ "bound": bound, "mu": params.mu, "mu_within_bound": bound.contains(params.mu) });
            let plot = vec![
                row("lower", params.horizon, bound.center - bound.halfwidth),
                row("upper", params.horizon, bound.center + bound.halfwidth),
            ];
            Ok(Output::Json { report: report(command, result)?, plot })
        }
        Command::Verify { market, sim, delta, epsilon, variant } => {
            let params = market.params()?;
            let variant: Variant = variant.parse()?;
            let rep = bounds::verify_proposition(&params, *delta, *epsilon, variant, sim.n_paths, sim.seed)?;
            let plot = vec![row("event_freq", params.mu, rep.event_freq), row("beat_freq", params.mu, rep.beat_freq)];
            Ok(Output::Json { report: report(command, serde_json::to_value(&rep)?)?, plot })
        }
        Command::Gtp { market, numeraire, set } => {
            let params = market.params()?;
            let numeraire: Numeraire = numeraire.parse()?;
            let probs = gtp::probabilities(&params, &TerminalEvent::new(parse_set(set)?), numeraire)?;
            let plot = vec![row("upper", 0.0, probs.upper), row("lower", 0.0, probs.lower)];
            Ok(Output::Json { report: report(command, serde_json::to_value(probs)?)?, plot })
        }
        Command::Premium { csv, sigma, delta } => {
            let series = premium::ReturnSeries::from_csv(BufReader::new(File::open(csv)?))?;
            let rep = premium::analyze(&series, *sigma, *delta)?;
            let plot = series
                .rows()
                .iter()
                .map(|r| row("excess_return", r.year as f64, r.equity_return - r.riskless_return))
                .collect();
            Ok(Output::Json { report: report(command, serde_json::to_value(&rep)?)?, plot })
        }
        Command::Simulate { market, measure, steps, n, seed } => {
            let params = market.params()?;
            let measure: MeasureKind = measure.parse()?;
            if *n == 0 {
                return Err(invalid("n", "need at least one path"));
            }
            let mut buf = Vec::new();
            if *n == 1 {
                sample_path(&params, measure, *steps, PathSeed::new(*seed, 0))?.write_csv(&mut buf)?;
            } else {
                let mut w = csv::Writer::from_writer(&mut buf);
                w.write_record(["path", "t", "value"])?;
                for i in 0..*n as u64 {
                    let path = sample_path(&params, measure, *steps, PathSeed::new(*seed, i))?;
                    for (t, v) in path.times.iter().zip(&path.values) {
                        w.write_record([i.to_string(), t.to_string(), v.to_string()])?;
                    }
                }
                w.flush()?;
            }
            Ok(Output::Csv(String::from_utf8(buf).expect("csv output is UTF-8")))
        }
    }
}

/// Re-runs the command embedded in a JSON report.
pub fn replay(report: &Value) -> Result<Output> {
    let config = report.get("config").ok_or_else(|| invalid("report", "missing `config`"))?;
    let command: Command = serde_json::from_value(config.clone())?;
    run(&command)
}

/// Serializes plot rows as `series,x,y`.
pub fn plot_csv(rows: &[PlotRow]) -> Result<String> {
    let mut buf = Vec::new();
    {
        let mut w = csv::Writer::from_writer(&mut buf);
        for r in rows {
            w.serialize(r)?;
        }
        w.flush()?;
    }
    Ok(String::from_utf8(buf).expect("csv output is UTF-8"))
}
