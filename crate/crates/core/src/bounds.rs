//! Prediction intervals for `I_T / e^{rT}` and the drift bounds they imply.
//!
//! A strategy that holds the claim on the exclusion set and hedges it starts
//! with `δ` per unit of index and ends with `I_T` on the set, so it beats the
//! index by `1/δ` whenever the index leaves the interval. Translating the
//! interval through the explicit solution of the physical model pins `μ`
//! near `r + σ²`.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::interval::IntervalUnion;
use crate::market::{sample_terminal, MarketParams, MeasureKind};
use crate::mc::{FreqEstimate, Runner, DEFAULT_LEVEL};
use crate::pricing::{claim_price, upper_quantile, ClaimSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sided {
    Two,
    LowerOnly,
    UpperOnly,
}

impl std::str::FromStr for Sided {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "two" => Ok(Sided::Two),
            "lower" | "lower_only" => Ok(Sided::LowerOnly),
            "upper" | "upper_only" => Ok(Sided::UpperOnly),
            other => Err(invalid("sided", format!("expected two|lower|upper, got `{other}`"))),
        }
    }
}

/// Open interval for `I_T/(I₀e^{rT})` outside of which a prudent strategy
/// beats the index by `1/δ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PredictionInterval {
    pub lower: f64,
    pub upper: f64,
    pub log_lower: f64,
    pub log_upper: f64,
    pub delta: f64,
    pub sided: Sided,
    /// `δ ≥ 1`: holding the index already beats it by `1/δ`, so no outcome is
    /// excluded and the interval collapses to its center.
    pub trivial: bool,
}

impl PredictionInterval {
    fn from_logs(log_lower: f64, log_upper: f64, delta: f64, sided: Sided, trivial: bool) -> Self {
        PredictionInterval {
            lower: log_lower.exp(),
            upper: log_upper.exp(),
            log_lower,
            log_upper,
            delta,
            sided,
            trivial,
        }
    }

    /// Whether the growth ratio `I_T/(I₀e^{rT})` lies strictly inside.
    pub fn contains(&self, ratio: f64) -> bool {
        self.lower < ratio && ratio < self.upper
    }

    /// Index-level set `E` of the claim whose hedge beats the index off the interval.
    pub fn claim_set(&self, params: &MarketParams) -> IntervalUnion {
        if self.trivial {
            return IntervalUnion::positive();
        }
        let scale = params.i0 * params.bond(params.horizon);
        let below = IntervalUnion::at_most(scale * self.lower);
        let above = IntervalUnion::at_least(scale * self.upper);
        match self.sided {
            Sided::Two => below.union(&above),
            Sided::LowerOnly => below,
            Sided::UpperOnly => above,
        }
    }

    pub fn claim(&self, params: &MarketParams) -> Result<ClaimSpec> {
        ClaimSpec::new(self.claim_set(params), *params)
    }
}

fn check_delta(delta: f64) -> Result<()> {
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(invalid("delta", format!("{delta} must be positive")));
    }
    Ok(())
}

/// Two-sided interval `e^{σ²T/2 ∓ z_{δ/2}σ√T}`.
pub fn two_sided_interval(params: &MarketParams, delta: f64) -> Result<PredictionInterval> {
    params.validate()?;
    check_delta(delta)?;
    let center = 0.5 * params.sigma * params.sigma * params.horizon;
    if delta >= 1.0 {
        return Ok(PredictionInterval::from_logs(center, center, delta, Sided::Two, true));
    }
    let spread = upper_quantile(delta / 2.0)? * params.vol_sqrt_t();
    Ok(PredictionInterval::from_logs(center - spread, center + spread, delta, Sided::Two, false))
}

/// The lower-bound and upper-bound intervals, each using `z_δ`.
pub fn one_sided_intervals(params: &MarketParams, delta: f64) -> Result<(PredictionInterval, PredictionInterval)> {
    params.validate()?;
    check_delta(delta)?;
    let center = 0.5 * params.sigma * params.sigma * params.horizon;
    if delta >= 1.0 {
        return Ok((
            PredictionInterval::from_logs(center, center, delta, Sided::LowerOnly, true),
            PredictionInterval::from_logs(center, center, delta, Sided::UpperOnly, true),
        ));
    }
    let spread = upper_quantile(delta)? * params.vol_sqrt_t();
    Ok((
        PredictionInterval::from_logs(center - spread, f64::INFINITY, delta, Sided::LowerOnly, false),
        PredictionInterval::from_logs(f64::NEG_INFINITY, center + spread, delta, Sided::UpperOnly, false),
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    /// Strategy depends on `σ, r, T, δ`; two-sided interval, `z_{δ/2}`.
    Prop3,
    /// Strategy may also depend on `μ, ε`; one-sided interval, `z_δ`.
    Prop4,
}

impl std::str::FromStr for Variant {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "prop3" => Ok(Variant::Prop3),
            "prop4" => Ok(Variant::Prop4),
            other => Err(invalid("variant", format!("expected prop3|prop4, got `{other}`"))),
        }
    }
}

/// `|r + σ² − μ| < halfwidth` unless a prudent strategy beats the index by
/// `1/δ` with probability at least `1 − ε`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MuBound {
    pub center: f64,
    pub halfwidth: f64,
    pub delta: f64,
    pub epsilon: f64,
    pub variant: Variant,
}

impl MuBound {
    pub fn contains(&self, mu: f64) -> bool {
        (self.center - mu).abs() < self.halfwidth
    }
}

/// For `δ ≥ 1` the index itself beats by `1/δ`, so the halfwidth is 0.
pub fn mu_bound(params: &MarketParams, delta: f64, epsilon: f64, variant: Variant) -> Result<MuBound> {
    params.validate()?;
    check_delta(delta)?;
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(invalid("epsilon", format!("{epsilon} is not in (0, 1)")));
    }
    let z_eps = upper_quantile(epsilon)?;
    let halfwidth = if delta >= 1.0 {
        0.0
    } else {
        let z_delta = match variant {
            Variant::Prop3 => upper_quantile(delta / 2.0)?,
            Variant::Prop4 => upper_quantile(delta)?,
        };
        (z_delta + z_eps) * params.sigma / params.horizon.sqrt()
    };
    Ok(MuBound {
        center: params.r + params.sigma * params.sigma,
        halfwidth,
        delta,
        epsilon,
        variant,
    })
}

/// The interval a verification run tests, with its hedge claim.
///
/// `Prop4` picks the side by the sign of `r + σ² − μ`: a drift above the EIH
/// drift is exploited with the upper-bound strategy `[B, ∞)`, otherwise with
/// the lower-bound strategy `(−∞, A]`.
pub fn strategy_interval(params: &MarketParams, delta: f64, variant: Variant) -> Result<PredictionInterval> {
    match variant {
        Variant::Prop3 => two_sided_interval(params, delta),
        Variant::Prop4 => {
            let (lower, upper) = one_sided_intervals(params, delta)?;
            let gap = params.r + params.sigma * params.sigma - params.mu;
            Ok(if gap < 0.0 { upper } else { lower })
        }
    }
}

/// Simulation check of a drift bound.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub variant: Variant,
    pub delta: f64,
    pub epsilon: f64,
    pub n_paths: usize,
    /// Frequency of `I_T/e^{rT}` inside the strategy's prediction interval.
    pub event_freq: f64,
    pub event_ci: (f64, f64),
    /// Frequency of the strategy beating the index by at least `1/δ`.
    pub beat_freq: f64,
    pub beat_ci: (f64, f64),
    pub bound_halfwidth: f64,
    /// Whether `μ` satisfies the bound; if not, `beat_freq ≥ 1 − ε` is the claim.
    pub mu_within_bound: bool,
    pub sided: Sided,
    pub claim_set: IntervalUnion,
    /// `(K_T/I_T)/(K_0/I_0)` on a hit with exact replication.
    pub beat_factor_on_hits: f64,
}

/// Samples physical-measure terminal values and scores the interval event and
/// the closed-form payoff of the associated strategy on each.
pub fn verify_proposition(
    params: &MarketParams,
    delta: f64,
    epsilon: f64,
    variant: Variant,
    n_paths: usize,
    seed: u64,
) -> Result<VerificationReport> {
    let bound = mu_bound(params, delta, epsilon, variant)?;
    let interval = strategy_interval(params, delta, variant)?;
    let claim = interval.claim(params)?;
    let initial_ratio = claim_price(&claim, 0.0, params.i0)? / params.i0;
    let factor_on_hit = 1.0 / initial_ratio;
    // price is δ up to rounding; compare factors with a relative tolerance
    let target = (1.0 / delta.min(1.0)) * (1.0 - 1e-9);
    let growth = params.i0 * params.bond(params.horizon);

    let outcomes = Runner::new(n_paths, seed).map(|_, rng| {
        let terminal = sample_terminal(params, MeasureKind::Physical, rng);
        let inside = interval.contains(terminal / growth);
        let beat = claim.set.contains(terminal) && factor_on_hit >= target;
        Ok((inside, beat))
    })?;
    let n = n_paths as u64;
    let inside = FreqEstimate::new(outcomes.iter().filter(|o| o.0).count() as u64, n, DEFAULT_LEVEL)?;
    let beat = FreqEstimate::new(outcomes.iter().filter(|o| o.1).count() as u64, n, DEFAULT_LEVEL)?;
    Ok(VerificationReport {
        variant,
        delta,
        epsilon,
        n_paths,
        event_freq: inside.p_hat,
        event_ci: (inside.wilson_lo, inside.wilson_hi),
        beat_freq: beat.p_hat,
        beat_ci: (beat.wilson_lo, beat.wilson_hi),
        bound_halfwidth: bound.halfwidth,
        mu_within_bound: bound.contains(params.mu),
        sided: interval.sided,
        claim_set: claim.set,
        beat_factor_on_hits: factor_on_hit,
    })
}
