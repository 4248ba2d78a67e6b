//! Closed-form pricing of the truncated index claim `I_T · 1{I_T ∈ E}`.
//!
//! With `τ = T − t`, the time-`t` price at spot `S` is `S · N(g(E))` where
//! `g(x) = (ln x − ln S)/(σ√τ) − (r/σ)√τ − (σ/2)√τ`, i.e. the probability of
//! `E` under the EIH law started from `S`.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::interval::{IntervalUnion, MonotoneMap};
use crate::market::MarketParams;
use crate::normal;

pub use crate::normal::upper_quantile;

/// Largest absolute delta the pricer reports; beyond this it is clipped.
pub const DELTA_CAP: f64 = 1e6;

/// The claim paying `I_T` on `{I_T ∈ set}` and nothing otherwise.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClaimSpec {
    pub set: IntervalUnion,
    pub params: MarketParams,
}

impl ClaimSpec {
    pub fn new(set: IntervalUnion, params: MarketParams) -> Result<Self> {
        params.validate()?;
        Ok(ClaimSpec { set: IntervalUnion::new(set.intervals().iter().copied()), params })
    }

    /// The claim that pays unless `I_T/(I₀e^{rT})` falls strictly between the
    /// two-sided thresholds at level `delta`.
    pub fn two_sided(params: MarketParams, delta: f64) -> Result<Self> {
        let (a, b) = thresholds_ab(&params, delta)?;
        Self::new(IntervalUnion::at_most(a).union(&IntervalUnion::at_least(b)), params)
    }

    fn check_time(&self, t: f64, spot: f64) -> Result<f64> {
        let tau = self.params.horizon - t;
        if !(t >= 0.0 && tau > 0.0) {
            return Err(invalid("t", format!("{t} is outside [0, T) with T = {}", self.params.horizon)));
        }
        if !(spot > 0.0 && spot.is_finite()) {
            return Err(invalid("spot", format!("{spot} is not a positive level")));
        }
        Ok(tau)
    }

    /// The map from levels to standardized Gaussian coordinates at `(t, spot)`.
    fn standardizer(&self, tau: f64, spot: f64) -> Result<MonotoneMap> {
        let p = &self.params;
        let s = p.sigma * tau.sqrt();
        MonotoneMap::affine(1.0 / s, -spot.ln() / s - p.r * tau.sqrt() / p.sigma - 0.5 * s)
    }

    /// The claim's set in standardized coordinates at `(t, spot)`.
    pub fn standardized_set(&self, t: f64, spot: f64) -> Result<IntervalUnion> {
        let tau = self.check_time(t, spot)?;
        Ok(self.set.map(MonotoneMap::Log).map(self.standardizer(tau, spot)?))
    }
}

/// Gaussian probability of a set on the real line.
pub fn gaussian_measure(e: &IntervalUnion) -> f64 {
    e.gaussian_measure()
}

/// Levels `A < B` whose exclusion set `(−∞, A] ∪ [B, ∞)` has price `δ·I₀`.
pub fn thresholds_ab(params: &MarketParams, delta: f64) -> Result<(f64, f64)> {
    params.validate()?;
    if !(delta > 0.0 && delta < 1.0) {
        return Err(invalid("delta", format!("{delta} is not in (0, 1)")));
    }
    let z = upper_quantile(delta / 2.0)?;
    let center = params.i0.ln() + params.r * params.horizon + 0.5 * params.sigma * params.sigma * params.horizon;
    let spread = z * params.vol_sqrt_t();
    Ok(((center - spread).exp(), (center + spread).exp()))
}

/// Time-`t` price of the claim with the index at `spot`.
pub fn claim_price(spec: &ClaimSpec, t: f64, spot: f64) -> Result<f64> {
    let mass = spec.standardized_set(t, spot)?.gaussian_measure();
    Ok((spot * mass).min(spot))
}

/// Sensitivity of [`claim_price`] to the spot level, clipped to `±DELTA_CAP`.
///
/// `∂/∂S [S·N(g(E))] = N(g(E)) + (1/σ√τ) Σ [φ(g(a)) − φ(g(b))]` over the
/// pieces `[a, b]` of `E`.
pub fn claim_delta(spec: &ClaimSpec, t: f64, spot: f64) -> Result<f64> {
    Ok(claim_delta_raw(spec, t, spot)?.clamp(-DELTA_CAP, DELTA_CAP))
}

/// Unclipped delta.
pub fn claim_delta_raw(spec: &ClaimSpec, t: f64, spot: f64) -> Result<f64> {
    let tau = spec.check_time(t, spot)?;
    let image = spec.standardized_set(t, spot)?;
    let edge: f64 = image
        .intervals()
        .iter()
        .map(|iv| normal::pdf(iv.lo) - normal::pdf(iv.hi))
        .sum();
    Ok(image.gaussian_measure() + edge / (spec.params.sigma * tau.sqrt()))
}

/// Cash paid at `T` when the index closes at `terminal`.
pub fn payoff(spec: &ClaimSpec, terminal: f64) -> f64 {
    if spec.set.contains(terminal) {
        terminal
    } else {
        0.0
    }
}
