//! Upper and lower probabilities of terminal events `{I_T ∈ E}` with the bond
//! or the index as numeraire.
//!
//! The upper probability is the cheapest initial capital of a prudent
//! strategy whose final value, measured in the numeraire, dominates the
//! event's indicator. In this complete market it is the risk-neutral
//! probability for the bond and the EIH probability for the index, and
//! upper and lower probabilities agree.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::interval::{IntervalUnion, MonotoneMap};
use crate::market::MarketParams;
use crate::pricing::{claim_price, ClaimSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Numeraire {
    Bond,
    Index,
}

impl std::str::FromStr for Numeraire {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "bond" => Ok(Numeraire::Bond),
            "index" => Ok(Numeraire::Index),
            other => Err(invalid("numeraire", format!("expected bond|index, got `{other}`"))),
        }
    }
}

/// The event `{I_T ∈ set}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TerminalEvent {
    pub set: IntervalUnion,
}

impl TerminalEvent {
    pub fn new(set: IntervalUnion) -> Self {
        TerminalEvent { set: IntervalUnion::new(set.intervals().iter().copied()) }
    }

    pub fn complement(&self) -> TerminalEvent {
        TerminalEvent { set: self.set.complement() }
    }
}

/// Risk-neutral probability of the event.
pub fn upper_prob_bond(params: &MarketParams, event: &TerminalEvent) -> Result<f64> {
    params.validate()?;
    let s = params.vol_sqrt_t();
    let mean = params.i0.ln() + (params.r - 0.5 * params.sigma * params.sigma) * params.horizon;
    let standardize = MonotoneMap::affine(1.0 / s, -mean / s)?;
    Ok(event.set.map(MonotoneMap::Log).map(standardize).gaussian_measure())
}

/// EIH probability of the event: the time-0 price, per unit of index, of the
/// claim paying `I_T` on the event.
pub fn upper_prob_index(params: &MarketParams, event: &TerminalEvent) -> Result<f64> {
    let spec = ClaimSpec::new(event.set.clone(), *params)?;
    Ok(claim_price(&spec, 0.0, params.i0)? / params.i0)
}

pub fn upper_prob(params: &MarketParams, event: &TerminalEvent, numeraire: Numeraire) -> Result<f64> {
    match numeraire {
        Numeraire::Bond => upper_prob_bond(params, event),
        Numeraire::Index => upper_prob_index(params, event),
    }
}

/// `1 − upper(complement)`.
pub fn lower_prob(params: &MarketParams, event: &TerminalEvent, numeraire: Numeraire) -> Result<f64> {
    Ok(1.0 - upper_prob(params, &event.complement(), numeraire)?)
}

/// Image of a level set under `x ↦ I₀² e^{2rT} / x`, the terminal slice of the
/// reciprocal process.
pub fn reciprocal_image(params: &MarketParams, set: &IntervalUnion) -> Result<IntervalUnion> {
    let scale = params.i0 * params.i0 * (2.0 * params.r * params.horizon).exp();
    Ok(set.map(MonotoneMap::reciprocal(scale)?))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GtpProbabilities {
    pub upper: f64,
    pub lower: f64,
}

pub fn probabilities(params: &MarketParams, event: &TerminalEvent, numeraire: Numeraire) -> Result<GtpProbabilities> {
    Ok(GtpProbabilities {
        upper: upper_prob(params, event, numeraire)?,
        lower: lower_prob(params, event, numeraire)?,
    })
}
