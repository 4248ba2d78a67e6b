//! Index dynamics under the physical, risk-neutral and EIH measures.
//!
//! All three are geometric Brownian motions that differ only in drift, so
//! paths are sampled exactly from log-normal increments.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::mc::{PathRng, PathSeed};

/// Model parameters: physical drift, volatility, interest rate, horizon and
/// initial index level.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MarketParams {
    pub mu: f64,
    pub sigma: f64,
    pub r: f64,
    #[serde(rename = "T")]
    pub horizon: f64,
    pub i0: f64,
}

impl MarketParams {
    pub fn new(mu: f64, sigma: f64, r: f64, horizon: f64, i0: f64) -> Result<Self> {
        let p = MarketParams { mu, sigma, r, horizon, i0 };
        p.validate()?;
        Ok(p)
    }

    /// Parameters with `I₀ = 1` and the physical drift set to the EIH drift.
    pub fn eih(sigma: f64, r: f64, horizon: f64) -> Result<Self> {
        Self::new(r + sigma * sigma, sigma, r, horizon, 1.0)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |what: String| Err(Error::InvalidParams(what));
        if !(self.sigma > 0.0 && self.sigma.is_finite()) {
            return bad(format!("sigma must be positive and finite, got {}", self.sigma));
        }
        if !(self.horizon > 0.0 && self.horizon.is_finite()) {
            return bad(format!("T must be positive and finite, got {}", self.horizon));
        }
        if !(self.i0 > 0.0 && self.i0.is_finite()) {
            return bad(format!("i0 must be positive and finite, got {}", self.i0));
        }
        if !self.r.is_finite() || !self.mu.is_finite() {
            return bad(format!("r and mu must be finite, got r={} mu={}", self.r, self.mu));
        }
        Ok(())
    }

    pub fn with_mu(mut self, mu: f64) -> Self {
        self.mu = mu;
        self
    }

    pub fn with_horizon(mut self, horizon: f64) -> Self {
        self.horizon = horizon;
        self
    }

    /// `σ√T`
    pub fn vol_sqrt_t(&self) -> f64 {
        self.sigma * self.horizon.sqrt()
    }

    /// Bond value `e^{rt}` per unit invested at time 0.
    pub fn bond(&self, t: f64) -> f64 {
        (self.r * t).exp()
    }
}

/// Which drift the index follows.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MeasureKind {
    /// Drift `μ`.
    Physical,
    /// Drift `r`.
    RiskNeutral,
    /// Drift `r + σ²`.
    Eih,
}

impl std::str::FromStr for MeasureKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "physical" => Ok(MeasureKind::Physical),
            "risk_neutral" | "risk-neutral" | "rn" => Ok(MeasureKind::RiskNeutral),
            "eih" => Ok(MeasureKind::Eih),
            other => Err(invalid("measure", format!("unknown measure `{other}`"))),
        }
    }
}

pub fn drift(params: &MarketParams, kind: MeasureKind) -> f64 {
    match kind {
        MeasureKind::Physical => params.mu,
        MeasureKind::RiskNeutral => params.r,
        MeasureKind::Eih => params.r + params.sigma * params.sigma,
    }
}

/// A sampled index trajectory on a uniform grid over `[0, T]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Path {
    pub times: Vec<f64>,
    pub values: Vec<f64>,
    pub measure: MeasureKind,
    pub seed: PathSeed,
    /// Set on the reciprocal of a physical-measure path. Such a path follows
    /// drift `2r + σ² − μ`, which is not one of the three named measures.
    pub reciprocal_of_physical: bool,
}

impl Path {
    pub fn n_steps(&self) -> usize {
        self.times.len() - 1
    }

    pub fn horizon(&self) -> f64 {
        *self.times.last().expect("path has at least two points")
    }

    pub fn terminal(&self) -> f64 {
        *self.values.last().expect("path has at least two points")
    }

    /// Drift of the law this path was drawn from.
    pub fn effective_drift(&self, params: &MarketParams) -> f64 {
        let d = drift(params, self.measure);
        if self.reciprocal_of_physical {
            2.0 * params.r + params.sigma * params.sigma - d
        } else {
            d
        }
    }

    /// Writes `t,value` rows; floats use shortest round-trip formatting.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["t", "value"])?;
        for (t, v) in self.times.iter().zip(&self.values) {
            w.write_record([t.to_string(), v.to_string()])?;
        }
        w.flush()?;
        Ok(())
    }

    /// Reads the `t,value` grid written by [`Path::write_csv`]. The measure and
    /// seed are not part of the file and must be supplied.
    pub fn read_csv<R: Read>(input: R, measure: MeasureKind, seed: PathSeed) -> Result<Path> {
        let mut rdr = csv::Reader::from_reader(input);
        let headers = rdr.headers()?.clone();
        if headers.iter().collect::<Vec<_>>() != ["t", "value"] {
            return Err(invalid("csv", format!("expected header `t,value`, got `{}`", headers.iter().collect::<Vec<_>>().join(","))));
        }
        let (mut times, mut values) = (Vec::new(), Vec::new());
        for row in rdr.deserialize::<(f64, f64)>() {
            let (t, v) = row?;
            times.push(t);
            values.push(v);
        }
        if times.len() < 2 || times.windows(2).any(|w| w[1] <= w[0]) || values.iter().any(|v| !(*v > 0.0)) {
            return Err(invalid("csv", "need ≥ 2 rows, strictly increasing t and positive values"));
        }
        Ok(Path { times, values, measure, seed, reciprocal_of_physical: false })
    }
}

fn uniform_grid(horizon: f64, n_steps: usize) -> Vec<f64> {
    (0..=n_steps)
        .map(|k| if k == n_steps { horizon } else { horizon * k as f64 / n_steps as f64 })
        .collect()
}

/// Draws the path with reproducibility token `seed` using exact log-normal steps.
pub fn sample_path(params: &MarketParams, kind: MeasureKind, n_steps: usize, seed: PathSeed) -> Result<Path> {
    sample_path_with(params, kind, n_steps, seed, &mut seed.rng())
}

/// Like [`sample_path`] but draws from a caller-held generator.
pub fn sample_path_with(
    params: &MarketParams,
    kind: MeasureKind,
    n_steps: usize,
    seed: PathSeed,
    rng: &mut PathRng,
) -> Result<Path> {
    params.validate()?;
    if n_steps == 0 {
        return Err(invalid("n_steps", "need at least one step"));
    }
    let times = uniform_grid(params.horizon, n_steps);
    let mu = drift(params, kind);
    let sigma = params.sigma;
    let mut values = Vec::with_capacity(n_steps + 1);
    let mut log_level = params.i0.ln();
    values.push(params.i0);
    for w in times.windows(2) {
        let dt = w[1] - w[0];
        log_level += (mu - 0.5 * sigma * sigma) * dt + sigma * dt.sqrt() * rng.standard_normal();
        values.push(log_level.exp());
    }
    Ok(Path { times, values, measure: kind, seed, reciprocal_of_physical: false })
}

/// Exact draw of `I_T` alone.
pub fn sample_terminal(params: &MarketParams, kind: MeasureKind, rng: &mut PathRng) -> f64 {
    let mu = drift(params, kind);
    let t = params.horizon;
    params.i0 * ((mu - 0.5 * params.sigma * params.sigma) * t + params.vol_sqrt_t() * rng.standard_normal()).exp()
}

/// Maps a path to `I*_t = I₀² e^{2rt} / I_t`, so that `√(I_t I*_t) = I₀ e^{rt}`.
///
/// Risk-neutral and EIH paths swap measures. A physical path keeps the
/// `Physical` tag and has `reciprocal_of_physical` toggled.
pub fn reciprocal_path(path: &Path, params: &MarketParams) -> Path {
    let scale = params.i0 * params.i0;
    let values = path
        .times
        .iter()
        .zip(&path.values)
        .map(|(&t, &v)| scale * (2.0 * params.r * t).exp() / v)
        .collect();
    let (measure, flag) = match path.measure {
        MeasureKind::RiskNeutral => (MeasureKind::Eih, path.reciprocal_of_physical),
        MeasureKind::Eih => (MeasureKind::RiskNeutral, path.reciprocal_of_physical),
        MeasureKind::Physical => (MeasureKind::Physical, !path.reciprocal_of_physical),
    };
    Path {
        times: path.times.clone(),
        values,
        measure,
        seed: path.seed,
        reciprocal_of_physical: flag,
    }
}
