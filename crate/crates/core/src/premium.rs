//! Equity premium: the `σ²` prediction, its accuracy band and comparison with
//! annual return data.
//!
//! `analyze` works on arithmetic means of annual excess returns, while
//! `realized_log_premium` is the continuous-time log quantity computed from a
//! simulated path. The two are reported separately.

use std::io::Read;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::market::{MarketParams, Path};
use crate::mc::CompensatedSum;
use crate::pricing::upper_quantile;

/// One year of returns, as decimal fractions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReturnRow {
    pub year: i32,
    pub equity_return: f64,
    pub riskless_return: f64,
}

/// Annual equity and riskless returns with strictly increasing years.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReturnSeries {
    rows: Vec<ReturnRow>,
}

impl ReturnSeries {
    pub fn new(rows: Vec<ReturnRow>) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::Series("no observations".into()));
        }
        for w in rows.windows(2) {
            if w[1].year <= w[0].year {
                return Err(Error::Series(format!("year {} follows {}", w[1].year, w[0].year)));
            }
        }
        for row in &rows {
            for (name, v) in [("equity_return", row.equity_return), ("riskless_return", row.riskless_return)] {
                if !v.is_finite() {
                    return Err(Error::Series(format!("{name} in {} is not finite", row.year)));
                }
                if v <= -1.0 {
                    return Err(Error::Series(format!("{name} in {} is {v}, at or below −100%", row.year)));
                }
            }
        }
        Ok(ReturnSeries { rows })
    }

    /// Reads `year,equity_return,riskless_return` CSV.
    pub fn from_csv<R: Read>(input: R) -> Result<Self> {
        let mut rdr = csv::Reader::from_reader(input);
        let header: Vec<String> = rdr.headers()?.iter().map(|h| h.trim().to_owned()).collect();
        if header != ["year", "equity_return", "riskless_return"] {
            return Err(Error::Series(format!(
                "expected header `year,equity_return,riskless_return`, got `{}`",
                header.join(",")
            )));
        }
        let rows = rdr.deserialize().collect::<std::result::Result<Vec<ReturnRow>, _>>()?;
        Self::new(rows)
    }

    pub fn rows(&self) -> &[ReturnRow] {
        &self.rows
    }

    /// Number of annual observations, used as the horizon in years.
    pub fn span(&self) -> usize {
        self.rows.len()
    }

    /// Pairs of consecutive years with missing years between them.
    pub fn gaps(&self) -> Vec<(i32, i32)> {
        self.rows
            .windows(2)
            .filter(|w| w[1].year != w[0].year + 1)
            .map(|w| (w[0].year, w[1].year))
            .collect()
    }

    /// Human-readable notes on gaps and on values that look like percentages.
    pub fn warnings(&self) -> Vec<String> {
        let mut out: Vec<String> = self
            .gaps()
            .into_iter()
            .map(|(a, b)| format!("years {a} and {b} are not contiguous"))
            .collect();
        if let Some(row) = self.rows.iter().find(|r| r.equity_return.abs() > 1.0 || r.riskless_return.abs() > 1.0) {
            out.push(format!(
                "a return above 100% in absolute value (year {}); inputs must be decimal fractions, not percent",
                row.year
            ));
        }
        out
    }

    /// Arithmetic mean of `equity_return − riskless_return`.
    pub fn mean_premium(&self) -> f64 {
        let sum: CompensatedSum = self.rows.iter().map(|r| r.equity_return - r.riskless_return).collect();
        sum.total() / self.rows.len() as f64
    }
}

/// Predicted premium against realized, with the accuracy band.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PremiumReport {
    pub predicted: f64,
    pub halfwidth: f64,
    pub realized: f64,
    pub inside: bool,
    #[serde(rename = "T")]
    pub horizon: f64,
    pub delta: f64,
    pub sigma: f64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

/// Expected equity premium `σ²`.
pub fn predicted_premium(sigma: f64) -> f64 {
    sigma * sigma
}

/// `z_{δ/2} σ / √T`
pub fn premium_halfwidth(sigma: f64, horizon: f64, delta: f64) -> Result<f64> {
    if !(horizon > 0.0) {
        return Err(invalid("T", format!("{horizon} must be positive")));
    }
    if !(sigma >= 0.0 && sigma.is_finite()) {
        return Err(invalid("sigma", format!("{sigma} must be nonnegative")));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(invalid("delta", format!("{delta} is not in (0, 1)")));
    }
    Ok(upper_quantile(delta / 2.0)? * sigma / horizon.sqrt())
}

/// Scores a realized premium against `σ² ± halfwidth`.
pub fn assess(realized: f64, sigma: f64, horizon: f64, delta: f64) -> Result<PremiumReport> {
    if !realized.is_finite() {
        return Err(invalid("realized", "not finite"));
    }
    let predicted = predicted_premium(sigma);
    let halfwidth = premium_halfwidth(sigma, horizon, delta)?;
    Ok(PremiumReport {
        predicted,
        halfwidth,
        realized,
        inside: (realized - predicted).abs() < halfwidth,
        horizon,
        delta,
        sigma,
        warnings: Vec::new(),
    })
}

/// Compares the series' mean annual premium with `σ²`, taking `T` to be the
/// number of observations.
pub fn analyze(series: &ReturnSeries, sigma: f64, delta: f64) -> Result<PremiumReport> {
    let mut report = assess(series.mean_premium(), sigma, series.span() as f64, delta)?;
    report.warnings = series.warnings();
    Ok(report)
}

/// `(ln(I_T/I₀) + σ²T/2 − rT − σ²T)/T` on a simulated path.
pub fn realized_log_premium(path: &Path, params: &MarketParams) -> f64 {
    let t = path.horizon();
    let s2 = params.sigma * params.sigma;
    ((path.terminal() / path.values[0]).ln() + 0.5 * s2 * t - params.r * t - s2 * t) / t
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::market::MeasureKind;
    use crate::mc::PathSeed;

    fn constant_series(n: usize, premium: f64) -> ReturnSeries {
        ReturnSeries::new(
            (0..n)
                .map(|k| ReturnRow { year: 1889 + k as i32, equity_return: 0.01 + premium, riskless_return: 0.01 })
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn predicted_values() {
        assert_eq!(predicted_premium(0.2), 0.2 * 0.2);
        assert!((predicted_premium(0.2) - 0.04).abs() < 1e-17);
        assert_eq!(predicted_premium(0.0), 0.0);
        assert!((predicted_premium(0.16) - 0.0256).abs() < 1e-17);
    }

    #[test]
    fn halfwidths() {
        assert!((premium_halfwidth(0.2, 122.0, 0.1).unwrap() - 0.0298).abs() < 5e-5);
        assert!((premium_halfwidth(0.2, 209.0, 0.1).unwrap() - 0.0228).abs() < 5e-5);
        assert_eq!(premium_halfwidth(0.2, f64::INFINITY, 0.1).unwrap(), 0.0);
        assert!(premium_halfwidth(0.2, 0.0, 0.1).is_err());
    }

    #[test]
    fn centered_series_is_inside() {
        let report = analyze(&constant_series(122, 0.04), 0.2, 0.1).unwrap();
        assert_eq!(report.horizon, 122.0);
        assert!(report.inside);
        assert!((report.realized - 0.04).abs() < 1e-15);
    }

    #[test]
    fn reported_premia_are_inside() {
        let a = assess(0.0605, 0.2, 122.0, 0.1).unwrap();
        assert!(a.inside);
        let b = assess(0.0517, 0.2, 209.0, 0.1).unwrap();
        assert!(b.inside);
        let c = assess(0.075, 0.2, 122.0, 0.1).unwrap();
        assert!(!c.inside);
    }

    #[test]
    fn series_validation() {
        assert!(ReturnSeries::new(vec![]).is_err());
        let row = |year, e| ReturnRow { year, equity_return: e, riskless_return: 0.0 };
        assert!(ReturnSeries::new(vec![row(2000, 0.1), row(2000, 0.1)]).is_err());
        assert!(ReturnSeries::new(vec![row(2000, -1.0)]).is_err());
        assert!(ReturnSeries::new(vec![row(2000, f64::NAN)]).is_err());
        let gapped = ReturnSeries::new(vec![row(2000, 0.1), row(2003, 0.1)]).unwrap();
        assert_eq!(gapped.gaps(), vec![(2000, 2003)]);
        let pct = ReturnSeries::new(vec![row(2000, 12.0)]).unwrap();
        assert!(pct.warnings().iter().any(|w| w.contains("percent")));
    }

    #[test]
    fn csv_ingest() {
        let text = "year,equity_return,riskless_return\n2001,0.10,0.02\n2002,-0.05,0.01\n";
        let s = ReturnSeries::from_csv(text.as_bytes()).unwrap();
        assert_eq!(s.span(), 2);
        assert!((s.mean_premium() - 0.01).abs() < 1e-15);
        let bad = "yr,eq,rf\n2001,0.1,0.0\n";
        assert!(ReturnSeries::from_csv(bad.as_bytes()).is_err());
        let bad = "year,equity_return,riskless_return\n2001,abc,0.0\n";
        assert!(ReturnSeries::from_csv(bad.as_bytes()).is_err());
    }

    #[test]
    fn median_path_has_zero_log_premium() {
        let p = MarketParams::new(0.0, 0.2, 0.03, 50.0, 1.0).unwrap();
        let it = ((0.03 + 0.02) * 50.0f64).exp();
        let path = Path {
            times: vec![0.0, 50.0],
            values: vec![1.0, it],
            measure: MeasureKind::Eih,
            seed: PathSeed::new(0, 0),
            reciprocal_of_physical: false,
        };
        assert!(realized_log_premium(&path, &p).abs() < 1e-15);
        let z = upper_quantile(0.05).unwrap();
        let edge = Path { values: vec![1.0, (0.03 * 50.0 + 0.02 * 50.0 + z * 0.2 * 50f64.sqrt()).exp()], ..path };
        assert!((realized_log_premium(&edge, &p) - z * 0.2 / 50f64.sqrt()).abs() < 1e-14);
    }
}
