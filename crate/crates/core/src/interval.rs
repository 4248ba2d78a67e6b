//! Finite unions of disjoint real intervals.
//!
//! These stand in for the Borel sets that claims and events are written on.
//! Endpoints may be infinite; an endpoint at `0` is an ordinary finite
//! endpoint. Openness is tracked so that point membership is exact, although
//! it never changes a Gaussian measure.
//!
//! The text form is `(-inf,2.034]u[1465.9,inf)`: intervals separated by `u`,
//! brackets giving openness, and `empty` for the empty set.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::normal;

/// One interval with recorded endpoint openness.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
    pub lo_closed: bool,
    pub hi_closed: bool,
}

impl Interval {
    pub fn new(lo: f64, hi: f64, lo_closed: bool, hi_closed: bool) -> Self {
        // `+ 0.0` folds negative zero into zero
        Interval {
            lo: lo + 0.0,
            hi: hi + 0.0,
            lo_closed: lo_closed && lo.is_finite(),
            hi_closed: hi_closed && hi.is_finite(),
        }
    }

    pub fn closed(lo: f64, hi: f64) -> Self {
        Self::new(lo, hi, true, true)
    }

    pub fn open(lo: f64, hi: f64) -> Self {
        Self::new(lo, hi, false, false)
    }

    pub fn is_empty(&self) -> bool {
        self.lo.is_nan()
            || self.hi.is_nan()
            || self.lo > self.hi
            || (self.lo == self.hi && !(self.lo_closed && self.hi_closed))
    }

    pub fn contains(&self, x: f64) -> bool {
        let above = if self.lo_closed { x >= self.lo } else { x > self.lo };
        let below = if self.hi_closed { x <= self.hi } else { x < self.hi };
        above && below
    }
}

/// A normalized finite union of pairwise disjoint intervals, sorted by lower
/// endpoint. Two pieces only stay separate when a gap, possibly a single
/// excluded point, lies between them.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct IntervalUnion {
    intervals: Vec<Interval>,
}

impl IntervalUnion {
    pub fn new(intervals: impl IntoIterator<Item = Interval>) -> Self {
        let mut pieces: Vec<Interval> = intervals
            .into_iter()
            .map(|iv| Interval::new(iv.lo, iv.hi, iv.lo_closed, iv.hi_closed))
            .filter(|iv| !iv.is_empty())
            .collect();
        pieces.sort_by(|a, b| {
            a.lo.partial_cmp(&b.lo)
                .unwrap_or(Ordering::Equal)
                .then(b.lo_closed.cmp(&a.lo_closed))
        });
        let mut merged: Vec<Interval> = Vec::with_capacity(pieces.len());
        for next in pieces {
            if let Some(cur) = merged.last_mut() {
                let touches = next.lo < cur.hi
                    || (next.lo == cur.hi && (cur.hi_closed || next.lo_closed));
                if touches {
                    match next.hi.partial_cmp(&cur.hi) {
                        Some(Ordering::Greater) => {
                            cur.hi = next.hi;
                            cur.hi_closed = next.hi_closed;
                        }
                        Some(Ordering::Equal) => cur.hi_closed |= next.hi_closed,
                        _ => {}
                    }
                    continue;
                }
            }
            merged.push(next);
        }
        IntervalUnion { intervals: merged }
    }

    pub fn empty() -> Self {
        IntervalUnion::default()
    }

    /// The whole real line.
    pub fn full() -> Self {
        Self::new([Interval::open(f64::NEG_INFINITY, f64::INFINITY)])
    }

    /// `(0, ∞)`, every admissible index level.
    pub fn positive() -> Self {
        Self::new([Interval::open(0.0, f64::INFINITY)])
    }

    pub fn point(x: f64) -> Self {
        Self::new([Interval::closed(x, x)])
    }

    /// `(-∞, a]`
    pub fn at_most(a: f64) -> Self {
        Self::new([Interval::new(f64::NEG_INFINITY, a, false, true)])
    }

    /// `[b, ∞)`
    pub fn at_least(b: f64) -> Self {
        Self::new([Interval::new(b, f64::INFINITY, true, false)])
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn contains(&self, x: f64) -> bool {
        self.intervals.iter().any(|iv| iv.contains(x))
    }

    pub fn union(&self, other: &IntervalUnion) -> IntervalUnion {
        Self::new(self.intervals.iter().chain(other.intervals.iter()).copied())
    }

    /// Complement in the real line.
    pub fn complement(&self) -> IntervalUnion {
        let mut out = Vec::with_capacity(self.intervals.len() + 1);
        let mut lo = f64::NEG_INFINITY;
        let mut lo_closed = false;
        for iv in &self.intervals {
            out.push(Interval::new(lo, iv.lo, lo_closed, !iv.lo_closed));
            lo = iv.hi;
            lo_closed = !iv.hi_closed;
        }
        out.push(Interval::new(lo, f64::INFINITY, lo_closed, false));
        Self::new(out)
    }

    /// Pointwise image under a strictly monotone map.
    pub fn map(&self, f: MonotoneMap) -> IntervalUnion {
        Self::new(self.intervals.iter().filter_map(|iv| f.apply(iv)))
    }

    /// Standard Gaussian measure of the set.
    pub fn gaussian_measure(&self) -> f64 {
        let total: f64 = self
            .intervals
            .iter()
            .map(|iv| normal::interval_mass(iv.lo, iv.hi))
            .sum();
        total.clamp(0.0, 1.0)
    }
}

/// Standard Gaussian measure of a set on the real line.
pub fn gaussian_measure(e: &IntervalUnion) -> f64 {
    e.gaussian_measure()
}

/// Strictly monotone scalar maps that interval unions can be pushed through.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MonotoneMap {
    /// `x ↦ slope·x + intercept`, slope nonzero.
    Affine { slope: f64, intercept: f64 },
    /// Natural log; the part of the set at or below 0 is sent to `-∞`.
    Log,
    Exp,
    /// `x ↦ scale / x` on `(0, ∞)`, scale positive; decreasing.
    Reciprocal { scale: f64 },
}

impl MonotoneMap {
    pub fn affine(slope: f64, intercept: f64) -> Result<Self> {
        if !slope.is_finite() || slope == 0.0 || !intercept.is_finite() {
            return Err(Error::NonMonotoneMap(format!(
                "affine map with slope {slope} and intercept {intercept}"
            )));
        }
        Ok(MonotoneMap::Affine { slope, intercept })
    }

    pub fn reciprocal(scale: f64) -> Result<Self> {
        if !(scale.is_finite() && scale > 0.0) {
            return Err(Error::NonMonotoneMap(format!(
                "reciprocal map with scale {scale}"
            )));
        }
        Ok(MonotoneMap::Reciprocal { scale })
    }

    pub fn is_increasing(&self) -> bool {
        match *self {
            MonotoneMap::Affine { slope, .. } => slope > 0.0,
            MonotoneMap::Log | MonotoneMap::Exp => true,
            MonotoneMap::Reciprocal { .. } => false,
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        match *self {
            MonotoneMap::Affine { slope, intercept } => slope * x + intercept,
            MonotoneMap::Log => {
                if x <= 0.0 {
                    f64::NEG_INFINITY
                } else {
                    x.ln()
                }
            }
            MonotoneMap::Exp => x.exp(),
            MonotoneMap::Reciprocal { scale } => {
                if x == 0.0 {
                    f64::INFINITY
                } else {
                    scale / x
                }
            }
        }
    }

    fn apply(&self, iv: &Interval) -> Option<Interval> {
        let (mut lo, mut lo_closed) = (iv.lo, iv.lo_closed);
        let (hi, hi_closed) = (iv.hi, iv.hi_closed);
        if matches!(self, MonotoneMap::Log | MonotoneMap::Reciprocal { .. }) {
            // domain is (0, ∞)
            if hi <= 0.0 {
                return None;
            }
            if lo <= 0.0 {
                lo = 0.0;
                lo_closed = false;
            }
        }
        let (a, b) = (self.eval(lo), self.eval(hi));
        let out = if self.is_increasing() {
            Interval::new(a, b, lo_closed, hi_closed)
        } else {
            Interval::new(b, a, hi_closed, lo_closed)
        };
        (!out.is_empty()).then_some(out)
    }
}

fn format_endpoint(x: f64) -> String {
    if x == f64::INFINITY {
        "inf".to_owned()
    } else if x == f64::NEG_INFINITY {
        "-inf".to_owned()
    } else {
        format!("{x}")
    }
}

impl fmt::Display for IntervalUnion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.intervals.is_empty() {
            return f.write_str("empty");
        }
        for (i, iv) in self.intervals.iter().enumerate() {
            if i > 0 {
                f.write_str("u")?;
            }
            write!(
                f,
                "{}{},{}{}",
                if iv.lo_closed { '[' } else { '(' },
                format_endpoint(iv.lo),
                format_endpoint(iv.hi),
                if iv.hi_closed { ']' } else { ')' },
            )?;
        }
        Ok(())
    }
}

impl FromStr for IntervalUnion {
    type Err = Error;

    fn from_str(input: &str) -> Result<Self> {
        let fail = |reason: String| Error::SetSyntax {
            input: input.to_owned(),
            reason,
        };
        let text: String = input.chars().filter(|c| !c.is_whitespace()).collect();
        if text.is_empty() || text == "empty" {
            return Ok(IntervalUnion::empty());
        }
        let mut pieces = Vec::new();
        for part in text.split(['u', 'U']) {
            let lo_closed = match part.chars().next() {
                Some('[') => true,
                Some('(') => false,
                _ => return Err(fail(format!("`{part}` must start with `(` or `[`"))),
            };
            let hi_closed = match part.chars().last() {
                Some(']') if part.len() > 1 => true,
                Some(')') if part.len() > 1 => false,
                _ => return Err(fail(format!("`{part}` must end with `)` or `]`"))),
            };
            let body = &part[1..part.len() - 1];
            let (a, b) = body
                .split_once(',')
                .ok_or_else(|| fail(format!("`{part}` needs two endpoints")))?;
            let parse = |s: &str| -> Result<f64> {
                match s.parse::<f64>() {
                    Ok(v) if !v.is_nan() => Ok(v),
                    _ => Err(fail(format!("bad endpoint `{s}`"))),
                }
            };
            let (lo, hi) = (parse(a)?, parse(b)?);
            if lo > hi {
                return Err(fail(format!("`{part}` has lower endpoint above upper")));
            }
            pieces.push(Interval::new(lo, hi, lo_closed, hi_closed));
        }
        Ok(IntervalUnion::new(pieces))
    }
}

impl From<IntervalUnion> for String {
    fn from(set: IntervalUnion) -> String {
        set.to_string()
    }
}

impl TryFrom<String> for IntervalUnion {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}
