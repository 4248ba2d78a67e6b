//! Truncated index claims under the Black–Scholes–Merton model.
//!
//! The claim that pays the index level `I_T` when `I_T` lands in a set `E`,
//! and nothing otherwise, costs exactly the EIH-measure probability of `E`
//! per unit of index. Holding it and hedging it with index and bond turns
//! "the index ended outside a prediction interval" into "a nonnegative
//! strategy beat the index by `1/δ`". This crate prices and replicates such
//! claims, derives the resulting prediction intervals and drift bounds,
//! checks them by simulation, compares the `σ²` equity-premium prediction
//! with return data, and evaluates the bond- and index-numeraire
//! probabilities of terminal events.
//!
//! Start with [`pricing`] and [`bounds`]; the `examples/` directory of this
//! crate has one runnable program per capability.

pub mod bounds;
pub mod cli;
pub mod error;
pub mod gtp;
pub mod hedging;
pub mod interval;
pub mod market;
pub mod mc;
pub mod normal;
pub mod premium;
pub mod pricing;

pub use error::{Error, Result};
pub use interval::{Interval, IntervalUnion, MonotoneMap};
pub use market::{MarketParams, MeasureKind, Path};
pub use mc::{FreqEstimate, PathSeed, Runner};
pub use pricing::ClaimSpec;
