//! Monte Carlo runner and the statistics used to judge its output.
//!
//! Path `i` of a run with seed `s` draws from ChaCha8 keyed by `s` on stream
//! `i`. Per-path results are collected in path order and reduced sequentially
//! with compensated summation, so aggregates are bit-identical for any worker
//! count.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::normal;

/// Minimum number of paths accepted by the runner.
pub const MIN_PATHS: usize = 100;

/// Confidence level used for frequency intervals unless overridden.
pub const DEFAULT_LEVEL: f64 = 0.95;

/// Reproducibility token for one path: the run seed and the path's stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PathSeed {
    pub seed: u64,
    pub stream: u64,
}

impl PathSeed {
    pub fn new(seed: u64, stream: u64) -> Self {
        PathSeed { seed, stream }
    }

    pub fn rng(self) -> PathRng {
        PathRng::new(self)
    }
}

/// Counter-based generator for a single path.
#[derive(Debug, Clone)]
pub struct PathRng(ChaCha8Rng);

impl PathRng {
    pub fn new(seed: PathSeed) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.seed);
        rng.set_stream(seed.stream);
        PathRng(rng)
    }

    /// Uniform on the open interval `(0, 1)`, on a 2⁻⁵³ lattice offset by half a step.
    pub fn uniform(&mut self) -> f64 {
        ((self.0.next_u64() >> 11) as f64 + 0.5) * (1.0 / 9_007_199_254_740_992.0)
    }

    /// Standard normal draw by inversion.
    pub fn standard_normal(&mut self) -> f64 {
        normal::quantile(self.uniform())
    }

    pub fn bernoulli(&mut self, p: f64) -> bool {
        self.uniform() < p
    }
}

/// Neumaier compensated sum.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn total(&self) -> f64 {
        self.sum + self.carry
    }
}

impl FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = CompensatedSum::default();
        for x in iter {
            acc.add(x);
        }
        acc
    }
}

/// Sample mean, unbiased variance and standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Moments {
    pub n: usize,
    pub mean: f64,
    pub variance: f64,
    pub std_error: f64,
}

impl Moments {
    pub fn of(xs: &[f64]) -> Moments {
        let n = xs.len();
        if n == 0 {
            return Moments { n, mean: f64::NAN, variance: f64::NAN, std_error: f64::NAN };
        }
        let mean = xs.iter().copied().collect::<CompensatedSum>().total() / n as f64;
        let variance = if n > 1 {
            xs.iter()
                .map(|x| (x - mean) * (x - mean))
                .collect::<CompensatedSum>()
                .total()
                / (n - 1) as f64
        } else {
            0.0
        };
        Moments { n, mean, variance, std_error: (variance / n as f64).sqrt() }
    }
}

/// Empirical frequency with its Wilson score interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FreqEstimate {
    pub hits: u64,
    pub n: u64,
    pub p_hat: f64,
    pub wilson_lo: f64,
    pub wilson_hi: f64,
}

impl FreqEstimate {
    pub fn new(hits: u64, n: u64, level: f64) -> Result<Self> {
        let (wilson_lo, wilson_hi) = wilson_interval(hits, n, level)?;
        Ok(FreqEstimate { hits, n, p_hat: hits as f64 / n as f64, wilson_lo, wilson_hi })
    }

    pub fn covers(&self, p: f64) -> bool {
        self.wilson_lo <= p && p <= self.wilson_hi
    }
}

/// Wilson score interval for `hits` successes out of `n` at the given two-sided level.
pub fn wilson_interval(hits: u64, n: u64, level: f64) -> Result<(f64, f64)> {
    if n == 0 {
        return Err(invalid("n", "need at least one trial"));
    }
    if hits > n {
        return Err(invalid("hits", format!("{hits} exceeds n = {n}")));
    }
    if !(level > 0.0 && level < 1.0) {
        return Err(invalid("level", format!("{level} is not in (0, 1)")));
    }
    let z = normal::upper_quantile((1.0 - level) / 2.0)?;
    let nf = n as f64;
    let p = hits as f64 / nf;
    let z2 = z * z;
    let denom = 1.0 + z2 / nf;
    let center = (p + z2 / (2.0 * nf)) / denom;
    let half = z / denom * (p * (1.0 - p) / nf + z2 / (4.0 * nf * nf)).sqrt();
    let lo = if hits == 0 { 0.0 } else { (center - half).max(0.0) };
    let hi = if hits == n { 1.0 } else { (center + half).min(1.0) };
    Ok((lo.min(p), hi.max(p)))
}

/// Runs per-path procedures over a counter-seeded path set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Runner {
    pub n_paths: usize,
    pub seed: u64,
    /// Worker count; `None` uses rayon's global pool.
    pub threads: Option<usize>,
}

impl Runner {
    pub fn new(n_paths: usize, seed: u64) -> Self {
        Runner { n_paths, seed, threads: None }
    }

    pub fn with_threads(mut self, threads: usize) -> Self {
        self.threads = Some(threads);
        self
    }

    /// Evaluates `f` on every path and returns the results in path order.
    ///
    /// The first failing path (by index) aborts the run and is reported with
    /// its seed and stream for replay.
    pub fn map<T, F>(&self, f: F) -> Result<Vec<T>>
    where
        T: Send,
        F: Fn(PathSeed, &mut PathRng) -> Result<T> + Sync,
    {
        if self.n_paths < MIN_PATHS {
            return Err(invalid(
                "n_paths",
                format!("{} is below the minimum of {MIN_PATHS}", self.n_paths),
            ));
        }
        let seed = self.seed;
        let job = || {
            (0..self.n_paths as u64)
                .into_par_iter()
                .map(|i| {
                    let ps = PathSeed::new(seed, i);
                    f(ps, &mut ps.rng())
                })
                .collect::<Vec<Result<T>>>()
        };
        let results = match self.threads {
            Some(k) => rayon::ThreadPoolBuilder::new()
                .num_threads(k.max(1))
                .build()
                .map_err(|e| invalid("threads", e.to_string()))?
                .install(job),
            None => job(),
        };
        let mut out = Vec::with_capacity(results.len());
        for (i, r) in results.into_iter().enumerate() {
            match r {
                Ok(v) => out.push(v),
                Err(e) => {
                    return Err(Error::PathFailed {
                        path_index: i as u64,
                        seed,
                        stream: i as u64,
                        source: Box::new(e),
                    })
                }
            }
        }
        Ok(out)
    }

    /// Moments of a scalar per-path statistic.
    pub fn run_experiment<F>(&self, f: F) -> Result<Moments>
    where
        F: Fn(PathSeed, &mut PathRng) -> Result<f64> + Sync,
    {
        Ok(Moments::of(&self.map(f)?))
    }

    /// Frequency of a per-path indicator with a Wilson interval at `level`.
    pub fn estimate_frequency<F>(&self, level: f64, f: F) -> Result<FreqEstimate>
    where
        F: Fn(PathSeed, &mut PathRng) -> Result<bool> + Sync,
    {
        let hits = self.map(f)?.into_iter().filter(|&b| b).count() as u64;
        FreqEstimate::new(hits, self.n_paths as u64, level)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wilson_edges() {
        let (lo, hi) = wilson_interval(0, 50, 0.95).unwrap();
        assert_eq!(lo, 0.0);
        assert!(hi > 0.0 && hi < 0.1);
        let (lo, hi) = wilson_interval(50, 50, 0.95).unwrap();
        assert_eq!(hi, 1.0);
        assert!(lo > 0.9);
    }

    #[test]
    fn wilson_fifty_of_hundred() {
        // closed form at z = 1.959964: center 0.5, half = z/(1+z²/n)·sqrt(0.25/n + z²/4n²)
        let z: f64 = 1.959_963_984_540_054;
        let n = 100.0;
        let half = z / (1.0 + z * z / n) * (0.25 / n + z * z / (4.0 * n * n)).sqrt();
        let (lo, hi) = wilson_interval(50, 100, 0.95).unwrap();
        assert!((lo - (0.5 - half)).abs() < 1e-14);
        assert!((hi - (0.5 + half)).abs() < 1e-14);
        assert!((lo - 0.404).abs() < 1e-3 && (hi - 0.596).abs() < 1e-3);
    }

    #[test]
    fn wilson_rejects_bad_input() {
        assert!(wilson_interval(3, 2, 0.95).is_err());
        assert!(wilson_interval(0, 0, 0.95).is_err());
        assert!(wilson_interval(1, 2, 1.0).is_err());
    }

    #[test]
    fn wilson_shrinks_with_n() {
        let mut prev = 1.0;
        for n in [100u64, 1_000, 10_000, 100_000] {
            let (lo, hi) = wilson_interval(n / 10, n, 0.95).unwrap();
            assert!(hi - lo < prev);
            prev = hi - lo;
        }
    }

    #[test]
    fn indicator_one() {
        let est = Runner::new(500, 1).estimate_frequency(0.95, |_, _| Ok(true)).unwrap();
        assert_eq!(est.p_hat, 1.0);
        assert_eq!(est.wilson_hi, 1.0);
    }

    #[test]
    fn fair_coin() {
        let est = Runner::new(100_000, 42)
            .estimate_frequency(0.95, |_, rng| Ok(rng.bernoulli(0.5)))
            .unwrap();
        assert!((0.49..=0.51).contains(&est.p_hat), "{}", est.p_hat);
    }

    #[test]
    fn worker_count_does_not_change_results() {
        let f = |_: PathSeed, rng: &mut PathRng| Ok(rng.standard_normal().exp());
        let one = Runner::new(5_000, 9).with_threads(1).run_experiment(f).unwrap();
        let four = Runner::new(5_000, 9).with_threads(4).run_experiment(f).unwrap();
        let dflt = Runner::new(5_000, 9).run_experiment(f).unwrap();
        assert_eq!(one, four);
        assert_eq!(one, dflt);
    }

    #[test]
    fn too_few_paths_rejected() {
        assert!(Runner::new(99, 0).run_experiment(|_, _| Ok(0.0)).is_err());
    }

    #[test]
    fn failure_reports_first_path() {
        let err = Runner::new(200, 5)
            .run_experiment(|ps, _| {
                if ps.stream >= 17 {
                    Err(invalid("x", "boom"))
                } else {
                    Ok(1.0)
                }
            })
            .unwrap_err();
        match err {
            Error::PathFailed { path_index, seed, stream, .. } => {
                assert_eq!((path_index, seed, stream), (17, 5, 17));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn compensated_sum_is_partition_insensitive() {
        let mut rng = PathSeed::new(3, 0).rng();
        let xs: Vec<f64> = (0..10_000).map(|_| rng.standard_normal() * 1e3).collect();
        let whole = xs.iter().copied().collect::<CompensatedSum>().total();
        for chunk in [7usize, 100, 2_500] {
            let mut parts = CompensatedSum::default();
            for c in xs.chunks(chunk) {
                parts.add(c.iter().copied().collect::<CompensatedSum>().total());
            }
            assert!((parts.total() - whole).abs() <= 1e-12 * whole.abs().max(1.0));
        }
    }

    #[test]
    fn uniform_is_open() {
        let mut rng = PathSeed::new(0, 0).rng();
        for _ in 0..10_000 {
            let u = rng.uniform();
            assert!(u > 0.0 && u < 1.0);
        }
    }
}
