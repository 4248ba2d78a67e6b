#![allow(dead_code)]

use efficient_index::mc::PathRng;
use efficient_index::{Interval, IntervalUnion, PathSeed};

/// Random union of up to `max_pieces` intervals over index levels, drawn
/// around `center` on a log scale; occasionally unbounded above.
pub fn random_level_set(rng: &mut PathRng, center: f64, spread: f64, max_pieces: usize) -> IntervalUnion {
    let pieces = 1 + (rng.uniform() * max_pieces as f64) as usize;
    IntervalUnion::new((0..pieces).map(|_| {
        let lo = center * (spread * (2.0 * rng.uniform() - 1.0)).exp();
        let hi = if rng.uniform() < 0.15 {
            f64::INFINITY
        } else {
            lo * (spread * rng.uniform()).exp()
        };
        let lo = if rng.uniform() < 0.1 { 0.0 } else { lo };
        Interval::new(lo, hi, rng.uniform() < 0.5, rng.uniform() < 0.5)
    }))
}

pub fn rng(seed: u64) -> PathRng {
    PathSeed::new(seed, u64::MAX).rng()
}
