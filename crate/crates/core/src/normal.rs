//! Standard Gaussian kernel: density, distribution, tail and quantile.
//!
//! The distribution function is evaluated through `erfc`, which keeps full
//! relative accuracy in both tails. The quantile starts from Acklam's rational
//! approximation (relative error about 1.15e-9) and is polished with one
//! Halley step against the `erfc`-based distribution function.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use crate::error::{invalid, Result};

const SQRT_2PI: f64 = 2.506_628_274_631_000_5;

/// Standard normal density.
#[inline]
pub fn pdf(x: f64) -> f64 {
    if x.is_infinite() {
        return 0.0;
    }
    (-0.5 * x * x).exp() / SQRT_2PI
}

/// Standard normal distribution function `Φ(x)`.
#[inline]
pub fn cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x * FRAC_1_SQRT_2)
}

/// Upper tail `1 − Φ(x)`, accurate for large positive `x`.
#[inline]
pub fn sf(x: f64) -> f64 {
    0.5 * libm::erfc(x * FRAC_1_SQRT_2)
}

/// Gaussian mass of the interval between `lo` and `hi` (`lo <= hi`).
///
/// Chooses the tail representation that avoids cancellation.
pub fn interval_mass(lo: f64, hi: f64) -> f64 {
    debug_assert!(lo <= hi);
    if lo >= 0.0 {
        sf(lo) - sf(hi)
    } else if hi <= 0.0 {
        cdf(hi) - cdf(lo)
    } else {
        1.0 - cdf(lo) - sf(hi)
    }
}

const A: [f64; 6] = [
    -3.969_683_028_665_376e1,
    2.209_460_984_245_205e2,
    -2.759_285_104_469_687e2,
    1.383_577_518_672_69e2,
    -3.066_479_806_614_716e1,
    2.506_628_277_459_239,
];
const B: [f64; 5] = [
    -5.447_609_879_822_406e1,
    1.615_858_368_580_409e2,
    -1.556_989_798_598_866e2,
    6.680_131_188_771_972e1,
    -1.328_068_155_288_572e1,
];
const C: [f64; 6] = [
    -7.784_894_002_430_293e-3,
    -3.223_964_580_411_365e-1,
    -2.400_758_277_161_838,
    -2.549_732_539_343_734,
    4.374_664_141_464_968,
    2.938_163_982_698_783,
];
const D: [f64; 4] = [
    7.784_695_709_041_462e-3,
    3.224_671_290_700_398e-1,
    2.445_134_137_142_996,
    3.754_408_661_907_416,
];
const P_LOW: f64 = 0.02425;

fn acklam_lower(q: f64) -> f64 {
    if q < P_LOW {
        let t = (-2.0 * q.ln()).sqrt();
        (((((C[0] * t + C[1]) * t + C[2]) * t + C[3]) * t + C[4]) * t + C[5])
            / ((((D[0] * t + D[1]) * t + D[2]) * t + D[3]) * t + 1.0)
    } else {
        let u = q - 0.5;
        let s = u * u;
        (((((A[0] * s + A[1]) * s + A[2]) * s + A[3]) * s + A[4]) * s + A[5]) * u
            / (((((B[0] * s + B[1]) * s + B[2]) * s + B[3]) * s + B[4]) * s + 1.0)
    }
}

/// `Φ⁻¹(q)` for `q <= 0.5`, polished against `cdf`.
fn lower_quantile(q: f64) -> f64 {
    let x = acklam_lower(q);
    let e = cdf(x) - q;
    let u = e * (2.0 * PI).sqrt() * (0.5 * x * x).exp();
    x - u / (1.0 + 0.5 * x * u)
}

/// Inverse of the standard normal distribution function on `(0, 1)`.
///
/// Returns `±∞` at the endpoints and NaN outside `[0, 1]`.
pub fn quantile(q: f64) -> f64 {
    if q.is_nan() || !(0.0..=1.0).contains(&q) {
        return f64::NAN;
    }
    if q == 0.0 {
        return f64::NEG_INFINITY;
    }
    if q == 1.0 {
        return f64::INFINITY;
    }
    if q <= 0.5 {
        lower_quantile(q)
    } else {
        -lower_quantile(1.0 - q)
    }
}

/// Upper `p`-quantile `z_p`: the point with `Φ(z_p) = 1 − p`.
pub fn upper_quantile(p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(invalid("p", format!("{p} is not in (0, 1)")));
    }
    Ok(if p <= 0.5 {
        -lower_quantile(p)
    } else {
        lower_quantile(1.0 - p)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    // Composite Simpson on the density; independent of erfc.
    fn simpson_mass(a: f64, b: f64, n: usize) -> f64 {
        let h = (b - a) / n as f64;
        let mut acc = pdf(a) + pdf(b);
        for i in 1..n {
            let w = if i % 2 == 1 { 4.0 } else { 2.0 };
            acc += w * pdf(a + i as f64 * h);
        }
        acc * h / 3.0
    }

    #[test]
    fn cdf_matches_quadrature() {
        for &x in &[-5.0, -2.3, -0.7, 0.0, 0.4, 1.6449, 3.1, 6.0] {
            let quad = simpson_mass(-12.0, x, 20_000);
            assert!((cdf(x) - quad).abs() < 1e-12, "x={x}");
        }
    }

    #[test]
    fn median_and_symmetry() {
        assert_eq!(upper_quantile(0.5).unwrap(), 0.0);
        assert_eq!(cdf(0.0), 0.5);
        for &x in &[0.1, 1.0, 2.5, 7.0] {
            assert!((cdf(-x) - sf(x)).abs() < 1e-17);
        }
    }

    #[test]
    fn upper_quantile_five_percent() {
        let z = upper_quantile(0.05).unwrap();
        assert!((z - 1.6449).abs() < 1e-3);
        assert!((z - 1.644_853_626_951_472_2).abs() < 1e-12);
    }

    #[test]
    fn upper_quantile_round_trip() {
        for k in 0..=60 {
            // log-spaced from 1e-6 to 0.5
            let p = 1e-6 * (0.5e6f64).powf(k as f64 / 60.0);
            let z = upper_quantile(p).unwrap();
            assert!((sf(z) - p).abs() < 1e-10, "p={p}");
            assert!(((sf(z) - p) / p).abs() < 1e-12, "p={p}");
        }
    }

    #[test]
    fn quantile_extremes() {
        assert_eq!(quantile(0.0), f64::NEG_INFINITY);
        assert_eq!(quantile(1.0), f64::INFINITY);
        assert!(quantile(1.5).is_nan());
        let x = quantile(1e-300);
        assert!((cdf(x) / 1e-300 - 1.0).abs() < 1e-9);
        assert!((quantile(0.975) - 1.959_963_984_540_054).abs() < 1e-13);
    }

    #[test]
    fn upper_quantile_rejects_out_of_range() {
        for p in [0.0, 1.0, -0.1, 2.0, f64::NAN] {
            assert!(upper_quantile(p).is_err());
        }
    }

    #[test]
    fn interval_mass_tails() {
        let z = 1.6449;
        let two_tail = interval_mass(f64::NEG_INFINITY, -z) + interval_mass(z, f64::INFINITY);
        let quad = 1.0 - simpson_mass(-z, z, 20_000);
        assert!((two_tail - quad).abs() < 1e-12);
        assert!((two_tail - 0.10).abs() < 1e-4);
        assert_eq!(interval_mass(f64::NEG_INFINITY, f64::INFINITY), 1.0);
    }
}
