use std::f64::consts::{FRAC_1_SQRT_2, PI};

use crate::numerics::roots::{find_root, Bracket, Tolerance};
use crate::{Error, Result};

/// Values of `erfc` below this are reported as underflowed by [`erfc_flushed`].
pub const ERFC_FLOOR: f64 = 1e-300;

/// Above this argument `ln_erfc` switches from `ln(erfc(x))` to the
/// asymptotic expansion. `erfc(20)` is about 5e-176, well inside f64 range.
const ASYMPTOTIC_FROM: f64 = 20.0;

/// Complementary error function.
pub fn erfc(x: f64) -> f64 {
    libm::erfc(x)
}

pub fn erf(x: f64) -> f64 {
    libm::erf(x)
}

/// `erfc` with values under [`ERFC_FLOOR`] flushed to zero. The flag reports
/// whether flushing happened so callers can switch to [`ln_erfc`].
pub fn erfc_flushed(x: f64) -> (f64, bool) {
    let v = erfc(x);
    if v < ERFC_FLOOR {
        (0.0, true)
    } else {
        (v, false)
    }
}

/// Natural log of `erfc(x)`, accurate deep into the upper tail where `erfc`
/// itself underflows.
pub fn ln_erfc(x: f64) -> f64 {
    if x < ASYMPTOTIC_FROM {
        return erfc(x).ln();
    }
    // erfc(x) = exp(-x^2) / (x sqrt(pi)) * sum_k (-1)^k (2k-1)!! / (2x^2)^k
    let inv = 1.0 / (2.0 * x * x);
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..8 {
        term *= -((2 * k - 1) as f64) * inv;
        sum += term;
    }
    -x * x - (x * PI.sqrt()).ln() + sum.ln()
}

/// Natural log of `erf(x) = 1 - erfc(x)` for `x > 0`.
pub fn ln_erf(x: f64) -> f64 {
    if x <= 0.0 {
        return f64::NEG_INFINITY;
    }
    if x < 0.5 {
        erf(x).ln()
    } else {
        (-erfc(x)).ln_1p()
    }
}

/// Standard normal CDF.
pub fn norm_cdf(x: f64) -> f64 {
    0.5 * erfc(-x * FRAC_1_SQRT_2)
}

/// Log of the standard normal CDF, finite for all finite `x`.
pub fn ln_norm_cdf(x: f64) -> f64 {
    ln_erfc(-x * FRAC_1_SQRT_2) - std::f64::consts::LN_2
}

/// Inverse of [`erfc`] on `(0, 2)`.
pub fn erfc_inv(p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 2.0) {
        return Err(Error::Domain(format!("erfc_inv needs 0 < p < 2, got {p}")));
    }
    if p == 1.0 {
        return Ok(0.0);
    }
    if p > 1.0 {
        return erfc_inv(2.0 - p).map(|x| -x);
    }
    // Solve in log space so tiny p keeps full relative accuracy.
    let target = p.ln();
    let bracket = Bracket::new(0.0, 40.0)?;
    let tol = Tolerance {
        abs_x: 1e-15,
        ..Tolerance::default()
    };
    let mut x = find_root(|x| ln_erfc(x) - target, bracket, tol)?;
    // One Newton step on ln erfc polishes the last ulps.
    let slope = -2.0 * (-x * x).exp() / (PI.sqrt() * erfc(x));
    if slope.is_finite() && slope != 0.0 {
        x -= (ln_erfc(x) - target) / slope;
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Maclaurin series for erf; independent of libm.
    fn erf_series(x: f64) -> f64 {
        let mut sum = 0.0;
        let mut power = x;
        let mut factorial = 1.0;
        for n in 0..120 {
            if n > 0 {
                factorial *= n as f64;
                power *= x * x;
            }
            let term = power / (factorial * (2 * n + 1) as f64);
            sum += if n % 2 == 0 { term } else { -term };
        }
        2.0 / PI.sqrt() * sum
    }

    #[test]
    fn erfc_at_zero_is_one() {
        assert_eq!(erfc(0.0), 1.0);
    }

    #[test]
    fn erfc_tail_is_negligible() {
        assert!(erfc(10.0) < 1e-44);
        let (v, flushed) = erfc_flushed(30.0);
        assert_eq!(v, 0.0);
        assert!(flushed);
    }

    #[test]
    fn erfc_matches_series_and_reference() {
        // mpmath at 30 digits: erfc(1.5811) = 0.025350915457269196...
        let reference = 0.025_350_915_457_269_197;
        assert!((erfc(1.5811) - reference).abs() / reference < 1e-12);
        assert!((1.0 - erf_series(1.5811) - reference).abs() < 1e-13);
        for &(x, want) in &[
            (2.0, 0.004_677_734_981_047_265_8),
            (5.0, 1.537_459_794_428_034_9e-12),
            (10.0, 2.088_487_583_762_544_8e-45),
            (-1.3, 1.934_007_944_940_652_4),
        ] {
            assert!((erfc(x) - want).abs() / want < 1e-12, "x = {x}");
        }
    }

    #[test]
    fn erfc_symmetry_and_monotonicity() {
        let mut prev = f64::INFINITY;
        for i in -400..=400 {
            let x = i as f64 * 0.025;
            let v = erfc(x);
            assert!((v + erfc(-x) - 2.0).abs() < 1e-15);
            // below about x = -5.8 the value rounds to exactly 2
            if x > -5.5 {
                assert!(v < prev, "x = {x}");
            } else {
                assert!(v <= prev);
            }
            prev = v;
        }
    }

    #[test]
    fn ln_erfc_is_continuous_across_the_switch_and_accurate_in_the_tail() {
        let below = erfc(ASYMPTOTIC_FROM - 1e-9).ln();
        let above = ln_erfc(ASYMPTOTIC_FROM + 1e-9);
        assert!((below - above).abs() < 1e-7);
        // mpmath references
        assert!((ln_erfc(25.0) - (-628.792_039_174_071_7)).abs() < 1e-9);
        assert!((ln_erfc(30.0) - (-903.974_117_110_643_9)).abs() < 1e-9);
        assert!((ln_erfc(100.0) - (-10_005.177_585_122_664)).abs() < 1e-8);
    }

    #[test]
    fn erfc_inv_values() {
        assert_eq!(erfc_inv(1.0).unwrap(), 0.0);
        // bisection on erfc by hand: erfc(0.4769362762) = 0.5
        assert!((erfc_inv(0.5).unwrap() - 0.476_936_276_204_469_9).abs() < 1e-12);
        assert!((erfc_inv(erfc(2.0)).unwrap() - 2.0).abs() < 1e-10);
        for &p in &[1e-200, 1e-12, 0.01, 0.3, 1.2, 1.9999] {
            let x = erfc_inv(p).unwrap();
            assert!((erfc(x) - p).abs() / p < 1e-10, "p = {p}");
        }
    }

    #[test]
    fn erfc_inv_rejects_out_of_domain() {
        for &p in &[0.0, -1.0, 2.0, 3.0, f64::NAN] {
            assert!(matches!(erfc_inv(p), Err(Error::Domain(_))));
        }
    }

    #[test]
    fn ln_norm_cdf_deep_left_tail() {
        // Phi(-40) = erfc(40/sqrt 2)/2
        let v = ln_norm_cdf(-40.0);
        assert!(v.is_finite());
        assert!((v - (ln_erfc(40.0 / 2f64.sqrt()) - 2f64.ln())).abs() < 1e-12);
        assert!((norm_cdf(1.0) - 0.841_344_746_068_542_9).abs() < 1e-15);
    }
}
