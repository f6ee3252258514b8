//! Closed-form performance of the Lévy-channel detectors.
//!
//! Error probabilities for equiprobable binary symbols, the bound on how
//! often the ML and first-arrival detectors disagree, and error exponents
//! (the decay rate of the error probability per added particle).

use crate::channels::{fa_cdf, DelayLaw, LevyParams};
use crate::detectors::{fa_threshold, ml_threshold_single};
use crate::error::ensure_positive;
use crate::numerics::{
    erf, erfc, find_root, integrate, ln_erf, ln_erfc, minimize_scalar, Bracket, Tolerance,
};
use crate::{Error, Result};

/// Below this `erfc` value `1 − erf(x)^M` is evaluated as `M erfc(x)` in
/// log space.
const TINY_ERFC: f64 = 1e-200;

fn arg(c: f64, t: f64) -> f64 {
    (c / (2.0 * t)).sqrt()
}

fn check_m(m: usize) -> Result<()> {
    if m == 0 {
        Err(Error::InvalidParameter("M must be ≥ 1".into()))
    } else {
        Ok(())
    }
}

/// Error probability of the single-particle ML detector.
pub fn pe_ml_single(c: f64, delta: f64) -> Result<f64> {
    let theta = ml_threshold_single(c, delta)?;
    Ok(0.5 * (erf(arg(c, theta)) + erfc(arg(c, theta - delta))))
}

/// Error probability of equal-weight linear combining of `m` particles.
/// The mean of `m` Lévy delays with scale `c` is Lévy with scale `m c`.
pub fn pe_linear(c: f64, delta: f64, m: usize) -> Result<f64> {
    check_m(m)?;
    pe_ml_single(m as f64 * c, delta)
}

/// Error probability of the first-arrival detector.
pub fn pe_fa(c: f64, delta: f64, m: usize) -> Result<f64> {
    if m == 1 {
        return pe_ml_single(c, delta);
    }
    Ok(ln_pe_fa(c, delta, m)?.exp())
}

/// Natural log of [`pe_fa`], finite even when the probability underflows.
pub fn ln_pe_fa(c: f64, delta: f64, m: usize) -> Result<f64> {
    check_m(m)?;
    let theta = fa_threshold(c, delta, m)?;
    let mf = m as f64;
    // symbol 0 sent, all arrivals late: erf(a)^M
    let ln_late = mf * ln_erf(arg(c, theta));
    // symbol 1 sent, some arrival early: 1 − erf(b)^M
    let b = arg(c, theta - delta);
    let ln_early = if erfc(b) < TINY_ERFC {
        mf.ln() + ln_erfc(b)
    } else {
        (-(mf * ln_erf(b)).exp_m1()).ln()
    };
    let hi = ln_late.max(ln_early);
    let lo = ln_late.min(ln_early);
    Ok(0.5f64.ln() + hi + (lo - hi).exp().ln_1p())
}

/// Symbol error probability of the Gray-coded first-arrival detector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeGray {
    pub value: f64,
    /// The formula exceeded the random-guess level `1 − 2^{−L}` and was
    /// clamped to it.
    pub clamped: bool,
}

/// `(2^L − 1)/2^{L−1}` times the binary first-arrival error at spacing
/// `Δ/(2^L − 1)`.
pub fn pe_gray(c: f64, delta_total: f64, bits: u32, m: usize) -> Result<PeGray> {
    if bits == 0 || bits > 30 {
        return Err(Error::InvalidParameter(format!(
            "bits per symbol must be in 1..=30, got {bits}"
        )));
    }
    let points = (1u64 << bits) as f64;
    let sub = delta_total / (points - 1.0);
    let value = (points - 1.0) / (points / 2.0) * pe_fa(c, sub, m)?;
    let ceiling = 1.0 - 1.0 / points;
    Ok(if value > ceiling {
        PeGray {
            value: ceiling,
            clamped: true,
        }
    } else {
        PeGray {
            value,
            clamped: false,
        }
    })
}

/// `g(x) = ln((x−Δ)/x) + cΔ/(3x(x−Δ))` for `x > Δ`.
///
/// A single arrival at `x` favours the later symbol exactly when
/// `g(x) < 0`.
pub fn g_function(c: f64, delta: f64, x: f64) -> Result<f64> {
    if !(x > delta) {
        return Err(Error::Domain(format!("g needs x > Δ = {delta}, got {x}")));
    }
    Ok((-delta / x).ln_1p() + c * delta / (3.0 * x * (x - delta)))
}

/// Stationary points `x₁ > x₂` of `g`, roots of
/// `3x² − (3Δ + 2c)x + cΔ = 0`.
pub fn g_stationary_points(c: f64, delta: f64) -> (f64, f64) {
    let r = (delta / 2.0) * (1.0 + 4.0 * c * c / (9.0 * delta * delta)).sqrt();
    let centre = c / 3.0 + delta / 2.0;
    (centre + r, centre - r)
}

/// The unique zero `x*` of `g` above `Δ`. It lies below the minimum `x₁`.
pub fn g_root(c: f64, delta: f64) -> Result<f64> {
    ensure_positive("Lévy scale c", c)?;
    ensure_positive("Δ", delta)?;
    let (x1, _) = g_stationary_points(c, delta);
    let bracket = Bracket::new(delta * (1.0 + 1e-12), x1)?;
    let tol = Tolerance {
        abs_x: 4.0 * f64::EPSILON * x1,
        max_iter: 500,
        ..Tolerance::default()
    };
    find_root(
        |x| (-delta / x).ln_1p() + c * delta / (3.0 * x * (x - delta)),
        bracket,
        tol,
    )
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MismatchBound {
    pub x_star: f64,
    pub x1: f64,
    pub bound: f64,
}

/// Upper bound on the probability that the ML and first-arrival detectors
/// decide differently:
/// `0.5 [(Ψ(x*) − Ψ(Δ)) + Ψ(x* − Δ)]` with `Ψ` the first-arrival CDF.
pub fn mismatch_bound(c: f64, delta: f64, m: usize) -> Result<MismatchBound> {
    check_m(m)?;
    let x_star = g_root(c, delta)?;
    let (x1, _) = g_stationary_points(c, delta);
    let psi = |t: f64| fa_cdf(c, m, t);
    let bound = 0.5 * ((psi(x_star)? - psi(delta)?) + psi(x_star - delta)?);
    Ok(MismatchBound {
        x_star,
        x1,
        bound: bound.clamp(0.0, 1.0),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExponentMethod {
    ClosedForm,
    ChernoffNumeric,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExponentResult {
    /// Nats per particle.
    pub value: f64,
    /// Minimizing Chernoff parameter, for numeric exponents.
    pub optimizer_s: Option<f64>,
    pub method: ExponentMethod,
}

/// Error exponent of the first-arrival detector, `−ln erf(√(c/2Δ))`.
pub fn err_exp_fa(c: f64, delta: f64) -> Result<ExponentResult> {
    ensure_positive("Lévy scale c", c)?;
    ensure_positive("Δ", delta)?;
    Ok(ExponentResult {
        value: -ln_erf(arg(c, delta)),
        optimizer_s: None,
        method: ExponentMethod::ClosedForm,
    })
}

/// Default tolerance for [`err_exp_ml`]: `abs_x` applies to `s`, `rel_f` to
/// the quadrature.
pub fn chernoff_tolerance() -> Tolerance {
    Tolerance {
        abs_x: 1e-6,
        rel_f: 1e-9,
        max_iter: 5000,
    }
}

/// Error exponent of the ML detector: the Chernoff information
/// `−min_s ln ∫_Δ^∞ g₀(y)^s g_Δ(y)^{1−s} dy` between the Lévy densities
/// released at `0` and `Δ`.
pub fn err_exp_ml(c: f64, delta: f64, tol: Tolerance) -> Result<ExponentResult> {
    ensure_positive("Lévy scale c", c)?;
    ensure_positive("Δ", delta)?;
    tol.validate()?;
    let law = LevyParams::standard(c)?;
    let quad_tol = Tolerance {
        abs_x: 1e-15,
        rel_f: tol.rel_f,
        max_iter: tol.max_iter,
    };
    // y = Δ + c u², u = t/(1 − t): the y^{-3/2} tail becomes bounded at t = 1
    let ln_integral = |s: f64| -> Result<f64> {
        let integrand = |t: f64| {
            let u = t / (1.0 - t);
            let offset = c * u * u;
            let ln_jacobian = (2.0 * c * u).ln() - 2.0 * (1.0 - t).ln();
            let ln_f = s * law.ln_pdf(delta + offset) + (1.0 - s) * law.ln_pdf(offset);
            if ln_f == f64::NEG_INFINITY {
                0.0
            } else {
                (ln_f + ln_jacobian).exp()
            }
        };
        let v = integrate(integrand, 0.0, 1.0, quad_tol)?;
        if v > 0.0 && v.is_finite() {
            Ok(v.ln())
        } else {
            Err(Error::NonFinite { at: s })
        }
    };
    let mut failure = None;
    let objective = |s: f64| match ln_integral(s) {
        Ok(v) => v,
        Err(e) => {
            failure.get_or_insert(e);
            f64::INFINITY
        }
    };
    let s_tol = Tolerance {
        abs_x: tol.abs_x,
        max_iter: tol.max_iter,
        ..Tolerance::default()
    };
    let min = minimize_scalar(objective, Bracket::new(0.0, 1.0)?, s_tol)?;
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(ExponentResult {
        value: (-min.fx).max(0.0),
        optimizer_s: Some(min.x),
        method: ExponentMethod::ChernoffNumeric,
    })
}

/// Coefficient `d₁` in `θ_M − Δ ≈ d₁/M` for large `M`: `−c/(2 ln β)` with
/// `β = erf(√(c/2Δ))`.
pub fn fa_threshold_asymptote(c: f64, delta: f64) -> Result<f64> {
    ensure_positive("Lévy scale c", c)?;
    ensure_positive("Δ", delta)?;
    Ok(-c / (2.0 * ln_erf(arg(c, delta))))
}

/// Largest number of bits `L ≥ 1` the Gray first-arrival scheme supports
/// with `m` particles, or 0 if none.
///
/// `L` qualifies when the early-error term `exp(−c/(2(Δ̃ + d₁/M)))` still
/// decays no faster than `M^{−(1−ε)}`, i.e.
/// `c / (2(Δ̃ + d₁/M)) ≤ (1−ε) ln M` with `Δ̃ = Δ/(2^L − 1)`, and the
/// symbol error at `(L, M)` is below the one at `(L, M/2)`.
pub fn max_bits_for_m(c: f64, delta: f64, m: usize, epsilon: f64) -> Result<u32> {
    ensure_positive("Lévy scale c", c)?;
    ensure_positive("Δ", delta)?;
    if m < 2 {
        return Err(Error::InvalidParameter(format!("M must be ≥ 2, got {m}")));
    }
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "epsilon must be in (0, 1), got {epsilon}"
        )));
    }
    let budget = (1.0 - epsilon) * (m as f64).ln();
    let mut best = 0;
    for bits in 1..=30u32 {
        let sub = delta / ((1u64 << bits) - 1) as f64;
        let d1 = fa_threshold_asymptote(c, sub)?;
        if c / (2.0 * (sub + d1 / m as f64)) > budget {
            break;
        }
        let now = pe_gray(c, delta, bits, m)?;
        let half = pe_gray(c, delta, bits, m / 2)?;
        if !now.clamped && now.value < half.value {
            best = bits;
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn remark_values() {
        for &(m, delta, want, tol) in &[
            (2usize, 1.0, 0.2186, 5e-4),
            (2, 5.0, 0.05898, 5e-4),
            (5, 1.0, 0.06554, 5e-4),
            (5, 5.0, 0.002408, 5e-5),
        ] {
            let v = pe_fa(1.0, delta, m).unwrap();
            assert!((v - want).abs() < tol, "M={m} Δ={delta}: {v}");
        }
    }

    #[test]
    fn fa_equals_single_at_one_particle() {
        for &(c, d) in &[(1.0, 1.0), (2.0, 0.1), (0.3, 7.0)] {
            let a = pe_fa(c, d, 1).unwrap();
            let b = pe_ml_single(c, d).unwrap();
            assert!((a - b).abs() < 1e-14 * b.max(1e-300) + 1e-16);
        }
    }

    #[test]
    fn many_particles_example() {
        let v = pe_fa(2.0, 0.1, 20_000).unwrap();
        assert!(v > 2e-4 / 1.5 && v < 2e-4 * 1.5, "{v}");
    }

    #[test]
    fn separable_hypotheses() {
        assert!(pe_ml_single(1.0, 1e9).unwrap() < 1e-4);
    }

    #[test]
    fn single_is_scale_invariant() {
        for &(c, d) in &[(1.0, 1.0), (0.5, 0.1), (2.0, 3.0)] {
            let a = pe_ml_single(c, d).unwrap();
            let b = pe_ml_single(3.0 * c, 3.0 * d).unwrap();
            assert!((a - b).abs() < 1e-10);
        }
    }

    #[test]
    fn fa_decreasing_in_m_and_delta() {
        for &d in &[0.2, 1.0, 4.0] {
            let mut prev = 1.0;
            for m in [1usize, 2, 3, 5, 10, 30, 100, 1000] {
                let v = pe_fa(1.0, d, m).unwrap();
                assert!(v < prev, "Δ={d} M={m}");
                prev = v;
            }
        }
        for m in [1usize, 4, 50] {
            let mut prev = 1.0;
            for i in 1..30 {
                let v = pe_fa(1.0, 0.2 * i as f64, m).unwrap();
                assert!(v < prev, "M={m}");
                prev = v;
            }
        }
    }

    #[test]
    fn log_probability_survives_underflow() {
        let ln = ln_pe_fa(2.0, 1.0, 100_000).unwrap();
        assert!(ln.is_finite() && ln < -700.0, "{ln}");
        let e = err_exp_fa(2.0, 1.0).unwrap().value;
        assert!((-ln / 100_000.0 / e - 1.0).abs() < 0.05);
    }

    #[test]
    fn channel_is_asymmetric() {
        for &c in &[0.2, 1.0, 2.0, 8.0] {
            for &d in &[0.1, 1.0, 5.0] {
                let t = ml_threshold_single(c, d).unwrap();
                assert!(erf(arg(c, t)) > erfc(arg(c, t - d)), "c={c} Δ={d}");
            }
        }
    }

    #[test]
    fn gray_reduces_to_binary() {
        let g = pe_gray(1.0, 3.0, 1, 25).unwrap();
        assert_eq!(g.value, pe_fa(1.0, 3.0, 25).unwrap());
        assert!(!g.clamped);
    }

    #[test]
    fn gray_stays_below_guessing_for_tiny_spacing() {
        let g = pe_gray(1.0, 1e-6, 4, 1).unwrap();
        assert!(g.value <= 1.0 - 1.0 / 16.0);
        assert!(g.value > 0.93);
    }

    #[test]
    fn gray_improves_with_particles() {
        let a = pe_gray(1.0, 3.0, 3, 25).unwrap().value;
        let b = pe_gray(1.0, 3.0, 3, 50).unwrap().value;
        assert!(b < a);
    }

    #[test]
    fn g_sign_pattern() {
        let x_star = g_root(1.0, 1.0).unwrap();
        for i in 1..2000 {
            let x = 1.0 + i as f64 * 0.005;
            let g = g_function(1.0, 1.0, x).unwrap();
            if x < x_star * (1.0 - 1e-9) {
                assert!(g > 0.0, "x = {x}");
            } else if x > x_star * (1.0 + 1e-9) {
                assert!(g < 0.0, "x = {x}");
            }
        }
        assert!(g_function(1.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn stationary_point_matches_numeric_derivative() {
        for &(c, d) in &[(1.0, 1.0), (2.0, 0.5), (0.3, 4.0)] {
            let (x1, x2) = g_stationary_points(c, d);
            assert!(x2 - d < 0.0);
            let deriv = |x: f64| {
                let h = 1e-6 * x;
                (g_function(c, d, x + h).unwrap() - g_function(c, d, x - h).unwrap()) / (2.0 * h)
            };
            let root = find_root(deriv, Bracket::new(d + 1e-3 * d, 50.0 * x1).unwrap(),
                Tolerance::default()).unwrap();
            assert!((root - x1).abs() < 1e-6 * x1, "c={c} Δ={d}: {root} vs {x1}");
        }
    }

    #[test]
    fn mismatch_remark_values() {
        for &(m, d, want, tol) in &[
            (2usize, 1.0, 0.0283, 5e-4),
            (2, 5.0, 0.0012, 1e-4),
            (5, 1.0, 0.0337, 5e-4),
            (5, 5.0, 0.001, 1e-4),
        ] {
            let b = mismatch_bound(1.0, d, m).unwrap();
            assert!((b.bound - want).abs() < tol, "M={m} Δ={d}: {}", b.bound);
            assert!(b.x_star > d && b.x_star < b.x1);
        }
        let loose = mismatch_bound(1.0, 1.0, 5).unwrap().bound;
        assert!(loose > mismatch_bound(1.0, 1.0, 2).unwrap().bound);
    }

    #[test]
    fn exponent_examples() {
        assert!((err_exp_fa(0.5, 0.1).unwrap().value - 0.025674).abs() < 1e-6);
        assert!((err_exp_fa(2.0, 0.1).unwrap().value - 0.000008).abs() < 1e-6);
        let ml = err_exp_ml(0.5, 0.1, chernoff_tolerance()).unwrap();
        assert!((ml.value - 0.044106).abs() < 5e-4, "{}", ml.value);
        let s = ml.optimizer_s.unwrap();
        assert!((0.0..=1.0).contains(&s));
        assert_eq!(ml.method, ExponentMethod::ChernoffNumeric);
    }

    /// Chernoff integral by a plain trapezoid sum on a log-spaced grid,
    /// evaluated at a fixed `s`.
    fn trapezoid_chernoff(c: f64, delta: f64, s: f64) -> f64 {
        let law = LevyParams::standard(c).unwrap();
        let n = 400_000;
        let (lo, hi) = ((1e-6f64).ln(), (1e9f64).ln());
        let mut sum = 0.0;
        let mut prev: Option<(f64, f64)> = None;
        for i in 0..=n {
            let u = (lo + (hi - lo) * i as f64 / n as f64).exp();
            let f = (s * law.ln_pdf(delta + u) + (1.0 - s) * law.ln_pdf(u)).exp();
            if let Some((pu, pf)) = prev {
                sum += 0.5 * (f + pf) * (u - pu);
            }
            prev = Some((u, f));
        }
        sum
    }

    #[test]
    fn chernoff_matches_trapezoid_oracle() {
        let (c, d) = (1.0, 0.7);
        let ml = err_exp_ml(c, d, chernoff_tolerance()).unwrap();
        let s = ml.optimizer_s.unwrap();
        // the tail beyond 1e9 contributes about sqrt(2c/π)/sqrt(1e9)
        let tail = (2.0 * c / std::f64::consts::PI).sqrt() / 1e9f64.sqrt();
        let oracle = -(trapezoid_chernoff(c, d, s) + tail).ln();
        assert!((ml.value - oracle).abs() < 1e-5, "{} vs {oracle}", ml.value);
    }

    #[test]
    fn ml_exponent_dominates_fa() {
        for &c in &[0.5, 1.0, 2.0] {
            for &d in &[0.1, 0.2, 0.3, 0.4] {
                let fa = err_exp_fa(c, d).unwrap().value;
                let ml = err_exp_ml(c, d, chernoff_tolerance()).unwrap().value;
                assert!(ml >= fa - 1e-9, "c={c} Δ={d}");
            }
        }
    }

    #[test]
    fn asymptote_slope() {
        let d1 = fa_threshold_asymptote(2.0, 1.0).unwrap();
        assert!(d1 > 0.0);
        let ms = [1_000usize, 3_000, 10_000, 30_000, 100_000];
        let xs: Vec<f64> = ms.iter().map(|&m| 1.0 / m as f64).collect();
        let ys: Vec<f64> = ms.iter().map(|&m| fa_threshold(2.0, 1.0, m).unwrap() - 1.0).collect();
        let n = xs.len() as f64;
        let (mx, my) = (xs.iter().sum::<f64>() / n, ys.iter().sum::<f64>() / n);
        let num: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
        let den: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
        let slope = num / den;
        assert!((slope / d1 - 1.0).abs() < 0.2, "{slope} vs {d1}");
    }

    #[test]
    fn asymptote_balance_is_bounded() {
        let (c, d, m) = (2.0, 1.0, 10_000.0);
        let d1 = fa_threshold_asymptote(c, d).unwrap();
        let v = (-c / (2.0 * (d1 / m))).exp() * m;
        assert!(v.is_finite() && v < 1.0);
    }

    #[test]
    fn max_bits_monotone_in_m() {
        let few = max_bits_for_m(1.0, 3.0, 25, 0.1).unwrap();
        let many = max_bits_for_m(1.0, 3.0, 350, 0.1).unwrap();
        assert!(many >= few && few >= 1, "{few} {many}");
        assert!(max_bits_for_m(1.0, 3.0, 1, 0.1).is_err());
    }

    proptest! {
        #[test]
        fn linear_never_beats_single(c in 0.05f64..10.0, d in 0.05f64..10.0, m in 1usize..200) {
            prop_assert!(pe_linear(c, d, m).unwrap() >= pe_ml_single(c, d).unwrap() - 1e-15);
        }

        #[test]
        fn exponents_scale_invariant(c in 0.2f64..3.0, d in 0.05f64..1.0, a in 0.5f64..4.0) {
            let fa = err_exp_fa(c, d).unwrap().value;
            prop_assert!((fa - err_exp_fa(a * c, a * d).unwrap().value).abs() < 1e-12);
        }
    }

    #[test]
    fn ml_exponent_scale_invariant() {
        let a = err_exp_ml(1.0, 0.2, chernoff_tolerance()).unwrap().value;
        let b = err_exp_ml(2.0, 0.4, chernoff_tolerance()).unwrap().value;
        assert!((a - b).abs() < 1e-6, "{a} vs {b}");
    }
}
