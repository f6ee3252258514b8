use crate::channels::DelayLaw;
use crate::error::ensure_positive;
use crate::numerics::{find_root, ln_erf, Bracket, Tolerance};
use crate::{Error, Result};

/// Offset of the lower bracket end above `Δ`, relative to `Δ`.
const LOWER_OFFSET: f64 = 1e-12;

fn root_tolerance(hi: f64) -> Tolerance {
    Tolerance {
        abs_x: 4.0 * f64::EPSILON * hi.abs(),
        max_iter: 500,
        ..Tolerance::default()
    }
}

/// Left side minus right side of `y (y−Δ) ln(y/(y−Δ)) = cΔ/3`.
fn single_equation(c: f64, delta: f64, y: f64) -> f64 {
    let w = y * (y - delta);
    -w * (-delta / y).ln_1p() - c * delta / 3.0
}

/// Single-particle ML threshold for Lévy delays: the unique root of
/// `y (y−Δ) ln(y/(y−Δ)) = cΔ/3` in `(Δ, Δ + c/3]`.
pub fn ml_threshold_single(c: f64, delta: f64) -> Result<f64> {
    ensure_positive("Lévy scale c", c)?;
    ensure_positive("Δ", delta)?;
    let bracket = Bracket::new(delta * (1.0 + LOWER_OFFSET), delta + c / 3.0)?;
    find_root(|y| single_equation(c, delta, y), bracket, root_tolerance(bracket.hi))
}

/// Threshold `θ_M` of the first-arrival detector for Lévy delays.
///
/// Solves the first-arrival likelihood-ratio equation scaled by
/// `(2/3) y (y−Δ)`, which keeps it bounded as `y → Δ⁺`. The root lies in
/// `(Δ, θ₁]`, where `θ₁` is [`ml_threshold_single`].
pub fn fa_threshold(c: f64, delta: f64, m: usize) -> Result<f64> {
    if m == 0 {
        return Err(Error::InvalidParameter("M must be ≥ 1".into()));
    }
    let theta1 = ml_threshold_single(c, delta)?;
    if m == 1 {
        return Ok(theta1);
    }
    let extra = 2.0 * (m - 1) as f64 / 3.0;
    let eq = |y: f64| {
        let a = (c / (2.0 * y)).sqrt();
        let b = (c / (2.0 * (y - delta))).sqrt();
        single_equation(c, delta, y) - extra * y * (y - delta) * (ln_erf(a) - ln_erf(b))
    };
    let bracket = Bracket::new(delta * (1.0 + LOWER_OFFSET), theta1)?;
    find_root(eq, bracket, root_tolerance(theta1))
}

/// Boundary between the decision regions of a binary test between `law`
/// and `law` shifted by `Δ`: the point where `ln f(y) − ln f(y−Δ)` changes
/// from positive (decide 0) to negative (decide 1).
///
/// Assumes a single crossing above `Δ`, with a positive ratio near `Δ⁺`
/// and a negative one far out. The upper end is found by doubling.
pub fn shift_llr_threshold<L: DelayLaw>(law: &L, delta: f64) -> Result<f64> {
    ensure_positive("Δ", delta)?;
    let llr = |y: f64| law.ln_pdf(y) - law.ln_pdf(y - delta);

    let mut offset = delta * LOWER_OFFSET;
    while !llr(delta + offset).is_finite() {
        offset *= 10.0;
        if offset > delta {
            return Err(Error::NonFinite { at: delta + offset });
        }
    }
    let lo = delta + offset;

    let mut width = delta;
    let mut hi = delta + width;
    let mut doublings = 0;
    while llr(hi) > 0.0 {
        width *= 2.0;
        hi = delta + width;
        doublings += 1;
        if doublings > 200 || !hi.is_finite() {
            return Err(Error::NoSignChange {
                lo,
                hi,
                f_lo: llr(lo),
                f_hi: llr(hi),
            });
        }
    }
    find_root(llr, Bracket::new(lo, hi)?, root_tolerance(hi))
}
