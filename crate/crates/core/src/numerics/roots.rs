use crate::{Error, Result};

/// Closed search interval `[lo, hi]` with `lo < hi`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bracket {
    pub lo: f64,
    pub hi: f64,
}

impl Bracket {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if lo.is_finite() && hi.is_finite() && lo < hi {
            Ok(Self { lo, hi })
        } else {
            Err(Error::Domain(format!("bracket needs lo < hi, got [{lo}, {hi}]")))
        }
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }
}

/// Stopping rules shared by the numeric kernels.
///
/// `abs_x` bounds the final bracket (root finding, minimization);
/// `rel_f` is the relative accuracy target for quadrature; `max_iter` caps
/// iterations, or subintervals for quadrature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub abs_x: f64,
    pub rel_f: f64,
    pub max_iter: usize,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self {
            abs_x: 1e-12,
            rel_f: 1e-10,
            max_iter: 200,
        }
    }
}

impl Tolerance {
    /// Default tolerance with `abs_x` scaled to the bracket magnitude.
    pub fn for_bracket(b: &Bracket) -> Self {
        Self {
            abs_x: 1e-12 * b.hi.abs().max(b.lo.abs()).max(1.0),
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.abs_x > 0.0 && self.rel_f > 0.0 && self.max_iter >= 1 {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!("bad tolerance {self:?}")))
        }
    }
}

/// Brent's method: inverse quadratic / secant steps guarded by bisection.
///
/// Requires `f(lo)` and `f(hi)` of opposite sign (or one of them zero).
pub fn find_root<F>(mut f: F, b: Bracket, tol: Tolerance) -> Result<f64>
where
    F: FnMut(f64) -> f64,
{
    tol.validate()?;
    let (mut a, mut bx) = (b.lo, b.hi);
    let (mut fa, mut fb) = (f(a), f(bx));
    if fa.is_nan() {
        return Err(Error::NonFinite { at: a });
    }
    if fb.is_nan() {
        return Err(Error::NonFinite { at: bx });
    }
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(bx);
    }
    if fa.signum() == fb.signum() {
        return Err(Error::NoSignChange {
            lo: b.lo,
            hi: b.hi,
            f_lo: fa,
            f_hi: fb,
        });
    }

    let (mut c, mut fc) = (a, fa);
    let mut d = bx - a;
    let mut e = d;
    for _ in 0..tol.max_iter {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = bx - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = bx;
            bx = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let step_tol = 2.0 * f64::EPSILON * bx.abs() + 0.5 * tol.abs_x;
        let mid = 0.5 * (c - bx);
        if mid.abs() <= step_tol || fb == 0.0 {
            return Ok(bx);
        }
        if e.abs() >= step_tol && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * mid * s;
                q = 1.0 - s;
            } else {
                let qa = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * mid * qa * (qa - r) - (bx - a) * (r - 1.0));
                q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            } else {
                p = -p;
            }
            if 2.0 * p < (3.0 * mid * q - (step_tol * q).abs()).min((e * q).abs()) {
                e = d;
                d = p / q;
            } else {
                d = mid;
                e = d;
            }
        } else {
            d = mid;
            e = d;
        }
        a = bx;
        fa = fb;
        bx += if d.abs() > step_tol {
            d
        } else {
            step_tol.copysign(mid)
        };
        fb = f(bx);
        if fb.is_nan() {
            return Err(Error::NonFinite { at: bx });
        }
    }
    Err(Error::MaxIterations {
        iterations: tol.max_iter,
    })
}
