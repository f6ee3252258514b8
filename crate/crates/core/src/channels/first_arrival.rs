use crate::channels::{DelayLaw, LevyParams};
use crate::numerics::{minimize_scalar, Bracket, Tolerance};
use crate::{Error, Result};

/// Law of the earliest of `m` i.i.d. delays drawn from `law`.
///
/// `F_min(t) = 1 − (1 − F(t))^m`, `f_min(t) = m f(t) (1 − F(t))^{m−1}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FirstArrival<L> {
    law: L,
    m: usize,
}

impl<L: DelayLaw> FirstArrival<L> {
    pub fn new(law: L, m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidParameter("M must be ≥ 1".into()));
        }
        Ok(Self { law, m })
    }

    pub fn law(&self) -> &L {
        &self.law
    }

    pub fn m(&self) -> usize {
        self.m
    }
}

impl<L: DelayLaw> DelayLaw for FirstArrival<L> {
    fn pdf(&self, t: f64) -> f64 {
        let v = self.ln_pdf(t);
        if v == f64::NEG_INFINITY {
            0.0
        } else {
            v.exp()
        }
    }

    fn ln_pdf(&self, t: f64) -> f64 {
        let base = self.law.ln_pdf(t);
        if base == f64::NEG_INFINITY {
            return base;
        }
        let m = self.m as f64;
        let tail = if self.m == 1 {
            0.0
        } else {
            (m - 1.0) * self.law.ln_sf(t)
        };
        m.ln() + base + tail
    }

    fn cdf(&self, t: f64) -> f64 {
        -(self.m as f64 * self.law.ln_sf(t)).exp_m1()
    }

    fn ln_sf(&self, t: f64) -> f64 {
        self.m as f64 * self.law.ln_sf(t)
    }
}

/// `Ψ(c, M, t)`: CDF of the first arrival among `m` particles with
/// `L(0, c)` delays.
pub fn fa_cdf(c: f64, m: usize, t: f64) -> Result<f64> {
    Ok(FirstArrival::new(LevyParams::standard(c)?, m)?.cdf(t))
}

pub fn fa_pdf(c: f64, m: usize, t: f64) -> Result<f64> {
    Ok(FirstArrival::new(LevyParams::standard(c)?, m)?.pdf(t))
}

/// Mode `ω_M` of the first-arrival density for `L(0, c)` delays.
///
/// Found by golden-section search on the log density over `(1e-12 c, c/3]`;
/// the single-particle mode `c/3` bounds it from above.
pub fn fa_mode(c: f64, m: usize) -> Result<f64> {
    let law = FirstArrival::new(LevyParams::standard(c)?, m)?;
    if m == 1 {
        return Ok(c / 3.0);
    }
    let bracket = Bracket::new(1e-12 * c, c / 3.0)?;
    let tol = Tolerance {
        abs_x: 1e-12 * c,
        ..Tolerance::default()
    };
    Ok(minimize_scalar(|t| -law.ln_pdf(t), bracket, tol)?.x)
}
