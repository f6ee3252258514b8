use std::f64::consts::PI;

use rand::Rng;
use rand_distr::StandardNormal;

use crate::channels::DelayLaw;
use crate::error::ensure_positive;
use crate::numerics::{erf, erfc, ln_erf};
use crate::{Error, Result};

/// Lévy law `L(mu, c)`: first-passage time of driftless Brownian motion.
///
/// Density `sqrt(c / (2π (z-μ)^3)) exp(-c / (2 (z-μ)))` for `z > μ`,
/// CDF `erfc(sqrt(c / (2 (z-μ))))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LevyParams {
    mu: f64,
    c: f64,
}

impl LevyParams {
    pub fn new(mu: f64, c: f64) -> Result<Self> {
        ensure_positive("Lévy scale c", c)?;
        if !mu.is_finite() {
            return Err(Error::InvalidParameter(format!("location must be finite, got {mu}")));
        }
        Ok(Self { mu, c })
    }

    /// `L(0, c)`, the propagation delay of a particle released at time zero.
    pub fn standard(c: f64) -> Result<Self> {
        Self::new(0.0, c)
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    /// Mode of the density, `μ + c/3`.
    pub fn mode(&self) -> f64 {
        self.mu + self.c / 3.0
    }

    /// The same law shifted so its location becomes `mu`.
    pub fn with_location(&self, mu: f64) -> Self {
        Self { mu, c: self.c }
    }

    /// Maps a standard normal draw `n` to `μ + c / n²`.
    pub fn from_normal(&self, n: f64) -> f64 {
        self.mu + self.c / (n * n)
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        loop {
            let n: f64 = rng.sample(StandardNormal);
            if n != 0.0 {
                return self.from_normal(n);
            }
        }
    }

    fn arg(&self, t: f64) -> f64 {
        (self.c / (2.0 * t)).sqrt()
    }
}

impl DelayLaw for LevyParams {
    fn pdf(&self, z: f64) -> f64 {
        let t = z - self.mu;
        if t <= 0.0 {
            return 0.0;
        }
        (self.c / (2.0 * PI * t * t * t)).sqrt() * (-self.c / (2.0 * t)).exp()
    }

    fn ln_pdf(&self, z: f64) -> f64 {
        let t = z - self.mu;
        if t <= 0.0 {
            return f64::NEG_INFINITY;
        }
        0.5 * (self.c / (2.0 * PI)).ln() - 1.5 * t.ln() - self.c / (2.0 * t)
    }

    fn cdf(&self, z: f64) -> f64 {
        let t = z - self.mu;
        if t <= 0.0 {
            return 0.0;
        }
        erfc(self.arg(t))
    }

    fn sf(&self, z: f64) -> f64 {
        let t = z - self.mu;
        if t <= 0.0 {
            return 1.0;
        }
        erf(self.arg(t))
    }

    fn ln_sf(&self, z: f64) -> f64 {
        let t = z - self.mu;
        if t <= 0.0 {
            return 0.0;
        }
        ln_erf(self.arg(t))
    }
}
