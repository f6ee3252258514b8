use std::f64::consts::PI;

use rand::Rng;
use rand_distr::StandardNormal;

use crate::channels::DelayLaw;
use crate::error::ensure_positive;
use crate::numerics::{ln_norm_cdf, norm_cdf};
use crate::Result;

/// Inverse Gaussian law `IG(κ, λ)`: first-passage time of Brownian motion
/// with positive drift. `κ = d/v` is the mean, `λ = d²/(2D)` the shape.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IGParams {
    kappa: f64,
    lambda: f64,
}

impl IGParams {
    pub fn new(kappa: f64, lambda: f64) -> Result<Self> {
        ensure_positive("inverse Gaussian mean kappa", kappa)?;
        ensure_positive("inverse Gaussian shape lambda", lambda)?;
        Ok(Self { kappa, lambda })
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn mean(&self) -> f64 {
        self.kappa
    }

    pub fn variance(&self) -> f64 {
        self.kappa.powi(3) / self.lambda
    }

    /// Law of the average of `m` i.i.d. draws: `IG(κ, m λ)`.
    pub fn averaged(&self, m: usize) -> Self {
        Self {
            kappa: self.kappa,
            lambda: self.lambda * m as f64,
        }
    }

    /// Michael-Schucany-Haas transform sampler.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let mu = self.kappa;
        let l = self.lambda;
        let n: f64 = rng.sample(StandardNormal);
        let y = mu * n * n;
        let x = mu + mu / (2.0 * l) * (y - (4.0 * l * y + y * y).sqrt());
        let u: f64 = rng.random();
        if u <= mu / (mu + x) {
            x
        } else {
            mu * mu / x
        }
    }

    /// Arguments of the two normal CDFs in the closed-form IG CDF.
    fn cdf_args(&self, t: f64) -> (f64, f64) {
        let r = (self.lambda / t).sqrt();
        (r * (t / self.kappa - 1.0), r * (t / self.kappa + 1.0))
    }
}

impl DelayLaw for IGParams {
    fn pdf(&self, z: f64) -> f64 {
        if z <= 0.0 {
            0.0
        } else {
            self.ln_pdf(z).exp()
        }
    }

    fn ln_pdf(&self, z: f64) -> f64 {
        if z <= 0.0 {
            return f64::NEG_INFINITY;
        }
        let k = self.kappa;
        0.5 * (self.lambda / (2.0 * PI * z * z * z)).ln()
            - self.lambda * (z - k) * (z - k) / (2.0 * k * k * z)
    }

    /// `Φ(a) + e^{2λ/κ} Φ(-b)`; the second product is formed in log space so
    /// a huge `e^{2λ/κ}` never meets an underflowed `Φ(-b)`.
    fn cdf(&self, z: f64) -> f64 {
        if z <= 0.0 {
            return 0.0;
        }
        let (a, b) = self.cdf_args(z);
        let tail = (2.0 * self.lambda / self.kappa + ln_norm_cdf(-b)).exp();
        (norm_cdf(a) + tail).min(1.0)
    }

    fn ln_sf(&self, z: f64) -> f64 {
        if z <= 0.0 {
            return 0.0;
        }
        let cdf = self.cdf(z);
        if cdf < 0.5 {
            return (-cdf).ln_1p();
        }
        // 1 - F = Φ(-a) - e^{2λ/κ} Φ(-b) = Φ(-a) (1 - r)
        let (a, b) = self.cdf_args(z);
        let ln_head = ln_norm_cdf(-a);
        let ln_r = 2.0 * self.lambda / self.kappa + ln_norm_cdf(-b) - ln_head;
        ln_head + (-ln_r.exp()).ln_1p()
    }
}
