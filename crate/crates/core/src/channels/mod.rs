//! Propagation-delay laws, samplers, first-arrival statistics and the stable
//! dispersion algebra.
//!
//! All evaluations are pure. Samplers draw from a caller-supplied
//! [`rand::Rng`], so independent streams can be used from different threads.

mod first_arrival;
mod inverse_gaussian;
mod levy;
mod stable;

use rand::Rng;

pub use first_arrival::{fa_cdf, fa_mode, fa_pdf, FirstArrival};
pub use inverse_gaussian::IGParams;
pub use levy::LevyParams;
pub use stable::{stable_linear_dispersion, validate_weights, StableParams};

use crate::error::ensure_positive;
use crate::{Error, Result};

/// A delay law supported on `(location, ∞)`.
pub trait DelayLaw {
    fn pdf(&self, t: f64) -> f64;
    fn ln_pdf(&self, t: f64) -> f64;
    fn cdf(&self, t: f64) -> f64;

    fn sf(&self, t: f64) -> f64 {
        self.ln_sf(t).exp()
    }

    /// Log of the survival function `1 − F(t)`, accurate in the far tail.
    fn ln_sf(&self, t: f64) -> f64;
}

/// Propagation delay of a single particle: Lévy without drift, inverse
/// Gaussian with drift.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Channel {
    Levy(LevyParams),
    InverseGaussian(IGParams),
}

impl Channel {
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match self {
            Channel::Levy(p) => p.sample(rng),
            Channel::InverseGaussian(p) => p.sample(rng),
        }
    }
}

impl DelayLaw for Channel {
    fn pdf(&self, t: f64) -> f64 {
        match self {
            Channel::Levy(p) => p.pdf(t),
            Channel::InverseGaussian(p) => p.pdf(t),
        }
    }

    fn ln_pdf(&self, t: f64) -> f64 {
        match self {
            Channel::Levy(p) => p.ln_pdf(t),
            Channel::InverseGaussian(p) => p.ln_pdf(t),
        }
    }

    fn cdf(&self, t: f64) -> f64 {
        match self {
            Channel::Levy(p) => p.cdf(t),
            Channel::InverseGaussian(p) => p.cdf(t),
        }
    }

    fn ln_sf(&self, t: f64) -> f64 {
        match self {
            Channel::Levy(p) => p.ln_sf(t),
            Channel::InverseGaussian(p) => p.ln_sf(t),
        }
    }
}

/// Physical description of the medium.
///
/// Distances in micrometers, diffusion in µm²/s, drift in µm/s. `dim_scale`
/// multiplies the Lévy scale (e.g. to model a 3-D medium); it is 1 for the
/// one-dimensional model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelSpec {
    pub distance_d: f64,
    pub diffusion_d: f64,
    pub drift_v: f64,
    pub dim_scale: f64,
}

impl ChannelSpec {
    pub fn new(distance_d: f64, diffusion_d: f64, drift_v: f64, dim_scale: f64) -> Result<Self> {
        ensure_positive("distance d", distance_d)?;
        ensure_positive("diffusion coefficient D", diffusion_d)?;
        ensure_positive("dimension scale", dim_scale)?;
        if !(drift_v >= 0.0 && drift_v.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "drift velocity must be ≥ 0, got {drift_v}"
            )));
        }
        Ok(Self {
            distance_d,
            diffusion_d,
            drift_v,
            dim_scale,
        })
    }

    /// `d² / (2D)`, seconds.
    pub fn diffusion_time(&self) -> f64 {
        self.distance_d * self.distance_d / (2.0 * self.diffusion_d)
    }

    /// Lévy scale `c = dim_scale · d² / (2D)`.
    pub fn levy(&self) -> Result<LevyParams> {
        LevyParams::standard(self.dim_scale * self.diffusion_time())
    }

    /// `IG(d/v, d²/(2D))`, or `None` without drift.
    pub fn inverse_gaussian(&self) -> Option<IGParams> {
        if self.drift_v > 0.0 {
            IGParams::new(self.distance_d / self.drift_v, self.diffusion_time()).ok()
        } else {
            None
        }
    }

    pub fn channel(&self) -> Result<Channel> {
        match self.inverse_gaussian() {
            Some(ig) => Ok(Channel::InverseGaussian(ig)),
            None => Ok(Channel::Levy(self.levy()?)),
        }
    }
}
