//! Detection and performance analysis for diffusion-based molecular timing
//! channels.
//!
//! Information is carried by the release time of `M` particles. Each particle
//! reaches the receiver after an independent random propagation delay, which
//! is Lévy distributed in a still medium and inverse Gaussian when the medium
//! has a positive drift. The crate provides:
//!
//! * [`numerics`]: special functions, bracketed root finding, golden-section
//!   minimization and semi-infinite quadrature.
//! * [`channels`]: delay laws, their samplers, first-arrival order statistics
//!   and the stable dispersion algebra behind linear combining.
//! * [`detectors`]: maximum-likelihood, linear, first-arrival and Gray-coded
//!   first-arrival decision rules.
//! * [`analysis`]: closed-form error probabilities, the ML/FA mismatch bound
//!   and error exponents.
//! * [`montecarlo`]: a reproducible parallel trial engine and parameter sweeps.

pub mod analysis;
pub mod channels;
pub mod detectors;
mod error;
pub mod montecarlo;
pub mod numerics;

pub use error::{Error, Result};
