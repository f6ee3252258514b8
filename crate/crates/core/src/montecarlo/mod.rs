//! Reproducible parallel Monte Carlo estimation of detector error rates.
//!
//! Trial `i` draws all of its randomness from a ChaCha stream keyed by the
//! run seed and selected by `i`, so the outcome does not depend on how
//! trials are split across threads.

mod stats;

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::analysis::pe_fa;
use crate::channels::{Channel, ChannelSpec};
use crate::detectors::{BinaryScheme, DetectorKind, GrayScheme, SymbolDetector};
use crate::{Error, Result};

pub use stats::{wilson_interval, TrialStats};

/// Trials per parallel work item.
const BLOCK: u64 = 4096;

/// Default particle cap for [`required_m`].
pub const DEFAULT_M_CAP: u64 = 10_000_000;

/// Random stream of trial `trial` in a run seeded with `seed`.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::from_seed(key(seed));
    rng.set_stream(trial);
    rng
}

fn key(seed: u64) -> [u8; 32] {
    ChaCha8Rng::seed_from_u64(seed).get_seed()
}

/// One trial: draws a symbol uniformly, forms the arrivals and detects.
/// Returns `(sent, decided)`; `buffer` is scratch space for the arrivals.
pub fn run_trial<D: SymbolDetector + ?Sized, R: Rng + ?Sized>(
    detector: &D,
    rng: &mut R,
    buffer: &mut Vec<f64>,
) -> (usize, usize) {
    let sent = rng.random_range(0..detector.symbols());
    let release = detector.release_time(sent);
    let channel = detector.channel();
    buffer.clear();
    buffer.extend((0..detector.particles()).map(|_| release + channel.sample(rng)));
    (sent, detector.decide(buffer))
}

/// Estimates the symbol error rate of `detector` from `trials` trials.
pub fn simulate_pe<D: SymbolDetector + ?Sized>(
    detector: &D,
    trials: u64,
    seed: u64,
) -> Result<TrialStats> {
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be ≥ 1".into()));
    }
    let start = Instant::now();
    let key = key(seed);
    let blocks = trials.div_ceil(BLOCK);
    let errors: u64 = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let mut rng = ChaCha8Rng::from_seed(key);
            let mut buffer = Vec::with_capacity(detector.particles());
            let mut errors = 0;
            for i in b * BLOCK..((b + 1) * BLOCK).min(trials) {
                rng.set_stream(i);
                rng.set_word_pos(0);
                let (sent, decided) = run_trial(detector, &mut rng, &mut buffer);
                errors += u64::from(sent != decided);
            }
            errors
        })
        .sum();
    Ok(TrialStats::new(errors, trials, start.elapsed().as_secs_f64()))
}

/// The parameter a sweep varies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepVar {
    Delta,
    M,
    C,
    Velocity,
    L,
}

impl SweepVar {
    pub fn name(self) -> &'static str {
        match self {
            SweepVar::Delta => "delta",
            SweepVar::M => "m",
            SweepVar::C => "c",
            SweepVar::Velocity => "velocity",
            SweepVar::L => "bits",
        }
    }
}

/// Fully resolved parameters of one simulation point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointSpec {
    pub channel: ChannelSpec,
    pub detector: DetectorKind,
    pub delta: f64,
    pub m: usize,
    /// Bits per symbol, used by the Gray detector only.
    pub bits: u32,
}

impl PointSpec {
    /// Builds the scheme and decision rule for this point.
    pub fn build(&self) -> Result<Box<dyn SymbolDetector + Send>> {
        let channel = if self.detector.uses_drift() {
            match self.channel.inverse_gaussian() {
                Some(ig) => Channel::InverseGaussian(ig),
                None => {
                    return Err(Error::InvalidParameter(format!(
                        "detector {} needs a positive drift velocity",
                        self.detector
                    )))
                }
            }
        } else {
            if self.channel.drift_v > 0.0 {
                return Err(Error::InvalidParameter(format!(
                    "detector {} assumes a driftless channel",
                    self.detector
                )));
            }
            Channel::Levy(self.channel.levy()?)
        };
        match (self.detector.binary_rule(), channel) {
            (Some(rule), _) => Ok(Box::new(
                BinaryScheme::new(channel, self.delta, self.m)?.with_rule(rule),
            )),
            (None, Channel::Levy(p)) => {
                Ok(Box::new(GrayScheme::new(p.c(), self.delta, self.bits, self.m)?))
            }
            (None, Channel::InverseGaussian(_)) => Err(Error::InvalidParameter(
                "the Gray detector needs a driftless channel".into(),
            )),
        }
    }

    /// Copy of this point with `var` set to `value`.
    pub fn with(&self, var: SweepVar, value: f64) -> Result<Self> {
        let mut p = *self;
        match var {
            SweepVar::Delta => p.delta = value,
            SweepVar::M => p.m = to_count(value, "M")? as usize,
            SweepVar::L => p.bits = to_count(value, "L")? as u32,
            SweepVar::Velocity => {
                p.channel = ChannelSpec::new(
                    p.channel.distance_d,
                    p.channel.diffusion_d,
                    value,
                    p.channel.dim_scale,
                )?
            }
            SweepVar::C => {
                if !(value > 0.0 && value.is_finite()) {
                    return Err(Error::InvalidParameter(format!("c must be positive, got {value}")));
                }
                let ch = p.channel;
                let diffusion = ch.dim_scale * ch.distance_d * ch.distance_d / (2.0 * value);
                p.channel = ChannelSpec::new(ch.distance_d, diffusion, ch.drift_v, ch.dim_scale)?;
            }
        }
        Ok(p)
    }
}

fn to_count(value: f64, name: &str) -> Result<u64> {
    if value >= 1.0 && value.fract() == 0.0 && value <= 1e15 {
        Ok(value as u64)
    } else {
        Err(Error::InvalidParameter(format!(
            "{name} must be a positive integer, got {value}"
        )))
    }
}

/// A one-parameter family of simulation points.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    /// Values of every parameter except `vary`.
    pub base: PointSpec,
    pub vary: SweepVar,
    pub grid: Vec<f64>,
    pub trials: u64,
    pub seed: u64,
}

/// Outcome of one grid point; failures do not stop the sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepPoint {
    pub value: f64,
    pub result: Result<TrialStats>,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        if self.grid.is_empty() {
            return Err(Error::InvalidParameter("sweep grid is empty".into()));
        }
        if self.grid.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidParameter(
                "sweep grid must be strictly increasing".into(),
            ));
        }
        if self.trials == 0 {
            return Err(Error::InvalidParameter("trials must be ≥ 1".into()));
        }
        Ok(())
    }
}

/// Runs [`simulate_pe`] at every grid point with the same seed.
pub fn sweep(spec: &SweepSpec) -> Result<Vec<SweepPoint>> {
    spec.validate()?;
    Ok(spec
        .grid
        .iter()
        .map(|&value| SweepPoint {
            value,
            result: spec
                .base
                .with(spec.vary, value)
                .and_then(|p| p.build())
                .and_then(|d| simulate_pe(d.as_ref(), spec.trials, spec.seed)),
        })
        .collect())
}

/// How [`required_m`] evaluates the error probability.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PeMethod {
    ClosedForm,
    MonteCarlo { trials: u64, seed: u64 },
}

/// Smallest `M` whose first-arrival error probability is at most
/// `target_pe`, by doubling then bisection. Fails beyond `cap` particles.
pub fn required_m(c: f64, delta: f64, target_pe: f64, method: PeMethod, cap: u64) -> Result<u64> {
    if !(target_pe > 0.0 && target_pe < 0.5) {
        return Err(Error::InvalidParameter(format!(
            "target error probability must be in (0, 0.5), got {target_pe}"
        )));
    }
    let pe = |m: u64| -> Result<f64> {
        match method {
            PeMethod::ClosedForm => pe_fa(c, delta, m as usize),
            PeMethod::MonteCarlo { trials, seed } => {
                let det = BinaryScheme::levy(c, delta, m as usize)?
                    .with_rule(crate::detectors::BinaryRule::Fa);
                Ok(simulate_pe(&det, trials, seed)?.p_hat)
            }
        }
    };
    let mut hi = 1u64;
    while pe(hi)? > target_pe {
        if hi >= cap {
            return Err(Error::TargetUnreachable { cap });
        }
        hi = (hi * 2).min(cap);
    }
    if hi == 1 {
        return Ok(1);
    }
    let mut lo = hi / 2;
    if hi == cap {
        lo = lo.max(1);
    }
    // pe(lo) > target ≥ pe(hi)
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if pe(mid)? <= target_pe {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}
