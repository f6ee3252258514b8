use crate::channels::{
    stable_linear_dispersion, validate_weights, Channel, DelayLaw, FirstArrival, IGParams,
    LevyParams,
};
use crate::detectors::thresholds::{fa_threshold, ml_threshold_single, shift_llr_threshold};
use crate::detectors::{check_length, first_arrival, ArrivalVector, Decision, SymbolDetector};
use crate::error::ensure_positive;
use crate::{Error, Result};

/// Arrivals closer than this (relative to `Δ`) to the later release time are
/// treated as coinciding with it.
const CAUSALITY_GUARD: f64 = 1e-12;

/// Which statistic a binary scheme thresholds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinaryRule {
    /// Likelihood ratio of the whole arrival vector.
    Ml,
    /// Earliest arrival.
    Fa,
    /// Weighted mean of the arrivals (equal weights in the simulator).
    Linear,
}

/// Binary timing modulation: all `M` particles are released at `0` or `Δ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BinaryScheme {
    delta: f64,
    m: usize,
    channel: Channel,
    single: f64,
    fa: f64,
    linear: f64,
}

impl BinaryScheme {
    pub fn new(channel: Channel, delta: f64, m: usize) -> Result<Self> {
        ensure_positive("Δ", delta)?;
        if m == 0 {
            return Err(Error::InvalidParameter("M must be ≥ 1".into()));
        }
        let (single, fa, linear) = match channel {
            Channel::Levy(p) => (
                ml_threshold_single(p.c(), delta)?,
                fa_threshold(p.c(), delta, m)?,
                ml_threshold_single(m as f64 * p.c(), delta)?,
            ),
            Channel::InverseGaussian(p) => (
                shift_llr_threshold(&p, delta)?,
                shift_llr_threshold(&FirstArrival::new(p, m)?, delta)?,
                shift_llr_threshold(&p.averaged(m), delta)?,
            ),
        };
        Ok(Self {
            delta,
            m,
            channel,
            single,
            fa,
            linear,
        })
    }

    /// Lévy channel with scale `c`.
    pub fn levy(c: f64, delta: f64, m: usize) -> Result<Self> {
        Self::new(Channel::Levy(LevyParams::standard(c)?), delta, m)
    }

    /// Inverse Gaussian channel `IG(κ, λ)`.
    pub fn inverse_gaussian(kappa: f64, lambda: f64, delta: f64, m: usize) -> Result<Self> {
        Self::new(Channel::InverseGaussian(IGParams::new(kappa, lambda)?), delta, m)
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn channel(&self) -> Channel {
        self.channel
    }

    /// Threshold of the single-particle likelihood-ratio test.
    pub fn single_threshold(&self) -> f64 {
        self.single
    }

    /// Threshold on the earliest arrival.
    pub fn fa_threshold(&self) -> f64 {
        self.fa
    }

    /// Threshold on the equal-weight mean.
    pub fn linear_threshold(&self) -> f64 {
        self.linear
    }

    pub fn release_time(&self, symbol: usize) -> f64 {
        if symbol == 0 {
            0.0
        } else {
            self.delta
        }
    }

    pub fn with_rule(self, rule: BinaryRule) -> BinaryDetector {
        BinaryDetector { scheme: self, rule }
    }

    pub fn ml_detect(&self, y: &ArrivalVector) -> Result<Decision> {
        check_length(self.m, y)?;
        let (symbol_index, statistic) = self.ml_decide(y.as_slice());
        Ok(Decision {
            symbol_index,
            statistic,
            threshold_used: None,
        })
    }

    pub fn fa_detect(&self, y: &ArrivalVector) -> Result<Decision> {
        check_length(self.m, y)?;
        let statistic = y.first_arrival();
        Ok(Decision {
            symbol_index: threshold_test(statistic, self.fa),
            statistic,
            threshold_used: Some(self.fa),
        })
    }

    /// Thresholds `Σ wᵢ yᵢ`.
    ///
    /// On the Lévy channel the combined statistic is Lévy with scale
    /// `c (Σ √wᵢ)²`, so the single-particle threshold for that scale applies.
    /// The inverse Gaussian family is closed only under equal-weight
    /// averaging, so unequal weights are rejected there.
    pub fn linear_detect(&self, weights: &[f64], y: &ArrivalVector) -> Result<Decision> {
        check_length(self.m, y)?;
        if weights.len() != self.m {
            return Err(Error::LengthMismatch {
                expected: self.m,
                got: weights.len(),
            });
        }
        validate_weights(weights)?;
        let equal = weights
            .iter()
            .all(|w| (w * self.m as f64 - 1.0).abs() <= 1e-12);
        let threshold = match self.channel {
            _ if equal => self.linear,
            Channel::Levy(p) => {
                ml_threshold_single(stable_linear_dispersion(p.c(), 0.5, weights)?, self.delta)?
            }
            Channel::InverseGaussian(_) => {
                return Err(Error::BadWeights(
                    "inverse Gaussian combining needs equal weights".into(),
                ))
            }
        };
        let statistic: f64 = weights.iter().zip(y.as_slice()).map(|(w, y)| w * y).sum();
        Ok(Decision {
            symbol_index: threshold_test(statistic, threshold),
            statistic,
            threshold_used: Some(threshold),
        })
    }

    /// ML decision and its statistic. The statistic is positive when the
    /// arrivals favour symbol 0; `−∞` flags an arrival at or before `Δ`,
    /// which rules out symbol 1.
    fn ml_decide(&self, y: &[f64]) -> (usize, f64) {
        if first_arrival(y) - self.delta < CAUSALITY_GUARD * self.delta {
            return (0, f64::NEG_INFINITY);
        }
        let statistic: f64 = match self.channel {
            Channel::Levy(p) => {
                let k = p.c() * self.delta / 3.0;
                y.iter()
                    .map(|&v| (-self.delta / v).ln_1p() + k / (v * (v - self.delta)))
                    .sum()
            }
            Channel::InverseGaussian(p) => y
                .iter()
                .map(|&v| p.ln_pdf(v) - p.ln_pdf(v - self.delta))
                .sum(),
        };
        (usize::from(statistic <= 0.0), statistic)
    }

    fn decide(&self, rule: BinaryRule, y: &[f64]) -> usize {
        match rule {
            BinaryRule::Ml => self.ml_decide(y).0,
            BinaryRule::Fa => threshold_test(first_arrival(y), self.fa),
            BinaryRule::Linear => {
                let mean = y.iter().sum::<f64>() / y.len() as f64;
                threshold_test(mean, self.linear)
            }
        }
    }

    fn require_ig(&self) -> Result<()> {
        match self.channel {
            Channel::InverseGaussian(_) => Ok(()),
            Channel::Levy(_) => Err(Error::InvalidParameter(
                "this detector needs an inverse Gaussian channel".into(),
            )),
        }
    }
}

fn threshold_test(statistic: f64, threshold: f64) -> usize {
    usize::from(statistic >= threshold)
}

/// A binary scheme bound to one decision rule.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BinaryDetector {
    pub scheme: BinaryScheme,
    pub rule: BinaryRule,
}

impl SymbolDetector for BinaryDetector {
    fn symbols(&self) -> usize {
        2
    }

    fn release_time(&self, symbol: usize) -> f64 {
        self.scheme.release_time(symbol)
    }

    fn particles(&self) -> usize {
        self.scheme.m
    }

    fn channel(&self) -> Channel {
        self.scheme.channel
    }

    fn decide(&self, arrivals: &[f64]) -> usize {
        self.scheme.decide(self.rule, arrivals)
    }
}

/// Maximum-likelihood detection over the whole arrival vector.
pub fn ml_detect(s: &BinaryScheme, y: &ArrivalVector) -> Result<Decision> {
    s.ml_detect(y)
}

/// First-arrival detection.
pub fn fa_detect(s: &BinaryScheme, y: &ArrivalVector) -> Result<Decision> {
    s.fa_detect(y)
}

/// Linear-combining detection with the given weights.
pub fn linear_detect(s: &BinaryScheme, weights: &[f64], y: &ArrivalVector) -> Result<Decision> {
    s.linear_detect(weights, y)
}

/// ML detection on the inverse Gaussian channel.
pub fn ig_ml_detect(s: &BinaryScheme, y: &ArrivalVector) -> Result<Decision> {
    s.require_ig()?;
    s.ml_detect(y)
}

/// First-arrival detection on the inverse Gaussian channel.
pub fn ig_fa_detect(s: &BinaryScheme, y: &ArrivalVector) -> Result<Decision> {
    s.require_ig()?;
    s.fa_detect(y)
}
