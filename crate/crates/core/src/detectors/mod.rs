//! Decision rules mapping arrival times to a transmitted symbol.
//!
//! Binary schemes release all particles at `0` or `Δ`. Thresholds are solved
//! once when a scheme is built; every detect call is then pure and cheap.
//! Threshold ties always decide the later symbol.

mod binary;
mod gray;
mod thresholds;

use std::fmt;
use std::str::FromStr;

pub use binary::{
    fa_detect, ig_fa_detect, ig_ml_detect, linear_detect, ml_detect, BinaryDetector, BinaryRule,
    BinaryScheme,
};
pub use gray::{gray_code, gray_decode, gray_fa_detect, GrayScheme};
pub use thresholds::{fa_threshold, ml_threshold_single, shift_llr_threshold};

use crate::channels::Channel;
use crate::{Error, Result};

/// Arrival times `y_1..y_M` of the particles of one symbol.
#[derive(Debug, Clone, PartialEq)]
pub struct ArrivalVector {
    arrivals: Vec<f64>,
}

impl ArrivalVector {
    pub fn new(arrivals: Vec<f64>) -> Result<Self> {
        if arrivals.is_empty() {
            return Err(Error::InvalidParameter("arrival vector is empty".into()));
        }
        if let Some(y) = arrivals.iter().find(|y| !y.is_finite()) {
            return Err(Error::InvalidParameter(format!("arrival time {y} is not finite")));
        }
        Ok(Self { arrivals })
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.arrivals
    }

    pub fn len(&self) -> usize {
        self.arrivals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arrivals.is_empty()
    }

    /// `y_FA`, the earliest arrival.
    pub fn first_arrival(&self) -> f64 {
        first_arrival(&self.arrivals)
    }
}

/// Outcome of a detector: the symbol index and the statistic compared.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Decision {
    pub symbol_index: usize,
    pub statistic: f64,
    pub threshold_used: Option<f64>,
}

/// A modulation scheme together with its decision rule, as seen by the
/// Monte Carlo engine.
pub trait SymbolDetector: Sync {
    /// Constellation size.
    fn symbols(&self) -> usize;

    /// Release time of `symbol`.
    fn release_time(&self, symbol: usize) -> f64;

    /// Particles per symbol.
    fn particles(&self) -> usize;

    fn channel(&self) -> Channel;

    /// Decided symbol for `arrivals`, which must hold `particles()` values.
    fn decide(&self, arrivals: &[f64]) -> usize;
}

/// Names of the available decision rules.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DetectorKind {
    Ml,
    Fa,
    Linear,
    GrayFa,
    IgMl,
    IgFa,
    IgLinear,
}

impl DetectorKind {
    pub const ALL: [DetectorKind; 7] = [
        DetectorKind::Ml,
        DetectorKind::Fa,
        DetectorKind::Linear,
        DetectorKind::GrayFa,
        DetectorKind::IgMl,
        DetectorKind::IgFa,
        DetectorKind::IgLinear,
    ];

    pub fn name(self) -> &'static str {
        match self {
            DetectorKind::Ml => "ml",
            DetectorKind::Fa => "fa",
            DetectorKind::Linear => "linear",
            DetectorKind::GrayFa => "gray_fa",
            DetectorKind::IgMl => "ig_ml",
            DetectorKind::IgFa => "ig_fa",
            DetectorKind::IgLinear => "ig_linear",
        }
    }

    /// Whether the rule runs on the inverse Gaussian (drift) channel.
    pub fn uses_drift(self) -> bool {
        matches!(self, DetectorKind::IgMl | DetectorKind::IgFa | DetectorKind::IgLinear)
    }

    /// The binary rule behind this detector, if it is binary.
    pub fn binary_rule(self) -> Option<BinaryRule> {
        match self {
            DetectorKind::Ml | DetectorKind::IgMl => Some(BinaryRule::Ml),
            DetectorKind::Fa | DetectorKind::IgFa => Some(BinaryRule::Fa),
            DetectorKind::Linear | DetectorKind::IgLinear => Some(BinaryRule::Linear),
            DetectorKind::GrayFa => None,
        }
    }
}

impl fmt::Display for DetectorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for DetectorKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase().replace('-', "_");
        DetectorKind::ALL
            .into_iter()
            .find(|k| k.name() == key)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown detector '{s}'")))
    }
}

pub(crate) fn first_arrival(y: &[f64]) -> f64 {
    y.iter().copied().fold(f64::INFINITY, f64::min)
}

fn check_length(expected: usize, y: &ArrivalVector) -> Result<()> {
    if y.len() == expected {
        Ok(())
    } else {
        Err(Error::LengthMismatch {
            expected,
            got: y.len(),
        })
    }
}
