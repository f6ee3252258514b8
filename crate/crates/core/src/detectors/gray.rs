use crate::channels::{fa_mode, Channel, LevyParams};
use crate::detectors::thresholds::fa_threshold;
use crate::detectors::{check_length, first_arrival, ArrivalVector, Decision, SymbolDetector};
use crate::error::ensure_positive;
use crate::{Error, Result};

/// Largest supported number of bits per symbol.
const MAX_BITS: u32 = 30;

/// `2^L`-ary timing modulation on `[0, Δ]` with spacing `Δ̃ = Δ/(2^L − 1)`,
/// detected from the earliest arrival over Lévy delays.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GrayScheme {
    delta_total: f64,
    bits: u32,
    m: usize,
    levy: LevyParams,
    sub_spacing: f64,
    mode: f64,
    threshold: f64,
}

impl GrayScheme {
    pub fn new(c: f64, delta_total: f64, bits: u32, m: usize) -> Result<Self> {
        ensure_positive("Δ", delta_total)?;
        if bits == 0 || bits > MAX_BITS {
            return Err(Error::InvalidParameter(format!(
                "bits per symbol must be in 1..={MAX_BITS}, got {bits}"
            )));
        }
        let levy = LevyParams::standard(c)?;
        let sub_spacing = delta_total / ((1u64 << bits) - 1) as f64;
        Ok(Self {
            delta_total,
            bits,
            m,
            levy,
            sub_spacing,
            mode: fa_mode(c, m)?,
            threshold: fa_threshold(c, sub_spacing, m)?,
        })
    }

    pub fn delta_total(&self) -> f64 {
        self.delta_total
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn levy(&self) -> LevyParams {
        self.levy
    }

    /// `Δ̃`.
    pub fn sub_spacing(&self) -> f64 {
        self.sub_spacing
    }

    /// Mode `ω_M` of the first-arrival delay.
    pub fn mode(&self) -> f64 {
        self.mode
    }

    /// Binary first-arrival threshold for spacing `Δ̃`.
    pub fn sub_threshold(&self) -> f64 {
        self.threshold
    }

    pub fn symbols(&self) -> usize {
        1 << self.bits
    }

    pub fn release_time(&self, symbol: usize) -> f64 {
        symbol as f64 * self.sub_spacing
    }

    pub fn detect(&self, y: &ArrivalVector) -> Result<Decision> {
        check_length(self.m, y)?;
        let statistic = y.first_arrival();
        Ok(Decision {
            symbol_index: self.decide_first(statistic),
            statistic,
            threshold_used: Some(self.threshold),
        })
    }

    /// Locates the pair of neighbouring constellation points that can be
    /// most likely, then runs the binary test between them.
    fn decide_first(&self, y_fa: f64) -> usize {
        let last = self.symbols() - 1;
        let n = ((y_fa - self.mode) / self.sub_spacing).floor();
        if n < 0.0 {
            0
        } else if n >= last as f64 {
            last
        } else {
            let n = n as usize;
            let local = y_fa - n as f64 * self.sub_spacing;
            n + usize::from(local >= self.threshold)
        }
    }
}

impl SymbolDetector for GrayScheme {
    fn symbols(&self) -> usize {
        GrayScheme::symbols(self)
    }

    fn release_time(&self, symbol: usize) -> f64 {
        GrayScheme::release_time(self, symbol)
    }

    fn particles(&self) -> usize {
        self.m
    }

    fn channel(&self) -> Channel {
        Channel::Levy(self.levy)
    }

    fn decide(&self, arrivals: &[f64]) -> usize {
        self.decide_first(first_arrival(arrivals))
    }
}

/// Non-binary first-arrival detection; returns the constellation index.
pub fn gray_fa_detect(s: &GrayScheme, y: &ArrivalVector) -> Result<Decision> {
    s.detect(y)
}

/// Reflected binary code of a constellation index.
pub fn gray_code(index: usize) -> usize {
    index ^ (index >> 1)
}

/// Constellation index of a Gray code word.
pub fn gray_decode(code: usize) -> usize {
    let mut index = code;
    let mut shift = code >> 1;
    while shift != 0 {
        index ^= shift;
        shift >>= 1;
    }
    index
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::detectors::BinaryScheme;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn constellation() {
        let s = GrayScheme::new(1.0, 3.0, 3, 25).unwrap();
        assert_eq!(s.symbols(), 8);
        assert!((s.sub_spacing() - 3.0 / 7.0).abs() < 1e-15);
        assert!((s.release_time(7) - 3.0).abs() < 1e-12);
    }

    #[test]
    fn gray_map_properties() {
        for i in 0..1024usize {
            assert_eq!(gray_decode(gray_code(i)), i);
            assert_eq!((gray_code(i) ^ gray_code(i + 1)).count_ones(), 1);
        }
        assert_eq!(gray_code(2), 3);
    }

    #[test]
    fn before_mode_is_first_symbol() {
        let s = GrayScheme::new(1.0, 3.0, 3, 25).unwrap();
        let y = ArrivalVector::new(vec![s.mode() * 0.5; 25]).unwrap();
        assert_eq!(s.detect(&y).unwrap().symbol_index, 0);
    }

    #[test]
    fn far_arrivals_clamp_to_last_symbol() {
        let s = GrayScheme::new(1.0, 3.0, 2, 4).unwrap();
        let y = ArrivalVector::new(vec![500.0; 4]).unwrap();
        assert_eq!(s.detect(&y).unwrap().symbol_index, 3);
    }

    #[test]
    fn one_bit_matches_binary_first_arrival() {
        let (c, delta, m) = (1.0, 1.0, 2);
        let gray = GrayScheme::new(c, delta, 1, m).unwrap();
        let binary = BinaryScheme::levy(c, delta, m).unwrap();
        // the reduction needs the mode below the binary threshold
        assert!(gray.mode() <= binary.fa_threshold());
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100_000 {
            let x = rng.random_range(0..2) as f64 * delta;
            let v: Vec<f64> = (0..m).map(|_| x + gray.levy().sample(&mut rng)).collect();
            let y = ArrivalVector::new(v).unwrap();
            assert_eq!(
                gray_fa_detect(&gray, &y).unwrap().symbol_index,
                binary.fa_detect(&y).unwrap().symbol_index
            );
        }
    }

    #[test]
    fn rejects_bad_bits() {
        assert!(GrayScheme::new(1.0, 3.0, 0, 4).is_err());
        assert!(GrayScheme::new(1.0, 3.0, 31, 4).is_err());
    }
}
