/// 97.5% standard normal quantile.
const Z95: f64 = 1.959_963_984_540_054;

/// Error count of a Monte Carlo run with its 95% Wilson interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrialStats {
    pub errors: u64,
    pub trials: u64,
    pub p_hat: f64,
    pub ci_lo: f64,
    pub ci_hi: f64,
    /// Wall-clock seconds.
    pub elapsed: f64,
}

impl TrialStats {
    pub fn new(errors: u64, trials: u64, elapsed: f64) -> Self {
        assert!(trials > 0 && errors <= trials);
        let (ci_lo, ci_hi) = wilson_interval(errors, trials);
        Self {
            errors,
            trials,
            p_hat: errors as f64 / trials as f64,
            ci_lo,
            ci_hi,
            elapsed,
        }
    }

    /// Binomial standard deviation of `p_hat` under probability `p`.
    pub fn sigma_at(&self, p: f64) -> f64 {
        (p * (1.0 - p) / self.trials as f64).sqrt()
    }
}

/// 95% Wilson score interval for `errors` successes in `trials`.
pub fn wilson_interval(errors: u64, trials: u64) -> (f64, f64) {
    let n = trials as f64;
    let p = errors as f64 / n;
    let z2 = Z95 * Z95;
    let denom = 1.0 + z2 / n;
    let centre = (p + z2 / (2.0 * n)) / denom;
    let half = Z95 * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    ((centre - half).max(0.0).min(p), (centre + half).min(1.0).max(p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn known_interval() {
        // statsmodels proportion_confint(10, 100, method="wilson")
        let (lo, hi) = wilson_interval(10, 100);
        assert!((lo - 0.055_229_137_060_675_09).abs() < 1e-12, "{lo}");
        assert!((hi - 0.174_365_661_504_913_48).abs() < 1e-12, "{hi}");
    }

    #[test]
    fn zero_errors() {
        let (lo, hi) = wilson_interval(0, 1000);
        assert_eq!(lo, 0.0);
        assert!(hi > 0.0 && hi < 0.01);
    }

    proptest! {
        #[test]
        fn interval_contains_estimate(trials in 1u64..1_000_000, frac in 0.0f64..=1.0) {
            let errors = (frac * trials as f64) as u64;
            let s = TrialStats::new(errors, trials, 0.0);
            prop_assert!(s.ci_lo <= s.p_hat && s.p_hat <= s.ci_hi);
            prop_assert!(s.ci_lo >= 0.0 && s.ci_hi <= 1.0);
        }
    }
}
