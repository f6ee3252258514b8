use std::f64::consts::PI;

use num_complex::Complex64;

use crate::{Error, Result};

/// Parameters `S(μ, c, α, β)` of a stable law in the characteristic-function
/// parameterization
/// `φ(t) = exp{ iμt − |ct|^α (1 − iβ sgn(t) Φ(t, α)) }`,
/// with `Φ = tan(πα/2)` for `α ≠ 1` and `−(2/π) ln|t|` for `α = 1`.
///
/// Densities are not evaluated: only the dispersion algebra is needed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StableParams {
    pub mu: f64,
    pub c: f64,
    pub alpha: f64,
    pub beta: f64,
}

impl StableParams {
    pub fn new(mu: f64, c: f64, alpha: f64, beta: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha <= 2.0) {
            return Err(Error::InvalidParameter(format!("alpha must be in (0, 2], got {alpha}")));
        }
        if !(-1.0..=1.0).contains(&beta) {
            return Err(Error::InvalidParameter(format!("beta must be in [-1, 1], got {beta}")));
        }
        if !(c >= 0.0 && c.is_finite()) || !mu.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "need finite mu and c >= 0, got mu = {mu}, c = {c}"
            )));
        }
        Ok(Self { mu, c, alpha, beta })
    }

    /// The Lévy law `L(μ, c)` is `S(μ, c, 1/2, 1)`.
    pub fn levy(mu: f64, c: f64) -> Result<Self> {
        Self::new(mu, c, 0.5, 1.0)
    }

    pub fn characteristic_function(&self, t: f64) -> Complex64 {
        if t == 0.0 {
            return Complex64::new(1.0, 0.0);
        }
        let phi = if self.alpha == 1.0 {
            -2.0 / PI * t.abs().ln()
        } else {
            (PI * self.alpha / 2.0).tan()
        };
        let magnitude = (self.c * t).abs().powf(self.alpha);
        let exponent = Complex64::new(-magnitude, self.mu * t + magnitude * self.beta * t.signum() * phi);
        exponent.exp()
    }
}

/// Dispersion of `Σ wᵢ Xᵢ` for i.i.d. `Xᵢ ~ S(0, c, α, β)`:
/// `c · (Σ wᵢ^α)^{1/α}`.
///
/// For `α < 1` and weights on the simplex this is never below `c`, with
/// equality only for a single unit weight.
pub fn stable_linear_dispersion(c: f64, alpha: f64, weights: &[f64]) -> Result<f64> {
    validate_weights(weights)?;
    if !(alpha > 0.0 && alpha <= 2.0) {
        return Err(Error::InvalidParameter(format!("alpha must be in (0, 2], got {alpha}")));
    }
    let sum: f64 = weights.iter().map(|w| w.powf(alpha)).sum();
    Ok(c * sum.powf(1.0 / alpha))
}

/// Weights must be positive and sum to one within 1e-12.
pub fn validate_weights(weights: &[f64]) -> Result<()> {
    if weights.is_empty() {
        return Err(Error::BadWeights("no weights".into()));
    }
    if let Some(w) = weights.iter().find(|w| !(**w > 0.0 && w.is_finite())) {
        return Err(Error::BadWeights(format!("weight {w} is not positive")));
    }
    let sum: f64 = weights.iter().sum();
    if (sum - 1.0).abs() > 1e-12 {
        return Err(Error::BadWeights(format!("weights sum to {sum}, not 1")));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn single_weight_is_identity() {
        assert_eq!(stable_linear_dispersion(1.7, 0.5, &[1.0]).unwrap(), 1.7);
    }

    #[test]
    fn equal_weights_at_half() {
        for m in [2usize, 3, 10, 64] {
            let w = vec![1.0 / m as f64; m];
            let v = stable_linear_dispersion(2.0, 0.5, &w).unwrap();
            assert!((v - 2.0 * m as f64).abs() < 1e-9, "m = {m}: {v}");
        }
        assert!((stable_linear_dispersion(1.0, 0.5, &[0.5, 0.5]).unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn bad_weights() {
        assert!(matches!(
            stable_linear_dispersion(1.0, 0.5, &[0.5, 0.6]),
            Err(Error::BadWeights(_))
        ));
        assert!(matches!(
            stable_linear_dispersion(1.0, 0.5, &[1.5, -0.5]),
            Err(Error::BadWeights(_))
        ));
        assert!(matches!(stable_linear_dispersion(1.0, 0.5, &[]), Err(Error::BadWeights(_))));
    }

    #[test]
    fn levy_characteristic_function_closed_form() {
        // φ(t) = exp{iμt − sqrt(−2ict)}
        let (mu, c) = (0.3, 2.0);
        let p = StableParams::levy(mu, c).unwrap();
        for &t in &[-3.0, -0.4, 0.2, 1.0, 7.5] {
            let want = (Complex64::new(0.0, mu * t) - Complex64::new(0.0, -2.0 * c * t).sqrt()).exp();
            let got = p.characteristic_function(t);
            assert!((got - want).norm() < 1e-12, "t = {t}: {got} vs {want}");
        }
    }

    #[test]
    fn rejects_out_of_range() {
        assert!(StableParams::new(0.0, 1.0, 0.0, 0.0).is_err());
        assert!(StableParams::new(0.0, 1.0, 2.5, 0.0).is_err());
        assert!(StableParams::new(0.0, 1.0, 1.5, 1.2).is_err());
        assert!(StableParams::new(0.0, -1.0, 1.5, 0.0).is_err());
    }

    proptest! {
        /// The characteristic function of a weighted sum is the product of the
        /// scaled characteristic functions; it must equal that of the stable
        /// law with the combined dispersion.
        #[test]
        fn dispersion_agrees_with_characteristic_functions(
            raw in proptest::collection::vec(0.05f64..1.0, 1..8),
            alpha in 0.1f64..0.99,
            c in 0.1f64..5.0,
            t in -3.0f64..3.0,
        ) {
            let total: f64 = raw.iter().sum();
            let mut w: Vec<f64> = raw.iter().map(|x| x / total).collect();
            let drift: f64 = 1.0 - w.iter().sum::<f64>();
            w[0] += drift;
            let base = StableParams::new(0.0, c, alpha, 1.0).unwrap();
            let product = w.iter().fold(Complex64::new(1.0, 0.0), |acc, wi| {
                acc * base.characteristic_function(wi * t)
            });
            let c_lin = stable_linear_dispersion(c, alpha, &w).unwrap();
            let combined = StableParams::new(0.0, c_lin, alpha, 1.0).unwrap();
            prop_assert!((product - combined.characteristic_function(t)).norm() < 1e-9);
            prop_assert!(c_lin >= c * (1.0 - 1e-12));
        }
    }
}
