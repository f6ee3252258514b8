use crate::numerics::roots::{Bracket, Tolerance};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Minimum {
    pub x: f64,
    pub fx: f64,
}

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Golden-section search for the minimum of a unimodal `f` on the bracket.
///
/// Endpoint minima are handled by comparing the final interior estimate with
/// `f(lo)` and `f(hi)`.
pub fn minimize_scalar<F>(mut f: F, b: Bracket, tol: Tolerance) -> Result<Minimum>
where
    F: FnMut(f64) -> f64,
{
    tol.validate()?;
    let (mut lo, mut hi) = (b.lo, b.hi);
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = eval(&mut f, x1)?;
    let mut f2 = eval(&mut f, x2)?;
    let mut converged = false;
    for _ in 0..tol.max_iter {
        if hi - lo <= tol.abs_x {
            converged = true;
            break;
        }
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = eval(&mut f, x1)?;
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = eval(&mut f, x2)?;
        }
    }
    if !converged && hi - lo > tol.abs_x {
        return Err(Error::MaxIterations {
            iterations: tol.max_iter,
        });
    }
    let mut best = if f1 <= f2 {
        Minimum { x: x1, fx: f1 }
    } else {
        Minimum { x: x2, fx: f2 }
    };
    for x in [b.lo, b.hi] {
        let fx = eval(&mut f, x)?;
        if fx < best.fx {
            best = Minimum { x, fx };
        }
    }
    Ok(best)
}

fn eval<F: FnMut(f64) -> f64>(f: &mut F, x: f64) -> Result<f64> {
    let v = f(x);
    if v.is_nan() {
        Err(Error::NonFinite { at: x })
    } else {
        Ok(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit() -> Bracket {
        Bracket::new(0.0, 1.0).unwrap()
    }

    #[test]
    fn interior_parabola() {
        let tol = Tolerance {
            abs_x: 1e-9,
            ..Tolerance::default()
        };
        let m = minimize_scalar(|s| (s - 0.3).powi(2), unit(), tol).unwrap();
        assert!((m.x - 0.3).abs() < 1e-8);
        assert!(m.fx.abs() < 1e-16);
    }

    #[test]
    fn boundary_minimum() {
        let m = minimize_scalar(|s| -s, unit(), Tolerance::default()).unwrap();
        assert_eq!(m.x, 1.0);
        assert_eq!(m.fx, -1.0);
        let m = minimize_scalar(|s| s, unit(), Tolerance::default()).unwrap();
        assert_eq!(m.x, 0.0);
    }

    #[test]
    fn iteration_cap() {
        let tol = Tolerance {
            abs_x: 1e-12,
            max_iter: 5,
            ..Tolerance::default()
        };
        assert!(matches!(
            minimize_scalar(|s| (s - 0.3).powi(2), unit(), tol),
            Err(Error::MaxIterations { .. })
        ));
    }
}
