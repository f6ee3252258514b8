use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::numerics::roots::Tolerance;
use crate::{Error, Result};

// Gauss-Kronrod 7/15 abscissae and weights (QUADPACK qk15).
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Intervals narrower than this are never split again.
const MIN_WIDTH: f64 = 1e-13;

#[derive(Debug, Clone, Copy)]
struct Piece {
    lo: f64,
    hi: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Piece {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Piece {}
impl PartialOrd for Piece {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Piece {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn kronrod<F: FnMut(f64) -> f64>(f: &mut F, lo: f64, hi: f64) -> Result<Piece> {
    let center = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let mut eval = |x: f64| -> Result<f64> {
        let v = f(x);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::NonFinite { at: x })
        }
    };
    let fc = eval(center)?;
    let mut kron = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for (j, (&x, &w)) in XGK[..7].iter().zip(&WGK[..7]).enumerate() {
        let dx = half * x;
        let pair = eval(center - dx)? + eval(center + dx)?;
        kron += w * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    Ok(Piece {
        lo,
        hi,
        value: kron * half,
        error: ((kron - gauss) * half).abs(),
    })
}

/// Globally adaptive Gauss-Kronrod quadrature on a finite interval.
pub fn integrate<F>(mut f: F, lo: f64, hi: f64, tol: Tolerance) -> Result<f64>
where
    F: FnMut(f64) -> f64,
{
    tol.validate()?;
    let first = kronrod(&mut f, lo, hi)?;
    let mut total = first.value;
    let mut error = first.error;
    let mut heap = BinaryHeap::from([first]);
    let mut frozen_error = 0.0;
    for _ in 0..tol.max_iter {
        if error <= tol.rel_f * total.abs() || error <= f64::MIN_POSITIVE {
            return Ok(total);
        }
        let Some(worst) = heap.pop() else {
            break;
        };
        if worst.hi - worst.lo < MIN_WIDTH {
            frozen_error += worst.error;
            if heap.is_empty() {
                break;
            }
            continue;
        }
        let mid = 0.5 * (worst.lo + worst.hi);
        let left = kronrod(&mut f, worst.lo, mid)?;
        let right = kronrod(&mut f, mid, worst.hi)?;
        total += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
    }
    // Error mass that could not be refined further still counts as converged
    // when the remaining refinable error is within tolerance.
    if error - frozen_error <= tol.rel_f * total.abs() {
        return Ok(total);
    }
    Err(Error::MaxIterations {
        iterations: tol.max_iter,
    })
}

/// Integral of `f` over `(a, ∞)` through `y = a + t/(1-t)`, `t ∈ [0, 1)`.
///
/// `f` must be non-negative and decay at least like `y^{-3/2}`; the mapped
/// integrand then has at worst an integrable `(1-t)^{-1/2}` endpoint
/// singularity, which the adaptive splitting resolves.
pub fn integrate_semi_infinite<F>(mut f: F, a: f64, tol: Tolerance) -> Result<f64>
where
    F: FnMut(f64) -> f64,
{
    integrate(
        |t| {
            let u = 1.0 - t;
            let y = a + t / u;
            let v = f(y);
            if v == 0.0 {
                0.0
            } else {
                v / (u * u)
            }
        },
        0.0,
        1.0,
        tol,
    )
}

/// Quadrature tolerance used across the crate: `rel_f = 1e-10` with room for
/// the subdivisions a heavy Lévy tail needs.
pub fn default_quadrature_tolerance() -> Tolerance {
    Tolerance {
        abs_x: 1e-12,
        rel_f: 1e-10,
        max_iter: 5_000,
    }
}
