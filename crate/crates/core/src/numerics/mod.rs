//! Numeric kernels shared by the rest of the crate. Everything here is a pure
//! function of its arguments.

mod minimize;
mod quadrature;
mod roots;
mod special;

pub use minimize::{minimize_scalar, Minimum};
pub use quadrature::{default_quadrature_tolerance, integrate, integrate_semi_infinite};
pub use roots::{find_root, Bracket, Tolerance};
pub use special::{
    erf, erfc, erfc_flushed, erfc_inv, ln_erf, ln_erfc, ln_norm_cdf, norm_cdf, ERFC_FLOOR,
};
