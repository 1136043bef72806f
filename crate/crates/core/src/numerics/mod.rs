//! Scalar substrate shared by every other module: log-domain reals, the
//! working-precision abstraction, special functions and quadrature.

mod logscalar;
mod precision;
mod quadrature;
mod special;

pub use logscalar::{fmt_sig17, log_combine, LogScalar, Saturated, Sign, LN_F64_MAX};
pub use precision::{Ext, PrecisionPolicy, Real, DEFAULT_EXTENDED_BITS, MIN_EXTENDED_BITS};
pub use quadrature::{integrate_adaptive, Quadrature};
pub use special::{bessel_k0, gamma_fn, ln_abs_gamma};
