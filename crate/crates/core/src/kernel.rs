//! The generalized multiquadric `h(x) = Γ(−β/2)(c² + |x|²)^{β/2}`.

use serde::{Deserialize, Serialize};

use crate::constants::{cpd_order, is_excluded_exponent};
use crate::error::{Error, Result};
use crate::numerics::{gamma_fn, Real};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KernelSpec {
    pub beta: f64,
    pub c: f64,
    /// Conditionally positive definite order, `max{0, ⌈β/2⌉}`.
    pub m: u32,
    /// Cached `Γ(−β/2)`.
    pub gamma_factor: f64,
}

/// Checks `β ∉ 2N₀`, `c > 0` and caches `m` and `Γ(−β/2)`.
pub fn validate_spec(beta: f64, c: f64) -> Result<KernelSpec> {
    if !beta.is_finite() {
        return Err(Error::domain(format!("beta must be finite, got {beta}")));
    }
    if is_excluded_exponent(beta) {
        return Err(Error::ExcludedExponent(beta));
    }
    if !(c > 0.0) || !c.is_finite() {
        return Err(Error::InvalidShape(c));
    }
    Ok(KernelSpec { beta, c, m: cpd_order(beta)?, gamma_factor: gamma_fn(-beta / 2.0)? })
}

impl KernelSpec {
    pub fn new(beta: f64, c: f64) -> Result<Self> {
        validate_spec(beta, c)
    }

    /// Same exponent, different shape parameter.
    pub fn with_c(&self, c: f64) -> Result<Self> {
        if !(c > 0.0) || !c.is_finite() {
            return Err(Error::InvalidShape(c));
        }
        Ok(KernelSpec { c, ..self.clone() })
    }

    /// `h` as a function of the squared radius, at the precision of `r2`.
    pub fn eval_sq<T: Real>(&self, r2: &T) -> T {
        let ctx = r2.ctx();
        let c = T::from_f64(self.c, ctx);
        let base = c.mul(&c).add(r2);
        T::from_f64(self.gamma_factor, ctx).mul(&base.powf(0.5 * self.beta))
    }

    /// `h(x − y)` with the difference formed at the working precision.
    pub fn eval_between<T: Real>(&self, x: &[T], y: &[T]) -> T {
        let ctx = x[0].ctx();
        let mut r2 = T::zero(ctx);
        for (a, b) in x.iter().zip(y) {
            let d = a.sub(b);
            r2 = r2.add(&d.mul(&d));
        }
        self.eval_sq(&r2)
    }

    /// Sign of `d h / d|x|`: +1 when `h` increases with `|x|`.
    pub fn radial_trend(&self) -> i8 {
        if self.gamma_factor * self.beta > 0.0 {
            1
        } else {
            -1
        }
    }
}

/// `h(x)` in double precision.
pub fn kernel_eval(spec: &KernelSpec, x: &[f64]) -> f64 {
    let r2: f64 = x.iter().map(|v| v * v).sum();
    spec.eval_sq(&r2)
}
