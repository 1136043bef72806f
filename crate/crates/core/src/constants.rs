//! Constants of the exponential-order error theorem: `γ_n`, the CPD order
//! `m`, `ρ`, `Δ₀`, the unit-ball volume `α_n`, `S(m, n)` and the
//! `b₀`/`c`-dependent triple `C`, `λ`, `δ₀`.
//!
//! Everything that can overflow is kept as a [`LogScalar`].

use std::f64::consts::PI;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::{ln_abs_gamma, LogScalar, Sign};

/// `γ₁ = 2`, `γ_n = 2n(1 + γ_{n-1})`.
pub fn gamma_seq(n: usize) -> Result<BigUint> {
    if n == 0 {
        return Err(Error::domain("gamma_seq needs n >= 1"));
    }
    let mut g = BigUint::from(2u32);
    for k in 2..=n {
        g = BigUint::from(2 * k) * (BigUint::one() + g);
    }
    Ok(g)
}

/// Natural log of a big unsigned integer, accurate to `f64` precision.
pub fn ln_biguint(v: &BigUint) -> f64 {
    let bits = v.bits();
    if bits <= 1000 {
        return v.to_f64().map_or(f64::INFINITY, f64::ln);
    }
    let shift = bits - 64;
    let top = (v >> shift).to_f64().unwrap_or(f64::INFINITY);
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// `γ_n` as a log-domain value.
pub fn gamma_seq_log(n: usize) -> Result<LogScalar> {
    Ok(LogScalar::from_ln(ln_biguint(&gamma_seq(n)?)))
}

/// True when `beta` is an even nonnegative integer, the excluded exponents.
pub fn is_excluded_exponent(beta: f64) -> bool {
    beta >= 0.0 && beta.fract() == 0.0 && (beta % 2.0) == 0.0
}

/// `m = max{0, ⌈β/2⌉}`.
pub fn cpd_order(beta: f64) -> Result<u32> {
    if !beta.is_finite() {
        return Err(Error::domain(format!("beta must be finite, got {beta}")));
    }
    if is_excluded_exponent(beta) {
        return Err(Error::ExcludedExponent(beta));
    }
    Ok((beta / 2.0).ceil().max(0.0) as u32)
}

/// Which branch of the `(ρ, Δ₀)` case table applies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RhoCase {
    /// `β < n−3`, `β < 0`.
    SmallNegative,
    /// `β < n−3`, `β > 0`.
    SmallPositive,
    /// `n−3 ≤ β < n−1`.
    Middle,
    /// `β ≥ n−1`.
    Large,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SmoothnessConstants {
    pub n: usize,
    pub beta: f64,
    pub m: u32,
    pub rho: f64,
    pub delta0_const: LogScalar,
    pub s: Option<i64>,
    pub case: RhoCase,
}

/// `ln ∏_{k=lo}^{hi} k`; the empty product (`hi < lo`) is one.
fn ln_descending_product(hi: i64, lo: i64) -> f64 {
    if hi < lo {
        return 0.0;
    }
    (lo..=hi).map(|k| (k as f64).ln()).sum()
}

/// `ρ` and `Δ₀` for dimension `n` and exponent `beta`.
///
/// The products in the table read as descending runs of integers down to
/// the stated last factor, and are empty (equal to one) when the run is
/// void. In the `β ≥ n−1` branch this means `Δ₀ = 1/((2m+2)(2m+1)⋯(2m−s+3))`
/// has exactly `s` factors; with `s = 0` it would be the empty product,
/// although `β ≥ n−1` forces `s ≥ 1`.
pub fn rho_delta0(n: usize, beta: f64) -> Result<SmoothnessConstants> {
    if n == 0 {
        return Err(Error::domain("dimension must be at least 1"));
    }
    let m = cpd_order(beta)?;
    let nf = n as f64;
    let mi = m as i64;
    let consts = if beta < nf - 3.0 {
        let s = ((nf - beta - 3.0) / 2.0).ceil() as i64;
        if beta < 0.0 {
            let rho = (3.0 + s as f64) / 3.0;
            let ln_d = ln_descending_product(2 + s, 3) - 2.0 * rho.ln();
            SmoothnessConstants {
                n,
                beta,
                m,
                rho,
                delta0_const: LogScalar::from_ln(ln_d),
                s: Some(s),
                case: RhoCase::SmallNegative,
            }
        } else {
            let mb = (beta / 2.0).ceil() as i64;
            let rho = 1.0 + s as f64 / (2.0 * mb as f64 + 3.0);
            let ln_d = ln_descending_product(2 * mb + 2 + s, 2 * mb + 3) - (2 * mb + 2) as f64 * rho.ln();
            SmoothnessConstants {
                n,
                beta,
                m,
                rho,
                delta0_const: LogScalar::from_ln(ln_d),
                s: Some(s),
                case: RhoCase::SmallPositive,
            }
        }
    } else if beta < nf - 1.0 {
        SmoothnessConstants {
            n,
            beta,
            m,
            rho: 1.0,
            delta0_const: LogScalar::ONE,
            s: None,
            case: RhoCase::Middle,
        }
    } else {
        let s = -(((nf - beta - 3.0) / 2.0).ceil() as i64);
        let ln_d = -ln_descending_product(2 * mi + 2, 2 * mi - s + 3);
        SmoothnessConstants {
            n,
            beta,
            m,
            rho: 1.0,
            delta0_const: LogScalar::from_ln(ln_d),
            s: Some(s),
            case: RhoCase::Large,
        }
    };
    Ok(consts)
}

/// Volume of the unit ball in `R^n`, `π^{n/2} / Γ(n/2 + 1)`.
pub fn unit_ball_volume(n: usize) -> Result<f64> {
    Ok(unit_ball_volume_log(n)?.to_f64())
}

pub fn unit_ball_volume_log(n: usize) -> Result<LogScalar> {
    if n == 0 {
        return Err(Error::domain("dimension must be at least 1"));
    }
    let nf = n as f64;
    Ok(LogScalar::from_ln(0.5 * nf * PI.ln() - ln_abs_gamma(0.5 * nf + 1.0)?))
}

/// Number of multi-indices `α ∈ N^n` with `|α| = m`, i.e. `C(m+n−1, n−1)`.
pub fn smn(m: u32, n: usize) -> Result<BigUint> {
    if n == 0 {
        return Err(Error::domain("dimension must be at least 1"));
    }
    let top = m as u64 + n as u64 - 1;
    let k = (n as u64 - 1).min(m as u64);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * BigUint::from(top - i) / BigUint::from(i + 1);
    }
    Ok(acc)
}

/// Which argument of `C = max{2ρ'√n e^{2nγ_n}, 2/(3b₀)}` is active.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    /// `c < c₀`: the `c`-dependent term dominates.
    CSmall,
    /// `c ≥ c₀`: `C = 2/(3b₀)`.
    CLarge,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TheoremConstants {
    pub n: usize,
    pub beta: f64,
    pub b0: f64,
    pub c: f64,
    pub m: u32,
    pub gamma_n: LogScalar,
    pub smoothness: SmoothnessConstants,
    /// `C`.
    pub big_c: LogScalar,
    /// `ln λ` (negative), kept in log form because `λ` rounds to one in
    /// `f64` whenever `C` is large.
    pub ln_lambda: LogScalar,
    pub delta0: LogScalar,
    pub rho_prime: LogScalar,
    pub regime: Regime,
    /// Crossover `c₀ = 3b₀ρ√n e^{2nγ_n}` where the regime flips.
    pub crossover: LogScalar,
}

impl TheoremConstants {
    /// `λ` as an `f64`; rounds to `1.0` when `|ln λ|` is below `f64` resolution.
    pub fn lambda(&self) -> f64 {
        self.ln_lambda.to_f64().exp()
    }

    /// `λ^{1/δ} = exp(ln λ / δ)`.
    pub fn lambda_pow_inv_delta(&self, delta: f64) -> Result<LogScalar> {
        if !(delta > 0.0) {
            return Err(Error::domain(format!("fill distance must be positive, got {delta}")));
        }
        let exponent = self.ln_lambda.div(&LogScalar::from_value(delta))?;
        Ok(LogScalar::from_ln(exponent.to_f64()))
    }

    /// True when `δ ≤ δ₀` (log-domain comparison).
    pub fn delta_admissible(&self, delta: f64) -> bool {
        LogScalar::from_value(delta).cmp_value(&self.delta0) != std::cmp::Ordering::Greater
    }
}

/// `ln(ρ√n e^{2nγ_n})`, the recurring scale of every `c` threshold.
pub fn ln_growth_scale(n: usize, rho: f64) -> Result<f64> {
    let g = ln_biguint(&gamma_seq(n)?);
    let gamma = g.exp();
    Ok(rho.ln() + 0.5 * (n as f64).ln() + 2.0 * n as f64 * gamma)
}

/// `C`, `λ`, `δ₀` and friends for dimension `n`, exponent `beta`, cube side
/// `b0` and shape parameter `c`.
pub fn theorem_constants(n: usize, beta: f64, b0: f64, c: f64) -> Result<TheoremConstants> {
    if !(b0 > 0.0) || !b0.is_finite() {
        return Err(Error::domain(format!("cube side b0 must be positive, got {b0}")));
    }
    if !(c > 0.0) || !c.is_finite() {
        return Err(Error::InvalidShape(c));
    }
    theorem_constants_ln_c(n, beta, b0, c.ln()).map(|mut t| {
        t.c = c;
        t
    })
}

/// As [`theorem_constants`] with `c` given by its natural log, for shape
/// parameters beyond the `f64` range.
pub fn theorem_constants_ln_c(n: usize, beta: f64, b0: f64, ln_c: f64) -> Result<TheoremConstants> {
    let smoothness = rho_delta0(n, beta)?;
    let m = smoothness.m;
    let gamma_n = gamma_seq_log(n)?;
    let ln_scale = ln_growth_scale(n, smoothness.rho)?;

    let ln_c_dependent = std::f64::consts::LN_2 + ln_scale - ln_c;
    let ln_c_fixed = (2.0 / (3.0 * b0)).ln();
    let ln_crossover = (3.0 * b0).ln() + ln_scale;
    let regime = if ln_c >= ln_crossover { Regime::CLarge } else { Regime::CSmall };
    let ln_big_c = match regime {
        Regime::CSmall => ln_c_dependent.max(ln_c_fixed),
        Regime::CLarge => ln_c_fixed,
    };
    let ln_gamma = gamma_n.ln_mag();
    let ln_six_c_gamma = 6f64.ln() + ln_big_c + ln_gamma;
    let ln_lambda = LogScalar::new(Sign::Negative, 1.5f64.ln().ln() - ln_six_c_gamma);
    let delta0 = LogScalar::from_ln(-(ln_six_c_gamma + ((m + 1) as f64).ln()));

    Ok(TheoremConstants {
        n,
        beta,
        b0,
        c: ln_c.exp(),
        m,
        gamma_n,
        rho_prime: LogScalar::from_ln(smoothness.rho.ln() - ln_c),
        smoothness,
        big_c: LogScalar::from_ln(ln_big_c),
        ln_lambda,
        delta0,
        regime,
        crossover: LogScalar::from_ln(ln_crossover),
    })
}

/// Smallest `c` compatible with `δ ≤ δ₀` in the `c`-dependent regime,
/// `12ρ√n e^{2nγ_n} γ_n (m+1) δ`.
pub fn c_floor(n: usize, beta: f64, delta: f64) -> Result<LogScalar> {
    let sm = rho_delta0(n, beta)?;
    let ln_scale = ln_growth_scale(n, sm.rho)?;
    let ln_gamma = gamma_seq_log(n)?.ln_mag();
    Ok(LogScalar::from_ln(
        12f64.ln() + ln_scale + ln_gamma + ((sm.m + 1) as f64).ln() + delta.ln(),
    ))
}
