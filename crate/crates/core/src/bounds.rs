//! Pointwise error bounds and native-norm bounds, each reported as a
//! product of named log-domain factors.
//!
//! Precondition violations (`δ > δ₀`) do not abort: the bound is still
//! computed and `preconditions_ok` is cleared with a reason attached.

use std::f64::consts::PI;

use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::bandlimited::SpectralDensity;
use crate::constants::{smn, theorem_constants, unit_ball_volume_log, TheoremConstants};
use crate::error::{Error, Result};
use crate::kernel::KernelSpec;
use crate::numerics::{bessel_k0, integrate_adaptive, ln_abs_gamma, LogScalar};

/// Relative tolerance of the spectral quadratures.
pub const SPECTRAL_RTOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProblemSetting {
    pub n: usize,
    pub b0: f64,
    pub sigma: f64,
    pub delta: f64,
}

impl ProblemSetting {
    pub fn new(n: usize, b0: f64, sigma: f64, delta: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::domain("dimension must be at least 1"));
        }
        for (name, v) in [("b0", b0), ("sigma", sigma), ("delta", delta)] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::domain(format!("{name} must be positive and finite, got {v}")));
            }
        }
        if delta > b0 * (n as f64).sqrt() {
            return Err(Error::domain(format!("delta = {delta} exceeds the cube diameter {}", b0 * (n as f64).sqrt())));
        }
        Ok(ProblemSetting { n, b0, sigma, delta })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Factor {
    pub label: String,
    pub value: LogScalar,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundBreakdown {
    pub factors: Vec<Factor>,
    pub total: LogScalar,
    pub preconditions_ok: bool,
    pub reasons: Vec<String>,
    pub delta0: LogScalar,
}

impl BoundBreakdown {
    fn assemble(factors: Vec<(&str, LogScalar)>, constants: &TheoremConstants, delta: f64) -> Self {
        let total = factors.iter().fold(LogScalar::ONE, |acc, (_, v)| acc.mul(v));
        let mut reasons = Vec::new();
        if !constants.delta_admissible(delta) {
            reasons.push(format!(
                "fill distance {} exceeds delta0 = {}",
                delta,
                constants.delta0.to_decimal_string()
            ));
        }
        BoundBreakdown {
            factors: factors.into_iter().map(|(l, v)| Factor { label: l.to_string(), value: v }).collect(),
            total,
            preconditions_ok: reasons.is_empty(),
            reasons,
            delta0: constants.delta0,
        }
    }

    pub fn factor(&self, label: &str) -> Option<LogScalar> {
        self.factors.iter().find(|f| f.label == label).map(|f| f.value)
    }
}

fn ls(v: f64) -> LogScalar {
    LogScalar::from_value(v)
}

fn ln_pow(base: f64, exponent: f64) -> LogScalar {
    LogScalar::from_ln(exponent * base.ln())
}

fn norm_scalar(norm: f64) -> Result<LogScalar> {
    if !(norm >= 0.0) || !norm.is_finite() {
        return Err(Error::domain(format!("norm must be nonnegative and finite, got {norm}")));
    }
    Ok(ls(norm))
}

/// Theorem coverage: `n + β ≥ 1` or `n + β = −1`.
pub fn is_covered(n: usize, beta: f64) -> bool {
    let s = n as f64 + beta;
    s >= 1.0 || (s + 1.0).abs() <= 1e-12
}

pub fn check_coverage(n: usize, beta: f64) -> Result<()> {
    if is_covered(n, beta) {
        Ok(())
    } else {
        Err(Error::OutsideCoverage { n, beta })
    }
}

fn is_special_case(n: usize, beta: f64) -> bool {
    n == 1 && beta == -1.0
}

/// `√(m! S(m, n))`.
fn sqrt_m_fact_s(m: u32, n: usize) -> Result<LogScalar> {
    let s = smn(m, n)?.to_f64().unwrap_or(f64::INFINITY);
    let ln_fact = ln_abs_gamma(m as f64 + 1.0)?;
    Ok(LogScalar::from_ln(0.5 * (ln_fact + s.ln())))
}

/// `2^{(n+β+1)/4} π^{(n+1)/4} √(nα_n) c^{β/2} √Δ₀ λ^{1/δ} ‖f‖_h`.
pub fn native_error_bound(setting: &ProblemSetting, spec: &KernelSpec, f_h_norm: f64) -> Result<BoundBreakdown> {
    let n = setting.n;
    let nf = n as f64;
    let tc = theorem_constants(n, spec.beta, setting.b0, spec.c)?;
    let factors = vec![
        ("prefactor_two", ln_pow(2.0, (nf + spec.beta + 1.0) / 4.0)),
        ("prefactor_pi", ln_pow(PI, (nf + 1.0) / 4.0)),
        ("sqrt_n_alpha", ls(nf).mul(&unit_ball_volume_log(n)?).sqrt()?),
        ("c_power", ln_pow(spec.c, spec.beta / 2.0)),
        ("delta0_sqrt", tc.smoothness.delta0_const.sqrt()?),
        ("lambda_pow_inv_delta", tc.lambda_pow_inv_delta(setting.delta)?),
        ("norm_term", norm_scalar(f_h_norm)?),
    ];
    Ok(BoundBreakdown::assemble(factors, &tc, setting.delta))
}

fn norm_bound_factors(setting: &ProblemSetting, spec: &KernelSpec, l2_norm: f64) -> Result<Vec<(&'static str, LogScalar)>> {
    let nf = setting.n as f64;
    let (beta, c, sigma) = (spec.beta, spec.c, setting.sigma);
    Ok(vec![
        ("prefactor_two", ln_pow(2.0, -nf - (1.0 + beta) / 4.0)),
        ("prefactor_pi", ln_pow(PI, -nf - 0.25)),
        ("sigma_power", ln_pow(sigma, (1.0 + beta + nf) / 4.0)),
        ("exp_c_sigma", LogScalar::from_ln(c * sigma / 2.0)),
        ("c_power", ln_pow(c, (1.0 - beta - nf) / 4.0)),
        ("norm_term", norm_scalar(l2_norm)?),
    ])
}

/// Native-norm bound for band-limited `f` and `β > 0`:
/// `√(m!S) 2^{−n−(1+β)/4} π^{−n−1/4} σ^{(1+β+n)/4} e^{cσ/2} c^{(1−β−n)/4} ‖f‖₂`.
pub fn norm_bound_pos_beta(setting: &ProblemSetting, spec: &KernelSpec, l2_norm: f64) -> Result<LogScalar> {
    if !(spec.beta > 0.0) {
        return Err(Error::WrongBranch(format!("positive-exponent norm bound needs beta > 0, got {}", spec.beta)));
    }
    let mut total = sqrt_m_fact_s(spec.m, setting.n)?;
    for (_, f) in norm_bound_factors(setting, spec, l2_norm)? {
        total = total.mul(&f);
    }
    Ok(total)
}

/// Native-norm bound for band-limited `f` and `β < 0` with `n + β ≥ 1` or
/// `n + β = −1`; same shape as the positive case without `√(m!S)`.
pub fn norm_bound_neg_beta(setting: &ProblemSetting, spec: &KernelSpec, l2_norm: f64) -> Result<LogScalar> {
    if !(spec.beta < 0.0) {
        return Err(Error::WrongBranch(format!("negative-exponent norm bound needs beta < 0, got {}", spec.beta)));
    }
    if is_special_case(setting.n, spec.beta) {
        return Err(Error::WrongBranch(
            "n = 1, beta = -1 is handled by special_norm_terms and special_error_bound".into(),
        ));
    }
    check_coverage(setting.n, spec.beta)?;
    let mut total = LogScalar::ONE;
    for (_, f) in norm_bound_factors(setting, spec, l2_norm)? {
        total = total.mul(&f);
    }
    Ok(total)
}

/// Pointwise bound for band-limited `f`:
/// `√(m!S)(2π)^{−3n/4}√(nα_n) σ^{(1+β+n)/4} √Δ₀ c^{(1+β−n)/4} e^{cσ/2} λ^{1/δ} ‖f‖₂`.
pub fn bandlimited_error_bound(setting: &ProblemSetting, spec: &KernelSpec, l2_norm: f64) -> Result<BoundBreakdown> {
    let n = setting.n;
    let nf = n as f64;
    if is_special_case(n, spec.beta) {
        return Err(Error::WrongBranch("n = 1, beta = -1 uses special_error_bound".into()));
    }
    check_coverage(n, spec.beta)?;
    let tc = theorem_constants(n, spec.beta, setting.b0, spec.c)?;
    let factors = vec![
        ("sqrt_m_fact_s", sqrt_m_fact_s(spec.m, n)?),
        ("prefactor_two_pi", ln_pow(2.0 * PI, -0.75 * nf)),
        ("sqrt_n_alpha", ls(nf).mul(&unit_ball_volume_log(n)?).sqrt()?),
        ("sigma_power", ln_pow(setting.sigma, (1.0 + spec.beta + nf) / 4.0)),
        ("delta0_sqrt", tc.smoothness.delta0_const.sqrt()?),
        ("c_power", ln_pow(spec.c, (1.0 + spec.beta - nf) / 4.0)),
        ("exp_c_sigma", LogScalar::from_ln(spec.c * setting.sigma / 2.0)),
        ("lambda_pow_inv_delta", tc.lambda_pow_inv_delta(setting.delta)?),
        ("norm_term", norm_scalar(l2_norm)?),
    ];
    Ok(BoundBreakdown::assemble(factors, &tc, setting.delta))
}

/// `A` and `B` of the `n = 1, β = −1` bound. `B` is kept in log form since
/// it carries `e^{cσ}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SpecialTerms {
    pub a: f64,
    pub b: LogScalar,
}

/// `2√3 Γ(1/2)/√π`, which is `2√3`.
fn b_coefficient() -> f64 {
    2.0 * 3f64.sqrt()
}

/// `∫_{|ξ|≤r} |f̂|²`.
fn central_mass(spectrum: &SpectralDensity, r: f64) -> Result<f64> {
    if spectrum.has_exact_integral() {
        return spectrum.integral(-r, r);
    }
    let hi = r.min(spectrum.support_radius());
    Ok(integrate_adaptive(|x| spectrum.eval1(x) + spectrum.eval1(-x), 0.0, hi, SPECTRAL_RTOL)?.value)
}

/// `ln ∫_{1/c<|ξ|≤σ} |f̂|² √(c|ξ|) e^{c|ξ|} dξ`, or `None` when the integral vanishes.
///
/// With `u = c(σ − ξ)` the integral is `e^{cσ}/c ∫₀^{cσ−1} g(σ − u/c) √(cσ − u) e^{−u} du`
/// where `g(ξ) = |f̂(ξ)|² + |f̂(−ξ)|²`. The `u`-integral is bounded, and is
/// accumulated over `[0,1], [1,2], [2,4], …` so the mass near `u = 0` is never missed.
fn ln_outer_integral(c: f64, sigma: f64, spectrum: &SpectralDensity) -> Result<Option<f64>> {
    let upper = c * sigma - 1.0;
    if !(upper > 0.0) {
        return Ok(None);
    }
    let integrand = |u: f64| {
        let xi = sigma - u / c;
        (spectrum.eval1(xi) + spectrum.eval1(-xi)) * (c * sigma - u).max(0.0).sqrt() * (-u).exp()
    };
    let mut total = 0.0;
    let (mut lo, mut hi) = (0.0, upper.min(1.0));
    loop {
        if hi > lo {
            let piece = match integrate_adaptive(integrand, lo, hi, SPECTRAL_RTOL) {
                Ok(q) => q.value,
                // Pieces far out in the exponential tail can stall on their own
                // relative tolerance; their absolute contribution is negligible.
                Err(Error::NonConvergence { estimate, .. }) if lo > 40.0 => estimate,
                Err(e) => return Err(e),
            };
            total += piece;
        }
        if hi >= upper {
            break;
        }
        lo = hi;
        hi = (2.0 * hi).min(upper);
    }
    if total <= 0.0 {
        return Ok(None);
    }
    Ok(Some(total.ln() + c * sigma - c.ln()))
}

/// `A = (1/K₀(1)) ∫_{|ξ|≤1/c} |f̂|²` and
/// `B = 2√3 ∫_{1/c<|ξ|≤σ} |f̂|² √(c|ξ|) e^{c|ξ|}` (zero when `1/c ≥ σ`).
pub fn special_norm_terms(c: f64, sigma: f64, spectrum: &SpectralDensity) -> Result<SpecialTerms> {
    if !(c > 0.0) || !c.is_finite() {
        return Err(Error::InvalidShape(c));
    }
    if !(sigma > 0.0) {
        return Err(Error::domain(format!("band limit must be positive, got {sigma}")));
    }
    if spectrum.dimension() != 1 {
        return Err(Error::domain("the n = 1, beta = -1 terms need a one-dimensional spectrum"));
    }
    let a = central_mass(spectrum, 1.0 / c)? / bessel_k0(1.0)?;
    let b = if 1.0 / c >= sigma {
        LogScalar::ZERO
    } else {
        match ln_outer_integral(c, sigma, spectrum)? {
            Some(ln_i) => LogScalar::from_ln(ln_i + b_coefficient().ln()),
            None => LogScalar::ZERO,
        }
    };
    Ok(SpecialTerms { a, b })
}

/// Leading constant of the `n = 1, β = −1` pointwise bound.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Eq12Prefactor {
    /// `√(2π)`, the conventional constant.
    #[default]
    Printed,
    /// `1/√(2π)`, what feeding the special-case norm terms into the native bound gives.
    Recombined,
}

impl Eq12Prefactor {
    pub fn value(self) -> LogScalar {
        match self {
            Eq12Prefactor::Printed => LogScalar::from_ln(0.5 * (2.0 * PI).ln()),
            Eq12Prefactor::Recombined => LogScalar::from_ln(-0.5 * (2.0 * PI).ln()),
        }
    }
}

/// `√(2π) √Δ₀ λ^{1/δ} √((A + B)/c)` for `n = 1, β = −1`.
pub fn special_error_bound(
    setting: &ProblemSetting,
    c: f64,
    terms: SpecialTerms,
    prefactor: Eq12Prefactor,
) -> Result<BoundBreakdown> {
    if setting.n != 1 {
        return Err(Error::WrongBranch(format!("special bound is one-dimensional, got n = {}", setting.n)));
    }
    if !(terms.a >= 0.0) || terms.b.sign() == crate::numerics::Sign::Negative {
        return Err(Error::domain("A and B must be nonnegative"));
    }
    let tc = theorem_constants(1, -1.0, setting.b0, c)?;
    let sum = ls(terms.a).add(&terms.b);
    let factors = vec![
        ("prefactor", prefactor.value()),
        ("delta0_sqrt", tc.smoothness.delta0_const.sqrt()?),
        ("lambda_pow_inv_delta", tc.lambda_pow_inv_delta(setting.delta)?),
        ("norm_term", sum.div(&ls(c))?.sqrt()?),
    ];
    Ok(BoundBreakdown::assemble(factors, &tc, setting.delta))
}

/// Ratio of (native bound fed with the band-limited norm bound) to the
/// direct band-limited bound, in log form. The two formulas agree, so
/// this is one up to rounding.
pub fn chained_ratio(setting: &ProblemSetting, spec: &KernelSpec, l2_norm: f64) -> Result<LogScalar> {
    let norm = if spec.beta > 0.0 {
        norm_bound_pos_beta(setting, spec, l2_norm)?
    } else {
        norm_bound_neg_beta(setting, spec, l2_norm)?
    };
    let chained = native_error_bound(setting, spec, norm.to_f64())?;
    let direct = bandlimited_error_bound(setting, spec, l2_norm)?;
    chained.total.div(&direct.total)
}

/// The bound that applies to `(n, β)`: the special-case bound for
/// `n = 1, β = −1`, the band-limited bound otherwise.
pub fn applicable_error_bound(
    setting: &ProblemSetting,
    spec: &KernelSpec,
    l2_norm: f64,
    spectrum: &SpectralDensity,
    prefactor: Eq12Prefactor,
) -> Result<BoundBreakdown> {
    if is_special_case(setting.n, spec.beta) {
        let terms = special_norm_terms(spec.c, setting.sigma, spectrum)?;
        special_error_bound(setting, spec.c, terms, prefactor)
    } else {
        bandlimited_error_bound(setting, spec, l2_norm)
    }
}
