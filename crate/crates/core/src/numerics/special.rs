//! Gamma function and the modified Bessel function `K₀`.

use std::f64::consts::PI;

use crate::error::{Error, Result};

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

// Lanczos approximation, g = 7, nine coefficients.
const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// `sin(πx)` with full relative accuracy near the integers.
fn sin_pi(x: f64) -> f64 {
    // Reduce to r in [-1, 1]; x - 2*round(x/2) is exact.
    let mut r = x - 2.0 * (x / 2.0).round();
    if r > 0.5 {
        r = 1.0 - r;
    } else if r < -0.5 {
        r = -1.0 - r;
    }
    (PI * r).sin()
}

fn is_nonpositive_integer(x: f64) -> bool {
    x <= 0.0 && x.fract() == 0.0
}

/// `ln Γ(x)` for `x >= 0.5` via the Lanczos series.
fn ln_gamma_lanczos(x: f64) -> f64 {
    let z = x - 1.0;
    let mut a = LANCZOS[0];
    let t = z + LANCZOS_G + 0.5;
    for (i, &c) in LANCZOS.iter().enumerate().skip(1) {
        a += c / (z + i as f64);
    }
    0.5 * (2.0 * PI).ln() + (z + 0.5) * t.ln() - t + a.ln()
}

/// The gamma function, with reflection for arguments below one half.
pub fn gamma_fn(x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::domain(format!("gamma of non-finite argument {x}")));
    }
    if is_nonpositive_integer(x) {
        return Err(Error::domain(format!("gamma has a pole at {x}")));
    }
    if x < 0.5 {
        // Γ(x) Γ(1-x) = π / sin(πx)
        let g = gamma_fn(1.0 - x)?;
        return Ok(PI / (sin_pi(x) * g));
    }
    if x.fract() == 0.0 && x <= 23.0 {
        let mut f = 1.0;
        for k in 2..(x as u64) {
            f *= k as f64;
        }
        return Ok(f);
    }
    Ok(ln_gamma_lanczos(x).exp())
}

/// `ln |Γ(x)|`, usable where `Γ(x)` itself overflows.
pub fn ln_abs_gamma(x: f64) -> Result<f64> {
    if is_nonpositive_integer(x) || !x.is_finite() {
        return Err(Error::domain(format!("ln|Γ| undefined at {x}")));
    }
    if x < 0.5 {
        Ok(PI.ln() - sin_pi(x).abs().ln() - ln_abs_gamma(1.0 - x)?)
    } else {
        Ok(ln_gamma_lanczos(x))
    }
}

/// Modified Bessel function of the second kind, order zero, for `x > 0`.
///
/// Ascending series for `x <= 2`; for larger `x` the integral
/// `K₀(x) = ∫₀^∞ exp(-x cosh t) dt` by the trapezoidal rule, which converges
/// geometrically because the integrand is analytic in the strip `|Im t| < π/2`.
pub fn bessel_k0(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::domain(format!("K0 requires a positive finite argument, got {x}")));
    }
    if x <= 2.0 {
        Ok(k0_series(x))
    } else {
        Ok(k0_integral(x))
    }
}

fn k0_series(x: f64) -> f64 {
    let q = 0.25 * x * x;
    let mut term = 1.0; // q^k / (k!)^2
    let mut i0 = 1.0;
    let mut harmonic = 0.0;
    let mut tail = 0.0;
    for k in 1..60 {
        let kf = k as f64;
        term *= q / (kf * kf);
        harmonic += 1.0 / kf;
        i0 += term;
        tail += term * harmonic;
        if term < 1e-18 * i0 {
            break;
        }
    }
    -((0.5 * x).ln() + EULER_GAMMA) * i0 + tail
}

fn k0_integral(x: f64) -> f64 {
    // e^{-x} ∫₀^∞ exp(-x (cosh t - 1)) dt; stop once the integrand is < 1e-20.
    let h = 0.05;
    let mut sum = 0.5;
    let mut k = 1;
    loop {
        let t = k as f64 * h;
        let v = (-x * (t.cosh() - 1.0)).exp();
        sum += v;
        if v < 1e-20 {
            break;
        }
        k += 1;
    }
    (-x).exp() * h * sum
}
