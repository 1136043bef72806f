//! Band-limited test functions with closed-form spectra.
//!
//! Fourier convention: `f̂(ξ) = ∫ f(x) e^{−i⟨x,ξ⟩} dx`, so that
//! `‖f‖²_{L²} = (2π)^{−n} ∫ |f̂|²`. Under it `sin(σx)/(πx)` has `f̂ = 1` on
//! `[−σ, σ]` and zero outside.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BandLimitedKind {
    /// `Π_j sin(σx_j)/(πx_j)`.
    SincTensor,
    /// `Σ a_j sin(σ(x − t_j))/(π(x − t_j))`, one-dimensional.
    ShiftedSincMixture { shifts: Vec<f64>, amplitudes: Vec<f64> },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BandLimitedFn {
    pub n: usize,
    pub sigma: f64,
    pub kind: BandLimitedKind,
}

/// `sin(u)/u`, with a Taylor expansion near the removable singularity.
pub fn sinc_unnormalized(u: f64) -> f64 {
    if u.abs() < 1e-4 {
        let u2 = u * u;
        1.0 - u2 / 6.0 + u2 * u2 / 120.0
    } else {
        u.sin() / u
    }
}

/// `sin(σd)/(πd)`, the spectral kernel of two shifts `d` apart.
fn shifted_kernel(sigma: f64, d: f64) -> f64 {
    sigma / PI * sinc_unnormalized(sigma * d)
}

fn check_sigma(sigma: f64) -> Result<()> {
    if !(sigma > 0.0) || !sigma.is_finite() {
        return Err(Error::domain(format!("band limit must be positive, got {sigma}")));
    }
    Ok(())
}

pub fn make_sinc(n: usize, sigma: f64) -> Result<BandLimitedFn> {
    check_sigma(sigma)?;
    if n == 0 {
        return Err(Error::domain("dimension must be at least 1"));
    }
    Ok(BandLimitedFn { n, sigma, kind: BandLimitedKind::SincTensor })
}

pub fn make_shifted_mixture(sigma: f64, shifts: Vec<f64>, amplitudes: Vec<f64>) -> Result<BandLimitedFn> {
    check_sigma(sigma)?;
    if shifts.is_empty() || shifts.len() != amplitudes.len() {
        return Err(Error::domain("mixture needs matching non-empty shifts and amplitudes"));
    }
    if shifts.iter().chain(&amplitudes).any(|v| !v.is_finite()) {
        return Err(Error::domain("mixture parameters must be finite"));
    }
    Ok(BandLimitedFn { n: 1, sigma, kind: BandLimitedKind::ShiftedSincMixture { shifts, amplitudes } })
}

/// A reproducible mixture: `k` shifts uniform in `[lo, hi]`, amplitudes uniform in `[−1, 1]`.
pub fn make_random_mixture(sigma: f64, k: usize, lo: f64, hi: f64, seed: u64) -> Result<BandLimitedFn> {
    if k == 0 || !(lo < hi) {
        return Err(Error::domain("random mixture needs k >= 1 and lo < hi"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let shifts = (0..k).map(|_| rng.gen_range(lo..hi)).collect();
    let amplitudes = (0..k).map(|_| rng.gen_range(-1.0..1.0)).collect();
    make_shifted_mixture(sigma, shifts, amplitudes)
}

impl BandLimitedFn {
    pub fn eval(&self, x: &[f64]) -> f64 {
        match &self.kind {
            BandLimitedKind::SincTensor => x.iter().map(|&xj| shifted_kernel(self.sigma, xj)).product(),
            BandLimitedKind::ShiftedSincMixture { shifts, amplitudes } => shifts
                .iter()
                .zip(amplitudes)
                .map(|(t, a)| a * shifted_kernel(self.sigma, x[0] - t))
                .sum(),
        }
    }

    pub fn l2_norm(&self) -> f64 {
        match &self.kind {
            BandLimitedKind::SincTensor => (self.sigma / PI).powf(0.5 * self.n as f64),
            BandLimitedKind::ShiftedSincMixture { shifts, amplitudes } => {
                let mut s = 0.0;
                for (tj, aj) in shifts.iter().zip(amplitudes) {
                    for (tk, ak) in shifts.iter().zip(amplitudes) {
                        s += aj * ak * shifted_kernel(self.sigma, tj - tk);
                    }
                }
                s.max(0.0).sqrt()
            }
        }
    }

    pub fn spectral_density(&self) -> SpectralDensity {
        SpectralDensity { f: self.clone() }
    }
}

pub fn l2_norm(f: &BandLimitedFn) -> f64 {
    f.l2_norm()
}

pub fn spectral_density(f: &BandLimitedFn) -> SpectralDensity {
    f.spectral_density()
}

/// `|f̂(ξ)|²` for a band-limited function.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpectralDensity {
    f: BandLimitedFn,
}

impl SpectralDensity {
    pub fn support_radius(&self) -> f64 {
        self.f.sigma
    }

    pub fn dimension(&self) -> usize {
        self.f.n
    }

    /// Whether [`SpectralDensity::integral`] is available in closed form.
    pub fn has_exact_integral(&self) -> bool {
        self.f.n == 1
    }

    /// `|f̂(ξ)|²` at a point of `R^n`; zero outside the box `[−σ, σ]^n`.
    pub fn eval(&self, xi: &[f64]) -> f64 {
        let s = self.f.sigma;
        if xi.iter().any(|v| v.abs() > s) {
            return 0.0;
        }
        match &self.f.kind {
            BandLimitedKind::SincTensor => 1.0,
            BandLimitedKind::ShiftedSincMixture { shifts, amplitudes } => {
                let (re, im) = shifts.iter().zip(amplitudes).fold((0.0, 0.0), |(re, im), (t, a)| {
                    (re + a * (xi[0] * t).cos(), im - a * (xi[0] * t).sin())
                });
                re * re + im * im
            }
        }
    }

    /// One-dimensional density.
    pub fn eval1(&self, xi: f64) -> f64 {
        self.eval(&[xi])
    }

    /// `∫_a^b |f̂|²` in closed form (one-dimensional only).
    pub fn integral(&self, a: f64, b: f64) -> Result<f64> {
        if self.f.n != 1 {
            return Err(Error::domain("closed-form spectral integrals are one-dimensional"));
        }
        let s = self.f.sigma;
        let (lo, hi) = (a.max(-s), b.min(s));
        if !(lo < hi) {
            return Ok(0.0);
        }
        Ok(match &self.f.kind {
            BandLimitedKind::SincTensor => hi - lo,
            BandLimitedKind::ShiftedSincMixture { shifts, amplitudes } => {
                // |Σ a_j e^{−iξt_j}|² = Σ_{j,k} a_j a_k cos(ξ(t_j − t_k)).
                let mut acc = 0.0;
                for (tj, aj) in shifts.iter().zip(amplitudes) {
                    for (tk, ak) in shifts.iter().zip(amplitudes) {
                        let d = tj - tk;
                        acc += aj * ak * (hi * sinc_unnormalized(hi * d) - lo * sinc_unnormalized(lo * d));
                    }
                }
                acc
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::integrate_adaptive;
    use approx::assert_relative_eq;

    #[test]
    fn sinc_values() {
        let f = make_sinc(1, PI).unwrap();
        assert_eq!(f.eval(&[0.0]), 1.0);
        let f = make_sinc(1, 2.0).unwrap();
        assert!(f.eval(&[PI / 2.0]).abs() < 1e-16);
        assert_relative_eq!(f.eval(&[0.3]), (0.6f64).sin() / (PI * 0.3), max_relative = 1e-15);
        let g = make_sinc(2, 1.0).unwrap();
        assert_relative_eq!(g.eval(&[0.0, 0.0]), 1.0 / (PI * PI), max_relative = 1e-15);
    }

    #[test]
    fn norms() {
        assert_relative_eq!(make_sinc(1, 1.0).unwrap().l2_norm(), 0.564_189_583_547_756_3, max_relative = 1e-15);
        assert_relative_eq!(make_sinc(2, 1.0).unwrap().l2_norm(), 1.0 / PI, max_relative = 1e-15);
        assert_relative_eq!(make_sinc(1, 3.0).unwrap().l2_norm().powi(2), 3.0 / PI, max_relative = 1e-15);
    }

    #[test]
    fn single_unshifted_mixture_is_sinc() {
        let s = make_sinc(1, 1.7).unwrap();
        let m = make_shifted_mixture(1.7, vec![0.0], vec![1.0]).unwrap();
        for x in [-3.0, -0.1, 0.0, 1e-9, 0.4, 7.0] {
            assert_eq!(s.eval(&[x]), m.eval(&[x]));
        }
        assert_relative_eq!(s.l2_norm(), m.l2_norm(), max_relative = 1e-15);
    }

    #[test]
    fn mixture_at_a_shift() {
        let sigma = 1.3;
        let t = [0.5, -1.0, 2.5];
        let a = [0.7, -0.4, 1.1];
        let f = make_shifted_mixture(sigma, t.to_vec(), a.to_vec()).unwrap();
        let expected = a[0] * sigma / PI
            + (1..3).map(|j| a[j] * (sigma * (t[0] - t[j])).sin() / (PI * (t[0] - t[j]))).sum::<f64>();
        assert_relative_eq!(f.eval(&[t[0]]), expected, max_relative = 1e-14);
    }

    #[test]
    fn parseval_by_quadrature() {
        let cases = [
            make_sinc(1, 1.0).unwrap(),
            make_shifted_mixture(1.0, vec![0.0, PI], vec![1.0, -1.0]).unwrap(),
            make_random_mixture(2.0, 4, -3.0, 3.0, 7).unwrap(),
        ];
        for f in cases {
            let d = f.spectral_density();
            let q = integrate_adaptive(|x| d.eval1(x), -f.sigma, f.sigma, 1e-12).unwrap();
            let norm2 = q.value / (2.0 * PI);
            assert_relative_eq!(norm2, f.l2_norm().powi(2), max_relative = 1e-8);
            assert_relative_eq!(d.integral(-f.sigma, f.sigma).unwrap(), q.value, max_relative = 1e-10);
        }
    }

    #[test]
    fn mixture_norm_closed_form_a_minus_a() {
        // a = (1, −1), t = (0, π/σ): the cross term sin(π)/π vanishes, so ‖f‖² = 2σ/π.
        let sigma = 1.0;
        let f = make_shifted_mixture(sigma, vec![0.0, PI / sigma], vec![1.0, -1.0]).unwrap();
        assert_relative_eq!(f.l2_norm().powi(2), 2.0 * sigma / PI, max_relative = 1e-12);
    }

    #[test]
    fn density_values() {
        let d = make_sinc(1, 1.0).unwrap().spectral_density();
        assert_eq!(d.eval1(0.5), 1.0);
        assert_eq!(d.eval1(1.5), 0.0);
        let m = make_random_mixture(1.0, 3, 0.0, 2.0, 1).unwrap().spectral_density();
        for k in -20..=20 {
            assert!(m.eval1(k as f64 * 0.05) >= 0.0);
        }
        assert_eq!(d.integral(-0.5, 0.5).unwrap(), 1.0);
        assert_eq!(d.integral(2.0, 3.0).unwrap(), 0.0);
    }

    #[test]
    fn continuity_near_singularity() {
        let f = make_shifted_mixture(2.0, vec![0.3], vec![1.0]).unwrap();
        let at = f.eval(&[0.3]);
        for eps in [1e-12, 1e-10, 1e-9 / 2.0, 0.99e-4 / 2.0, 1.01e-4 / 2.0] {
            let v = f.eval(&[0.3 + eps]);
            let exact = 2.0 / PI * (1.0 - (2.0 * eps).powi(2) / 6.0);
            assert!((v - exact).abs() < 1e-12, "eps={eps}");
            assert!((v - at).abs() < 1e-8);
        }
    }

    #[test]
    fn numerically_band_limited() {
        // Samples on [−L, L] with step h; the discrete-time transform equals the
        // (aliasing-free) spectrum of the truncated function. Mass outside [−σ, σ]
        // is total energy minus the in-band integral.
        let f = make_sinc(1, 1.0).unwrap();
        let (l, h) = (1000.0, 0.5);
        let count = (2.0 * l / h) as usize + 1;
        let xs: Vec<f64> = (0..count).map(|k| -l + k as f64 * h).collect();
        let fs: Vec<f64> = xs.iter().map(|x| f.eval(&[*x])).collect();
        let total: f64 = h * fs.iter().map(|v| v * v).sum::<f64>();
        // The function is even, so F is real: F(ξ) = h Σ f(x_k) cos(ξ x_k).
        let steps = 4000;
        let dxi = 1.0 / steps as f64;
        let power = |xi: f64| {
            let re: f64 = h * xs.iter().zip(&fs).map(|(x, v)| v * (xi * x).cos()).sum::<f64>();
            re * re
        };
        let mut inband = 0.0;
        for k in 0..=steps {
            let w = if k == 0 || k == steps { 1.0 } else if k % 2 == 1 { 4.0 } else { 2.0 };
            inband += w * power(k as f64 * dxi);
        }
        inband *= dxi / 3.0 * 2.0 / (2.0 * PI);
        let outside = (total - inband) / total;
        assert!(outside < 1e-3, "relative out-of-band mass {outside}");
    }
}
