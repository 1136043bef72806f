//! Selection rules for the shape parameter `c`.
//!
//! Three modes share one vocabulary. With `e = 1 + β − n`, `L = ln(ρ√n e^{2nγ_n})`
//! and `η(δ) = ln(2/3) / (12 e^L γ_n δ)`:
//!
//! * practical: `λ^{1/δ}` is ignored except for `n = 1, β = 1`;
//! * fixed `b0`: `H(c) = c^{e/4} e^{cσ/2} λ(c)^{1/δ}` on a cube of side `b0`;
//! * unfixed `b0`: `G(c) = c^{e/4} [e^{σ/2 + η(δ)}]^c` on dilation-invariant domains.
//!
//! Every quantity that can leave the `f64` range (`c₀`, floors, caps) is kept as
//! a [`LogScalar`]; comparisons between candidate values of `c` happen on logs.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::bounds::check_coverage;
use crate::constants::{gamma_seq_log, is_excluded_exponent, ln_growth_scale, rho_delta0};
use crate::error::{Error, Result};
use crate::numerics::LogScalar;

const E4: f64 = 54.598_150_033_144_236;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Practical,
    FixedB0,
    UnfixedB0,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AdviceKind {
    Optimal,
    Suggested,
    MonotoneLargerBetter,
    MonotoneSmallerBetter,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct Thresholds {
    /// "δ very small" cutoff for the fixed-cube inverse multiquadric rule.
    /// Defaults to `b0/800`.
    pub delta_very_small: Option<f64>,
    /// Concrete `c` returned when larger is better. Defaults to `10⁶·c_floor`.
    pub c_cap: Option<LogScalar>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AdvisorInputs {
    pub n: usize,
    pub beta: f64,
    pub sigma: f64,
    pub delta: f64,
    /// Cube side; unused in unfixed mode.
    pub b0: Option<f64>,
    pub thresholds: Thresholds,
}

impl AdvisorInputs {
    pub fn new(n: usize, beta: f64, sigma: f64, delta: f64, b0: Option<f64>) -> Self {
        AdvisorInputs { n, beta, sigma, delta, b0, thresholds: Thresholds::default() }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TraceStep {
    pub condition: String,
    pub value: LogScalar,
    pub verdict: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Interval {
    pub c_min: LogScalar,
    /// `None` means `+∞`.
    pub c_max: Option<LogScalar>,
}

impl Interval {
    pub fn contains(&self, c: &LogScalar) -> bool {
        let tol = 1e-12 * (1.0 + c.ln_mag().abs());
        c.ln_mag() >= self.c_min.ln_mag() - tol
            && self.c_max.is_none_or(|m| c.ln_mag() <= m.ln_mag() + tol)
    }
}

/// The quantity a rule minimizes, as a function of `ln c`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "form", rename_all = "snake_case")]
pub enum Objective {
    /// `c^{e/4} e^{cσ/2}`.
    Power { e: f64, sigma: f64 },
    /// `c^{e/4} e^{s c}` for `c ≤ c₀`, continued by `c^{e/4} e^{s c₀ + σ(c − c₀)/2}`.
    Piecewise { e: f64, sigma: f64, s: f64, ln_c0: f64 },
    /// `c^{e/4} e^{k c}`.
    Geometric { e: f64, k: f64 },
}

/// `k·c` for `c = e^{ln_c}`, without forming `0·∞`.
fn linear(k: f64, ln_c: f64) -> f64 {
    if k == 0.0 {
        0.0
    } else {
        k.signum() * (k.abs().ln() + ln_c).exp()
    }
}

impl Objective {
    /// Natural log of the objective at `c = e^{ln_c}`.
    pub fn ln_value(&self, ln_c: f64) -> f64 {
        match *self {
            Objective::Power { e, sigma } => 0.25 * e * ln_c + linear(0.5 * sigma, ln_c),
            Objective::Piecewise { e, sigma, s, ln_c0 } => {
                if ln_c <= ln_c0 {
                    0.25 * e * ln_c + linear(s, ln_c)
                } else {
                    // Anchored at c₀ so the two pieces agree there exactly.
                    let excess = linear(0.5 * sigma, ln_c0) * (ln_c - ln_c0).exp_m1();
                    0.25 * e * ln_c + linear(s, ln_c0) + excess
                }
            }
            Objective::Geometric { e, k } => 0.25 * e * ln_c + linear(k, ln_c),
        }
    }

    pub fn at(&self, c: &LogScalar) -> LogScalar {
        LogScalar::from_ln(self.ln_value(c.ln_mag()))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ShapeAdvice {
    pub c: LogScalar,
    pub case_label: String,
    pub branch_trace: Vec<TraceStep>,
    pub admissible_interval: Interval,
    pub advice_kind: AdviceKind,
    pub objective_value: Option<LogScalar>,
    pub objective: Option<Objective>,
}

/// Derived quantities shared by all three modes.
#[derive(Clone, Copy, Debug)]
struct Setup {
    n: usize,
    beta: f64,
    sigma: f64,
    delta: f64,
    m: u32,
    e: f64,
    ln_gamma: f64,
    /// `ln(ρ√n e^{2nγ_n})`.
    ln_scale: f64,
    ln_floor: f64,
    /// `η(δ)`.
    eta: f64,
}

impl Setup {
    fn new(n: usize, beta: f64, sigma: f64, delta: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::domain("dimension n must be at least 1"));
        }
        if !beta.is_finite() {
            return Err(Error::domain(format!("beta must be finite, got {beta}")));
        }
        if is_excluded_exponent(beta) {
            return Err(Error::ExcludedExponent(beta));
        }
        if !(n == 1 && beta == -1.0) {
            check_coverage(n, beta)?;
        }
        if !(sigma > 0.0) || !sigma.is_finite() {
            return Err(Error::domain(format!("sigma must be positive, got {sigma}")));
        }
        if !(delta > 0.0) || !delta.is_finite() {
            return Err(Error::domain(format!("delta must be positive, got {delta}")));
        }
        let sm = rho_delta0(n, beta)?;
        let ln_gamma = gamma_seq_log(n)?.ln_mag();
        let ln_scale = ln_growth_scale(n, sm.rho)?;
        let ln_base = 12f64.ln() + ln_scale + ln_gamma + delta.ln();
        Ok(Setup {
            n,
            beta,
            sigma,
            delta,
            m: sm.m,
            e: 1.0 + beta - n as f64,
            ln_gamma,
            ln_scale,
            ln_floor: ln_base + ((sm.m + 1) as f64).ln(),
            eta: -(1.5f64.ln().ln() - ln_base).exp(),
        })
    }

    fn special(&self) -> bool {
        self.n == 1 && self.beta == -1.0
    }

    fn floor(&self) -> LogScalar {
        LogScalar::from_ln(self.ln_floor)
    }

    fn ln_c0(&self, b0: f64) -> f64 {
        (3.0 * b0).ln() + self.ln_scale
    }

    /// `b0 / (4γ_n(m+1))`, the largest `δ` the cube allows.
    fn delta_max_cube(&self, b0: f64) -> f64 {
        (b0.ln() - 4f64.ln() - self.ln_gamma - ((self.m + 1) as f64).ln()).exp()
    }

    fn check_cube_delta(&self, b0: f64) -> Result<()> {
        let max = self.delta_max_cube(b0);
        if self.delta < max {
            Ok(())
        } else {
            Err(Error::FillDistanceTooLarge { delta: self.delta, max })
        }
    }

    fn check_special_delta(&self, b0: f64) -> Result<()> {
        let max = (1.0 / (24.0 * self.sigma * E4)).min(b0 / 8.0);
        if self.delta < max {
            Ok(())
        } else {
            Err(Error::FillDistanceTooLarge { delta: self.delta, max })
        }
    }

    fn piecewise(&self, b0: f64) -> Objective {
        Objective::Piecewise { e: self.e, sigma: self.sigma, s: self.eta + 0.5 * self.sigma, ln_c0: self.ln_c0(b0) }
    }

    fn cap(&self, th: &Thresholds) -> LogScalar {
        th.c_cap.unwrap_or_else(|| LogScalar::from_ln(self.ln_floor + 1e6f64.ln()))
    }
}

struct Builder {
    trace: Vec<TraceStep>,
}

impl Builder {
    fn new() -> Self {
        Builder { trace: Vec::new() }
    }

    fn note(&mut self, condition: &str, value: LogScalar, verdict: impl Into<String>) {
        self.trace.push(TraceStep { condition: condition.into(), value, verdict: verdict.into() });
    }

    fn num(&mut self, condition: &str, value: f64, verdict: impl Into<String>) {
        self.note(condition, LogScalar::from_value(value), verdict);
    }

    fn test(&mut self, condition: &str, value: f64, holds: bool) -> bool {
        self.num(condition, value, if holds { "true" } else { "false" });
        holds
    }

    fn finish(
        self,
        c: LogScalar,
        label: &str,
        floor: LogScalar,
        kind: AdviceKind,
        objective: Option<Objective>,
    ) -> ShapeAdvice {
        ShapeAdvice {
            c,
            case_label: label.into(),
            branch_trace: self.trace,
            admissible_interval: Interval { c_min: floor, c_max: None },
            advice_kind: kind,
            objective_value: objective.map(|o| o.at(&c)),
            objective,
        }
    }
}

fn ln_cmp(a: &LogScalar, b: &LogScalar) -> Ordering {
    a.ln_mag().total_cmp(&b.ln_mag())
}

fn require_b0(inputs: &AdvisorInputs) -> Result<f64> {
    match inputs.b0 {
        Some(b0) if b0 > 0.0 && b0.is_finite() => Ok(b0),
        Some(b0) => Err(Error::domain(format!("cube side b0 must be positive, got {b0}"))),
        None => Err(Error::InvalidInput("this mode needs the cube side b0".into())),
    }
}

/// Rules for when `λ^{1/δ}` is treated as negligible.
pub fn advise_practical(inputs: &AdvisorInputs) -> Result<ShapeAdvice> {
    let b0 = require_b0(inputs)?;
    let st = Setup::new(inputs.n, inputs.beta, inputs.sigma, inputs.delta)?;
    let mut tr = Builder::new();
    let floor = st.floor();
    tr.note("c_floor", floor, "feasibility floor");

    if st.special() {
        st.check_special_delta(b0)?;
        tr.num("n = 1, beta = -1", 1.0, "inverse multiquadric rule");
        let c = LogScalar::from_value(1.0 / st.sigma);
        tr.note("c = 1/sigma", c, "suggested");
        return Ok(tr.finish(c, "S2.Case3", floor, AdviceKind::Suggested, None));
    }
    st.check_cube_delta(b0)?;
    let power = Objective::Power { e: st.e, sigma: st.sigma };

    if tr.test("1 + beta - n >= 0", st.e, st.e >= 0.0) {
        if !(st.n == 1 && st.beta == 1.0) {
            return Ok(tr.finish(floor, "S2.Case1a", floor, AdviceKind::Optimal, Some(power)));
        }
        // n = 1, β = 1: ρ = 1 and γ₁ = 2 give c₀ = 3b₀e⁴ and η = ln(2/3)/(24e⁴δ).
        let c1 = floor;
        let c0 = LogScalar::from_value(3.0 * b0 * E4);
        let eta = 1.5f64.ln() / -(24.0 * E4 * st.delta);
        let s = 0.5 * st.sigma + eta;
        let obj = st.piecewise(b0);
        tr.note("c1", c1, "lower candidate");
        tr.note("c0", c0, "crossover");
        tr.num("eta", eta, "ln(2/3)/(24 e^4 delta)");
        let pick = |tr: Builder, c: LogScalar, label: &str| tr.finish(c, label, floor, AdviceKind::Optimal, Some(obj));
        if tr.test("sigma/2 + eta >= 0", s, s >= 0.0) {
            return Ok(pick(tr, c1, "S2.Case1b.i"));
        }
        let c_star = LogScalar::from_value(-1.0 / (4.0 * s));
        tr.note("c* = -1/(4(sigma/2 + eta))", c_star, "interior maximum of H");
        if ln_cmp(&c_star, &c1).is_le() {
            tr.note("c* <= c1", c_star, "H decreasing on [c1, c0]");
            return Ok(pick(tr, c0, "S2.Case1b.iv"));
        }
        if ln_cmp(&c0, &c_star).is_le() {
            tr.note("c0 <= c*", c_star, "H increasing on [c1, c0]");
            return Ok(pick(tr, c1, "S2.Case1b.iii"));
        }
        let h1 = obj.at(&c1);
        let h0 = obj.at(&c0);
        tr.note("H(c1)", h1, "");
        tr.note("H(c0)", h0, "");
        let c = if ln_cmp(&h1, &h0).is_le() { c1 } else { c0 };
        tr.note("H(c1) <= H(c0)", c, if c == c1 { "choose c1" } else { "choose c0" });
        return Ok(pick(tr, c, "S2.Case1b.ii"));
    }

    let stationary = LogScalar::from_value(-st.e / (2.0 * st.sigma));
    tr.note("(n - beta - 1)/(2 sigma)", stationary, "minimizer of g");
    let c = stationary.max(floor);
    Ok(tr.finish(c, "S2.Case2", floor, AdviceKind::Optimal, Some(power)))
}

/// Rules on a cube of fixed side `b0`, with `λ^{1/δ}` included.
pub fn advise_theoretical_fixed(inputs: &AdvisorInputs) -> Result<ShapeAdvice> {
    let b0 = require_b0(inputs)?;
    let st = Setup::new(inputs.n, inputs.beta, inputs.sigma, inputs.delta)?;
    let mut tr = Builder::new();
    let floor = st.floor();
    tr.note("c_floor", floor, "feasibility floor");

    if st.special() {
        st.check_special_delta(b0)?;
        let c0 = LogScalar::from_value(3.0 * b0 * E4);
        let inv_sigma = LogScalar::from_value(1.0 / st.sigma);
        tr.note("c0 = 3 b0 e^4", c0, "crossover");
        if ln_cmp(&c0, &inv_sigma).is_lt() {
            tr.note("c0 < 1/sigma", inv_sigma, "true");
            return Ok(tr.finish(inv_sigma, "S3.1.Case6a", floor, AdviceKind::Suggested, None));
        }
        let very_small = inputs.thresholds.delta_very_small.unwrap_or(b0 / 800.0);
        tr.note("1/sigma <= c0", inv_sigma, "true");
        let c = if tr.test("delta < delta_very_small", very_small, st.delta < very_small) { c0 } else { inv_sigma };
        return Ok(tr.finish(c, "S3.1.Case6b", floor, AdviceKind::Suggested, None));
    }
    st.check_cube_delta(b0)?;

    let obj = st.piecewise(b0);
    let s = st.eta + 0.5 * st.sigma;
    let c0 = LogScalar::from_ln(st.ln_c0(b0));
    tr.note("c0", c0, "crossover");
    tr.num("eta(delta)", st.eta, "");
    tr.num("eta(delta) + sigma/2", s, if s >= 0.0 { ">= 0" } else { "< 0" });
    tr.num("1 + beta - n", st.e, "");
    let done = |tr: Builder, c: LogScalar, label: &str| tr.finish(c, label, floor, AdviceKind::Optimal, Some(obj));

    if st.e >= 0.0 && s >= 0.0 {
        if s == 0.0 {
            tr.num("eta(delta) + sigma/2 = 0", s, "treated as increasing");
        }
        return Ok(done(tr, floor, "S3.1.Case1"));
    }
    if st.e > 0.0 {
        let c_star = LogScalar::from_value(-st.e / (4.0 * s));
        tr.note("c* = (n - beta - 1)/(4 eta + 2 sigma)", c_star, "interior maximum of H1");
        if ln_cmp(&c_star, &floor).is_lt() {
            return Ok(done(tr, c0, "S3.1.Case2b"));
        }
        if ln_cmp(&c_star, &c0).is_gt() {
            return Ok(done(tr, floor, "S3.1.Case2c"));
        }
        let hf = obj.at(&floor);
        let h0 = obj.at(&c0);
        tr.note("H(c_floor)", hf, "");
        tr.note("H(c0)", h0, "");
        let c = if ln_cmp(&hf, &h0).is_le() { floor } else { c0 };
        return Ok(done(tr, c, "S3.1.Case2a"));
    }
    if st.e == 0.0 {
        return Ok(done(tr, c0, "S3.1.Case3"));
    }
    let k = -st.e;
    let c2 = LogScalar::from_value(k / (2.0 * st.sigma));
    tr.note("c2 = (n - 1 - beta)/(2 sigma)", c2, "minimizer of H2");
    let upper = if ln_cmp(&c0, &c2).is_le() { c2 } else { c0 };
    if s < 0.0 {
        return Ok(done(tr, upper, "S3.1.Case5"));
    }
    let c1 = if s == 0.0 {
        tr.num("eta(delta) + sigma/2 = 0", s, "H1 decreasing");
        c0
    } else {
        let raw = LogScalar::from_ln(k.ln() - (4.0 * s).ln());
        tr.note("c1 = (n - 1 - beta)/(4(eta + sigma/2))", raw, "minimizer of H1");
        raw.max(floor).min(c0)
    };
    let h1 = obj.at(&c1);
    let h2 = obj.at(&upper);
    tr.note("min H on [c_floor, c0]", h1, "");
    tr.note("min H on [c0, inf)", h2, "");
    let c = if ln_cmp(&h1, &h2).is_le() { c1 } else { upper };
    Ok(done(tr, c, "S3.1.Case4"))
}

/// Rules for domains where the cube side can grow without bound.
pub fn advise_theoretical_unfixed(inputs: &AdvisorInputs) -> Result<ShapeAdvice> {
    let st = Setup::new(inputs.n, inputs.beta, inputs.sigma, inputs.delta)?;
    let mut tr = Builder::new();
    let floor = st.floor();
    tr.note("c_floor", floor, "feasibility floor");
    let ln_h = 0.5 * st.sigma + st.eta;
    tr.num("eta(delta)", st.eta, "");
    tr.num("ln H(sigma, delta)", ln_h, if ln_h >= 0.0 { ">= 0" } else { "< 0" });
    let obj = Objective::Geometric { e: st.e, k: ln_h };
    let cap = st.cap(&inputs.thresholds).max(floor);

    if st.special() {
        let inv_sigma = LogScalar::from_value(1.0 / st.sigma);
        let max_delta = (-(12f64.ln() + st.ln_scale + st.ln_gamma + st.sigma.ln())).exp();
        if !(st.delta < max_delta) {
            return Err(Error::FillDistanceTooLarge { delta: st.delta, max: max_delta });
        }
        if ln_h <= 0.0 {
            tr.note("c_cap", cap, "larger is better");
            return Ok(tr.finish(cap, "S3.2.Case6a", floor, AdviceKind::MonotoneLargerBetter, Some(obj)));
        }
        let c_star = LogScalar::from_value(1.0 / (4.0 * ln_h));
        tr.note("c* = 1/(4(eta + sigma/2))", c_star, "minimizer of G");
        let c = if ln_cmp(&c_star, &inv_sigma).is_ge() { c_star } else { inv_sigma };
        return Ok(tr.finish(c, "S3.2.Case6b", floor, AdviceKind::Suggested, Some(obj)));
    }
    tr.num("beta + 1 - n", st.e, "");
    let done = |tr: Builder, c: LogScalar, label: &str, kind| tr.finish(c, label, floor, kind, Some(obj));

    match (st.e.partial_cmp(&0.0), ln_h.partial_cmp(&0.0)) {
        (Some(Ordering::Greater), Some(Ordering::Greater | Ordering::Equal)) => {
            Ok(done(tr, floor, "S3.2.Case1", AdviceKind::Optimal))
        }
        (Some(Ordering::Less), Some(Ordering::Greater)) => {
            let c_star = LogScalar::from_ln((-st.e).ln() - (4.0 * ln_h).ln());
            tr.note("c* = (n - 1 - beta)/(4 eta)", c_star, "minimizer of G");
            let c = if ln_cmp(&c_star, &floor).is_lt() { floor } else { c_star };
            Ok(done(tr, c, "S3.2.Case2", AdviceKind::Optimal))
        }
        (Some(Ordering::Greater), Some(Ordering::Less)) => {
            tr.note("bound", LogScalar::ZERO, "tends to 0 as c -> 0+ and as c -> inf; floor binds");
            Ok(done(tr, floor, "S3.2.Case3", AdviceKind::MonotoneSmallerBetter))
        }
        (Some(Ordering::Less | Ordering::Equal), Some(Ordering::Less)) => {
            tr.note("c_cap", cap, "larger is better");
            Ok(done(tr, cap, "S3.2.Case4", AdviceKind::MonotoneLargerBetter))
        }
        (Some(Ordering::Equal), Some(Ordering::Greater)) => Ok(done(tr, floor, "S3.2.Case5", AdviceKind::Optimal)),
        (Some(Ordering::Less), Some(Ordering::Equal)) => {
            tr.note("c_cap", cap, "H = 1 with 1 + beta - n < 0: larger is better");
            Ok(done(tr, cap, "S3.2.Case2Limit", AdviceKind::MonotoneLargerBetter))
        }
        _ => Err(Error::BoundaryCase(format!(
            "H(sigma, delta) = 1 with beta + 1 - n = {}; the objective is constant in c",
            st.e
        ))),
    }
}

/// Dispatches on `mode`.
pub fn advise(mode: Mode, inputs: &AdvisorInputs) -> Result<ShapeAdvice> {
    match mode {
        Mode::Practical => advise_practical(inputs),
        Mode::FixedB0 => advise_theoretical_fixed(inputs),
        Mode::UnfixedB0 => advise_theoretical_unfixed(inputs),
    }
}
