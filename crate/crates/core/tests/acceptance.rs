//! Acceptance checks. Prints one PASS/FAIL line per criterion and exits
//! nonzero when any criterion fails.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use mqshape_core::advisor::{advise, AdviceKind, AdvisorInputs, Mode, ShapeAdvice};
use mqshape_core::bandlimited::make_sinc;
use mqshape_core::bounds::{
    applicable_error_bound, bandlimited_error_bound, is_covered, special_error_bound, special_norm_terms,
    Eq12Prefactor, ProblemSetting,
};
use mqshape_core::constants::{gamma_seq, is_excluded_exponent, rho_delta0, theorem_constants};
use mqshape_core::experiment::{
    run_sweep, spearman, verify_bound, CGrid, CentersSpec, SweepConfig, TargetSpec, Verdict, VerifyConfig,
};
use mqshape_core::interpolator::{poly_basis, solve_interpolant, CenterSet, Cube};
use mqshape_core::kernel::{kernel_eval, KernelSpec};
use mqshape_core::numerics::PrecisionPolicy;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const E4: f64 = 54.598150033144236;

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check, Duration);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

fn criterion_1() -> Check {
    for (n, want) in [(1, 2u32), (2, 12), (3, 78), (4, 632)] {
        let g = gamma_seq(n).map_err(|e| e.to_string())?;
        ensure(g == want.into(), || format!("gamma_{n} = {g}, want {want}"))?;
    }
    for (n, beta, rho, d0) in [(4, 1.5, 1.0, 1.0), (5, -1.0, 5.0 / 3.0, 4.32), (1, 1.0, 1.0, 0.25)] {
        let s = rho_delta0(n, beta).map_err(|e| e.to_string())?;
        let got = s.delta0_const.to_f64();
        ensure((s.rho - rho).abs() <= 1e-12 && (got - d0).abs() <= 1e-12, || {
            format!("(n={n}, beta={beta}): rho={} delta0={got}", s.rho)
        })?;
    }
    Ok("gamma_1..4 exact, 3 (rho, Delta0) spot checks".into())
}

fn random_beta(rng: &mut ChaCha8Rng, n: usize) -> f64 {
    loop {
        let b: f64 = if rng.gen_bool(0.3) { rng.gen_range(-5..=7) as f64 } else { rng.gen_range(-5.0..7.0) };
        if !is_excluded_exponent(b) && (is_covered(n, b) || (n == 1 && b == -1.0)) {
            return b;
        }
    }
}

fn criterion_2() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let n = rng.gen_range(1..=4);
        let beta = random_beta(&mut rng, n);
        let b0 = 10f64.powf(rng.gen_range(-3.0..3.0));
        let c = 10f64.powf(rng.gen_range(-6.0..6.0));
        let tc = theorem_constants(n, beta, b0, c).map_err(|e| e.to_string())?;
        // ln(λ^{1/δ₀}) = ln λ / δ₀, formed in log space since δ₀ can underflow.
        let ratio = tc.ln_lambda.div(&tc.delta0).map_err(|e| e.to_string())?;
        let got = -ratio.ln_mag().exp();
        let want = (tc.m + 1) as f64 * (2.0f64 / 3.0).ln();
        worst = worst.max((got - want).abs());
    }
    ensure(worst <= 1e-12, || format!("max log-domain deviation {worst:.3e}"))?;
    Ok(format!("1000 cases, max log-domain deviation {worst:.2e}"))
}

/// Random points in `[0,1]^n` with pairwise distance at least `sep`.
fn separated_points(rng: &mut ChaCha8Rng, n: usize, count: usize, sep: f64) -> Vec<Vec<f64>> {
    let mut pts: Vec<Vec<f64>> = Vec::with_capacity(count);
    while pts.len() < count {
        let p: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..1.0)).collect();
        if pts.iter().all(|q| q.iter().zip(&p).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt() >= sep) {
            pts.push(p);
        }
    }
    pts
}

fn criterion_3() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let cube = Cube::origin(2, 1.0).unwrap();
    let (mut worst_res, mut worst_mom) = (0.0f64, 0.0f64);
    for k in 0..50 {
        let n = 1 + k % 2;
        let beta = [-1.0, 1.0, 3.0][rng.gen_range(0..3)];
        let count = rng.gen_range(8..=40);
        let spacing = (count as f64).powf(-1.0 / n as f64);
        let points = separated_points(&mut rng, n, count, 0.3 * spacing);
        let centers = CenterSet::new(points, Cube::origin(n, cube.side).unwrap()).map_err(|e| e.to_string())?;
        let values: Vec<f64> = (0..count).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let c = spacing * rng.gen_range(0.5..2.0);
        let spec = KernelSpec::new(beta, c).map_err(|e| e.to_string())?;
        let model = solve_interpolant(&spec, &centers, &values, PrecisionPolicy::Machine)
            .map_err(|e| format!("config {k} (n={n}, beta={beta}, N={count}, c={c:.3}): {e}"))?;

        let scale = values.iter().fold(0.0f64, |a, v| a.max(v.abs()));
        let res = centers.points.iter().zip(&values).map(|(p, f)| (model.evaluate(p) - f).abs()).fold(0.0, f64::max);
        worst_res = worst_res.max(res / scale);

        let a = model.kernel_coeffs.to_f64();
        let basis = poly_basis(n, spec.m);
        for j in 0..basis.len() {
            let terms: Vec<f64> = centers.points.iter().zip(&a).map(|(p, ai)| ai * basis.eval(p)[j]).collect();
            let sum: f64 = terms.iter().sum();
            let mag: f64 = terms.iter().map(|t| t.abs()).sum();
            if mag > 0.0 {
                worst_mom = worst_mom.max(sum.abs() / mag);
            }
        }
    }
    ensure(worst_res <= 1e-8 && worst_mom <= 1e-8, || {
        format!("residual {worst_res:.3e}, moment {worst_mom:.3e}")
    })?;
    Ok(format!("50 configs, max relative residual {worst_res:.2e}, max relative moment sum {worst_mom:.2e}"))
}

fn criterion_4() -> Check {
    let mut report = Vec::new();
    // n = 1, β = 3: linear polynomials.
    let cube = Cube::origin(1, 2.0).unwrap();
    let centers = CenterSet::grid(cube.clone(), 9).map_err(|e| e.to_string())?;
    let p = |x: &[f64]| 0.75 - 1.3 * x[0];
    let values: Vec<f64> = centers.points.iter().map(|x| p(x)).collect();
    let spec = KernelSpec::new(3.0, 0.4).map_err(|e| e.to_string())?;
    let model = solve_interpolant(&spec, &centers, &values, PrecisionPolicy::Machine).map_err(|e| e.to_string())?;
    let err = cube.grid(100).iter().map(|x| (model.evaluate(x) - p(x)).abs()).fold(0.0, f64::max);
    ensure(spec.m == 2 && err <= 1e-8, || format!("n=1, beta=3: max error {err:.3e}"))?;
    report.push(format!("n=1 beta=3 {err:.2e}"));

    // n = 2, β = 1: constants, scattered unisolvent centers.
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let pts = separated_points(&mut rng, 2, 20, 0.1);
    let centers = CenterSet::new(pts, Cube::origin(2, 1.0).unwrap()).map_err(|e| e.to_string())?;
    let values = vec![-2.25; centers.len()];
    let spec = KernelSpec::new(1.0, 0.3).map_err(|e| e.to_string())?;
    let model = solve_interpolant(&spec, &centers, &values, PrecisionPolicy::Machine).map_err(|e| e.to_string())?;
    let err = centers.cube.grid(10).iter().map(|x| (model.evaluate(x) + 2.25).abs()).fold(0.0, f64::max);
    ensure(spec.m == 1 && err <= 1e-8, || format!("n=2, beta=1: max error {err:.3e}"))?;
    report.push(format!("n=2 beta=1 {err:.2e}"));
    Ok(format!("100-point grids, max error: {}", report.join(", ")))
}

fn criterion_5() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut worst = f64::INFINITY;
    for (n, beta) in [(1, -1.0), (1, 1.0), (2, -1.0), (2, 1.0)] {
        let pts = separated_points(&mut rng, n, 20, 0.02);
        let spec = KernelSpec::new(beta, rng.gen_range(0.1..2.0)).map_err(|e| e.to_string())?;
        let basis = poly_basis(n, spec.m);
        for _ in 0..200 {
            let mut w: Vec<f64> = (0..pts.len()).map(|_| rng.gen_range(-1.0..1.0)).collect();
            // Project onto the moment-free subspace; P_0 is the only space needed here.
            if !basis.is_empty() {
                let mean = w.iter().sum::<f64>() / w.len() as f64;
                w.iter_mut().for_each(|v| *v -= mean);
            }
            let (mut q, mut scale) = (0.0, 0.0);
            for (i, xi) in pts.iter().enumerate() {
                for (j, xj) in pts.iter().enumerate() {
                    let d: Vec<f64> = xi.iter().zip(xj).map(|(a, b)| a - b).collect();
                    let t = w[i] * w[j] * kernel_eval(&spec, &d);
                    q += t;
                    scale += t.abs();
                }
            }
            worst = worst.min(q / scale);
            ensure(q >= -1e-10 * scale, || format!("n={n}, beta={beta}: form {q:.3e}, scale {scale:.3e}"))?;
        }
    }
    Ok(format!("800 vectors, min relative form {worst:.2e}"))
}

fn random_advisor_inputs(rng: &mut ChaCha8Rng) -> AdvisorInputs {
    let n = rng.gen_range(1..=3);
    let beta = loop {
        let b: f64 = match rng.gen_range(0..4) {
            0 => rng.gen_range(-5..=7) as f64,
            1 => rng.gen_range(-5..=7) as f64 + 0.5,
            2 => -1.0,
            _ => rng.gen_range(-5.0..7.0),
        };
        if !is_excluded_exponent(b) && (is_covered(n, b) || (n == 1 && b == -1.0)) {
            break b;
        }
    };
    let sigma = 10f64.powf(rng.gen_range(-3.0..3.0));
    let delta = 10f64.powf(rng.gen_range(-40.0..0.0));
    let b0 = 10f64.powf(rng.gen_range(-1.0..3.0));
    AdvisorInputs::new(n, beta, sigma, delta, Some(b0))
}

/// Inputs aimed at the `n = 1, β = 1` sub-cases, which random draws rarely hit.
fn subcase_inputs() -> Vec<AdvisorInputs> {
    let (sigma, b0) = (1.0, 8.0);
    (0..400)
        .map(|k| {
            let s = -10f64.powf(-5.0 + 7.0 * k as f64 / 399.0);
            let delta = 1.5f64.ln() / (24.0 * E4 * (0.5 * sigma - s));
            AdvisorInputs::new(1, 1.0, sigma, delta, Some(b0))
        })
        .collect()
}

/// Largest shortfall, in log units, of a 10⁴-point log grid below the advised objective.
fn grid_shortfall(a: &ShapeAdvice) -> f64 {
    let obj = a.objective.expect("optimal advice carries its objective");
    let lo = a.admissible_interval.c_min.ln_mag();
    let hi = a.admissible_interval.c_max.map_or(a.c.ln_mag() + 1000f64.ln(), |m| m.ln_mag()).max(lo + 1e-9);
    let at = obj.ln_value(a.c.ln_mag());
    (0..10_000)
        .map(|k| at - obj.ln_value(lo + (hi - lo) * k as f64 / 9_999.0))
        .fold(f64::NEG_INFINITY, f64::max)
}

/// For fixed-b0 advice, the objective must track the c-dependence of the
/// band-limited bound. Checked where `f64` resolves the log magnitudes.
fn objective_tracks_bound(inp: &AdvisorInputs, a: &ShapeAdvice) -> Option<bool> {
    let obj = a.objective?;
    let b0 = inp.b0?;
    let lo = a.admissible_interval.c_min.ln_mag();
    let cs: Vec<f64> = (0..6).map(|k| lo + 0.7 * k as f64).collect();
    let setting = ProblemSetting::new(inp.n, b0, inp.sigma, inp.delta).ok()?;
    let mut diffs = Vec::new();
    for &ln_c in &cs {
        let spec = KernelSpec::new(inp.beta, ln_c.exp()).ok()?;
        let b = bandlimited_error_bound(&setting, &spec, 1.0).ok()?;
        let o = obj.ln_value(ln_c);
        if b.total.ln_mag().abs() > 1e6 || o.abs() > 1e6 {
            return None;
        }
        diffs.push(b.total.ln_mag() - o);
    }
    Some(diffs.iter().all(|d| (d - diffs[0]).abs() <= 1e-7 * (1.0 + diffs[0].abs())))
}

fn criterion_6() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut all: Vec<AdvisorInputs> = (0..6000).map(|_| random_advisor_inputs(&mut rng)).collect();
    all.extend(subcase_inputs());
    let one_percent = -(0.99f64.ln());
    let mut labels = BTreeSet::new();
    let (mut checked, mut tracked) = (0usize, 0usize);
    for inp in &all {
        for mode in [Mode::Practical, Mode::FixedB0, Mode::UnfixedB0] {
            let Ok(a) = advise(mode, inp) else { continue };
            if a.advice_kind != AdviceKind::Optimal {
                continue;
            }
            let short = grid_shortfall(&a);
            ensure(short <= one_percent, || {
                format!("{} at {inp:?}: grid value {:.3}% below advice", a.case_label, 100.0 * short.exp_m1())
            })?;
            if mode == Mode::FixedB0 {
                if let Some(ok) = objective_tracks_bound(inp, &a) {
                    ensure(ok, || format!("{} at {inp:?}: objective does not track the bound", a.case_label))?;
                    tracked += 1;
                }
            }
            checked += 1;
            labels.insert(a.case_label);
        }
    }
    ensure(labels.len() >= 12, || format!("only {} optimal branches reached: {labels:?}", labels.len()))?;
    Ok(format!(
        "{checked} optimal advisories over {} branches, {tracked} cross-checked against the bound: {}",
        labels.len(),
        labels.into_iter().collect::<Vec<_>>().join(" ")
    ))
}

fn criterion_7() -> Check {
    let ex = |mode, n, beta, sigma, delta, b0| {
        advise(mode, &AdvisorInputs::new(n, beta, sigma, delta, b0)).map_err(|e| e.to_string())
    };
    // (advice, closed form, rounded value as usually quoted)
    let cases: Vec<(&str, ShapeAdvice, f64, f64)> = vec![
        ("n=1 beta=3", ex(Mode::Practical, 1, 3.0, 1.0, 1e-3, Some(8.0))?, 72.0 * E4 * 1e-3, 3.9311),
        ("n=2 beta=0.5", ex(Mode::Practical, 2, 0.5, 0.25, 1e-25, Some(1.0))?, 1.0, 1.0),
        ("n=1 beta=-1", ex(Mode::Practical, 1, -1.0, 2.0, 1e-4, Some(1.0))?, 0.5, 0.5),
        (
            "unfixed n=2 beta=0.5",
            ex(Mode::UnfixedB0, 2, 0.5, 0.25, 1e-22, None)?,
            // c_floor = 12 ρ√n e^{2nγ₂} γ₂ (m+1) δ with ρ = 1, γ₂ = 12, m = 1.
            (12f64.ln() + 0.5 * 2f64.ln() + 48.0 + 12f64.ln() + 2f64.ln() + 1e-22f64.ln()).exp(),
            28.580,
        ),
    ];
    let mut parts = Vec::new();
    for (name, a, closed, quoted) in cases {
        // Log-domain comparison: |Δ ln c| ≈ relative error.
        let err = (a.c.ln_mag() - closed.ln()).abs();
        ensure(err <= 1e-6, || format!("{name}: c = {} vs closed form {closed}", a.c.to_f64()))?;
        parts.push(format!("{name} c={:.6} (quoted {quoted}, off {:.1e})", a.c.to_f64(), rel(a.c.to_f64(), quoted)));
    }
    Ok(format!("closed forms to 1e-6: {}", parts.join(", ")))
}

fn criterion_8() -> Check {
    let extended = PrecisionPolicy::extended(256).map_err(|e| e.to_string())?;
    // β = 1: δ = 0.5 on a 9-point grid over [0, 8]. At c above 3b₀e⁴ the
    // regime constant is fixed and δ₀ = 1/2.
    let pos = VerifyConfig {
        n: 1,
        b0: 8.0,
        sigma: 1.0,
        beta: 1.0,
        c: 1.01 * 24.0 * E4,
        centers: CentersSpec::Grid { per_axis: 9 },
        target: TargetSpec::Sinc,
        eval_points: 1000,
        precision: extended,
        prefactor: Eq12Prefactor::Printed,
    };
    // β = −1, c = 1/σ: δ₀ = 1/(24e⁴) once 2e⁴ > 2/(3b₀).
    let neg = VerifyConfig { b0: 0.01, beta: -1.0, c: 1.0, centers: CentersSpec::Grid { per_axis: 8 }, ..pos.clone() };
    let mut parts = Vec::new();
    for (name, cfg) in [("beta=1", pos), ("beta=-1", neg)] {
        let r = verify_bound(&cfg).map_err(|e| format!("{name}: {e}"))?;
        let err = r.empirical_max_err.unwrap_or(f64::NAN);
        ensure(r.verdict == Verdict::Pass, || {
            format!(
                "{name}: {} (delta {} vs delta0 {}, error {err:.3e}, bound {})",
                r.verdict,
                r.delta,
                r.delta0.to_decimal_string(),
                r.bound.total.to_decimal_string()
            )
        })?;
        parts.push(format!("{name} err {err:.2e} <= bound {}", r.bound.total.to_decimal_string()));
    }
    Ok(parts.join("; "))
}

fn criterion_9() -> Check {
    // Practical rules, interior minimizer: n = 2, β = 1/2, σ = 1/4 gives c* = 1.
    // A tiny cube keeps c*/100 above the regime crossover, so λ^{1/δ} is
    // constant over the range probed.
    let inp = AdvisorInputs::new(2, 0.5, 0.25, 1e-27, Some(1e-24));
    let a = advise(Mode::Practical, &inp).map_err(|e| e.to_string())?;
    ensure(a.case_label == "S2.Case2", || format!("expected S2.Case2, got {}", a.case_label))?;
    let c_star = a.c.to_f64();
    let setting = ProblemSetting::new(2, 1e-24, 0.25, 1e-27).map_err(|e| e.to_string())?;
    let pointwise = |c: f64| -> Result<f64, String> {
        let spec = KernelSpec::new(0.5, c).map_err(|e| e.to_string())?;
        Ok(bandlimited_error_bound(&setting, &spec, 1.0).map_err(|e| e.to_string())?.total.ln_mag())
    };
    let (mid, lo, hi) = (pointwise(c_star)?, pointwise(c_star / 100.0)?, pointwise(100.0 * c_star)?);
    ensure(lo > mid && hi > mid, || format!("ln bound: c*/100 {lo}, c* {mid}, 100c* {hi}"))?;

    let sinc = make_sinc(1, 1.0).map_err(|e| e.to_string())?;
    let spectrum = sinc.spectral_density();
    let setting = ProblemSetting::new(1, 1.0, 1.0, 1e-4).map_err(|e| e.to_string())?;
    let special = |c: f64| -> Result<f64, String> {
        let terms = special_norm_terms(c, 1.0, &spectrum).map_err(|e| e.to_string())?;
        let b = special_error_bound(&setting, c, terms, Eq12Prefactor::Printed).map_err(|e| e.to_string())?;
        Ok(b.total.ln_mag())
    };
    // Below the crossover 3b₀e⁴ the λ factor depends on c, so divergence is
    // probed well inside each end.
    let small: Vec<f64> = [1e-2, 1e-4, 1e-6, 1e-8].iter().map(|&c| special(c)).collect::<Result<_, _>>()?;
    let large: Vec<f64> = [1e3, 1e4, 1e5].iter().map(|&c| special(c)).collect::<Result<_, _>>()?;
    let increasing = |v: &[f64]| v.windows(2).all(|w| w[1] > w[0]);
    ensure(increasing(&small) && increasing(&large), || format!("ln special bound: small c {small:?}, large c {large:?}"))?;
    let middle = (-8..=12).map(|k| special(10f64.powf(k as f64 / 4.0))).collect::<Result<Vec<_>, _>>()?;
    let floor = middle.iter().copied().fold(f64::INFINITY, f64::min);
    let (tiny, huge) = (small[small.len() - 1], large[large.len() - 1]);
    ensure(tiny > floor + 5.0 && huge > floor + 5.0, || {
        format!("ln special bound at 1e-8 {tiny}, at 1e5 {huge}, minimum over [1e-2, 1e3] {floor}")
    })?;
    let center = special(1.0)?;
    // The generic bound dispatcher agrees with the special-case path.
    let via = applicable_error_bound(
        &setting,
        &KernelSpec::new(-1.0, 1.0).unwrap(),
        sinc.l2_norm(),
        &spectrum,
        Eq12Prefactor::Printed,
    )
    .map_err(|e| e.to_string())?;
    ensure((via.total.ln_mag() - center).abs() < 1e-12, || "dispatcher disagrees with special bound".into())?;
    Ok(format!(
        "band-limited bound ln: {lo:.3} / {mid:.3} / {hi:.3} at c*/100, c*, 100c*; special bound ln min {floor:.1} on [1e-2, 1e3], {tiny:.1} at 1e-8, {huge:.1} at 1e5"
    ))
}

fn criterion_10() -> Check {
    let cfg = SweepConfig {
        n: 1,
        b0: 1.0,
        sigma: 1.0,
        beta: 1.0,
        c_grid: CGrid { log_min: -1.0, log_max: 1.0, count: 10 },
        centers: CentersSpec::Grid { per_axis: 10 },
        target: TargetSpec::Sinc,
        eval_points: 50,
        precision: PrecisionPolicy::extended(256).map_err(|e| e.to_string())?,
        prefactor: Eq12Prefactor::Printed,
    };
    let rows = run_sweep(&cfg).map_err(|e| e.to_string())?;
    let c: Vec<f64> = rows.iter().map(|r| r.c).collect();
    let cond: Vec<f64> = rows.iter().map(|r| r.cond_estimate).collect();
    let rho = spearman(&c, &cond);
    ensure(rho >= 0.9, || format!("Spearman {rho:.3}; cond {cond:?}"))?;
    Ok(format!("Spearman {rho:.3}, cond {:.2e} .. {:.2e}", cond[0], cond[cond.len() - 1]))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("constant tables", criterion_1, Duration::from_secs(1)),
        ("lambda identity", criterion_2, Duration::from_secs(1)),
        ("interpolation exactness and moments", criterion_3, Duration::from_secs(30)),
        ("polynomial reproduction", criterion_4, Duration::from_secs(5)),
        ("CPD quadratic form", criterion_5, Duration::from_secs(10)),
        ("advisor vs grid oracle", criterion_6, Duration::from_secs(60)),
        ("advisor examples", criterion_7, Duration::from_secs(1)),
        ("one-sided bound verification", criterion_8, Duration::from_secs(300)),
        ("divergence shape", criterion_9, Duration::from_secs(5)),
        ("condition-number trend", criterion_10, Duration::from_secs(10)),
    ];
    let mut failures = 0;
    for (k, (name, run, limit)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = run();
        let elapsed = t.elapsed();
        let (ok, detail) = match outcome {
            Ok(d) if elapsed <= *limit => (true, d),
            Ok(d) => (false, format!("{d}; runtime {:.2}s over the {}s limit", elapsed.as_secs_f64(), limit.as_secs())),
            Err(e) => (false, e),
        };
        failures += usize::from(!ok);
        println!(
            "criterion {:>2} {:<38} {} ({:.2}s) {}",
            k + 1,
            name,
            if ok { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64(),
            detail
        );
    }
    if failures > 0 {
        println!("{failures} criterion(s) failed");
        std::process::exit(1);
    }
}

