//! Shape-parameter sweeps and empirical checks of the error bounds.

use rayon::prelude::*;
use serde::Serialize;

use crate::bandlimited::{make_random_mixture, make_sinc, BandLimitedFn};
use crate::bounds::{applicable_error_bound, BoundBreakdown, Eq12Prefactor, ProblemSetting};
use crate::error::{Error, Result};
use crate::interpolator::{fill_distance, solve_interpolant, system_condition, CenterSet, Cube};
use crate::kernel::KernelSpec;
use crate::numerics::{LogScalar, PrecisionPolicy};

/// Grid resolution used to estimate the fill distance of explicit center sets.
const FILL_RESOLUTION_1D: usize = 20_001;
const FILL_RESOLUTION_2D: usize = 401;
const FILL_RESOLUTION_HIGH: usize = 41;

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TargetSpec {
    Sinc,
    /// Random shifted-sinc mixture with shifts inside the cube (`n = 1`).
    Mixture { k: usize, seed: u64 },
}

impl TargetSpec {
    pub fn build(&self, cube: &Cube, sigma: f64) -> Result<BandLimitedFn> {
        match *self {
            TargetSpec::Sinc => make_sinc(cube.dim(), sigma),
            TargetSpec::Mixture { k, seed } => {
                if cube.dim() != 1 {
                    return Err(Error::domain("mixture targets are one-dimensional"));
                }
                make_random_mixture(sigma, k, cube.corner[0], cube.corner[0] + cube.side, seed)
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CentersSpec {
    /// Equispaced tensor grid including the cube faces.
    Grid { per_axis: usize },
    Points { points: Vec<Vec<f64>> },
}

impl CentersSpec {
    pub fn build(&self, cube: &Cube) -> Result<CenterSet> {
        match self {
            CentersSpec::Grid { per_axis } => CenterSet::grid(cube.clone(), *per_axis),
            CentersSpec::Points { points } => CenterSet::new(points.clone(), cube.clone()),
        }
    }
}

/// Fill distance of `centers` in their cube: exact for tensor grids,
/// a conservative grid-scan upper estimate otherwise.
pub fn centers_fill_distance(spec: &CentersSpec, centers: &CenterSet) -> Result<f64> {
    let cube = &centers.cube;
    match spec {
        CentersSpec::Grid { per_axis } => {
            Ok(0.5 * cube.side / (*per_axis - 1) as f64 * (cube.dim() as f64).sqrt())
        }
        CentersSpec::Points { .. } => {
            let res = match cube.dim() {
                1 => FILL_RESOLUTION_1D,
                2 => FILL_RESOLUTION_2D,
                _ => FILL_RESOLUTION_HIGH,
            };
            Ok(fill_distance(&centers.points, cube, res)?.upper())
        }
    }
}

/// `count` values of `c` equally spaced in `log10`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CGrid {
    pub log_min: f64,
    pub log_max: f64,
    pub count: usize,
}

impl CGrid {
    pub fn values(&self) -> Result<Vec<f64>> {
        if self.count < 2 {
            return Err(Error::InvalidInput("c grid needs at least 2 points".into()));
        }
        if !(self.log_min.is_finite() && self.log_max.is_finite() && self.log_min < self.log_max) {
            return Err(Error::InvalidInput("c grid needs finite log_min < log_max".into()));
        }
        let step = (self.log_max - self.log_min) / (self.count - 1) as f64;
        Ok((0..self.count).map(|k| 10f64.powf(self.log_min + step * k as f64)).collect())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepConfig {
    pub n: usize,
    pub b0: f64,
    pub sigma: f64,
    pub beta: f64,
    pub c_grid: CGrid,
    pub centers: CentersSpec,
    pub target: TargetSpec,
    /// Evaluation nodes per axis, at cell midpoints strictly inside the cube.
    pub eval_points: usize,
    pub precision: PrecisionPolicy,
    pub prefactor: Eq12Prefactor,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepRow {
    pub c: f64,
    /// `NaN` when the solve failed; see `failure`.
    pub max_err: f64,
    pub rms_err: f64,
    pub cond_estimate: f64,
    pub bound: LogScalar,
    pub delta: f64,
    pub delta0: LogScalar,
    pub preconditions_ok: bool,
    pub failure: Option<String>,
}

/// Everything a sweep row or a verification run needs, built once.
struct Problem {
    setting: ProblemSetting,
    centers: CenterSet,
    target: BandLimitedFn,
    values: Vec<f64>,
}

impl Problem {
    fn new(n: usize, b0: f64, sigma: f64, centers: &CentersSpec, target: &TargetSpec) -> Result<Self> {
        let cube = Cube::origin(n, b0)?;
        let set = centers.build(&cube)?;
        let delta = centers_fill_distance(centers, &set)?;
        let target = target.build(&cube, sigma)?;
        let values = set.points.iter().map(|p| target.eval(p)).collect();
        Ok(Problem { setting: ProblemSetting::new(n, b0, sigma, delta)?, centers: set, target, values })
    }

    fn bound(&self, spec: &KernelSpec, prefactor: Eq12Prefactor) -> Result<BoundBreakdown> {
        applicable_error_bound(&self.setting, spec, self.target.l2_norm(), &self.target.spectral_density(), prefactor)
    }

    /// `(max, rms)` of `|f − s|` over `nodes`.
    fn errors(&self, spec: &KernelSpec, policy: PrecisionPolicy, nodes: &[Vec<f64>]) -> Result<(f64, f64, f64)> {
        let model = solve_interpolant(spec, &self.centers, &self.values, policy)?;
        let errs: Vec<f64> = nodes.par_iter().map(|x| (self.target.eval(x) - model.evaluate(x)).abs()).collect();
        let max = errs.iter().fold(0.0f64, |a, e| a.max(*e));
        let rms = (errs.iter().map(|e| e * e).sum::<f64>() / errs.len() as f64).sqrt();
        Ok((max, rms.min(max), model.diagnostics.condition_estimate))
    }
}

fn sweep_row(p: &Problem, beta: f64, c: f64, cfg: &SweepConfig, nodes: &[Vec<f64>]) -> Result<SweepRow> {
    let spec = KernelSpec::new(beta, c)?;
    let bound = p.bound(&spec, cfg.prefactor)?;
    let mut row = SweepRow {
        c,
        max_err: f64::NAN,
        rms_err: f64::NAN,
        cond_estimate: f64::NAN,
        bound: bound.total,
        delta: p.setting.delta,
        delta0: bound.delta0,
        preconditions_ok: bound.preconditions_ok,
        failure: None,
    };
    match p.errors(&spec, cfg.precision, nodes) {
        Ok((max, rms, cond)) => {
            row.max_err = max;
            row.rms_err = rms;
            row.cond_estimate = cond;
        }
        Err(e @ (Error::IllConditioned { .. } | Error::RankDeficient { .. })) => {
            row.cond_estimate = system_condition(&spec, &p.centers, cfg.precision)?;
            row.failure = Some(e.to_string());
        }
        Err(e) => return Err(e),
    }
    Ok(row)
}

/// One row per grid value of `c`, computed in parallel and returned in grid order.
pub fn run_sweep(cfg: &SweepConfig) -> Result<Vec<SweepRow>> {
    if cfg.eval_points == 0 {
        return Err(Error::InvalidInput("eval_points must be positive".into()));
    }
    let p = Problem::new(cfg.n, cfg.b0, cfg.sigma, &cfg.centers, &cfg.target)?;
    let nodes = p.centers.cube.interior_grid(cfg.eval_points);
    KernelSpec::new(cfg.beta, 1.0)?;
    cfg.c_grid.values()?.par_iter().map(|&c| sweep_row(&p, cfg.beta, c, cfg, &nodes)).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifyConfig {
    pub n: usize,
    pub b0: f64,
    pub sigma: f64,
    pub beta: f64,
    pub c: f64,
    pub centers: CentersSpec,
    pub target: TargetSpec,
    /// Nodes per axis of the error grid, faces included.
    pub eval_points: usize,
    pub precision: PrecisionPolicy,
    pub prefactor: Eq12Prefactor,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    PreconditionViolated,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::PreconditionViolated => "precondition violated",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifyReport {
    pub verdict: Verdict,
    pub empirical_max_err: Option<f64>,
    pub bound: BoundBreakdown,
    pub c: f64,
    pub delta: f64,
    pub delta0: LogScalar,
    pub centers: usize,
    pub cond_estimate: Option<f64>,
    pub eval_nodes: usize,
}

/// Interpolates the target, measures `max |f − s|` on a grid over the cube
/// and compares it with the applicable bound. No verdict is given when
/// `δ > δ₀`.
pub fn verify_bound(cfg: &VerifyConfig) -> Result<VerifyReport> {
    if cfg.eval_points < 2 {
        return Err(Error::InvalidInput("eval_points must be at least 2".into()));
    }
    let p = Problem::new(cfg.n, cfg.b0, cfg.sigma, &cfg.centers, &cfg.target)?;
    let spec = KernelSpec::new(cfg.beta, cfg.c)?;
    let bound = p.bound(&spec, cfg.prefactor)?;
    let mut report = VerifyReport {
        verdict: Verdict::PreconditionViolated,
        empirical_max_err: None,
        c: cfg.c,
        delta: p.setting.delta,
        delta0: bound.delta0,
        centers: p.centers.len(),
        cond_estimate: None,
        eval_nodes: 0,
        bound,
    };
    if !report.bound.preconditions_ok {
        return Ok(report);
    }
    let nodes = p.centers.cube.grid(cfg.eval_points);
    let (max, _, cond) = p.errors(&spec, cfg.precision, &nodes)?;
    report.eval_nodes = nodes.len();
    report.empirical_max_err = Some(max);
    report.cond_estimate = Some(cond);
    report.verdict = if LogScalar::from_value(max).cmp_value(&report.bound.total).is_le() {
        Verdict::Pass
    } else {
        Verdict::Fail
    };
    Ok(report)
}

/// Spearman rank correlation, with average ranks for ties.
pub fn spearman(x: &[f64], y: &[f64]) -> f64 {
    fn ranks(v: &[f64]) -> Vec<f64> {
        let mut idx: Vec<usize> = (0..v.len()).collect();
        idx.sort_by(|&a, &b| v[a].total_cmp(&v[b]));
        let mut r = vec![0.0; v.len()];
        let mut i = 0;
        while i < idx.len() {
            let mut j = i;
            while j + 1 < idx.len() && v[idx[j + 1]] == v[idx[i]] {
                j += 1;
            }
            let avg = 0.5 * (i + j) as f64 + 1.0;
            for k in i..=j {
                r[idx[k]] = avg;
            }
            i = j + 1;
        }
        r
    }
    let (rx, ry) = (ranks(x), ranks(y));
    let n = rx.len() as f64;
    let mx = rx.iter().sum::<f64>() / n;
    let my = ry.iter().sum::<f64>() / n;
    let cov: f64 = rx.iter().zip(&ry).map(|(a, b)| (a - mx) * (b - my)).sum();
    let vx: f64 = rx.iter().map(|a| (a - mx).powi(2)).sum();
    let vy: f64 = ry.iter().map(|b| (b - my).powi(2)).sum();
    cov / (vx * vy).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn sweep_cfg() -> SweepConfig {
        SweepConfig {
            n: 1,
            b0: 1.0,
            sigma: 1.0,
            beta: 1.0,
            c_grid: CGrid { log_min: -1.0, log_max: 1.0, count: 11 },
            centers: CentersSpec::Grid { per_axis: 9 },
            target: TargetSpec::Sinc,
            eval_points: 200,
            precision: PrecisionPolicy::extended(128).unwrap(),
            prefactor: Eq12Prefactor::Printed,
        }
    }

    #[test]
    fn c_grid_values() {
        let v = CGrid { log_min: -1.0, log_max: 1.0, count: 3 }.values().unwrap();
        assert_relative_eq!(v[0], 0.1, max_relative = 1e-15);
        assert_relative_eq!(v[1], 1.0, max_relative = 1e-15);
        assert_relative_eq!(v[2], 10.0, max_relative = 1e-15);
        assert!(CGrid { log_min: 0.0, log_max: 1.0, count: 1 }.values().is_err());
        assert!(CGrid { log_min: 1.0, log_max: 1.0, count: 4 }.values().is_err());
    }

    #[test]
    fn sweep_rows_are_complete_and_ordered() {
        let rows = run_sweep(&sweep_cfg()).unwrap();
        assert_eq!(rows.len(), 11);
        for (r, c) in rows.iter().zip(sweep_cfg().c_grid.values().unwrap()) {
            assert_eq!(r.c, c);
            assert!(r.max_err.is_finite() && r.rms_err <= r.max_err, "{r:?}");
            assert_relative_eq!(r.delta, 1.0 / 16.0, max_relative = 1e-15);
        }
        assert_eq!(rows, run_sweep(&sweep_cfg()).unwrap());
    }

    #[test]
    fn machine_sweep_keeps_ill_conditioned_rows() {
        let mut cfg = sweep_cfg();
        cfg.precision = PrecisionPolicy::Machine;
        cfg.c_grid = CGrid { log_min: 0.0, log_max: 4.0, count: 5 };
        let rows = run_sweep(&cfg).unwrap();
        assert_eq!(rows.len(), 5);
        let last = rows.last().unwrap();
        assert!(last.failure.is_some() && last.max_err.is_nan() && last.cond_estimate > 1e15);
    }

    #[test]
    fn verify_reports_precondition() {
        let cfg = VerifyConfig {
            n: 1,
            b0: 8.0,
            sigma: 1.0,
            beta: 1.0,
            c: 1.0,
            centers: CentersSpec::Grid { per_axis: 9 },
            target: TargetSpec::Sinc,
            eval_points: 50,
            precision: PrecisionPolicy::extended(128).unwrap(),
            prefactor: Eq12Prefactor::Printed,
        };
        let r = verify_bound(&cfg).unwrap();
        assert_eq!(r.verdict, Verdict::PreconditionViolated);
        assert!(r.empirical_max_err.is_none());
        assert_eq!(r.verdict.to_string(), "precondition violated");
    }

    #[test]
    fn explicit_centers_fill_distance() {
        let cube = Cube::origin(1, 1.0).unwrap();
        let spec = CentersSpec::Points { points: vec![vec![0.0], vec![0.4], vec![1.0]] };
        let set = spec.build(&cube).unwrap();
        let d = centers_fill_distance(&spec, &set).unwrap();
        assert!((0.3..0.3 + 1e-4).contains(&d), "{d}");
    }

    #[test]
    fn spearman_oracle() {
        assert_relative_eq!(spearman(&[1.0, 2.0, 3.0], &[10.0, 20.0, 30.0]), 1.0);
        assert_relative_eq!(spearman(&[1.0, 2.0, 3.0], &[3.0, 2.0, 1.0]), -1.0);
        // Hand-computed: ranks (1,2,3,4) vs (2,1,4,3), d² = 4, ρ = 1 − 6·4/(4·15) = 0.6.
        assert_relative_eq!(spearman(&[1.0, 2.0, 3.0, 4.0], &[5.0, 1.0, 9.0, 7.0]), 0.6, max_relative = 1e-12);
    }
}
