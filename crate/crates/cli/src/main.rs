mod config;
mod table;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use mqshape_core::advisor::{advise, AdvisorInputs, Mode, Thresholds};
use mqshape_core::bounds::{
    bandlimited_error_bound, native_error_bound, norm_bound_neg_beta, norm_bound_pos_beta, special_error_bound,
    special_norm_terms, Eq12Prefactor, ProblemSetting,
};
use mqshape_core::constants::{c_floor, gamma_seq, gamma_seq_log, rho_delta0, theorem_constants};
use mqshape_core::experiment::{run_sweep, verify_bound, CGrid, CentersSpec, SweepConfig, TargetSpec, Verdict, VerifyConfig};
use mqshape_core::interpolator::{solve_interpolant, CenterSet, Cube};
use mqshape_core::kernel::KernelSpec;
use mqshape_core::numerics::{LogScalar, PrecisionPolicy, DEFAULT_EXTENDED_BITS};
use mqshape_core::Error;

const PRECISION_ENV: &str = "MQSHAPE_PRECISION_BITS";

#[derive(Parser)]
#[command(name = "mqshape", version, about = "Shape-parameter advice and error bounds for multiquadric interpolation")]
struct Cli {
    /// Flat `key = value` file supplying defaults for any long flag.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Recommend a shape parameter c.
    Advise(AdviseArgs),
    /// Print gamma_n, rho, Delta0 and the theorem constants.
    Constants(ConstantsArgs),
    /// Evaluate one of the error or norm bounds.
    Bound(BoundArgs),
    /// Solve an interpolation problem from a centers CSV.
    Interpolate(InterpolateArgs),
    /// Sweep c over a log grid and tabulate errors, conditioning and bounds.
    Sweep(SweepArgs),
    /// Check the applicable error bound against a measured interpolation error.
    VerifyBound(VerifyArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Practical,
    FixedB0,
    UnfixedB0,
}

#[derive(Clone, Copy, ValueEnum)]
enum PrefactorArg {
    Printed,
    Recombined,
}

impl From<PrefactorArg> for Eq12Prefactor {
    fn from(p: PrefactorArg) -> Self {
        match p {
            PrefactorArg::Printed => Eq12Prefactor::Printed,
            PrefactorArg::Recombined => Eq12Prefactor::Recombined,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum PrecisionArg {
    Machine,
    Extended,
}

#[derive(Clone, Copy, ValueEnum)]
enum TargetArg {
    Sinc,
    Mixture,
}

#[derive(Clone, Copy, ValueEnum)]
enum EqArg {
    #[value(name = "6")]
    Native,
    #[value(name = "7")]
    NormPos,
    #[value(name = "8")]
    NormNeg,
    #[value(name = "9")]
    Bandlimited,
    #[value(name = "12")]
    Special,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Args)]
struct AdviseArgs {
    #[arg(long, value_enum, default_value = "practical")]
    mode: ModeArg,
    #[arg(long)]
    n: usize,
    #[arg(long, allow_hyphen_values = true)]
    beta: f64,
    #[arg(long)]
    sigma: f64,
    #[arg(long)]
    delta: f64,
    /// Cube side; required except in unfixed-b0 mode.
    #[arg(long)]
    b0: Option<f64>,
    /// Threshold for "delta very small" (default b0/800).
    #[arg(long)]
    delta_very_small: Option<f64>,
    /// c returned when larger c is better (default 1e6 times the floor).
    #[arg(long)]
    c_cap: Option<f64>,
}

#[derive(Args)]
struct ConstantsArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, allow_hyphen_values = true)]
    beta: Option<f64>,
    #[arg(long)]
    b0: Option<f64>,
    #[arg(long)]
    c: Option<f64>,
    /// Fill distance; adds the feasibility floor for c.
    #[arg(long)]
    delta: Option<f64>,
}

#[derive(Args)]
struct BoundArgs {
    #[arg(long, value_enum)]
    eq: EqArg,
    #[arg(long)]
    n: usize,
    #[arg(long, allow_hyphen_values = true)]
    beta: f64,
    #[arg(long)]
    sigma: f64,
    #[arg(long)]
    c: f64,
    #[arg(long)]
    b0: f64,
    #[arg(long)]
    delta: f64,
    /// L2 norm of the target (bounds 7, 8, 9).
    #[arg(long)]
    l2: Option<f64>,
    /// Native-space norm of the target (bound 6).
    #[arg(long)]
    norm: Option<f64>,
    /// Spectrum used by bound 12.
    #[arg(long, value_enum, default_value = "sinc")]
    target: TargetArg,
    #[arg(long, default_value_t = 3)]
    k: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value = "printed")]
    eq12_prefactor: PrefactorArg,
}

#[derive(Args)]
struct InterpolateArgs {
    /// CSV with columns x1..xn[,f].
    #[arg(long)]
    centers: PathBuf,
    #[arg(long, allow_hyphen_values = true)]
    beta: f64,
    #[arg(long)]
    c: f64,
    /// Dimension, when the CSV has no header.
    #[arg(long)]
    n: Option<usize>,
    /// Take data values from a band-limited target instead of an f column.
    #[arg(long, value_enum)]
    target: Option<TargetArg>,
    #[arg(long, default_value_t = 1.0)]
    sigma: f64,
    #[arg(long, default_value_t = 3)]
    k: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value = "extended")]
    precision: PrecisionArg,
    /// Write the model JSON here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// CSV of points at which to evaluate the interpolant.
    #[arg(long)]
    eval: Option<PathBuf>,
    /// Destination of the evaluations CSV (stdout when absent).
    #[arg(long)]
    eval_out: Option<PathBuf>,
}

#[derive(Args)]
struct ProblemArgs {
    #[arg(long, default_value_t = 1)]
    n: usize,
    #[arg(long, allow_hyphen_values = true)]
    beta: f64,
    #[arg(long)]
    sigma: f64,
    #[arg(long)]
    b0: f64,
    /// Equispaced centers per axis, faces included.
    #[arg(long, conflicts_with = "centers")]
    grid: Option<usize>,
    /// CSV of centers inside [0, b0]^n (columns x1..xn[,f]; f is ignored).
    #[arg(long)]
    centers: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "sinc")]
    target: TargetArg,
    #[arg(long, default_value_t = 3)]
    k: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value = "extended")]
    precision: PrecisionArg,
    #[arg(long, value_enum, default_value = "printed")]
    eq12_prefactor: PrefactorArg,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    problem: ProblemArgs,
    #[arg(long, allow_hyphen_values = true)]
    log_c_min: f64,
    #[arg(long, allow_hyphen_values = true)]
    log_c_max: f64,
    #[arg(long, default_value_t = 10)]
    count: usize,
    /// Error-grid nodes per axis.
    #[arg(long, default_value_t = 200)]
    eval_points: usize,
    #[arg(long, value_enum, default_value = "csv")]
    format: FormatArg,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    problem: ProblemArgs,
    #[arg(long)]
    c: f64,
    #[arg(long, default_value_t = 1000)]
    eval_points: usize,
}

/// Failure classes, mapped to exit codes.
enum Failure {
    Usage(anyhow::Error),
    Domain(anyhow::Error),
    Numeric(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        match e.downcast_ref::<Error>() {
            Some(core) if core.is_domain() => Failure::Domain(e),
            Some(_) => Failure::Numeric(e),
            None => Failure::Usage(e),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::from(anyhow::Error::new(e))
    }
}

type CmdResult = Result<(), Failure>;

fn precision_bits() -> anyhow::Result<u32> {
    match std::env::var(PRECISION_ENV) {
        Ok(v) => v.trim().parse().with_context(|| format!("{PRECISION_ENV} must be an integer, got {v:?}")),
        Err(_) => Ok(DEFAULT_EXTENDED_BITS),
    }
}

fn policy(p: PrecisionArg) -> Result<PrecisionPolicy, Failure> {
    match p {
        PrecisionArg::Machine => Ok(PrecisionPolicy::Machine),
        PrecisionArg::Extended => {
            let bits = precision_bits().map_err(Failure::Usage)?;
            PrecisionPolicy::extended(bits).map_err(|e| Failure::Usage(anyhow!(e)))
        }
    }
}

fn target_spec(t: TargetArg, k: usize, seed: u64) -> TargetSpec {
    match t {
        TargetArg::Sinc => TargetSpec::Sinc,
        TargetArg::Mixture => TargetSpec::Mixture { k, seed },
    }
}

fn output(path: Option<&Path>) -> anyhow::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p).with_context(|| format!("creating {}", p.display()))?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn print_json<T: serde::Serialize>(value: &T, path: Option<&Path>) -> anyhow::Result<()> {
    let mut w = output(path)?;
    serde_json::to_writer_pretty(&mut w, value)?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

fn cmd_advise(a: AdviseArgs) -> CmdResult {
    let mode = match a.mode {
        ModeArg::Practical => Mode::Practical,
        ModeArg::FixedB0 => Mode::FixedB0,
        ModeArg::UnfixedB0 => Mode::UnfixedB0,
    };
    let inputs = AdvisorInputs {
        n: a.n,
        beta: a.beta,
        sigma: a.sigma,
        delta: a.delta,
        b0: a.b0,
        thresholds: Thresholds {
            delta_very_small: a.delta_very_small,
            c_cap: a.c_cap.map(LogScalar::from_value),
        },
    };
    let advice = advise(mode, &inputs)?;
    print_json(&advice, None)?;
    Ok(())
}

fn cmd_constants(a: ConstantsArgs) -> CmdResult {
    let gamma = gamma_seq(a.n)?;
    let mut out = json!({
        "n": a.n,
        "gamma_n": gamma.to_string(),
        "ln_gamma_n": gamma_seq_log(a.n)?.ln_mag(),
    });
    if let Some(beta) = a.beta {
        out["smoothness"] = serde_json::to_value(rho_delta0(a.n, beta)?).map_err(anyhow::Error::from)?;
        if let (Some(b0), Some(c)) = (a.b0, a.c) {
            out["theorem"] = serde_json::to_value(theorem_constants(a.n, beta, b0, c)?).map_err(anyhow::Error::from)?;
        }
        if let Some(delta) = a.delta {
            out["c_floor"] = serde_json::to_value(c_floor(a.n, beta, delta)?).map_err(anyhow::Error::from)?;
        }
    }
    print_json(&out, None)?;
    Ok(())
}

fn cmd_bound(a: BoundArgs) -> CmdResult {
    let setting = ProblemSetting::new(a.n, a.b0, a.sigma, a.delta)?;
    let spec = KernelSpec::new(a.beta, a.c)?;
    let need = |v: Option<f64>, flag: &str| v.ok_or_else(|| Failure::Usage(anyhow!("--{flag} is required for this bound")));
    match a.eq {
        EqArg::Native => print_json(&native_error_bound(&setting, &spec, need(a.norm, "norm")?)?, None)?,
        EqArg::NormPos => {
            let v = norm_bound_pos_beta(&setting, &spec, need(a.l2, "l2")?)?;
            print_json(&json!({ "norm_bound": v }), None)?
        }
        EqArg::NormNeg => {
            let v = norm_bound_neg_beta(&setting, &spec, need(a.l2, "l2")?)?;
            print_json(&json!({ "norm_bound": v }), None)?
        }
        EqArg::Bandlimited => print_json(&bandlimited_error_bound(&setting, &spec, need(a.l2, "l2")?)?, None)?,
        EqArg::Special => {
            if !(a.n == 1 && a.beta == -1.0) {
                return Err(Error::WrongBranch("bound 12 needs n = 1 and beta = -1".into()).into());
            }
            let cube = Cube::origin(1, a.b0)?;
            let f = target_spec(a.target, a.k, a.seed).build(&cube, a.sigma)?;
            let terms = special_norm_terms(a.c, a.sigma, &f.spectral_density())?;
            let b = special_error_bound(&setting, a.c, terms, a.eq12_prefactor.into())?;
            print_json(&json!({ "a": terms.a, "b": terms.b, "bound": b }), None)?
        }
    }
    Ok(())
}

fn cmd_interpolate(a: InterpolateArgs) -> CmdResult {
    let t = table::read_numeric(&a.centers)?;
    let (points, values) = table::split_points(&t, a.n, a.target.is_none())?;
    let centers = CenterSet::with_bounding_cube(points)?;
    let values = match (a.target, values) {
        (Some(tg), _) => {
            let f = target_spec(tg, a.k, a.seed).build(&centers.cube, a.sigma)?;
            centers.points.iter().map(|p| f.eval(p)).collect()
        }
        (None, Some(v)) => v,
        (None, None) => return Err(Failure::Usage(anyhow!("centers file has no f column; pass --target"))),
    };
    let spec = KernelSpec::new(a.beta, a.c)?;
    let model = solve_interpolant(&spec, &centers, &values, policy(a.precision)?)?;
    let report = json!({
        "model": model,
        "relative_moment_residual": model.relative_moment_residual(),
    });
    print_json(&report, a.out.as_deref())?;
    if let Some(eval) = a.eval {
        let et = table::read_numeric(&eval)?;
        let (pts, _) = table::split_points(&et, Some(centers.n), false)?;
        let vals: Vec<f64> = pts.iter().map(|p| model.evaluate(p)).collect();
        table::write_evaluations(output(a.eval_out.as_deref())?, &pts, &vals)?;
    }
    Ok(())
}

fn centers_spec(p: &ProblemArgs) -> anyhow::Result<CentersSpec> {
    match (&p.grid, &p.centers) {
        (Some(per_axis), _) => Ok(CentersSpec::Grid { per_axis: *per_axis }),
        (None, Some(path)) => {
            let t = table::read_numeric(path)?;
            let (points, _) = table::split_points(&t, Some(p.n), false)?;
            Ok(CentersSpec::Points { points })
        }
        (None, None) => bail!("one of --grid or --centers is required"),
    }
}

fn cmd_sweep(a: SweepArgs) -> CmdResult {
    let p = &a.problem;
    let cfg = SweepConfig {
        n: p.n,
        b0: p.b0,
        sigma: p.sigma,
        beta: p.beta,
        c_grid: CGrid { log_min: a.log_c_min, log_max: a.log_c_max, count: a.count },
        centers: centers_spec(p)?,
        target: target_spec(p.target, p.k, p.seed),
        eval_points: a.eval_points,
        precision: policy(p.precision)?,
        prefactor: p.eq12_prefactor.into(),
    };
    let rows = run_sweep(&cfg)?;
    match a.format {
        FormatArg::Csv => table::write_sweep(output(a.out.as_deref())?, &rows)?,
        FormatArg::Json => print_json(&json!({ "config": cfg, "rows": rows }), a.out.as_deref())?,
    }
    Ok(())
}

fn cmd_verify(a: VerifyArgs) -> CmdResult {
    let p = &a.problem;
    let cfg = VerifyConfig {
        n: p.n,
        b0: p.b0,
        sigma: p.sigma,
        beta: p.beta,
        c: a.c,
        centers: centers_spec(p)?,
        target: target_spec(p.target, p.k, p.seed),
        eval_points: a.eval_points,
        precision: policy(p.precision)?,
        prefactor: p.eq12_prefactor.into(),
    };
    let report = verify_bound(&cfg)?;
    print_json(&report, None)?;
    match report.verdict {
        Verdict::Pass => {
            eprintln!("PASS: max error {:e} <= bound {}", report.empirical_max_err.unwrap_or(f64::NAN), report.bound.total);
            Ok(())
        }
        Verdict::Fail => Err(Failure::Numeric(anyhow!(
            "FAIL: max error {:e} exceeds bound {}",
            report.empirical_max_err.unwrap_or(f64::NAN),
            report.bound.total
        ))),
        Verdict::PreconditionViolated => Err(Failure::Domain(anyhow!(
            "precondition violated: fill distance {} exceeds delta0 = {}",
            report.delta,
            report.delta0
        ))),
    }
}

fn run(cli: Cli) -> CmdResult {
    match cli.command {
        Command::Advise(a) => cmd_advise(a),
        Command::Constants(a) => cmd_constants(a),
        Command::Bound(a) => cmd_bound(a),
        Command::Interpolate(a) => cmd_interpolate(a),
        Command::Sweep(a) => cmd_sweep(a),
        Command::VerifyBound(a) => cmd_verify(a),
    }
}

fn main() -> ExitCode {
    let args = match config::merge_args::<Cli>(std::env::args().collect()) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
    };
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
        Err(Failure::Domain(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(3)
        }
        Err(Failure::Numeric(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(4)
        }
    }
}
