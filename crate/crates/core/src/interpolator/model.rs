use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use super::basis::{poly_basis, PolynomialBasis};
use super::centers::CenterSet;
use crate::error::{Error, Result};
use crate::kernel::KernelSpec;
use crate::linalg::{condition_estimate, norm2, numerical_rank, DenseMatrix};
use crate::numerics::{Ext, PrecisionPolicy, Real};

/// Relative pivot threshold for the unisolvency rank test.
const RANK_TOL: f64 = 1e-10;

/// Coefficients at the precision they were solved in.
#[derive(Clone, Debug)]
pub enum Coefficients {
    Machine(Vec<f64>),
    Extended(Vec<Ext>),
}

impl Coefficients {
    pub fn len(&self) -> usize {
        match self {
            Coefficients::Machine(v) => v.len(),
            Coefficients::Extended(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn to_f64(&self) -> Vec<f64> {
        match self {
            Coefficients::Machine(v) => v.clone(),
            Coefficients::Extended(v) => v.iter().map(Real::to_f64).collect(),
        }
    }
}

impl Serialize for Coefficients {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Coefficients::Machine(v) => v.serialize(serializer),
            Coefficients::Extended(v) => {
                let mut st = serializer.serialize_struct("Coefficients", 2)?;
                st.serialize_field("approx", &self.to_f64())?;
                let exact: Vec<String> = v.iter().map(Ext::to_decimal_string).collect();
                st.serialize_field("decimal", &exact)?;
                st.end()
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Diagnostics {
    /// 2-norm condition estimate of the saddle-point matrix.
    pub condition_estimate: f64,
    /// `‖M z − rhs‖₂` at working precision.
    pub residual_norm: f64,
    /// `|Σᵢ cᵢ pⱼ(xᵢ)|` for each basis element.
    pub moment_residuals: Vec<f64>,
    /// `maxⱼ Σᵢ |cᵢ pⱼ(xᵢ)|`, the natural size of the moment sums.
    pub moment_scale: f64,
    /// `maxᵢ |f(xᵢ)|`.
    pub value_scale: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct InterpolationModel {
    pub spec: KernelSpec,
    pub centers: CenterSet,
    pub basis: PolynomialBasis,
    pub kernel_coeffs: Coefficients,
    pub poly_coeffs: Coefficients,
    pub precision: PrecisionPolicy,
    pub diagnostics: Diagnostics,
}

fn lift<T: Real>(x: &[f64], ctx: T::Ctx) -> Vec<T> {
    x.iter().map(|v| T::from_f64(*v, ctx)).collect()
}

/// The saddle-point system `[[A, P], [Pᵀ, 0]] (c, b) = (f, 0)` with
/// `A_{ji} = h(x_j − x_i)` and `P_{ji} = p_i(x_j)`.
pub fn assemble_system<T: Real>(
    spec: &KernelSpec,
    centers: &CenterSet,
    values: &[f64],
    ctx: T::Ctx,
) -> Result<(DenseMatrix<T>, Vec<T>)> {
    let n_pts = centers.len();
    if values.len() != n_pts {
        return Err(Error::InvalidInput(format!("{} values for {n_pts} centers", values.len())));
    }
    let basis = poly_basis(centers.n, spec.m);
    let q = basis.len();
    let size = n_pts + q;
    let pts: Vec<Vec<T>> = centers.points.iter().map(|p| lift(p, ctx)).collect();
    let mut mat = DenseMatrix::zeros(size, size, ctx);
    for j in 0..n_pts {
        mat.set(j, j, spec.eval_sq(&T::zero(ctx)));
        for i in 0..j {
            let h = spec.eval_between(&pts[j], &pts[i]);
            mat.set(j, i, h.clone());
            mat.set(i, j, h);
        }
        for (k, p) in basis.eval(&pts[j]).into_iter().enumerate() {
            mat.set(j, n_pts + k, p.clone());
            mat.set(n_pts + k, j, p);
        }
    }
    let mut rhs = lift(values, ctx);
    rhs.resize(size, T::zero(ctx));
    Ok((mat, rhs))
}

/// Rank of `P` evaluated on the centers mapped affinely onto `[−1, 1]^n`.
/// Affine maps preserve `P_{m−1}`, so this decides unisolvency without the
/// scaling of raw monomials far from the origin.
pub fn polynomial_rank(centers: &CenterSet, m: u32) -> (usize, usize) {
    let basis = poly_basis(centers.n, m);
    let q = basis.len();
    if q == 0 {
        return (0, 0);
    }
    let half = 0.5 * centers.cube.side;
    let rows: Vec<Vec<f64>> = centers
        .points
        .iter()
        .map(|p| {
            let u: Vec<f64> = p.iter().zip(&centers.cube.corner).map(|(x, a)| (x - a - half) / half).collect();
            basis.eval(&u)
        })
        .collect();
    (numerical_rank(&DenseMatrix::from_rows(&rows), RANK_TOL), q)
}

/// Condition estimate of the interpolation matrix at the given precision.
pub fn system_condition(spec: &KernelSpec, centers: &CenterSet, policy: PrecisionPolicy) -> Result<f64> {
    let zeros = vec![0.0; centers.len()];
    Ok(match policy {
        PrecisionPolicy::Machine => condition_estimate(&assemble_system::<f64>(spec, centers, &zeros, ())?.0),
        PrecisionPolicy::Extended { bits } => {
            condition_estimate(&assemble_system::<Ext>(spec, centers, &zeros, bits as usize)?.0)
        }
    })
}

struct Solved<T> {
    kernel: Vec<T>,
    poly: Vec<T>,
    diagnostics: Diagnostics,
}

fn solve_in<T: Real>(spec: &KernelSpec, centers: &CenterSet, values: &[f64], ctx: T::Ctx) -> Result<Solved<T>> {
    let (mat, rhs) = assemble_system::<T>(spec, centers, values, ctx)?;
    let condition = condition_estimate(&mat);
    if !condition.is_finite() || condition * T::unit_roundoff(ctx) > 0.5 {
        return Err(Error::IllConditioned { condition });
    }
    let lu = mat.lu().ok_or(Error::IllConditioned { condition: f64::INFINITY })?;
    let z = lu.solve(&rhs);
    let r: Vec<T> = mat.matvec(&z).iter().zip(&rhs).map(|(a, b)| a.sub(b)).collect();
    let residual_norm = norm2(&r).to_f64();

    let n_pts = centers.len();
    let (kernel, poly) = (z[..n_pts].to_vec(), z[n_pts..].to_vec());
    let basis = poly_basis(centers.n, spec.m);
    let mut moment_residuals = vec![T::zero(ctx); basis.len()];
    let mut moment_scale = vec![0.0f64; basis.len()];
    for (p, ci) in centers.points.iter().zip(&kernel) {
        for (k, v) in basis.eval(&lift::<T>(p, ctx)).iter().enumerate() {
            let t = ci.mul(v);
            moment_scale[k] += t.to_f64().abs();
            moment_residuals[k] = moment_residuals[k].add(&t);
        }
    }
    let diagnostics = Diagnostics {
        condition_estimate: condition,
        residual_norm,
        moment_residuals: moment_residuals.iter().map(|v| v.to_f64().abs()).collect(),
        moment_scale: moment_scale.into_iter().fold(0.0, f64::max),
        value_scale: values.iter().fold(0.0f64, |a, v| a.max(v.abs())),
    };
    Ok(Solved { kernel, poly, diagnostics })
}

/// Solves the augmented interpolation system at the requested precision.
///
/// Fails with [`Error::RankDeficient`] when the centers are not
/// `P_{m−1}`-unisolvent, and with [`Error::IllConditioned`] when the
/// condition estimate times the unit roundoff exceeds one half.
pub fn solve_interpolant(
    spec: &KernelSpec,
    centers: &CenterSet,
    values: &[f64],
    policy: PrecisionPolicy,
) -> Result<InterpolationModel> {
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidInput("data values must be finite".into()));
    }
    let (rank, q) = polynomial_rank(centers, spec.m);
    if rank < q {
        return Err(Error::RankDeficient { rank, expected: q });
    }
    let basis = poly_basis(centers.n, spec.m);
    let (kernel_coeffs, poly_coeffs, diagnostics) = match policy {
        PrecisionPolicy::Machine => {
            let s = solve_in::<f64>(spec, centers, values, ())?;
            (Coefficients::Machine(s.kernel), Coefficients::Machine(s.poly), s.diagnostics)
        }
        PrecisionPolicy::Extended { bits } => {
            let s = solve_in::<Ext>(spec, centers, values, bits as usize)?;
            (Coefficients::Extended(s.kernel), Coefficients::Extended(s.poly), s.diagnostics)
        }
    };
    Ok(InterpolationModel {
        spec: spec.clone(),
        centers: centers.clone(),
        basis,
        kernel_coeffs,
        poly_coeffs,
        precision: policy,
        diagnostics,
    })
}

fn evaluate_in<T: Real>(model: &InterpolationModel, kernel: &[T], poly: &[T], x: &[f64]) -> f64 {
    let ctx = kernel.first().or(poly.first()).expect("model has coefficients").ctx();
    let xt = lift::<T>(x, ctx);
    let mut acc = T::zero(ctx);
    for (p, ci) in model.centers.points.iter().zip(kernel) {
        acc = acc.add(&ci.mul(&model.spec.eval_between(&xt, &lift::<T>(p, ctx))));
    }
    for (b, v) in poly.iter().zip(model.basis.eval(&xt)) {
        acc = acc.add(&b.mul(&v));
    }
    acc.to_f64()
}

/// `s(x) = Σ cᵢ h(x − xᵢ) + Σ bⱼ pⱼ(x)`, summed at the model's precision.
pub fn evaluate(model: &InterpolationModel, x: &[f64]) -> f64 {
    match (&model.kernel_coeffs, &model.poly_coeffs) {
        (Coefficients::Machine(k), Coefficients::Machine(p)) => evaluate_in(model, k, p, x),
        (Coefficients::Extended(k), Coefficients::Extended(p)) => evaluate_in(model, k, p, x),
        _ => unreachable!("coefficient blocks share one precision"),
    }
}

impl InterpolationModel {
    pub fn evaluate(&self, x: &[f64]) -> f64 {
        evaluate(self, x)
    }

    /// Largest moment sum relative to its natural scale.
    pub fn relative_moment_residual(&self) -> f64 {
        let worst = self.diagnostics.moment_residuals.iter().fold(0.0f64, |a, v| a.max(*v));
        if worst == 0.0 {
            0.0
        } else {
            worst / self.diagnostics.moment_scale.max(f64::MIN_POSITIVE)
        }
    }
}
