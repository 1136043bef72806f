//! Augmented interpolation `s(x) = Σ cᵢ h(x − xᵢ) + p(x)` with moment
//! conditions `Σ cᵢ q(xᵢ) = 0` for every `q ∈ P_{m−1}`.

mod basis;
mod centers;
mod model;

pub use crate::linalg::condition_estimate;
pub use basis::{poly_basis, PolynomialBasis};
pub use centers::{fill_distance, CenterSet, Cube, FillDistance};
pub use model::{
    assemble_system, evaluate, polynomial_rank, solve_interpolant, system_condition, Coefficients, Diagnostics,
    InterpolationModel,
};
