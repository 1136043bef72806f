//! Shape-parameter selection for generalized multiquadric interpolation.
//!
//! The crate evaluates the constants and error bounds for band-limited
//! targets, solves the augmented interpolation system at machine or extended
//! precision, and turns the bounds into advice for the shape parameter `c`.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]

pub mod advisor;
pub mod bandlimited;
pub mod bounds;
pub mod constants;
pub mod error;
pub mod experiment;
pub mod interpolator;
pub mod kernel;
pub mod linalg;
pub mod numerics;

pub use advisor::{
    advise, advise_practical, advise_theoretical_fixed, advise_theoretical_unfixed, AdviceKind, AdvisorInputs,
    Mode, ShapeAdvice, Thresholds,
};
pub use bandlimited::{make_random_mixture, make_shifted_mixture, make_sinc, BandLimitedFn, SpectralDensity};
pub use bounds::{
    applicable_error_bound, bandlimited_error_bound, native_error_bound, special_error_bound, BoundBreakdown,
    Eq12Prefactor, ProblemSetting,
};
pub use constants::{c_floor, gamma_seq, rho_delta0, theorem_constants, TheoremConstants};
pub use error::{Error, Result};
pub use experiment::{run_sweep, verify_bound, SweepConfig, SweepRow, VerifyConfig, VerifyReport};
pub use interpolator::{solve_interpolant, CenterSet, Cube, InterpolationModel};
pub use kernel::KernelSpec;
pub use numerics::{LogScalar, PrecisionPolicy};
