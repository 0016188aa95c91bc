//! Numerical core of the fractional Hardy laboratory: special functions, the closed-form
//! constants of `(−Δ)^s u − λu/|x|^{2s} = f`, the radial reduction of the fractional
//! Laplacian, and a Galerkin solver for radial problems on the unit ball.

// Parameter checks are written as !(x > a) so that NaN fails them.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod assembly;
pub mod error;
pub mod experiments;
pub mod grid;
pub mod kernel;
pub mod operator;
mod pairs;
mod parallel;
pub mod params;
pub mod profile;
pub mod quadrature;
pub mod semilinear;
pub mod solve;
pub mod specfun;
mod timing;

pub use assembly::{assemble, DiscreteOperator, HardyLevel};
pub use error::{Error, Result};
pub use experiments::{comparison_check, ground_state_quotient, harnack_quotient, summability_experiment, LambdaMode};
pub use grid::{fit_blowup, lq_norm, RadialField, RadialGrid};
pub use kernel::{angular_kernel_value, AngularKernel, ExteriorTail};
pub use operator::{apply_pointwise, folded_bracket, gagliardo_seminorm, hardy_quotient, weighted_forms};
pub use params::{FracParams, HardyCoupling};
pub use profile::{RadialFunction, SampledProfile};
pub use semilinear::{doubling_levels, semilinear_weighted_probe, solve_semilinear, SemilinearReport};
pub use solve::{
    existence_probe, iterate_linear, solve_linear_direct, solve_linear_iterative, truncation_energies, Finding,
    IterativeOptions, Schedule, SolveReport, Verdict,
};
