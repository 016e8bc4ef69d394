//! Dyadic Brownian paths and pathwise stochastic sums.

mod mc;
mod path;
mod rng;
mod sums;

pub use mc::{mc_run, MonteCarlo, PathStatistics};
pub use path::{brownian_path, refine_path, DyadicPath, PathSource, MAX_PATH_LEVEL};
pub use rng::{GAUSSIAN_TRANSFORM, UNIFORM_SOURCE};
pub use sums::{
    increment_integral, ito_formula_residual, ito_formula_residual_time, ito_formula_residual_time_with,
    ito_identity_residual, ito_sum, quadratic_variation, stratonovich_sum, total_variation, PathFn, SecondOrder,
    TimePathFn,
};
