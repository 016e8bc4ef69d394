//! Riemann, Riemann–Stieltjes, gauge and Lebesgue integrals computed over
//! explicit tagged divisions, plus pathwise sums over dyadic Brownian paths.
//!
//! ```
//! use gaugelab::integrators::{gauge_integrate, ConvergenceController};
//! use gaugelab::model::{length, make_integrand, point_fn, Convention, Status};
//!
//! let h = make_integrand("s^2 |I|", Some(point_fn(|s: &f64| s * s)), length(), Convention::Tag).unwrap();
//! let ctrl = ConvergenceController::default().with_tolerance(1e-8);
//! let r = gauge_integrate(&h, 0.0, 1.0, &ctrl, None).unwrap();
//! assert_eq!(r.status, Status::Converged);
//! assert!((r.estimate.unwrap() - 1.0 / 3.0).abs() < 1e-8);
//! ```

pub mod catalog;
pub mod division;
pub mod error;
pub mod expr;
pub mod integrators;
pub mod model;
pub mod scalar;
pub mod stochastic;

pub use error::{Error, Result};
pub use expr::{Expression, ParseError};
pub use model::{IntegralResult, Status};
pub use scalar::{QuadExt, Scalar, ScalarRegime};

/// Crate version, echoed in run metadata.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
