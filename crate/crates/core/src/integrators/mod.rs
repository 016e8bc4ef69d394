//! The integral definitions: Darboux–Riemann, constant-δ Riemann–Stieltjes,
//! gauge (Stieltjes-complete) and Lebesgue through its distribution function.

mod controller;
mod darboux;
mod gauge;
mod lebesgue;
mod stieltjes;

pub use controller::{ConvergenceController, Tolerance, Verdict};
pub use darboux::{darboux_riemann, ExtremaOracle};
pub use gauge::{
    constant_gauges, gauge_integrate, jump_gauges, singular_gauges, GaugeFamily,
};
pub use lebesgue::{lebesgue_distribution_integrate, DistributionFunction};
pub use stieltjes::{oscillation_probe, rs_integrate, GridStrategy, ProbeRow};
