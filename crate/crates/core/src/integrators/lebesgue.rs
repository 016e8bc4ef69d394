//! The Lebesgue integral as `∫_c^d u dg(u)` for the distribution function
//! `g(u) = μ(k⁻¹([c, u]))`.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::integrators::{gauge_integrate, jump_gauges, rs_integrate, ConvergenceController};
use crate::model::{increments_of, make_integrand, point_fn, Convention, IntegralResult, Status};

/// Grid size of the monotonicity spot-check.
const SPOT_CHECKS: usize = 1024;

/// A non-decreasing function on `[c, d]` with optional declared jumps
/// `(point, mass)`.
///
/// `g(c)` is the mass sitting at `c` itself: since `g(u)` counts `[c, u]`,
/// the atom at `c` is not an increment over any cell of `]c, d]` and is
/// added separately by the integrator.
#[derive(Clone)]
pub struct DistributionFunction {
    name: String,
    c: f64,
    d: f64,
    g: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    jumps: Vec<(f64, f64)>,
}

impl DistributionFunction {
    pub fn new(
        name: impl Into<String>,
        c: f64,
        d: f64,
        g: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Result<Self> {
        Self::with_jumps(name, c, d, g, Vec::new())
    }

    pub fn with_jumps(
        name: impl Into<String>,
        c: f64,
        d: f64,
        g: impl Fn(f64) -> f64 + Send + Sync + 'static,
        jumps: Vec<(f64, f64)>,
    ) -> Result<Self> {
        if !(c < d) {
            return Err(Error::InvalidArgument(format!("need c < d, got [{c}, {d}]")));
        }
        let dist = DistributionFunction {
            name: name.into(),
            c,
            d,
            g: Arc::new(g),
            jumps,
        };
        for &(p, mass) in &dist.jumps {
            if !(c <= p && p <= d) || !(mass > 0.0) {
                return Err(Error::InvalidArgument(format!(
                    "jump ({p}, {mass}) outside [{c}, {d}] or not positive"
                )));
            }
        }
        dist.check_monotone()?;
        Ok(dist)
    }

    /// Piecewise-constant distribution of a finite set of point masses.
    pub fn point_masses(name: impl Into<String>, c: f64, d: f64, masses: Vec<(f64, f64)>) -> Result<Self> {
        let atoms = masses.clone();
        let g = move |u: f64| {
            atoms
                .iter()
                .filter(|(p, _)| *p <= u)
                .map(|(_, m)| m)
                .sum::<f64>()
        };
        Self::with_jumps(name, c, d, g, masses)
    }

    fn check_monotone(&self) -> Result<()> {
        let mut points: Vec<f64> = (0..=SPOT_CHECKS)
            .map(|j| self.c + (self.d - self.c) * j as f64 / SPOT_CHECKS as f64)
            .collect();
        points.extend(self.jumps.iter().map(|j| j.0));
        points.sort_by(f64::total_cmp);
        let mut prev: Option<(f64, f64)> = None;
        for u in points {
            let g = self.eval(u);
            if !g.is_finite() {
                return Err(Error::InvalidArgument(format!("g({u}) = {g} is not finite")));
            }
            if let Some((u1, g1)) = prev {
                if g < g1 {
                    return Err(Error::NotMonotone { u1, g1, u2: u, g2: g });
                }
            }
            prev = Some((u, g));
        }
        Ok(())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.c, self.d)
    }

    pub fn jumps(&self) -> &[(f64, f64)] {
        &self.jumps
    }

    pub fn eval(&self, u: f64) -> f64 {
        (self.g)(u)
    }
}

impl fmt::Debug for DistributionFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DistributionFunction")
            .field("name", &self.name)
            .field("domain", &(self.c, self.d))
            .field("jumps", &self.jumps)
            .finish()
    }
}

/// `∫_{[c,d]} u dμ = c·g(c) + ∫_{]c,d]} u·g(I)`.
///
/// Runs the constant-δ integrator on `u·g(I)`; when that is inconclusive and
/// the distribution declares jumps, reruns with jump-anchoring gauges.
pub fn lebesgue_distribution_integrate(
    g: &DistributionFunction,
    ctrl: &ConvergenceController,
) -> Result<IntegralResult> {
    let (c, d) = g.domain();
    let dist = g.clone();
    let increments = increments_of(point_fn(move |u: &f64| dist.eval(*u)));
    let h = make_integrand(
        format!("u dg[{}]", g.name()),
        Some(point_fn(|u: &f64| *u)),
        increments,
        Convention::Tag,
    )?;
    let mut result = rs_integrate(&h, c, d, ctrl)?;
    if result.status == Status::Inconclusive && !g.jumps().is_empty() {
        let family = jump_gauges(c, d, g.jumps().iter().map(|j| j.0).collect());
        result = gauge_integrate(&h, c, d, ctrl, Some(&family))?;
    }
    let atom = c * g.eval(c);
    if atom != 0.0 {
        for e in &mut result.trace {
            e.sums.iter_mut().for_each(|s| *s += atom);
        }
        result.final_sums.iter_mut().for_each(|s| *s += atom);
        result.estimate = result.estimate.map(|x| x + atom);
    }
    Ok(result)
}
