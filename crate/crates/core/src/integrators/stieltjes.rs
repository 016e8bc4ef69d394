//! Constant-δ Riemann–Stieltjes integration over families of uniform grids.

use std::fmt;
use std::str::FromStr;

use crate::division::{make_uniform, riemann_sum_with, uniform_cuts, TagRule};
use crate::error::{Error, Result};
use crate::integrators::ConvergenceController;
use crate::model::{BurkillIntegrand, IntegralResult, TaggedDivision};
use crate::scalar::Scalar;

/// A family of divisions indexed by cell count.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GridStrategy {
    /// `n` equal cells tagged at their left endpoints.
    RationalLeft,
    /// `n` equal cells tagged at their midpoints.
    RationalMid,
    /// `n` equal cells tagged at their right endpoints.
    RationalRight,
    /// Cut points `a + (b − a)(j + θ)/n`, `j = 0..n`, with `θ = (√2 − 1)/2`,
    /// giving `n + 1` cells tagged at their left endpoints. For rational
    /// `a`, `b` every interior cut point is irrational.
    IrrationalLeft,
}

impl GridStrategy {
    pub const DEFAULT: [GridStrategy; 3] = [
        GridStrategy::RationalLeft,
        GridStrategy::RationalMid,
        GridStrategy::IrrationalLeft,
    ];

    pub fn name(self) -> &'static str {
        match self {
            GridStrategy::RationalLeft => "rational-left",
            GridStrategy::RationalMid => "rational-mid",
            GridStrategy::RationalRight => "rational-right",
            GridStrategy::IrrationalLeft => "irrational-left",
        }
    }

    pub fn division<S: Scalar>(self, a: &S, b: &S, n: usize) -> Result<TaggedDivision<S>> {
        match self {
            GridStrategy::RationalLeft => make_uniform(a.clone(), b.clone(), n, &TagRule::Left),
            GridStrategy::RationalMid => make_uniform(a.clone(), b.clone(), n, &TagRule::Midpoint),
            GridStrategy::RationalRight => make_uniform(a.clone(), b.clone(), n, &TagRule::Right),
            GridStrategy::IrrationalLeft => {
                if n == 0 || a >= b {
                    return Err(Error::InvalidArgument(format!(
                        "bad grid: n = {n} on [{a}, {b}]"
                    )));
                }
                let width = b.clone() - a.clone();
                let shift = (width.clone() * S::irrational_offset()).mul_ratio(1, n as u64);
                let mut cuts = vec![a.clone()];
                cuts.extend(uniform_cuts(a, b, n)[..n].iter().map(|t| t.clone() + shift.clone()));
                cuts.push(b.clone());
                let tags = cuts[..cuts.len() - 1].to_vec();
                TaggedDivision::from_cuts(&cuts, tags)
            }
        }
    }
}

impl fmt::Display for GridStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GridStrategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        [
            GridStrategy::RationalLeft,
            GridStrategy::RationalMid,
            GridStrategy::RationalRight,
            GridStrategy::IrrationalLeft,
        ]
        .into_iter()
        .find(|g| g.name() == s)
        .ok_or_else(|| Error::InvalidArgument(format!("unknown grid strategy `{s}`")))
    }
}

/// Constant-δ Riemann–Stieltjes integration of `h` on `[a, b]`.
///
/// Each level `n = schedule.cells(level)` sums `h` over every grid strategy of
/// the controller; the controller classifies the resulting trace.
pub fn rs_integrate<S: Scalar>(
    h: &BurkillIntegrand<S>,
    a: S,
    b: S,
    ctrl: &ConvergenceController,
) -> Result<IntegralResult<S>> {
    if ctrl.grids.is_empty() {
        return Err(Error::InvalidArgument("no grid strategies".into()));
    }
    if a >= b {
        return Err(Error::InvalidArgument(format!("need a < b, got [{a}, {b}]")));
    }
    ctrl.run(|level| {
        let n = ctrl.schedule.cells(level);
        let mut sums = Vec::with_capacity(ctrl.grids.len());
        let mut counts = Vec::with_capacity(ctrl.grids.len());
        for grid in &ctrl.grids {
            let d = grid.division(&a, &b, n)?;
            counts.push(d.len());
            sums.push(riemann_sum_with(h, &d, ctrl.compensated)?);
        }
        Ok((sums, counts))
    })
}

/// Raw per-strategy sums at one level.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbeRow<S> {
    pub level: u32,
    pub sums: Vec<S>,
    /// `max − min` over the strategies.
    pub spread: S,
}

/// Per-strategy Riemann sums of `h` on grids of `2^level` cells, unclassified.
pub fn oscillation_probe<S: Scalar>(
    h: &BurkillIntegrand<S>,
    a: S,
    b: S,
    strategies: &[GridStrategy],
    levels: impl IntoIterator<Item = u32>,
) -> Result<Vec<ProbeRow<S>>> {
    if strategies.len() < 2 {
        return Err(Error::InvalidArgument(
            "the probe compares at least two strategies".into(),
        ));
    }
    levels
        .into_iter()
        .map(|level| {
            let n = 1usize << level;
            let sums = strategies
                .iter()
                .map(|g| riemann_sum_with(h, &g.division(&a, &b, n)?, false))
                .collect::<Result<Vec<S>>>()?;
            let cmp = |x: &&S, y: &&S| x.partial_cmp(y).expect("comparable sums");
            let max = sums.iter().max_by(cmp).expect("non-empty").clone();
            let min = sums.iter().min_by(cmp).expect("non-empty").clone();
            Ok(ProbeRow {
                level,
                sums,
                spread: max - min,
            })
        })
        .collect()
}
