//! Classification of refinement traces.
//!
//! A finite probe cannot range over every division, so each level evaluates a
//! list of strategies and the verdict is read off a window of `W` consecutive
//! levels:
//!
//! * converged: every strategy agrees within tolerance and moved by at most
//!   the tolerance between consecutive levels of the window;
//! * oscillating: every strategy is stable, yet the cross-strategy spread is
//!   at least the gap at every level of the window;
//! * diverged: one strategy's magnitude grew by the growth factor between
//!   every pair of consecutive levels of the window (or a sum is not finite).
//!
//! Anything else is inconclusive once the schedule is exhausted.

use crate::division::{RefinementSchedule, TagSelector, DEFAULT_MAX_DEPTH};
use crate::error::{Error, Result};
use crate::integrators::GridStrategy;
use crate::model::{IntegralResult, Status, TraceEntry};
use crate::scalar::Scalar;

/// Absolute plus relative tolerance: `|d| ≤ abs + rel·scale`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
}

impl Tolerance {
    pub fn absolute(abs: f64) -> Self {
        Tolerance { abs, rel: 0.0 }
    }

    pub fn admits(&self, diff: f64, scale: f64) -> bool {
        diff.abs() <= self.abs + self.rel * scale.abs()
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            abs: 1e-9,
            rel: 1e-9,
        }
    }
}

#[derive(Debug, Clone)]
pub struct ConvergenceController {
    pub tolerance: Tolerance,
    /// Stability window `W`, in levels.
    pub window: usize,
    /// Divergence growth factor `G`.
    pub growth: f64,
    /// Oscillation gap `γ`.
    pub gap: f64,
    pub schedule: RefinementSchedule,
    /// Grid families probed by the constant-δ integrators.
    pub grids: Vec<GridStrategy>,
    /// Tag selectors probed by the gauge integrator.
    pub selectors: Vec<TagSelector>,
    pub compensated: bool,
    pub max_depth: usize,
}

impl Default for ConvergenceController {
    fn default() -> Self {
        ConvergenceController {
            tolerance: Tolerance::default(),
            window: 3,
            growth: 1.5,
            gap: 1e-3,
            schedule: RefinementSchedule::default(),
            grids: GridStrategy::DEFAULT.to_vec(),
            selectors: vec![TagSelector::standard(), TagSelector::reversed()],
            compensated: false,
            max_depth: DEFAULT_MAX_DEPTH,
        }
    }
}

/// A verdict and the first level of the window that produced it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Verdict {
    pub status: Status,
    pub stable_from: u32,
}

impl ConvergenceController {
    pub fn with_tolerance(mut self, abs: f64) -> Self {
        self.tolerance = Tolerance::absolute(abs);
        self
    }

    pub fn with_schedule(mut self, schedule: RefinementSchedule) -> Self {
        self.schedule = schedule;
        self
    }

    pub fn with_levels(mut self, initial: u32, max: u32) -> Result<Self> {
        self.schedule = RefinementSchedule::new(initial, max)?;
        Ok(self)
    }

    pub fn with_window(mut self, window: usize) -> Self {
        self.window = window;
        self
    }

    pub fn with_grids(mut self, grids: Vec<GridStrategy>) -> Self {
        self.grids = grids;
        self
    }

    pub fn with_selectors(mut self, selectors: Vec<TagSelector>) -> Self {
        self.selectors = selectors;
        self
    }

    pub fn with_compensated(mut self, on: bool) -> Self {
        self.compensated = on;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let t = self.tolerance;
        if !(t.abs >= 0.0 && t.rel >= 0.0 && t.abs + t.rel > 0.0) {
            return Err(Error::InvalidArgument(format!("tolerance must be positive, got {t:?}")));
        }
        if self.window < 2 {
            return Err(Error::InvalidArgument(format!("window {} < 2", self.window)));
        }
        if !(self.growth > 1.0) {
            return Err(Error::InvalidArgument(format!("growth factor {} ≤ 1", self.growth)));
        }
        if !(self.gap > 0.0) {
            return Err(Error::InvalidArgument(format!("oscillation gap {} ≤ 0", self.gap)));
        }
        Ok(())
    }

    /// Verdict for a trace, or `None` while undecided.
    pub fn classify(&self, trace: &[TraceEntry]) -> Option<Verdict> {
        let last = trace.last()?;
        if last.sums.iter().any(|s| !s.is_finite()) {
            return Some(Verdict {
                status: Status::Diverged,
                stable_from: last.level,
            });
        }
        if trace.len() < self.window {
            return None;
        }
        let win = &trace[trace.len() - self.window..];
        let stable_from = win[0].level;
        let verdict = |status| Some(Verdict { status, stable_from });

        let scale = |e: &TraceEntry| e.sums.iter().fold(0.0f64, |m, s| m.max(s.abs()));
        let each_stable = win.windows(2).all(|p| {
            let sc = scale(&p[1]);
            p[0].sums
                .iter()
                .zip(&p[1].sums)
                .all(|(x, y)| self.tolerance.admits(y - x, sc))
        });

        if each_stable && win.iter().all(|e| self.tolerance.admits(e.spread(), scale(e))) {
            return verdict(Status::Converged);
        }
        if each_stable && win.iter().all(|e| e.spread() >= self.gap) {
            return verdict(Status::Oscillating);
        }
        let strategies = last.sums.len();
        let grows = (0..strategies).any(|k| {
            win.windows(2).all(|p| {
                let (x, y) = (p[0].sums[k].abs(), p[1].sums[k].abs());
                y >= self.growth * x && y > self.tolerance.abs
            })
        });
        if grows {
            return verdict(Status::Diverged);
        }
        None
    }

    /// Drives `level_sums` over the schedule until a verdict is reached.
    pub(crate) fn run<S: Scalar>(
        &self,
        mut level_sums: impl FnMut(u32) -> Result<(Vec<S>, Vec<usize>)>,
    ) -> Result<IntegralResult<S>> {
        self.validate()?;
        let mut trace = Vec::new();
        let mut final_sums = Vec::new();
        for level in self.schedule.levels() {
            let (sums, cell_counts) = level_sums(level)?;
            trace.push(TraceEntry {
                level,
                n: cell_counts.first().copied().unwrap_or(0),
                sums: sums.iter().map(Scalar::to_f64).collect(),
                cell_counts,
            });
            final_sums = sums;
            if let Some(v) = self.classify(&trace) {
                return Ok(finish(trace, final_sums, v.status, Some(v.stable_from)));
            }
        }
        Ok(finish(trace, final_sums, Status::Inconclusive, None))
    }
}

pub(crate) fn finish<S>(
    trace: Vec<TraceEntry>,
    final_sums: Vec<S>,
    status: Status,
    stable_from: Option<u32>,
) -> IntegralResult<S> {
    let (estimate, error_bound) = match (status, trace.last()) {
        (Status::Converged | Status::Inconclusive, Some(last)) => {
            let drift = trace
                .iter()
                .rev()
                .take(2)
                .collect::<Vec<_>>()
                .windows(2)
                .map(|p| (p[0].midpoint() - p[1].midpoint()).abs())
                .fold(0.0, f64::max);
            (Some(last.midpoint()), Some(last.spread().max(drift)))
        }
        _ => (None, None),
    };
    IntegralResult {
        estimate,
        status,
        trace,
        error_bound,
        stable_from,
        final_sums,
    }
}
