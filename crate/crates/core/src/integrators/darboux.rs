use std::fmt;
use std::sync::Arc;

use crate::division::uniform_cuts;
use crate::error::{Error, Result};
use crate::integrators::ConvergenceController;
use crate::model::{IntegralResult, PointFn, Status, TraceEntry};
use crate::integrators::controller::finish;

/// Exact `(inf, sup)` of a point function over the closed cell `[u, v]`.
#[derive(Clone)]
pub struct ExtremaOracle {
    rule: Arc<dyn Fn(f64, f64) -> Result<(f64, f64)> + Send + Sync>,
}

impl ExtremaOracle {
    pub fn new(rule: impl Fn(f64, f64) -> Result<(f64, f64)> + Send + Sync + 'static) -> Self {
        ExtremaOracle {
            rule: Arc::new(rule),
        }
    }

    /// Oracle for a non-decreasing function.
    pub fn increasing(f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Self::new(move |u, v| Ok((f(u), f(v))))
    }

    /// Oracle for a non-increasing function.
    pub fn decreasing(f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Self::new(move |u, v| Ok((f(v), f(u))))
    }

    pub fn bounds(&self, u: f64, v: f64) -> Result<(f64, f64)> {
        (self.rule)(u, v)
    }
}

impl fmt::Debug for ExtremaOracle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("ExtremaOracle(..)")
    }
}

/// Upper and lower Darboux sums on the schedule's uniform partitions.
///
/// The trace records `[L_P, U_P]` per level. Converged as soon as
/// `U_P − L_P` is within tolerance; the estimate is the midpoint and the error
/// bound half the gap. The oracle is checked against samples of `f` at the
/// endpoints and midpoint of every cell.
pub fn darboux_riemann(
    f: &PointFn<f64>,
    oracle: &ExtremaOracle,
    a: f64,
    b: f64,
    ctrl: &ConvergenceController,
) -> Result<IntegralResult> {
    ctrl.validate()?;
    if !(a < b) {
        return Err(Error::InvalidArgument(format!("need a < b, got [{a}, {b}]")));
    }
    let mut trace = Vec::new();
    for level in ctrl.schedule.levels() {
        let n = ctrl.schedule.cells(level);
        let cuts = uniform_cuts(&a, &b, n);
        let mut lower = Vec::with_capacity(n);
        let mut upper = Vec::with_capacity(n);
        for w in cuts.windows(2) {
            let (u, v) = (w[0], w[1]);
            let (inf, sup) = oracle.bounds(u, v)?;
            if !(inf <= sup) {
                return Err(Error::OracleInconsistent {
                    u,
                    v,
                    at: u,
                    value: f64::NAN,
                    inf,
                    sup,
                });
            }
            for s in [u, 0.5 * (u + v), v] {
                let value = f(&s)?;
                let slack = 1e-12 * (1.0 + value.abs());
                if value < inf - slack || value > sup + slack {
                    return Err(Error::OracleInconsistent {
                        u,
                        v,
                        at: s,
                        value,
                        inf,
                        sup,
                    });
                }
            }
            lower.push(inf * (v - u));
            upper.push(sup * (v - u));
        }
        let l = <f64 as crate::scalar::Scalar>::sum_ordered(&lower, ctrl.compensated);
        let u = <f64 as crate::scalar::Scalar>::sum_ordered(&upper, ctrl.compensated);
        trace.push(TraceEntry {
            level,
            n,
            sums: vec![l, u],
            cell_counts: vec![n, n],
        });
        if !(l.is_finite() && u.is_finite()) {
            return Ok(finish(trace, vec![l, u], Status::Diverged, Some(level)));
        }
        let scale = l.abs().max(u.abs());
        if ctrl.tolerance.admits(u - l, scale) {
            let mut r = finish(trace, vec![l, u], Status::Converged, Some(level));
            r.error_bound = Some(0.5 * (u - l));
            return Ok(r);
        }
    }
    let last = trace.last().map(|e| e.sums.clone()).unwrap_or_default();
    let mut r = finish(trace, last, Status::Inconclusive, None);
    r.error_bound = r.last().map(|e| 0.5 * e.spread());
    Ok(r)
}
