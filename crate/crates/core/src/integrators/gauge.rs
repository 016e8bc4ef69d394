//! Gauge (Stieltjes-complete) integration of Burkill integrands.

use std::sync::Arc;

use crate::division::{delta_fine_division_with, riemann_sum_with};
use crate::error::{Error, Result};
use crate::integrators::ConvergenceController;
use crate::model::{BurkillIntegrand, Gauge, IntegralResult};
use crate::scalar::Scalar;

/// Level ↦ gauge. Later levels must be finer.
pub type GaugeFamily<S> = Arc<dyn Fn(u32) -> Result<Gauge<S>> + Send + Sync>;

/// `δ_k ≡ (b − a)·2^{−k}`.
pub fn constant_gauges<S: Scalar>(a: S, b: S) -> GaugeFamily<S> {
    let width = b - a;
    Arc::new(move |level| Gauge::constant(width.clone() * pow2_inv::<S>(level)))
}

/// Gauges that shrink relative to the distance from a singular point `p`:
/// `δ_k(s) = 2^{−k}|s − p|` for `s ≠ p` and `δ_k(p) = (b − a)·4^{−k}`.
///
/// Since `δ_k(s) < |s − p|`, a cell with endpoint `p` can only be δ-fine when
/// tagged at `p`, so the integrand is never evaluated next to the singularity
/// except at `p` itself.
pub fn singular_gauges<S: Scalar>(a: S, b: S, p: S) -> GaugeFamily<S> {
    let width = b - a;
    Arc::new(move |level| {
        let scale = pow2_inv::<S>(level);
        let at_p = width.clone() * scale.clone() * scale.clone();
        let p = p.clone();
        let anchor = p.clone();
        Ok(Gauge::function(move |s: &S| {
            if *s == p {
                at_p.clone()
            } else {
                (s.clone() - p.clone()).abs() * scale.clone()
            }
        })
        .with_anchors(vec![anchor]))
    })
}

/// Jump-anchoring gauges for declared jump points `{p_j}`:
/// `δ_k(s) = min((b − a)·2^{−k}, dist(s, {p_j}))` off the jumps and
/// `δ_k(p_j) = (b − a)·2^{−k}`. Jumps become cell endpoints and every cell
/// touching a jump is tagged at it.
pub fn jump_gauges<S: Scalar>(a: S, b: S, jumps: Vec<S>) -> GaugeFamily<S> {
    let width = b - a;
    Arc::new(move |level| {
        let cap = width.clone() * pow2_inv::<S>(level);
        let points = jumps.clone();
        Ok(Gauge::function(move |s: &S| {
            let mut delta = cap.clone();
            for p in &points {
                if p == s {
                    return cap.clone();
                }
                let d = (s.clone() - p.clone()).abs();
                if d < delta {
                    delta = d;
                }
            }
            delta
        })
        .with_anchors(jumps.clone()))
    })
}

fn pow2_inv<S: Scalar>(level: u32) -> S {
    // 2^{-level} as an exact ratio, split to stay inside u64
    let mut x = S::one();
    let mut left = level;
    while left > 0 {
        let step = left.min(62);
        x = x.mul_ratio(1, 1u64 << step);
        left -= step;
    }
    x
}

/// Gauge integral of `h` on `[a, b]`.
///
/// For each level the gauge `family(level)` (default [`constant_gauges`])
/// yields one δ-fine division per tag selector of the controller; the sums
/// are classified like any other trace.
pub fn gauge_integrate<S: Scalar>(
    h: &BurkillIntegrand<S>,
    a: S,
    b: S,
    ctrl: &ConvergenceController,
    family: Option<&GaugeFamily<S>>,
) -> Result<IntegralResult<S>> {
    if ctrl.selectors.is_empty() {
        return Err(Error::InvalidArgument("no tag selectors".into()));
    }
    if a >= b {
        return Err(Error::InvalidArgument(format!("need a < b, got [{a}, {b}]")));
    }
    let default_family;
    let family = match family {
        Some(f) => f,
        None => {
            default_family = constant_gauges(a.clone(), b.clone());
            &default_family
        }
    };
    ctrl.run(|level| {
        let gauge = family(level)?;
        let mut sums = Vec::with_capacity(ctrl.selectors.len());
        let mut counts = Vec::with_capacity(ctrl.selectors.len());
        for selector in &ctrl.selectors {
            let d = delta_fine_division_with(a.clone(), b.clone(), &gauge, selector, ctrl.max_depth)?;
            counts.push(d.len());
            sums.push(riemann_sum_with(h, &d, ctrl.compensated)?);
        }
        Ok((sums, counts))
    })
}
