//! Intervals, tagged divisions, gauges, and Burkill-type integrands.
//!
//! Cells are half-open `]u, v]`; a division of `[a, b]` covers `]a, b]` and the
//! point `a` may only appear as a tag.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::expr::EvalError;
use crate::scalar::Scalar;

/// A point function `s ↦ f(s)`.
pub type PointFn<S> = Arc<dyn Fn(&S) -> Result<S, EvalError> + Send + Sync>;

/// An interval function `I ↦ g(I)`.
pub type IntervalFn<S> = Arc<dyn Fn(&Interval<S>) -> Result<S, EvalError> + Send + Sync>;

/// Wraps an infallible closure as a [`PointFn`].
pub fn point_fn<S: Scalar>(f: impl Fn(&S) -> S + Send + Sync + 'static) -> PointFn<S> {
    Arc::new(move |s| Ok(f(s)))
}

/// Half-open interval `]u, v]` with `u < v`.
#[derive(Clone, PartialEq)]
pub struct Interval<S> {
    u: S,
    v: S,
}

impl<S: Scalar> Interval<S> {
    pub fn new(u: S, v: S) -> Result<Self> {
        if u < v {
            Ok(Interval { u, v })
        } else {
            Err(Error::InvalidArgument(format!(
                "interval needs u < v, got ]{u}, {v}]"
            )))
        }
    }

    pub fn u(&self) -> &S {
        &self.u
    }

    pub fn v(&self) -> &S {
        &self.v
    }

    pub fn length(&self) -> S {
        self.v.clone() - self.u.clone()
    }

    pub fn midpoint(&self) -> S {
        self.u.clone() + self.length().half()
    }

    /// Closed-hull membership, the admissible region for a tag.
    pub fn contains_closed(&self, s: &S) -> bool {
        self.u <= *s && *s <= self.v
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (self.u.to_f64(), self.v.to_f64())
    }
}

impl<S: Scalar> fmt::Debug for Interval<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "]{}, {}]", self.u, self.v)
    }
}

/// A cell together with its tag, `u ≤ tag ≤ v`.
#[derive(Clone, PartialEq)]
pub struct TaggedCell<S> {
    tag: S,
    cell: Interval<S>,
}

impl<S: Scalar> TaggedCell<S> {
    pub fn new(tag: S, cell: Interval<S>) -> Result<Self> {
        if !cell.contains_closed(&tag) {
            return Err(Error::InvalidArgument(format!(
                "tag {tag} outside the closure of {cell:?}"
            )));
        }
        Ok(TaggedCell { tag, cell })
    }

    pub fn tag(&self) -> &S {
        &self.tag
    }

    pub fn cell(&self) -> &Interval<S> {
        &self.cell
    }
}

impl<S: Scalar> fmt::Debug for TaggedCell<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {:?})", self.tag, self.cell)
    }
}

/// Finite tagged partition of `]a, b]`, cells in ascending order.
#[derive(Clone, PartialEq)]
pub struct TaggedDivision<S> {
    domain: Interval<S>,
    cells: Vec<TaggedCell<S>>,
}

impl<S: Scalar> TaggedDivision<S> {
    /// Validates contiguity: `u₁ = a`, `v_{j−1} = u_j`, `v_n = b`.
    pub fn new(domain: Interval<S>, cells: Vec<TaggedCell<S>>) -> Result<Self> {
        let first = cells
            .first()
            .ok_or_else(|| Error::InvalidArgument("division has no cells".into()))?;
        if first.cell.u != domain.u {
            return Err(Error::InvalidArgument(format!(
                "first cell {:?} does not start at {}",
                first.cell, domain.u
            )));
        }
        for pair in cells.windows(2) {
            if pair[0].cell.v != pair[1].cell.u {
                return Err(Error::InvalidArgument(format!(
                    "cells {:?} and {:?} do not abut",
                    pair[0].cell, pair[1].cell
                )));
            }
        }
        let last = cells.last().expect("non-empty");
        if last.cell.v != domain.v {
            return Err(Error::InvalidArgument(format!(
                "last cell {:?} does not end at {}",
                last.cell, domain.v
            )));
        }
        Ok(TaggedDivision { domain, cells })
    }

    /// Builds cells from ascending cut points `a = t₀ < … < t_n = b` and one tag per cell.
    pub fn from_cuts(cuts: &[S], tags: Vec<S>) -> Result<Self> {
        if cuts.len() < 2 || tags.len() + 1 != cuts.len() {
            return Err(Error::InvalidArgument(format!(
                "{} cut points cannot carry {} tags",
                cuts.len(),
                tags.len()
            )));
        }
        let domain = Interval::new(cuts[0].clone(), cuts[cuts.len() - 1].clone())?;
        let cells = cuts
            .windows(2)
            .zip(tags)
            .map(|(w, tag)| TaggedCell::new(tag, Interval::new(w[0].clone(), w[1].clone())?))
            .collect::<Result<Vec<_>>>()?;
        Self::new(domain, cells)
    }

    pub fn domain(&self) -> &Interval<S> {
        &self.domain
    }

    pub fn cells(&self) -> &[TaggedCell<S>] {
        &self.cells
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn mesh(&self) -> S {
        self.cells
            .iter()
            .map(|c| c.cell.length())
            .fold(S::zero(), |m, l| if l > m { l } else { m })
    }

    /// Joins a division of `[a, c]` with one of `[c, b]`.
    pub fn concat(self, other: TaggedDivision<S>) -> Result<Self> {
        let domain = Interval::new(self.domain.u.clone(), other.domain.v.clone())?;
        let mut cells = self.cells;
        cells.extend(other.cells);
        Self::new(domain, cells)
    }
}

impl<S: Scalar> fmt::Debug for TaggedDivision<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.cells.iter()).finish()
    }
}

#[derive(Clone)]
enum GaugeRule<S> {
    Constant(S),
    Function(Arc<dyn Fn(&S) -> S + Send + Sync>),
}

/// A gauge `δ(s) > 0`.
///
/// Anchors are points the division engine must use as cell endpoints, so
/// that a gauge can force them to be tags (jumps, singularities).
#[derive(Clone)]
pub struct Gauge<S> {
    rule: GaugeRule<S>,
    anchors: Vec<S>,
}

impl<S: Scalar> Gauge<S> {
    pub fn constant(delta: S) -> Result<Self> {
        if delta <= S::zero() {
            return Err(Error::GaugeNotPositive {
                at: f64::NAN,
                value: delta.to_f64(),
            });
        }
        Ok(Gauge {
            rule: GaugeRule::Constant(delta),
            anchors: Vec::new(),
        })
    }

    /// A pointwise gauge; positivity is checked at every evaluation.
    pub fn function(f: impl Fn(&S) -> S + Send + Sync + 'static) -> Self {
        Gauge {
            rule: GaugeRule::Function(Arc::new(f)),
            anchors: Vec::new(),
        }
    }

    pub fn with_anchors(mut self, anchors: Vec<S>) -> Self {
        self.anchors = anchors;
        self
    }

    pub fn anchors(&self) -> &[S] {
        &self.anchors
    }

    pub fn eval(&self, s: &S) -> Result<S> {
        let value = match &self.rule {
            GaugeRule::Constant(d) => d.clone(),
            GaugeRule::Function(f) => f(s),
        };
        if value > S::zero() {
            Ok(value)
        } else {
            Err(Error::GaugeNotPositive {
                at: s.to_f64(),
                value: value.to_f64(),
            })
        }
    }
}

impl<S: Scalar> fmt::Debug for Gauge<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.rule {
            GaugeRule::Constant(d) => write!(f, "Gauge::constant({d})"),
            GaugeRule::Function(_) => write!(f, "Gauge::function(..)"),
        }
    }
}

/// Where the point factor of an integrand is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Convention {
    /// `f(s)·g(I)` at the tag.
    Tag,
    /// `f(u)·g(I)`, the Itô-style rule.
    LeftEndpoint,
    /// `f(w)·g(I)` with `w = u + ½(v − u)`.
    Midpoint,
    /// `g(I)` alone.
    IntervalOnly,
}

impl Convention {
    /// True when the value cannot depend on the tag.
    pub fn ignores_tag(self) -> bool {
        !matches!(self, Convention::Tag)
    }
}

/// An evaluation rule `h(s, I)` on tagged cells.
#[derive(Clone)]
pub struct BurkillIntegrand<S> {
    name: String,
    convention: Convention,
    rule: Arc<dyn Fn(&S, &Interval<S>) -> Result<S, EvalError> + Send + Sync>,
}

impl<S: Scalar> BurkillIntegrand<S> {
    /// A general rule not of product form, e.g. `h(s, I) = s`.
    pub fn from_rule(
        name: impl Into<String>,
        convention: Convention,
        rule: impl Fn(&S, &Interval<S>) -> Result<S, EvalError> + Send + Sync + 'static,
    ) -> Self {
        BurkillIntegrand {
            name: name.into(),
            convention,
            rule: Arc::new(rule),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn convention(&self) -> Convention {
        self.convention
    }

    pub fn eval(&self, tag: &S, cell: &Interval<S>) -> Result<S, EvalError> {
        (self.rule)(tag, cell)
    }

    pub fn eval_cell(&self, cell: &TaggedCell<S>) -> Result<S> {
        self.eval(&cell.tag, &cell.cell).map_err(|source| {
            let (u, v) = cell.cell.to_f64();
            Error::CellEval {
                tag: cell.tag.to_f64(),
                u,
                v,
                source,
            }
        })
    }

    pub fn renamed(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }
}

impl<S> fmt::Debug for BurkillIntegrand<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BurkillIntegrand")
            .field("name", &self.name)
            .field("convention", &self.convention)
            .finish()
    }
}

/// The increment function `g(I) = f(v) − f(u)`; finitely additive by construction.
pub fn increments_of<S: Scalar>(f: PointFn<S>) -> IntervalFn<S> {
    Arc::new(move |cell: &Interval<S>| Ok(f(cell.v())? - f(cell.u())?))
}

/// The length function `|I|`.
pub fn length<S: Scalar>() -> IntervalFn<S> {
    Arc::new(|cell: &Interval<S>| Ok(cell.length()))
}

/// Composes a point factor and an interval factor under `convention`.
pub fn make_integrand<S: Scalar>(
    name: impl Into<String>,
    point: Option<PointFn<S>>,
    interval: IntervalFn<S>,
    convention: Convention,
) -> Result<BurkillIntegrand<S>> {
    let name = name.into();
    let rule: Arc<dyn Fn(&S, &Interval<S>) -> Result<S, EvalError> + Send + Sync> =
        match (convention, point) {
            (Convention::IntervalOnly, None) => Arc::new(move |_, cell| interval(cell)),
            (Convention::IntervalOnly, Some(_)) => {
                return Err(Error::InvalidArgument(format!(
                    "{name}: interval-only integrand takes no point factor"
                )))
            }
            (_, None) => {
                return Err(Error::InvalidArgument(format!(
                    "{name}: convention {convention:?} needs a point factor"
                )))
            }
            (Convention::Tag, Some(f)) => Arc::new(move |s, cell| Ok(f(s)? * interval(cell)?)),
            (Convention::LeftEndpoint, Some(f)) => {
                Arc::new(move |_, cell| Ok(f(cell.u())? * interval(cell)?))
            }
            (Convention::Midpoint, Some(f)) => {
                Arc::new(move |_, cell| Ok(f(&cell.midpoint())? * interval(cell)?))
            }
        };
    Ok(BurkillIntegrand {
        name,
        convention,
        rule,
    })
}

/// Outcome class of an integration run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Converged,
    Diverged,
    Oscillating,
    Inconclusive,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Converged => "converged",
            Status::Diverged => "diverged",
            Status::Oscillating => "oscillating",
            Status::Inconclusive => "inconclusive",
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One refinement level: the sum produced by every probe strategy.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceEntry {
    pub level: u32,
    /// Cell count of the first strategy's division.
    pub n: usize,
    pub sums: Vec<f64>,
    pub cell_counts: Vec<usize>,
}

impl TraceEntry {
    pub fn sum_min(&self) -> f64 {
        self.sums.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn sum_max(&self) -> f64 {
        self.sums.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn spread(&self) -> f64 {
        self.sum_max() - self.sum_min()
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.sum_min() + self.sum_max())
    }
}

/// Result of an integration run. `final_sums` keeps the last level's
/// per-strategy sums in the integrand's own scalar regime.
#[derive(Debug, Clone)]
pub struct IntegralResult<S = f64> {
    pub estimate: Option<f64>,
    pub status: Status,
    pub trace: Vec<TraceEntry>,
    pub error_bound: Option<f64>,
    /// First level of the window that produced the verdict.
    pub stable_from: Option<u32>,
    pub final_sums: Vec<S>,
}

impl<S> IntegralResult<S> {
    pub fn entry_at_level(&self, level: u32) -> Option<&TraceEntry> {
        self.trace.iter().find(|e| e.level == level)
    }

    pub fn last(&self) -> Option<&TraceEntry> {
        self.trace.last()
    }

    /// Converts the retained final sums, e.g. exact sums to floats.
    pub fn map_sums<T>(self, f: impl Fn(S) -> T) -> IntegralResult<T> {
        IntegralResult {
            estimate: self.estimate,
            status: self.status,
            trace: self.trace,
            error_bound: self.error_bound,
            stable_from: self.stable_from,
            final_sums: self.final_sums.into_iter().map(f).collect(),
        }
    }
}
