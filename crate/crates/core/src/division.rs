//! Construction, checking and refinement of tagged divisions, and Riemann sums.

use crate::error::{Error, Result};
use crate::model::{BurkillIntegrand, Gauge, Interval, TaggedCell, TaggedDivision};
use crate::scalar::Scalar;

/// Bisection depth cap for [`delta_fine_division`].
pub const DEFAULT_MAX_DEPTH: usize = 60;

/// Level range and the level ↦ cell-count rule `n = base · 2^level`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RefinementSchedule {
    initial: u32,
    max: u32,
    base: usize,
}

impl RefinementSchedule {
    pub fn new(initial: u32, max: u32) -> Result<Self> {
        Self::with_base(initial, max, 1)
    }

    pub fn with_base(initial: u32, max: u32, base: usize) -> Result<Self> {
        if max < initial {
            return Err(Error::InvalidArgument(format!(
                "max level {max} below initial level {initial}"
            )));
        }
        if base == 0 {
            return Err(Error::InvalidArgument("cell-count base must be ≥ 1".into()));
        }
        if max >= 48 {
            return Err(Error::InvalidArgument(format!("max level {max} exceeds 47")));
        }
        Ok(RefinementSchedule { initial, max, base })
    }

    pub fn initial(&self) -> u32 {
        self.initial
    }

    pub fn max(&self) -> u32 {
        self.max
    }

    pub fn cells(&self, level: u32) -> usize {
        self.base << level
    }

    pub fn levels(&self) -> impl Iterator<Item = u32> {
        self.initial..=self.max
    }
}

impl Default for RefinementSchedule {
    fn default() -> Self {
        RefinementSchedule {
            initial: 4,
            max: 22,
            base: 1,
        }
    }
}

/// How tags are placed in freshly built cells.
#[derive(Debug, Clone, PartialEq)]
pub enum TagRule<S> {
    Left,
    Right,
    Midpoint,
    /// `u + θ(v − u)` for a fixed `θ ∈ [0, 1]`.
    Fraction(S),
    /// One explicit tag per resulting cell.
    Explicit(Vec<S>),
}

impl<S: Scalar> TagRule<S> {
    fn tags_for(&self, cuts: &[S]) -> Result<Vec<S>> {
        let cells = cuts.windows(2);
        Ok(match self {
            TagRule::Left => cells.map(|w| w[0].clone()).collect(),
            TagRule::Right => cells.map(|w| w[1].clone()).collect(),
            TagRule::Midpoint => cells
                .map(|w| w[0].clone() + (w[1].clone() - w[0].clone()).half())
                .collect(),
            TagRule::Fraction(theta) => {
                if *theta < S::zero() || *theta > S::one() {
                    return Err(Error::InvalidArgument(format!(
                        "tag fraction {theta} outside [0, 1]"
                    )));
                }
                cells
                    .map(|w| w[0].clone() + theta.clone() * (w[1].clone() - w[0].clone()))
                    .collect()
            }
            TagRule::Explicit(tags) => {
                if tags.len() + 1 != cuts.len() {
                    return Err(Error::InvalidArgument(format!(
                        "{} explicit tags for {} cells",
                        tags.len(),
                        cuts.len() - 1
                    )));
                }
                tags.clone()
            }
        })
    }
}

/// `n` equal cells on `]a, b]`, tagged by `rule`.
pub fn make_uniform<S: Scalar>(a: S, b: S, n: usize, rule: &TagRule<S>) -> Result<TaggedDivision<S>> {
    if n == 0 {
        return Err(Error::InvalidArgument("cell count must be ≥ 1".into()));
    }
    if a >= b {
        return Err(Error::InvalidArgument(format!("need a < b, got [{a}, {b}]")));
    }
    let cuts = uniform_cuts(&a, &b, n);
    TaggedDivision::from_cuts(&cuts, rule.tags_for(&cuts)?)
}

/// `a + (b − a)·j/n` for `j = 0..=n`, with the last point exactly `b`.
pub(crate) fn uniform_cuts<S: Scalar>(a: &S, b: &S, n: usize) -> Vec<S> {
    let width = b.clone() - a.clone();
    let mut cuts: Vec<S> = (0..n)
        .map(|j| a.clone() + width.mul_ratio(j as i64, n as u64))
        .collect();
    cuts.push(b.clone());
    cuts
}

/// True iff every cell satisfies `s − u < δ(s)` and `v − s < δ(s)`.
pub fn is_fine<S: Scalar>(division: &TaggedDivision<S>, gauge: &Gauge<S>) -> Result<bool> {
    for cell in division.cells() {
        if !cell_is_fine(cell.tag(), cell.cell().u(), cell.cell().v(), gauge)? {
            return Ok(false);
        }
    }
    Ok(true)
}

fn cell_is_fine<S: Scalar>(s: &S, u: &S, v: &S, gauge: &Gauge<S>) -> Result<bool> {
    let delta = gauge.eval(s)?;
    Ok(s.clone() - u.clone() < delta && v.clone() - s.clone() < delta)
}

/// A tag candidate tried by the δ-fine construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TagChoice {
    Left,
    Mid,
    Right,
    /// `u + θ(v − u)` with the irrational offset `θ = (√2 − 1)/2`.
    Interior,
}

impl TagChoice {
    fn place<S: Scalar>(self, u: &S, v: &S) -> S {
        match self {
            TagChoice::Left => u.clone(),
            TagChoice::Right => v.clone(),
            TagChoice::Mid => u.clone() + (v.clone() - u.clone()).half(),
            TagChoice::Interior => u.clone() + S::irrational_offset() * (v.clone() - u.clone()),
        }
    }
}

/// Ordered list of tag candidates; the first δ-fine candidate wins.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TagSelector {
    name: String,
    order: Vec<TagChoice>,
}

impl TagSelector {
    pub fn new(name: impl Into<String>, order: Vec<TagChoice>) -> Result<Self> {
        if order.is_empty() {
            return Err(Error::InvalidArgument("tag selector needs a candidate".into()));
        }
        Ok(TagSelector {
            name: name.into(),
            order,
        })
    }

    /// Left, then midpoint, then right.
    pub fn standard() -> Self {
        TagSelector {
            name: "standard".into(),
            order: vec![TagChoice::Left, TagChoice::Mid, TagChoice::Right],
        }
    }

    /// Right, then midpoint, then left.
    pub fn reversed() -> Self {
        TagSelector {
            name: "reversed".into(),
            order: vec![TagChoice::Right, TagChoice::Mid, TagChoice::Left],
        }
    }

    /// Irrational interior point first, then the standard order.
    pub fn interior_first() -> Self {
        TagSelector {
            name: "interior".into(),
            order: vec![
                TagChoice::Interior,
                TagChoice::Left,
                TagChoice::Mid,
                TagChoice::Right,
            ],
        }
    }

    pub fn by_name(name: &str) -> Option<Self> {
        match name {
            "standard" => Some(Self::standard()),
            "reversed" => Some(Self::reversed()),
            "interior" => Some(Self::interior_first()),
            _ => None,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> &[TagChoice] {
        &self.order
    }
}

/// A δ-fine division of `[a, b]` built by recursive bisection with the
/// standard tag order and the default depth cap.
pub fn delta_fine_division<S: Scalar>(a: S, b: S, gauge: &Gauge<S>) -> Result<TaggedDivision<S>> {
    delta_fine_division_with(a, b, gauge, &TagSelector::standard(), DEFAULT_MAX_DEPTH)
}

/// A δ-fine division of `[a, b]`.
///
/// The domain is first cut at the gauge's anchors. Each piece is accepted as
/// soon as one of the selector's candidates is a δ-fine tag for it, and
/// bisected otherwise.
pub fn delta_fine_division_with<S: Scalar>(
    a: S,
    b: S,
    gauge: &Gauge<S>,
    selector: &TagSelector,
    max_depth: usize,
) -> Result<TaggedDivision<S>> {
    let domain = Interval::new(a.clone(), b.clone())?;
    let mut knots = vec![a.clone()];
    let mut inner: Vec<S> = gauge
        .anchors()
        .iter()
        .filter(|p| **p > a && **p < b)
        .cloned()
        .collect();
    inner.sort_by(|x, y| x.partial_cmp(y).expect("anchors are comparable"));
    inner.dedup();
    knots.extend(inner);
    knots.push(b);

    let mut cells = Vec::new();
    for w in knots.windows(2) {
        fine_cells(&w[0], &w[1], gauge, selector, 0, max_depth, &mut cells)?;
    }
    TaggedDivision::new(domain, cells)
}

fn fine_cells<S: Scalar>(
    u: &S,
    v: &S,
    gauge: &Gauge<S>,
    selector: &TagSelector,
    depth: usize,
    max_depth: usize,
    out: &mut Vec<TaggedCell<S>>,
) -> Result<()> {
    for choice in &selector.order {
        let tag = choice.place(u, v);
        if cell_is_fine(&tag, u, v, gauge)? {
            out.push(TaggedCell::new(tag, Interval::new(u.clone(), v.clone())?)?);
            return Ok(());
        }
    }
    if depth >= max_depth {
        return Err(Error::GaugeTooDemanding {
            u: u.to_f64(),
            v: v.to_f64(),
            depth,
        });
    }
    let m = u.clone() + (v.clone() - u.clone()).half();
    if m <= *u || m >= *v {
        // float resolution exhausted before the depth cap
        return Err(Error::GaugeTooDemanding {
            u: u.to_f64(),
            v: v.to_f64(),
            depth,
        });
    }
    fine_cells(u, &m, gauge, selector, depth + 1, max_depth, out)?;
    fine_cells(&m, v, gauge, selector, depth + 1, max_depth, out)
}

/// Splits every cell at its midpoint and retags by `rule`.
pub fn bisect_refine<S: Scalar>(division: &TaggedDivision<S>, rule: &TagRule<S>) -> Result<TaggedDivision<S>> {
    let mut cuts = Vec::with_capacity(2 * division.len() + 1);
    cuts.push(division.domain().u().clone());
    for cell in division.cells() {
        cuts.push(cell.cell().midpoint());
        cuts.push(cell.cell().v().clone());
    }
    TaggedDivision::from_cuts(&cuts, rule.tags_for(&cuts)?)
}

/// `Σ h(s, I)` over the cells in ascending order.
pub fn riemann_sum<S: Scalar>(h: &BurkillIntegrand<S>, division: &TaggedDivision<S>) -> Result<S> {
    riemann_sum_with(h, division, false)
}

/// [`riemann_sum`] with optional compensated summation (floats only).
pub fn riemann_sum_with<S: Scalar>(
    h: &BurkillIntegrand<S>,
    division: &TaggedDivision<S>,
    compensated: bool,
) -> Result<S> {
    let terms = division
        .cells()
        .iter()
        .map(|c| h.eval_cell(c))
        .collect::<Result<Vec<_>>>()?;
    Ok(S::sum_ordered(&terms, compensated))
}
