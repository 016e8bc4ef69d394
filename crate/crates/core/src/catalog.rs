//! Named integrands, point functions, distributions and paths with known
//! outcomes.
//!
//! Every entry carries the integrator that should reproduce its outcome, so
//! the catalog doubles as a regression suite: [`CatalogEntry::run`] followed
//! by [`CatalogEntry::check`].

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::integrators::{
    darboux_riemann, gauge_integrate, jump_gauges, lebesgue_distribution_integrate, rs_integrate, singular_gauges,
    ConvergenceController, DistributionFunction, ExtremaOracle, GaugeFamily,
};
use crate::model::{
    increments_of, length, make_integrand, point_fn, BurkillIntegrand, Convention, IntegralResult, Interval,
    IntervalFn, PointFn, Status,
};
use crate::scalar::{QuadExt, Scalar, ScalarRegime};
use crate::stochastic::DyadicPath;

/// `D(s)`: 1 on rationals, 0 elsewhere. Exact on ℚ(√2).
pub fn dirichlet_point(s: &QuadExt) -> u8 {
    u8::from(s.is_rational())
}

/// `D(I) = D(v) − D(u)`.
pub fn dirichlet_increment(cell: &Interval<QuadExt>) -> i8 {
    dirichlet_point(cell.v()) as i8 - dirichlet_point(cell.u()) as i8
}

/// `D(I)` as an exact interval function.
pub fn dirichlet() -> IntervalFn<QuadExt> {
    Arc::new(|cell: &Interval<QuadExt>| Ok(QuadExt::ratio(dirichlet_increment(cell) as i64, 1)))
}

/// `f(s)·D(I)` with the tag convention.
pub fn dirichlet_integrand(name: impl Into<String>, f: PointFn<QuadExt>) -> BurkillIntegrand<QuadExt> {
    make_integrand(name, Some(f), dirichlet(), Convention::Tag).expect("tag convention with a point factor")
}

/// `1` for `s ≥ ½`, `0` below.
pub fn step_half<S: Scalar>() -> PointFn<S> {
    point_fn(|s: &S| if *s >= S::from_ratio(1, 2) { S::one() } else { S::zero() })
}

/// Partial sums up to `n` of `Σ (−1)^j / j`, and of its positive and
/// negative terms separately.
pub fn conditional_series(n: u64) -> Result<(f64, f64, f64)> {
    conditional_series_trace(n, n).map(|rows| {
        let (_, s, p, m) = rows[rows.len() - 1];
        (s, p, m)
    })
}

/// `(j, partial, positive, negative)` every `step` terms and at `n`.
pub fn conditional_series_trace(n: u64, step: u64) -> Result<Vec<(u64, f64, f64, f64)>> {
    if n == 0 || step == 0 {
        return Err(Error::InvalidArgument("series needs n ≥ 1 and step ≥ 1".into()));
    }
    let (mut pos, mut neg) = (0.0, 0.0);
    let mut rows = Vec::new();
    for j in 1..=n {
        if j % 2 == 0 {
            pos += 1.0 / j as f64;
        } else {
            neg -= 1.0 / j as f64;
        }
        if j % step == 0 || j == n {
            rows.push((j, pos + neg, pos, neg));
        }
    }
    Ok(rows)
}

/// The integrator an entry is checked against.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Darboux,
    Stieltjes,
    Gauge,
    Lebesgue,
}

impl Method {
    pub const ALL: [Method; 4] = [Method::Darboux, Method::Stieltjes, Method::Gauge, Method::Lebesgue];

    pub fn from_name(name: &str) -> Option<Method> {
        Method::ALL.into_iter().find(|m| m.name() == name)
    }

    pub fn name(self) -> &'static str {
        match self {
            Method::Darboux => "darboux",
            Method::Stieltjes => "rs",
            Method::Gauge => "gauge",
            Method::Lebesgue => "lebesgue",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Known outcome of an entry.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Expected {
    Value { value: f64, tol: f64 },
    Diverged,
    Oscillating,
}

/// What an entry holds.
#[derive(Clone)]
pub enum Subject {
    Integrand {
        build: fn() -> BurkillIntegrand<f64>,
        /// Singular point for which shrinking gauges are used.
        singular_at: Option<f64>,
    },
    ExactIntegrand(fn() -> BurkillIntegrand<QuadExt>),
    /// A point function with exact extrema and declared jumps.
    Point {
        f: PointFn<f64>,
        oracle: ExtremaOracle,
        jumps: Vec<f64>,
    },
    Distribution(DistributionFunction),
    /// A deterministic path on `[0, 1]`.
    Path(Arc<dyn Fn(f64) -> f64 + Send + Sync>),
}

#[derive(Clone)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub description: &'static str,
    pub provenance: &'static str,
    pub regime: ScalarRegime,
    pub method: Method,
    /// Default domain; distributions and paths only accept this one.
    pub domain: (f64, f64),
    pub subject: Subject,
    expected: fn(f64, f64) -> Expected,
}

impl fmt::Debug for CatalogEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CatalogEntry")
            .field("name", &self.name)
            .field("method", &self.method)
            .field("regime", &self.regime)
            .field("domain", &self.domain)
            .finish()
    }
}

impl CatalogEntry {
    fn has_fixed_domain(&self) -> bool {
        matches!(self.subject, Subject::Distribution(_) | Subject::Path(_))
    }

    pub fn expected(&self, a: f64, b: f64) -> Expected {
        (self.expected)(a, b)
    }

    /// Controller used for the regression: the defaults, with the tolerance
    /// replaced by the entry's own when it names a value.
    pub fn controller(&self, a: f64, b: f64) -> ConvergenceController {
        let ctrl = ConvergenceController::default();
        match self.expected(a, b) {
            Expected::Value { tol, .. } => ctrl.with_tolerance(tol),
            _ => ctrl,
        }
    }

    /// The entry as an integrator function `g`, where that makes sense.
    pub fn integrator(&self) -> Option<PointFn<f64>> {
        match &self.subject {
            Subject::Point { f, .. } => Some(f.clone()),
            Subject::Distribution(g) => {
                let g = g.clone();
                Some(point_fn(move |u: &f64| g.eval(*u)))
            }
            Subject::Path(x) => {
                let x = x.clone();
                Some(point_fn(move |s: &f64| x(*s)))
            }
            _ => None,
        }
    }

    /// Samples a path entry on the level-`level` dyadic grid of `[0, 1]`.
    pub fn path(&self, level: u32) -> Option<Result<DyadicPath>> {
        match &self.subject {
            Subject::Path(x) => {
                let x = x.clone();
                Some(DyadicPath::from_fn(self.name, 1.0, level, move |s| x(s)))
            }
            _ => None,
        }
    }

    /// Runs the entry's own integrator on `[a, b]`.
    pub fn run(&self, a: f64, b: f64, ctrl: &ConvergenceController) -> Result<IntegralResult> {
        self.run_with(self.method, a, b, ctrl)
    }

    /// Runs `method` on the entry. Point functions become `f(s)|I|` under the
    /// Stieltjes and gauge integrators; paths are integrated as `|dx|`.
    pub fn run_with(&self, method: Method, a: f64, b: f64, ctrl: &ConvergenceController) -> Result<IntegralResult> {
        if self.has_fixed_domain() && (a, b) != self.domain {
            return Err(Error::InvalidArgument(format!(
                "entry `{}` is defined on [{}, {}] only",
                self.name, self.domain.0, self.domain.1
            )));
        }
        let unsupported = || {
            Err(Error::InvalidArgument(format!(
                "entry `{}` cannot be integrated with method `{method}`",
                self.name
            )))
        };
        let float_run = |h: &BurkillIntegrand<f64>, family: Option<GaugeFamily<f64>>| match method {
            Method::Stieltjes => rs_integrate(h, a, b, ctrl),
            Method::Gauge => gauge_integrate(h, a, b, ctrl, family.as_ref()),
            _ => unsupported(),
        };
        match &self.subject {
            Subject::Integrand { build, singular_at } => {
                float_run(&build(), singular_at.map(|p| singular_gauges(a, b, p)))
            }
            Subject::ExactIntegrand(build) => {
                let h = build();
                let (qa, qb) = (QuadExt::from_f64(a), QuadExt::from_f64(b));
                let r = match method {
                    Method::Stieltjes => rs_integrate(&h, qa, qb, ctrl)?,
                    Method::Gauge => gauge_integrate(&h, qa, qb, ctrl, None)?,
                    _ => return unsupported(),
                };
                Ok(r.map_sums(|s| s.to_f64()))
            }
            Subject::Point { f, oracle, jumps } => match method {
                Method::Darboux => darboux_riemann(f, oracle, a, b, ctrl),
                Method::Lebesgue => unsupported(),
                _ => {
                    let inside: Vec<f64> = jumps.iter().copied().filter(|p| a <= *p && *p <= b).collect();
                    let family = (!inside.is_empty()).then(|| jump_gauges(a, b, inside));
                    float_run(&make_integrand(self.name, Some(f.clone()), length(), Convention::Tag)?, family)
                }
            },
            Subject::Distribution(g) => match method {
                Method::Lebesgue => lebesgue_distribution_integrate(g, ctrl),
                _ => unsupported(),
            },
            Subject::Path(_) => {
                let x = self.integrator().expect("path entries are integrators");
                let h = make_integrand(
                    format!("|d{}|", self.name),
                    None,
                    abs_increments(x),
                    Convention::IntervalOnly,
                )?;
                float_run(&h, None)
            }
        }
    }

    /// Whether `result` reproduces the expected outcome on `[a, b]`.
    pub fn check(&self, a: f64, b: f64, result: &IntegralResult) -> bool {
        match self.expected(a, b) {
            Expected::Value { value, tol } => {
                result.status == Status::Converged
                    && result.estimate.is_some_and(|e| (e - value).abs() <= tol)
            }
            Expected::Diverged => result.status == Status::Diverged,
            Expected::Oscillating => result.status == Status::Oscillating,
        }
    }
}

fn abs_increments(x: PointFn<f64>) -> IntervalFn<f64> {
    let inc = increments_of(x);
    Arc::new(move |cell: &Interval<f64>| Ok(inc(cell)?.abs()))
}

fn tag_integrand(name: &str, f: fn(f64) -> f64, interval: IntervalFn<f64>, convention: Convention) -> BurkillIntegrand<f64> {
    make_integrand(name, Some(point_fn(move |s: &f64| f(*s))), interval, convention).expect("point factor given")
}

fn cube_diff(a: f64, b: f64) -> f64 {
    (b * b * b - a * a * a) / 3.0
}

fn square_oracle() -> ExtremaOracle {
    ExtremaOracle::new(|u, v| {
        Ok(if u >= 0.0 {
            (u * u, v * v)
        } else if v <= 0.0 {
            (v * v, u * u)
        } else {
            (0.0, (u * u).max(v * v))
        })
    })
}

fn zigzag(s: f64) -> f64 {
    // slopes 2, −1, 3, −2 on the quarters of [0, 1]
    const KNOTS: [(f64, f64, f64); 4] = [(0.0, 0.0, 2.0), (0.25, 0.5, -1.0), (0.5, 0.25, 3.0), (0.75, 1.0, -2.0)];
    let &(s0, x0, slope) = KNOTS.iter().rev().find(|k| s >= k.0).unwrap_or(&KNOTS[0]);
    x0 + slope * (s - s0)
}

/// All entries.
pub fn standard_entries() -> Vec<CatalogEntry> {
    let float = ScalarRegime::Float;
    let exact = ScalarRegime::Exact;
    let unit = (0.0, 1.0);
    let mut entries = vec![
        CatalogEntry {
            name: "h1",
            description: "h(s,I) = |I|",
            provenance: "telescoping of lengths; value b − a",
            regime: float,
            method: Method::Gauge,
            domain: unit,
            subject: Subject::Integrand {
                build: || make_integrand("h1", None, length(), Convention::IntervalOnly).unwrap(),
                singular_at: None,
            },
            expected: |a, b| Expected::Value { value: b - a, tol: 1e-9 },
        },
        CatalogEntry {
            name: "h2",
            description: "h(s,I) = s",
            provenance: "sums grow like n(a + b)/2",
            regime: float,
            method: Method::Gauge,
            domain: unit,
            subject: Subject::Integrand {
                build: || BurkillIntegrand::from_rule("h2", Convention::Tag, |s: &f64, _| Ok(*s)),
                singular_at: None,
            },
            expected: |_, _| Expected::Diverged,
        },
        CatalogEntry {
            name: "h3",
            description: "h(s,I) = s²|I|",
            provenance: "antiderivative s³/3",
            regime: float,
            method: Method::Gauge,
            domain: unit,
            subject: Subject::Integrand {
                build: || tag_integrand("h3", |s| s * s, length(), Convention::Tag),
                singular_at: None,
            },
            expected: |a, b| Expected::Value { value: cube_diff(a, b), tol: 1e-8 },
        },
        CatalogEntry {
            name: "h4",
            description: "h(s,I) = |I|²",
            provenance: "Σ|I|² ≤ mesh·(b − a) → 0",
            regime: float,
            method: Method::Gauge,
            domain: unit,
            subject: Subject::Integrand {
                build: || {
                    let sq: IntervalFn<f64> = Arc::new(|c: &Interval<f64>| Ok(c.length() * c.length()));
                    make_integrand("h4", None, sq, Convention::IntervalOnly).unwrap()
                },
                singular_at: None,
            },
            expected: |_, _| Expected::Value { value: 0.0, tol: 1e-5 },
        },
        CatalogEntry {
            name: "h5",
            description: "h(s,I) = u²|I|, u the left endpoint of I",
            provenance: "left-endpoint sums of s² converge to (b³ − a³)/3",
            regime: float,
            method: Method::Gauge,
            domain: unit,
            subject: Subject::Integrand {
                build: || tag_integrand("h5", |s| s * s, length(), Convention::LeftEndpoint),
                singular_at: None,
            },
            expected: |a, b| Expected::Value { value: cube_diff(a, b), tol: 1e-4 },
        },
        CatalogEntry {
            name: "s_dsquare",
            description: "s·d(s²)",
            provenance: "∫ s·2s ds = 2(b³ − a³)/3",
            regime: float,
            method: Method::Stieltjes,
            domain: unit,
            subject: Subject::Integrand {
                build: || {
                    let g = increments_of(point_fn(|s: &f64| s * s));
                    tag_integrand("s_dsquare", |s| s, g, Convention::Tag)
                },
                singular_at: None,
            },
            expected: |a, b| Expected::Value { value: 2.0 * cube_diff(a, b), tol: 1e-6 },
        },
        CatalogEntry {
            name: "inv_sqrt",
            description: "s^(-1/2)|I| with f(0) = 0, gauges shrinking at 0",
            provenance: "antiderivative 2√s",
            regime: float,
            method: Method::Gauge,
            domain: unit,
            subject: Subject::Integrand {
                build: || tag_integrand("inv_sqrt", |s| if s > 0.0 { 1.0 / s.sqrt() } else { 0.0 }, length(), Convention::Tag),
                singular_at: Some(0.0),
            },
            expected: |a, b| Expected::Value { value: 2.0 * (b.sqrt() - a.sqrt()), tol: 1e-3 },
        },
        CatalogEntry {
            name: "const_dD",
            description: "3·D(I), D the Dirichlet function",
            provenance: "increments of D telescope to D(b) − D(a) = 0 for rational a, b",
            regime: exact,
            method: Method::Stieltjes,
            domain: unit,
            subject: Subject::ExactIntegrand(|| dirichlet_integrand("const_dD", point_fn(|_: &QuadExt| QuadExt::ratio(3, 1)))),
            expected: |_, _| Expected::Value { value: 0.0, tol: 1e-12 },
        },
        CatalogEntry {
            name: "step_dD",
            description: "step(½)(s)·D(I)",
            provenance: "rational grids sum to 0, irrational grids to 1",
            regime: exact,
            method: Method::Stieltjes,
            domain: unit,
            subject: Subject::ExactIntegrand(|| dirichlet_integrand("step_dD", step_half())),
            expected: |_, _| Expected::Oscillating,
        },
    ];

    entries.extend([
        CatalogEntry {
            name: "identity",
            description: "f(s) = s",
            provenance: "antiderivative s²/2",
            regime: float,
            method: Method::Darboux,
            domain: unit,
            subject: Subject::Point {
                f: point_fn(|s: &f64| *s),
                oracle: ExtremaOracle::increasing(|s| s),
                jumps: vec![],
            },
            expected: |a, b| Expected::Value { value: 0.5 * (b * b - a * a), tol: 1e-6 },
        },
        CatalogEntry {
            name: "square",
            description: "f(s) = s²",
            provenance: "antiderivative s³/3",
            regime: float,
            method: Method::Darboux,
            domain: unit,
            subject: Subject::Point {
                f: point_fn(|s: &f64| s * s),
                oracle: square_oracle(),
                jumps: vec![],
            },
            expected: |a, b| Expected::Value { value: cube_diff(a, b), tol: 1e-6 },
        },
        CatalogEntry {
            name: "cube",
            description: "f(s) = s³",
            provenance: "antiderivative s⁴/4",
            regime: float,
            method: Method::Darboux,
            domain: unit,
            subject: Subject::Point {
                f: point_fn(|s: &f64| s * s * s),
                oracle: ExtremaOracle::increasing(|s| s * s * s),
                jumps: vec![],
            },
            expected: |a, b| Expected::Value { value: 0.25 * (b.powi(4) - a.powi(4)), tol: 1e-6 },
        },
        CatalogEntry {
            name: "step_half",
            description: "f(s) = 1 for s ≥ ½, else 0",
            provenance: "length of [½, b] ∩ [a, b]",
            regime: float,
            method: Method::Darboux,
            domain: unit,
            subject: Subject::Point {
                f: step_half(),
                oracle: ExtremaOracle::increasing(|s| if s >= 0.5 { 1.0 } else { 0.0 }),
                jumps: vec![0.5],
            },
            expected: |a, b| Expected::Value { value: (b - a.max(0.5)).max(0.0), tol: 1e-6 },
        },
    ]);

    entries.extend([
        CatalogEntry {
            name: "identity_dist",
            description: "g(u) = u on [0, 1]",
            provenance: "∫ u du = ½",
            regime: float,
            method: Method::Lebesgue,
            domain: unit,
            subject: Subject::Distribution(DistributionFunction::new("identity", 0.0, 1.0, |u| u).unwrap()),
            expected: |_, _| Expected::Value { value: 0.5, tol: 1e-6 },
        },
        CatalogEntry {
            name: "square_dist",
            description: "g(u) = u² on [0, 1]",
            provenance: "∫ u·2u du = 2/3",
            regime: float,
            method: Method::Lebesgue,
            domain: unit,
            subject: Subject::Distribution(DistributionFunction::new("square", 0.0, 1.0, |u| u * u).unwrap()),
            expected: |_, _| Expected::Value { value: 2.0 / 3.0, tol: 1e-5 },
        },
        CatalogEntry {
            name: "twomass_step",
            description: "masses ⅓ at 2 and ⅔ at 5 on [2, 5]",
            provenance: "Σ value × mass = 2·⅓ + 5·⅔ = 4",
            regime: float,
            method: Method::Lebesgue,
            domain: (2.0, 5.0),
            subject: Subject::Distribution(
                DistributionFunction::point_masses("twomass", 2.0, 5.0, vec![(2.0, 1.0 / 3.0), (5.0, 2.0 / 3.0)])
                    .unwrap(),
            ),
            expected: |_, _| Expected::Value { value: 4.0, tol: 1e-9 },
        },
    ]);

    entries.extend([
        CatalogEntry {
            name: "path_constant",
            description: "x(s) = 1 on [0, 1]; checked by total variation",
            provenance: "no increments",
            regime: float,
            method: Method::Stieltjes,
            domain: unit,
            subject: Subject::Path(Arc::new(|_| 1.0)),
            expected: |_, _| Expected::Value { value: 0.0, tol: 1e-9 },
        },
        CatalogEntry {
            name: "path_linear",
            description: "x(s) = s on [0, 1]; checked by total variation",
            provenance: "monotone path, variation x(1) − x(0)",
            regime: float,
            method: Method::Stieltjes,
            domain: unit,
            subject: Subject::Path(Arc::new(|s| s)),
            expected: |_, _| Expected::Value { value: 1.0, tol: 1e-9 },
        },
        CatalogEntry {
            name: "path_zigzag",
            description: "piecewise-linear, slopes 2, −1, 3, −2 on quarters; checked by total variation",
            provenance: "Σ |slope| × ¼ = 2",
            regime: float,
            method: Method::Stieltjes,
            domain: unit,
            subject: Subject::Path(Arc::new(zigzag)),
            expected: |_, _| Expected::Value { value: 2.0, tol: 1e-4 },
        },
    ]);
    entries
}

/// Entry by name.
pub fn lookup(name: &str) -> Option<CatalogEntry> {
    standard_entries().into_iter().find(|e| e.name == name)
}

/// Names of all entries, in catalog order.
pub fn entry_names() -> Vec<&'static str> {
    standard_entries().iter().map(|e| e.name).collect()
}
