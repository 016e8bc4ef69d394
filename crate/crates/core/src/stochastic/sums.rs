//! Pathwise sums over the level-`L` cells of a [`DyadicPath`].
//!
//! All sums are accumulated left to right in cell order.

use crate::error::{Error, Result};
use crate::expr::{Binding, EvalError, Expression};
use crate::stochastic::path::DyadicPath;

/// A real function of the path value.
pub trait PathFn: Sync {
    fn apply(&self, x: f64) -> Result<f64, EvalError>;
}

impl<F: Fn(f64) -> f64 + Sync> PathFn for F {
    fn apply(&self, x: f64) -> Result<f64, EvalError> {
        Ok(self(x))
    }
}

impl PathFn for Expression {
    fn apply(&self, x: f64) -> Result<f64, EvalError> {
        self.eval_any(x)
    }
}

/// A real function of time and path value.
pub trait TimePathFn: Sync {
    fn apply(&self, s: f64, x: f64) -> Result<f64, EvalError>;
}

impl<F: Fn(f64, f64) -> f64 + Sync> TimePathFn for F {
    fn apply(&self, s: f64, x: f64) -> Result<f64, EvalError> {
        Ok(self(s, x))
    }
}

impl TimePathFn for Expression {
    fn apply(&self, s: f64, x: f64) -> Result<f64, EvalError> {
        self.eval(&Binding::default().with_s(s).with_x(x))
    }
}

/// How the second-order term of the time-dependent Itô residual is
/// integrated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum SecondOrder {
    /// `½ Σ f_xx(u, x(u))·|I|`, the ds-integral read literally.
    #[default]
    Time,
    /// `½ Σ f_xx(u, x(u))·(Δx)²`, the form that telescopes for quadratics.
    QuadraticVariation,
}

/// Level-`level` grid values of `p`.
fn grid(p: &DyadicPath, level: u32) -> Result<Vec<f64>> {
    p.grid_values(level)
}

/// `Σ (x(v) − x(u))`.
pub fn increment_integral(p: &DyadicPath, level: u32) -> Result<f64> {
    let x = grid(p, level)?;
    Ok(x.windows(2).map(|w| w[1] - w[0]).sum())
}

/// Itô sum `Σ f(x(u))·(x(v) − x(u))`.
pub fn ito_sum(p: &DyadicPath, f: &impl PathFn, level: u32) -> Result<f64> {
    let x = grid(p, level)?;
    let mut total = 0.0;
    for w in x.windows(2) {
        total += f.apply(w[0])? * (w[1] - w[0]);
    }
    Ok(total)
}

/// Stratonovich sum `Σ f(x(w))·(x(v) − x(u))`, `w` the temporal midpoint.
/// Needs the path at level `level + 1` or finer.
pub fn stratonovich_sum(p: &DyadicPath, f: &impl PathFn, level: u32) -> Result<f64> {
    if p.level() <= level {
        return Err(Error::InsufficientLevel {
            have: p.level(),
            need: level + 1,
        });
    }
    let fine = grid(p, level + 1)?;
    let mut total = 0.0;
    for w in fine.windows(3).step_by(2) {
        total += f.apply(w[1])? * (w[2] - w[0]);
    }
    Ok(total)
}

/// `Σ (x(v) − x(u))²`.
pub fn quadratic_variation(p: &DyadicPath, level: u32) -> Result<f64> {
    let x = grid(p, level)?;
    Ok(x.windows(2).map(|w| (w[1] - w[0]).powi(2)).sum())
}

/// `Σ |x(v) − x(u)|`.
pub fn total_variation(p: &DyadicPath, level: u32) -> Result<f64> {
    let x = grid(p, level)?;
    Ok(x.windows(2).map(|w| (w[1] - w[0]).abs()).sum())
}

/// `ito_sum(identity) + ½·QV − ½(x(t)² − x(0)²)`, zero up to rounding.
pub fn ito_identity_residual(p: &DyadicPath, level: u32) -> Result<f64> {
    let ito = ito_sum(p, &|x: f64| x, level)?;
    let qv = quadratic_variation(p, level)?;
    let (x0, xt) = (p.origin(), p.end());
    Ok(ito + 0.5 * qv - 0.5 * (xt * xt - x0 * x0))
}

/// `f(x(t)) − f(x(0)) − Σ f′(x(u))Δx − ½ Σ f″(x(u))(Δx)²`.
pub fn ito_formula_residual(
    p: &DyadicPath,
    f: &impl PathFn,
    df: &impl PathFn,
    d2f: &impl PathFn,
    level: u32,
) -> Result<f64> {
    let x = grid(p, level)?;
    let mut first = 0.0;
    let mut second = 0.0;
    for w in x.windows(2) {
        let dx = w[1] - w[0];
        first += df.apply(w[0])? * dx;
        second += d2f.apply(w[0])? * dx * dx;
    }
    Ok(f.apply(p.end())? - f.apply(p.origin())? - first - 0.5 * second)
}

/// Residual of the time-dependent Itô formula on the level-`level` division:
/// `f(t, x(t)) − f(0, x(0)) − Σ f_s·|I| − Σ f_x·Δx − ½ Σ f_xx·|I|`, all
/// partials taken at the left endpoint `(u, x(u))`.
pub fn ito_formula_residual_time(
    p: &DyadicPath,
    f: &impl TimePathFn,
    fs: &impl TimePathFn,
    fx: &impl TimePathFn,
    fxx: &impl TimePathFn,
    level: u32,
) -> Result<f64> {
    ito_formula_residual_time_with(p, f, fs, fx, fxx, level, SecondOrder::Time)
}

/// [`ito_formula_residual_time`] with a choice of second-order measure.
pub fn ito_formula_residual_time_with(
    p: &DyadicPath,
    f: &impl TimePathFn,
    fs: &impl TimePathFn,
    fx: &impl TimePathFn,
    fxx: &impl TimePathFn,
    level: u32,
    second_order: SecondOrder,
) -> Result<f64> {
    let x = grid(p, level)?;
    let t = p.horizon();
    let n = x.len() - 1;
    let h = t / n as f64;
    let mut time = 0.0;
    let mut first = 0.0;
    let mut second = 0.0;
    for (j, w) in x.windows(2).enumerate() {
        let u = t * j as f64 / n as f64;
        let dx = w[1] - w[0];
        time += fs.apply(u, w[0])? * h;
        first += fx.apply(u, w[0])? * dx;
        let weight = match second_order {
            SecondOrder::Time => h,
            SecondOrder::QuadraticVariation => dx * dx,
        };
        second += fxx.apply(u, w[0])? * weight;
    }
    Ok(f.apply(t, p.end())? - f.apply(0.0, p.origin())? - time - first - 0.5 * second)
}
