use std::sync::Arc;

use serde_json::{json, Value};

use gaugelab::catalog::{self, dirichlet, CatalogEntry, Method};
use gaugelab::division::TagSelector;
use gaugelab::expr::{EvalError, Expression, Var};
use gaugelab::integrators::{
    darboux_riemann, gauge_integrate, lebesgue_distribution_integrate, rs_integrate, singular_gauges,
    ConvergenceController, DistributionFunction, ExtremaOracle, GridStrategy,
};
use gaugelab::model::{increments_of, length, make_integrand, Convention, IntegralResult, IntervalFn, PointFn, Status};
use gaugelab::{QuadExt, Scalar};

use crate::args::{IntegrateArgs, MethodArg, RuleArg};
use crate::output::{is_json, json_text, metadata, num, opt_num, Csv, Report};

pub const TRACE_HEADER: [&str; 6] = ["level", "n", "sum_min", "sum_max", "estimate", "status"];

pub fn exit_code(status: Status) -> i32 {
    match status {
        Status::Converged => 0,
        Status::Diverged | Status::Oscillating => 2,
        Status::Inconclusive => 3,
    }
}

fn method_of(arg: MethodArg) -> Method {
    match arg {
        MethodArg::Darboux => Method::Darboux,
        MethodArg::Rs => Method::Stieltjes,
        MethodArg::Gauge => Method::Gauge,
        MethodArg::Lebesgue => Method::Lebesgue,
    }
}

fn convention_of(rule: RuleArg) -> Convention {
    match rule {
        RuleArg::Tag => Convention::Tag,
        RuleArg::Left => Convention::LeftEndpoint,
        RuleArg::Mid => Convention::Midpoint,
    }
}

fn controller(args: &IntegrateArgs, entry: Option<&CatalogEntry>, a: f64, b: f64) -> Result<ConvergenceController, String> {
    let mut ctrl = match entry {
        Some(e) => e.controller(a, b),
        None => ConvergenceController::default(),
    };
    if let Some(tol) = args.tol {
        if !(tol > 0.0) {
            return Err(format!("--tol must be positive, got {tol}"));
        }
        ctrl = ctrl.with_tolerance(tol);
    }
    if args.min_level.is_some() || args.max_level.is_some() {
        let min = args.min_level.unwrap_or(ctrl.schedule.initial());
        let max = args.max_level.unwrap_or(ctrl.schedule.max());
        ctrl = ctrl.with_levels(min, max).map_err(|e| e.to_string())?;
    }
    if let Some(w) = args.window {
        ctrl = ctrl.with_window(w);
    }
    if !args.strategies.is_empty() {
        let grids = args
            .strategies
            .iter()
            .map(|s| s.parse::<GridStrategy>().map_err(|e| e.to_string()))
            .collect::<Result<Vec<_>, _>>()?;
        ctrl = ctrl.with_grids(grids);
    }
    if !args.selectors.is_empty() {
        let selectors = args
            .selectors
            .iter()
            .map(|s| TagSelector::by_name(s).ok_or_else(|| format!("unknown tag selector `{s}` (standard, reversed, interior)")))
            .collect::<Result<Vec<_>, _>>()?;
        ctrl = ctrl.with_selectors(selectors);
    }
    ctrl = ctrl.with_compensated(args.compensated);
    ctrl.validate().map_err(|e| e.to_string())?;
    Ok(ctrl)
}

fn parse_expr(text: &str) -> Result<Expression, String> {
    Expression::parse(text).map_err(|e| match e.offset() {
        Some(offset) => format!("cannot parse `{text}` at byte {offset}: {e}"),
        None => format!("cannot parse `{text}`: {e}"),
    })
}

fn float_point(e: &Expression) -> PointFn<f64> {
    let e = e.clone();
    Arc::new(move |s: &f64| e.eval_s(*s))
}

fn exact_point(e: &Expression) -> PointFn<QuadExt> {
    let e = e.clone();
    Arc::new(move |s: &QuadExt| {
        let value = e.eval_s(s.to_f64())?;
        if value.is_finite() {
            Ok(QuadExt::from_f64(value))
        } else {
            Err(EvalError::Domain {
                subexpr: e.to_string(),
                reason: format!("value {value} is not finite"),
            })
        }
    })
}

enum Factor {
    Length,
    Dirichlet,
    Integrator(PointFn<f64>),
}

fn interval_factor(spec: &str) -> Result<Factor, String> {
    match spec {
        "length" => Ok(Factor::Length),
        "dD" => Ok(Factor::Dirichlet),
        _ => {
            let name = spec
                .strip_prefix("dg:")
                .ok_or_else(|| format!("--dI must be `length`, `dD` or `dg:<entry>`, got `{spec}`"))?;
            let entry = catalog::lookup(name).ok_or_else(|| format!("unknown catalog entry `{name}`"))?;
            let g = entry
                .integrator()
                .ok_or_else(|| format!("catalog entry `{name}` is not a function of s"))?;
            Ok(Factor::Integrator(g))
        }
    }
}

struct Run {
    label: String,
    method: Method,
    scalar: &'static str,
    result: IntegralResult,
}

fn run_expression(args: &IntegrateArgs, text: &str, ctrl: &ConvergenceController, a: f64, b: f64) -> Result<Run, String> {
    let method = args
        .method
        .map(method_of)
        .ok_or("--method is required with --expr (darboux, rs, gauge, lebesgue)")?;
    let expr = parse_expr(text)?;
    let factor = interval_factor(&args.d_interval)?;
    let convention = convention_of(args.rule);
    let label = format!("{expr} d[{}]", args.d_interval);
    let err = |e: gaugelab::Error| e.to_string();
    let mut scalar = "float";
    let result = match method {
        Method::Darboux => {
            if !matches!(factor, Factor::Length) || convention != Convention::Tag {
                return Err("darboux integrates f(s) ds only: use --dI length --rule tag".into());
            }
            let oracle_expr = expr.clone();
            // refuse up front rather than on the first cell
            oracle_expr.extrema(Var::S, a, b).map_err(err)?;
            let oracle = ExtremaOracle::new(move |u, v| oracle_expr.extrema(Var::S, u, v));
            darboux_riemann(&float_point(&expr), &oracle, a, b, ctrl).map_err(err)?
        }
        Method::Lebesgue => {
            if !matches!(factor, Factor::Length) {
                return Err("lebesgue takes the expression as the distribution function g(s); omit --dI".into());
            }
            let e = expr.clone();
            let g = DistributionFunction::new(expr.to_string(), a, b, move |u| e.eval_s(u).unwrap_or(f64::NAN))
                .map_err(err)?;
            lebesgue_distribution_integrate(&g, ctrl).map_err(err)?
        }
        Method::Stieltjes | Method::Gauge => match factor {
            Factor::Dirichlet => {
                scalar = "exact";
                let h = make_integrand(label.clone(), Some(exact_point(&expr)), dirichlet(), convention).map_err(err)?;
                let (qa, qb) = (QuadExt::from_f64(a), QuadExt::from_f64(b));
                let family = args
                    .singular_at
                    .map(|p| singular_gauges(qa.clone(), qb.clone(), QuadExt::from_f64(p)));
                let r = if method == Method::Stieltjes {
                    rs_integrate(&h, qa, qb, ctrl)
                } else {
                    gauge_integrate(&h, qa, qb, ctrl, family.as_ref())
                };
                r.map_err(err)?.map_sums(|s| s.to_f64())
            }
            Factor::Length | Factor::Integrator(..) => {
                let interval: IntervalFn<f64> = match factor {
                    Factor::Integrator(g) => increments_of(g),
                    _ => length(),
                };
                let h = make_integrand(label.clone(), Some(float_point(&expr)), interval, convention).map_err(err)?;
                if method == Method::Stieltjes {
                    rs_integrate(&h, a, b, ctrl).map_err(err)?
                } else {
                    let family = args.singular_at.map(|p| singular_gauges(a, b, p));
                    gauge_integrate(&h, a, b, ctrl, family.as_ref()).map_err(err)?
                }
            }
        },
    };
    Ok(Run {
        label,
        method,
        scalar,
        result,
    })
}

pub fn run(args: &IntegrateArgs) -> Result<Report, String> {
    let entry = match &args.catalog {
        Some(name) => Some(catalog::lookup(name).ok_or_else(|| {
            format!("unknown catalog entry `{name}`; known: {}", catalog::entry_names().join(", "))
        })?),
        None => None,
    };
    let (da, db) = entry.as_ref().map(|e| e.domain).unwrap_or((0.0, 1.0));
    let (a, b) = (args.a.unwrap_or(da), args.b.unwrap_or(db));
    if !(a.is_finite() && b.is_finite() && a < b) {
        return Err(format!("need finite a < b, got [{a}, {b}]"));
    }
    let ctrl = controller(args, entry.as_ref(), a, b)?;
    let run = match (&entry, &args.expr) {
        (Some(e), _) => {
            let method = args.method.map(method_of).unwrap_or(e.method);
            let result = e.run_with(method, a, b, &ctrl).map_err(|e| e.to_string())?;
            Run {
                label: e.name.to_string(),
                method,
                scalar: match e.regime {
                    gaugelab::ScalarRegime::Float => "float",
                    gaugelab::ScalarRegime::Exact => "exact",
                },
                result,
            }
        }
        (None, Some(text)) => run_expression(args, text, &ctrl, a, b)?,
        (None, None) => return Err("give --expr or --catalog".into()),
    };
    let r = &run.result;
    let summary = format!(
        "{} {} on [{}, {}]: {}, estimate {}",
        run.method,
        run.label,
        num(a),
        num(b),
        r.status,
        r.estimate.map(num).unwrap_or_else(|| "none".into())
    );
    let body = if is_json(&args.output) {
        json_text(&json_report(&run, a, b, &ctrl, args))
    } else {
        csv_report(r)
    };
    Ok(Report {
        body,
        summary,
        exit: exit_code(r.status),
    })
}

fn csv_report(r: &IntegralResult) -> String {
    let mut csv = Csv::new(&TRACE_HEADER);
    let last = r.trace.len().saturating_sub(1);
    for (i, e) in r.trace.iter().enumerate() {
        let (estimate, status) = if i == last {
            (opt_num(r.estimate), r.status.as_str())
        } else {
            (num(e.midpoint()), "pending")
        };
        csv.row([
            e.level.to_string(),
            e.n.to_string(),
            num(e.sum_min()),
            num(e.sum_max()),
            estimate,
            status.to_string(),
        ]);
    }
    csv.finish()
}

fn json_report(run: &Run, a: f64, b: f64, ctrl: &ConvergenceController, args: &IntegrateArgs) -> Value {
    let r = &run.result;
    let last = r.trace.len().saturating_sub(1);
    let trace: Vec<Value> = r
        .trace
        .iter()
        .enumerate()
        .map(|(i, e)| {
            let (estimate, status) = if i == last {
                (r.estimate, r.status.as_str())
            } else {
                (Some(e.midpoint()), "pending")
            };
            json!({
                "level": e.level,
                "n": e.n,
                "sum_min": e.sum_min(),
                "sum_max": e.sum_max(),
                "estimate": estimate,
                "status": status,
                "sums": e.sums,
                "cells": e.cell_counts,
            })
        })
        .collect();
    let strategies: Vec<&str> = match run.method {
        Method::Gauge => ctrl.selectors.iter().map(|s| s.name()).collect(),
        Method::Darboux => vec!["lower", "upper"],
        _ => ctrl.grids.iter().map(|g| g.name()).collect(),
    };
    json!({
        "command": "integrate",
        "method": run.method.name(),
        "integrand": run.label,
        "a": a,
        "b": b,
        "status": r.status.as_str(),
        "estimate": r.estimate,
        "error_bound": r.error_bound,
        "stable_from": r.stable_from,
        "trace": trace,
        "metadata": metadata(&args.output, json!({
            "scalar": run.scalar,
            "strategies": strategies,
            "tolerance": { "abs": ctrl.tolerance.abs, "rel": ctrl.tolerance.rel },
            "window": ctrl.window,
            "growth": ctrl.growth,
            "gap": ctrl.gap,
            "levels": [ctrl.schedule.initial(), ctrl.schedule.max()],
            "compensated": ctrl.compensated,
        })),
    })
}
