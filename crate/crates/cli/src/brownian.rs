use serde_json::{json, Value};

use gaugelab::expr::Expression;
use gaugelab::stochastic::{
    increment_integral, ito_formula_residual, ito_sum, quadratic_variation, stratonovich_sum, total_variation,
    DyadicPath, MonteCarlo, PathStatistics, GAUSSIAN_TRANSFORM, MAX_PATH_LEVEL, UNIFORM_SOURCE,
};

use crate::args::{BrownianArgs, BrownianSub};
use crate::output::{is_json, json_text, metadata, num, write_file, Csv, Report};

pub const STATS_HEADER: [&str; 8] = ["command", "t", "level", "paths", "seed", "mean", "variance", "stderr"];

struct Functions {
    f: Option<Expression>,
    df: Option<Expression>,
    d2f: Option<Expression>,
}

fn expression(flag: &str, text: &Option<String>, needed: bool, sub: BrownianSub) -> Result<Option<Expression>, String> {
    match text {
        Some(t) => Expression::parse(t)
            .map(Some)
            .map_err(|e| format!("cannot parse --{flag} `{t}`: {e}")),
        None if needed => Err(format!("`brownian {}` needs --{flag}", sub.name())),
        None => Ok(None),
    }
}

fn estimate(sub: BrownianSub, fns: &Functions, p: &DyadicPath, level: u32) -> gaugelab::Result<f64> {
    let f = || fns.f.as_ref().expect("validated");
    match sub {
        BrownianSub::Qv => quadratic_variation(p, level),
        BrownianSub::Ito => ito_sum(p, f(), level),
        BrownianSub::Strat => stratonovich_sum(p, f(), level),
        BrownianSub::Increment => increment_integral(p, level),
        BrownianSub::Variation => total_variation(p, level),
        BrownianSub::ItoResidual => ito_formula_residual(
            p,
            f(),
            fns.df.as_ref().expect("validated"),
            fns.d2f.as_ref().expect("validated"),
            level,
        ),
    }
}

pub fn run(args: &BrownianArgs) -> Result<Report, String> {
    let sub = args.sub;
    if !(args.t > 0.0 && args.t.is_finite()) {
        return Err(format!("--t must be positive, got {}", args.t));
    }
    if args.paths == 0 {
        return Err("--paths must be at least 1".into());
    }
    let extra = u32::from(sub == BrownianSub::Strat);
    if args.level + extra > MAX_PATH_LEVEL {
        return Err(format!("--level must be at most {}", MAX_PATH_LEVEL - extra));
    }
    let from = args.from_level.unwrap_or(args.level);
    if from > args.level {
        return Err(format!("--from-level {from} exceeds --level {}", args.level));
    }
    let needs_f = matches!(sub, BrownianSub::Ito | BrownianSub::Strat | BrownianSub::ItoResidual);
    let residual = sub == BrownianSub::ItoResidual;
    let fns = Functions {
        f: expression("f", &args.f, needs_f, sub)?,
        df: expression("df", &args.df, residual, sub)?,
        d2f: expression("d2f", &args.d2f, residual, sub)?,
    };

    let levels: Vec<u32> = (from..=args.level).collect();
    let mc = MonteCarlo::new(args.paths, args.t, args.level + extra, args.seed);
    let per_path = mc
        .map(|p| levels.iter().map(|&l| estimate(sub, &fns, p, l)).collect::<gaugelab::Result<Vec<f64>>>())
        .map_err(|e| e.to_string())?;
    let mut stats = Vec::with_capacity(levels.len());
    for (k, _) in levels.iter().enumerate() {
        let column: Vec<f64> = per_path.iter().map(|row| row[k]).collect();
        stats.push(PathStatistics::from_values(column, true).map_err(|e| e.to_string())?);
    }

    if let Some(path) = &args.per_path {
        let mut csv = Csv::new(&["path", "value"]);
        let last = stats.last().and_then(|s| s.values.as_ref()).expect("values retained");
        for (id, v) in last.iter().enumerate() {
            csv.row([(id + 1).to_string(), num(*v)]);
        }
        write_file(path, &csv.finish())?;
    }

    let top = stats.last().expect("at least one level");
    let summary = format!(
        "brownian {} t={} level={} paths={} seed={}: mean {} ± {}",
        sub.name(),
        num(args.t),
        args.level,
        args.paths,
        args.seed,
        num(top.mean),
        num(top.std_error)
    );
    let body = if is_json(&args.output) {
        json_text(&json_report(args, &levels, &stats))
    } else {
        let mut csv = Csv::new(&STATS_HEADER);
        for (level, s) in levels.iter().zip(&stats) {
            csv.row([
                sub.name().to_string(),
                num(args.t),
                level.to_string(),
                args.paths.to_string(),
                args.seed.to_string(),
                num(s.mean),
                num(s.variance),
                num(s.std_error),
            ]);
        }
        csv.finish()
    };
    Ok(Report { body, summary, exit: 0 })
}

fn stats_json(args: &BrownianArgs, level: u32, s: &PathStatistics, with_values: bool) -> Value {
    let mut v = json!({
        "command": args.sub.name(),
        "t": args.t,
        "level": level,
        "paths": args.paths,
        "seed": args.seed,
        "mean": s.mean,
        "variance": s.variance,
        "stderr": s.std_error,
    });
    if with_values {
        v["values"] = json!(s.values);
    }
    v
}

fn json_report(args: &BrownianArgs, levels: &[u32], stats: &[PathStatistics]) -> Value {
    let top = stats.len() - 1;
    let mut report = stats_json(args, levels[top], &stats[top], args.per_path.is_some());
    if levels.len() > 1 {
        report["levels"] = levels
            .iter()
            .zip(stats)
            .map(|(&l, s)| stats_json(args, l, s, false))
            .collect();
    }
    let mut functions = serde_json::Map::new();
    for (key, text) in [("f", &args.f), ("df", &args.df), ("d2f", &args.d2f)] {
        if let Some(t) = text {
            functions.insert(key.into(), json!(t));
        }
    }
    report["metadata"] = metadata(
        &args.output,
        json!({
            "gaussian": GAUSSIAN_TRANSFORM,
            "uniform": UNIFORM_SOURCE,
            "bridge": "dyadic, midpoint variance (v - u)/4",
            "functions": functions,
        }),
    );
    report
}
