//! Acceptance suite: one PASS/FAIL line per criterion.

use std::panic::{self, AssertUnwindSafe};
use std::path::Path;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use gaugelab::catalog::{dirichlet_integrand, lookup, standard_entries, step_half, Subject};
use gaugelab::division::delta_fine_division;
use gaugelab::division::riemann_sum;
use gaugelab::expr::{parse, BinOp, Expression, Func, Var};
use gaugelab::integrators::{constant_gauges, oscillation_probe, rs_integrate, ConvergenceController, GridStrategy};
use gaugelab::model::{increments_of, make_integrand, point_fn, BurkillIntegrand, Convention, PointFn, Status};
use gaugelab::stochastic::{
    brownian_path, increment_integral, ito_formula_residual, ito_identity_residual, ito_sum, mc_run, quadratic_variation,
    stratonovich_sum, total_variation, MonteCarlo, PathStatistics,
};
use gaugelab::{QuadExt, Scalar};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn within_time(start: Instant, limit: Duration, what: &str) -> Result<(), String> {
    let took = start.elapsed();
    if took <= limit {
        Ok(())
    } else {
        Err(format!("{what} took {took:.2?}, limit {limit:?}"))
    }
}

fn integrand(name: &str) -> BurkillIntegrand<f64> {
    match lookup(name).expect("catalog entry").subject {
        Subject::Integrand { build, .. } => build(),
        _ => panic!("{name} is not an integrand entry"),
    }
}

/// Gauge sum on [0, 1] with the first constant-gauge level whose division has `n` cells.
fn gauge_sum_with_cells(h: &BurkillIntegrand<f64>, n: usize) -> Result<f64, String> {
    let family = constant_gauges(0.0, 1.0);
    for level in 0..=30 {
        let d = delta_fine_division(0.0, 1.0, &family(level).map_err(err)?).map_err(err)?;
        if d.len() == n {
            return riemann_sum(h, &d).map_err(err);
        }
        ensure!(d.len() < n, "no constant-gauge level with {n} cells (level {level} has {})", d.len());
    }
    Err(format!("no constant-gauge level with {n} cells"))
}

fn catalog_conformance() -> Outcome {
    let start = Instant::now();
    let h1 = integrand("h1");
    let family = constant_gauges(0.0, 1.0);
    for level in 0..=14 {
        let d = delta_fine_division(0.0, 1.0, &family(level).map_err(err)?).map_err(err)?;
        let s = riemann_sum(&h1, &d).map_err(err)?;
        ensure!(s == 1.0, "h1 at level {level}: {s}");
    }
    let h3 = gauge_sum_with_cells(&integrand("h3"), 1 << 12)?;
    ensure!((h3 - 1.0 / 3.0).abs() <= 1e-6, "h3 at n=2^12: {h3}");
    let h4 = gauge_sum_with_cells(&integrand("h4"), 1 << 17)?;
    ensure!(h4.abs() <= 1e-5, "h4 at n=2^17: {h4}");
    let h5 = gauge_sum_with_cells(&integrand("h5"), 1 << 17)?;
    ensure!((h5 - 1.0 / 3.0).abs() <= 1e-4, "h5 at n=2^17: {h5}");

    let h2 = lookup("h2").unwrap();
    let ctrl = ConvergenceController::default().with_levels(4, 10).map_err(err)?;
    let r = h2.run(0.0, 1.0, &ctrl).map_err(err)?;
    ensure!(r.status == Status::Diverged, "h2 status {}", r.status);
    ensure!(r.trace.iter().all(|e| e.level <= 10), "h2 ran past level 10");
    within_time(start, Duration::from_secs(5), "catalog runs")?;
    Ok(format!("h3 {h3:.9}, h4 {h4:.2e}, h5 {h5:.6}, h2 diverged"))
}

fn constant_rs(beta: f64, g: PointFn<f64>, a: f64, b: f64) -> Result<(), String> {
    let h = make_integrand("beta dg", Some(point_fn(move |_: &f64| beta)), increments_of(g.clone()), Convention::Tag)
        .map_err(err)?;
    let ctrl = ConvergenceController::default();
    let r = rs_integrate(&h, a, b, &ctrl).map_err(err)?;
    let (ga, gb) = (g(&a).map_err(err)?, g(&b).map_err(err)?);
    let want = beta * (gb - ga);
    ensure!(r.status == Status::Converged, "beta {beta}: status {}", r.status);
    ensure!(r.stable_from == Some(ctrl.schedule.initial()), "beta {beta}: stable from {:?}", r.stable_from);
    let got = r.estimate.unwrap_or(f64::NAN);
    let scale = want.abs().max(beta.abs() * ga.abs().max(gb.abs()));
    ensure!((got - want).abs() <= 1e-12 * scale, "beta {beta}: {got} vs {want}");
    Ok(())
}

fn constant_integrand() -> Outcome {
    let betas = [-2.0, 0.0, 1.0, std::f64::consts::PI];
    let mut checked = 0;
    for entry in standard_entries() {
        let Some(g) = entry.integrator() else { continue };
        let (a, b) = entry.domain;
        for beta in betas {
            constant_rs(beta, g.clone(), a, b).map_err(|e| format!("{}: {e}", entry.name))?;
        }
        checked += 1;
    }
    for id in 1..=20 {
        let p = brownian_path(2718, id, 1.0, 10).map_err(err)?;
        let g = point_fn(move |s: &f64| p.value_at(*s));
        for beta in betas {
            constant_rs(beta, g.clone(), 0.0, 1.0).map_err(|e| format!("path {id}: {e}"))?;
        }
    }
    // Dirichlet in exact arithmetic, including an irrational endpoint
    let ctrl = ConvergenceController::default();
    let half_root = QuadExt::from_parts(0, 1, 1, 2);
    for (a, b, jump) in [
        (QuadExt::zero(), QuadExt::one(), 0i64),
        (QuadExt::zero(), half_root, -1),
    ] {
        for beta in betas {
            let bq = QuadExt::from_f64(beta);
            let h = dirichlet_integrand("beta dD", point_fn({
                let bq = bq.clone();
                move |_: &QuadExt| bq.clone()
            }));
            let r = rs_integrate(&h, a.clone(), b.clone(), &ctrl).map_err(err)?;
            let want = bq.clone() * QuadExt::ratio(jump, 1);
            ensure!(r.status == Status::Converged, "beta {beta} dD: {}", r.status);
            ensure!(r.stable_from == Some(ctrl.schedule.initial()), "beta {beta} dD: {:?}", r.stable_from);
            ensure!(r.final_sums.iter().all(|s| *s == want), "beta {beta} dD on [{a}, {b}] is not exact");
        }
    }
    Ok(format!("{checked} catalog integrators, 20 paths, dD exact"))
}

fn dirichlet_counterexample() -> Outcome {
    let start = Instant::now();
    let h = dirichlet_integrand("step dD", step_half());
    let rows = oscillation_probe(
        &h,
        QuadExt::zero(),
        QuadExt::one(),
        &[GridStrategy::RationalLeft, GridStrategy::RationalMid, GridStrategy::IrrationalLeft],
        2..=11,
    )
    .map_err(err)?;
    ensure!(rows.len() >= 8, "only {} probe levels", rows.len());
    for row in &rows {
        ensure!(row.spread == QuadExt::one(), "level {}: spread {}", row.level, row.spread);
    }
    let step = lookup("step_dD").unwrap();
    let r = step.run(0.0, 1.0, &step.controller(0.0, 1.0).with_window(8)).map_err(err)?;
    ensure!(r.status == Status::Oscillating, "step dD status {}", r.status);
    let persistent = r.trace.iter().filter(|e| e.spread() == 1.0).count();
    ensure!(persistent >= 8 && persistent == r.trace.len(), "spread 1 on {persistent} levels");

    let beta = lookup("const_dD").unwrap();
    let r = beta.run(0.0, 1.0, &beta.controller(0.0, 1.0)).map_err(err)?;
    ensure!(r.status == Status::Converged && r.estimate == Some(0.0), "const dD: {} {:?}", r.status, r.estimate);
    within_time(start, Duration::from_secs(1), "Dirichlet runs")?;
    Ok(format!("spread 1 on {} probe levels and {persistent} controller levels", rows.len()))
}

fn telescoping() -> Outcome {
    let mc = MonteCarlo::new(1000, 1.0, 14, 4242);
    let worst = mc
        .values(|p| {
            let inc = p.end() - p.origin();
            let mut worst: f64 = 0.0;
            for level in 0..=14 {
                let d = (increment_integral(p, level)? - inc).abs() / inc.abs().max(f64::MIN_POSITIVE);
                worst = worst.max(d);
            }
            Ok(worst)
        })
        .map_err(err)?
        .into_iter()
        .fold(0.0, f64::max);
    ensure!(worst <= 1e-12, "relative error {worst:e}");
    Ok(format!("worst relative error {worst:.1e}"))
}

fn ito_identity() -> Outcome {
    let mc = MonteCarlo::new(1000, 1.0, 14, 1618);
    let worst = mc
        .values(|p| {
            let scale = p.end().powi(2).max(1.0);
            let mut worst: f64 = 0.0;
            for level in 4..=14 {
                worst = worst.max(ito_identity_residual(p, level)?.abs() / scale);
            }
            Ok(worst)
        })
        .map_err(err)?
        .into_iter()
        .fold(0.0, f64::max);
    ensure!(worst <= 1e-10, "scaled residual {worst:e}");
    Ok(format!("worst scaled residual {worst:.1e}"))
}

fn qv_moments() -> Outcome {
    let start = Instant::now();
    let s = mc_run(|p| quadratic_variation(p, 12), 1000, 1.0, 12, 42).map_err(err)?;
    let target = 2.0 * 2f64.powi(-12);
    ensure!((0.997..=1.003).contains(&s.mean), "mean {}", s.mean);
    ensure!(s.variance >= 0.5 * target && s.variance <= 2.0 * target, "variance {}", s.variance);
    within_time(start, Duration::from_secs(10), "QV Monte Carlo")?;
    Ok(format!("mean {:.5}, variance {:.3e}", s.mean, s.variance))
}

fn convention_gap() -> Outcome {
    let id = |x: f64| x;
    let mc = MonteCarlo::new(1000, 1.0, 13, 42);
    let pairs = mc
        .map(|p| Ok((ito_sum(p, &id, 12)?, stratonovich_sum(p, &id, 12)?)))
        .map_err(err)?;
    let ito = PathStatistics::from_values(pairs.iter().map(|p| p.0).collect(), false).map_err(err)?;
    let strat = PathStatistics::from_values(pairs.iter().map(|p| p.1).collect(), false).map_err(err)?;
    ensure!(ito.mean.abs() <= 3.0 * ito.std_error, "Itô mean {} ± {}", ito.mean, ito.std_error);
    ensure!(
        (strat.mean - 0.5).abs() <= 3.0 * strat.std_error,
        "Stratonovich mean {} ± {}",
        strat.mean,
        strat.std_error
    );
    Ok(format!("Itô {:.4} ± {:.4}, Stratonovich {:.4} ± {:.4}", ito.mean, ito.std_error, strat.mean, strat.std_error))
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

fn ito_formula() -> Outcome {
    let (f, df, d2f) = (|x: f64| x * x, |x: f64| 2.0 * x, |_: f64| 2.0);
    let mc = MonteCarlo::new(200, 1.0, 14, 2024);
    let worst = mc
        .values(|p| {
            let scale = p.max_abs().powi(2).max(1.0);
            let mut worst: f64 = 0.0;
            for level in 0..=14 {
                worst = worst.max(ito_formula_residual(p, &f, &df, &d2f, level)?.abs() / scale);
            }
            Ok(worst)
        })
        .map_err(err)?
        .into_iter()
        .fold(0.0, f64::max);
    ensure!(worst <= 1e-10, "x² scaled residual {worst:e}");

    let (g, dg, d2g) = (|x: f64| x * x * x, |x: f64| 3.0 * x * x, |x: f64| 6.0 * x);
    let cubic = mc
        .map(|p| Ok((ito_formula_residual(p, &g, &dg, &d2g, 12)?.abs(), ito_formula_residual(p, &g, &dg, &d2g, 14)?.abs())))
        .map_err(err)?;
    let m12 = median(cubic.iter().map(|c| c.0).collect());
    let m14 = median(cubic.iter().map(|c| c.1).collect());
    ensure!(m12 <= 0.05, "x³ median at level 12: {m12}");
    ensure!(m14 < m12, "x³ median did not shrink: {m12} → {m14}");
    Ok(format!("x² worst {worst:.1e}; x³ median {m12:.4} → {m14:.4}"))
}

fn unbounded_variation() -> Outcome {
    let mc = MonteCarlo::new(500, 1.0, 14, 9);
    let rows = mc
        .map(|p| (8..=14).map(|l| total_variation(p, l)).collect::<gaugelab::Result<Vec<f64>>>())
        .map_err(err)?;
    let means: Vec<f64> = (0..7).map(|k| rows.iter().map(|r| r[k]).sum::<f64>() / rows.len() as f64).collect();
    let ratios: Vec<f64> = means.windows(2).map(|w| w[1] / w[0]).collect();
    for (k, r) in ratios.iter().enumerate() {
        ensure!((1.27..=1.56).contains(r), "ratio level {} → {}: {r}", 8 + k, 9 + k);
    }
    let (lo, hi) = ratios.iter().fold((f64::INFINITY, 0.0f64), |(lo, hi), r| (lo.min(*r), hi.max(*r)));
    Ok(format!("ratios in [{lo:.4}, {hi:.4}]"))
}

fn lebesgue_as_rs() -> Outcome {
    let mut out = Vec::new();
    for (name, value, tol) in [("identity_dist", 0.5, 1e-6), ("twomass_step", 4.0, 1e-9), ("square_dist", 2.0 / 3.0, 1e-5)] {
        let e = lookup(name).unwrap();
        let (a, b) = e.domain;
        let r = e.run(a, b, &e.controller(a, b)).map_err(err)?;
        let got = r.estimate.ok_or_else(|| format!("{name}: {}", r.status))?;
        ensure!(r.status == Status::Converged, "{name}: {}", r.status);
        ensure!((got - value).abs() <= tol, "{name}: {got} vs {value}");
        out.push(format!("{name} {got}"));
    }
    Ok(out.join(", "))
}

const CLI_RUNS: &[&[&str]] = &[
    &["integrate", "--method", "gauge", "--expr", "s^2", "--dI", "length", "--a", "0", "--b", "1"],
    &["integrate", "--method", "rs", "--catalog", "step_dD"],
    &["integrate", "--method", "lebesgue", "--catalog", "twomass_step"],
    &["integrate", "--method", "gauge", "--expr", "s^2", "--a", "0", "--b", "1", "--format", "json"],
    &["brownian", "qv", "--t", "1", "--level", "12", "--paths", "1000", "--seed", "42"],
    &["brownian", "increment", "--t", "1", "--level", "8", "--paths", "10", "--seed", "7", "--format", "json"],
    &["brownian", "variation", "--t", "1", "--level", "14", "--from-level", "8", "--paths", "100", "--seed", "9"],
    &["brownian", "strat", "--t", "1", "--level", "12", "--paths", "1000", "--seed", "42", "--f", "x"],
    &["series", "--n", "1000", "--step", "100"],
];

fn run_cli(args: &[&str], dir: &Path, tag: &str) -> Result<(i32, Vec<u8>, Vec<u8>), String> {
    let per_path = dir.join(format!("per_path_{tag}.csv"));
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_gaugelab"));
    cmd.args(args).arg("--no-timestamp");
    if args[0] == "brownian" {
        cmd.arg("--per-path").arg(&per_path);
    }
    let out = cmd.output().map_err(err)?;
    let extra = if args[0] == "brownian" { std::fs::read(&per_path).map_err(err)? } else { Vec::new() };
    Ok((out.status.code().unwrap_or(-1), out.stdout, extra))
}

fn determinism() -> Outcome {
    let dir = std::env::temp_dir().join(format!("gaugelab-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).map_err(err)?;
    let result = (|| {
        for args in CLI_RUNS {
            let first = run_cli(args, &dir, "a")?;
            let second = run_cli(args, &dir, "b")?;
            let line = args.join(" ");
            ensure!([0, 2].contains(&first.0), "`{line}` exited {}", first.0);
            ensure!(first == second, "`{line}` differs between runs");
            ensure!(!first.1.is_empty(), "`{line}` printed nothing");
        }
        Ok(format!("{} commands byte-identical", CLI_RUNS.len()))
    })();
    let _ = std::fs::remove_dir_all(&dir);
    result
}

fn expression() -> impl Strategy<Value = Expression> {
    let leaf = prop_oneof![
        (0u32..1000, 0u32..4).prop_map(|(m, e)| Expression::Num(m as f64 / 10f64.powi(e as i32))),
        Just(Expression::Var(Var::S)),
        Just(Expression::Var(Var::X)),
    ];
    leaf.prop_recursive(6, 64, 2, |inner| {
        let op = prop_oneof![
            Just(BinOp::Add),
            Just(BinOp::Sub),
            Just(BinOp::Mul),
            Just(BinOp::Div),
            Just(BinOp::Pow)
        ];
        prop_oneof![
            inner.clone().prop_map(|e| Expression::Neg(Box::new(e))),
            (op, inner.clone(), inner.clone()).prop_map(|(o, l, r)| Expression::Bin(o, Box::new(l), Box::new(r))),
            (0usize..Func::ALL.len(), inner).prop_map(|(f, e)| Expression::Call(Func::ALL[f], Box::new(e))),
        ]
    })
}

const PRECEDENCE: [(&str, &str, f64); 20] = [
    ("2^3^2", "2^(3^2)", 512.0),
    ("-s^2", "-(s^2)", -9.0),
    ("2+3*s", "2+(3*s)", 11.0),
    ("2*3+4", "(2*3)+4", 10.0),
    ("10-4-3", "(10-4)-3", 3.0),
    ("64/4/2", "(64/4)/2", 8.0),
    ("2*3^2", "2*(3^2)", 18.0),
    ("-2^2", "-(2^2)", -4.0),
    ("(-2)^2", "(-2)^2", 4.0),
    ("2^-1", "2^(-1)", 0.5),
    ("2^-1^2", "2^(-(1^2))", 0.5),
    ("--s", "-(-s)", 3.0),
    ("s-(-s)", "s-(-s)", 6.0),
    ("1-2+3", "(1-2)+3", 2.0),
    ("8/2*4", "(8/2)*4", 16.0),
    ("sqrt(16)^2", "(sqrt(16))^2", 16.0),
    ("-sqrt(4)*s", "(-sqrt(4))*s", -6.0),
    ("2*-s", "2*(-s)", -6.0),
    ("exp(0)+2^2*s", "exp(0)+((2^2)*s)", 13.0),
    ("s/2^2", "s/(2^2)", 0.75),
];

const MALFORMED: [(&str, usize); 10] = [
    ("s +", 3),
    ("2*(s+1", 6),
    ("s)", 1),
    ("foo(s)", 0),
    ("s ^ * 2", 4),
    ("3 $ s", 2),
    ("s 2", 2),
    ("exp()", 4),
    ("2 + y", 4),
    ("((((", 4),
];

fn parser_suite() -> Outcome {
    let mut runner = TestRunner::new(Config {
        cases: 1000,
        failure_persistence: None,
        ..Config::default()
    });
    runner
        .run(&expression(), |e| {
            let printed = e.to_string();
            let back = parse(&printed).map_err(|x| TestCaseError::fail(format!("`{printed}`: {x}")))?;
            prop_assert_eq!(&back, &e, "printed as `{}`", printed);
            prop_assert_eq!(back.to_string(), printed);
            Ok(())
        })
        .map_err(|e| format!("round trip: {e}"))?;

    for (text, explicit, value) in PRECEDENCE {
        let e = parse(text).map_err(|x| format!("`{text}`: {x}"))?;
        let want = parse(explicit).map_err(|x| format!("`{explicit}`: {x}"))?;
        ensure!(e == want, "`{text}` parsed as `{e}`, expected `{want}`");
        let got = e.eval_s(3.0).map_err(err)?;
        ensure!((got - value).abs() <= 1e-12, "`{text}` at s=3: {got} vs {value}");
    }
    for (text, offset) in MALFORMED {
        match parse(text) {
            Ok(e) => return Err(format!("`{text}` parsed as `{e}`")),
            Err(x) => ensure!(x.offset() == Some(offset), "`{text}`: offset {:?}, expected {offset} ({x})", x.offset()),
        }
    }
    Ok(format!("1000 round trips, {} precedence cases, {} malformed inputs", PRECEDENCE.len(), MALFORMED.len()))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 12] = [
        ("catalog conformance", catalog_conformance),
        ("constant-integrand theorem", constant_integrand),
        ("Dirichlet counterexample", dirichlet_counterexample),
        ("telescoping stochastic integral", telescoping),
        ("Itô algebraic identity", ito_identity),
        ("quadratic variation moments", qv_moments),
        ("Itô/Stratonovich convention gap", convention_gap),
        ("Itô formula residual", ito_formula),
        ("unbounded variation", unbounded_variation),
        ("Lebesgue as Riemann-Stieltjes", lebesgue_as_rs),
        ("CLI determinism", determinism),
        ("parser suite", parser_suite),
    ];
    let total = Instant::now();
    let mut failed = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = panic::catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name} ({secs:.2}s): {detail}", k + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name} ({secs:.2}s): {detail}", k + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed in {:.1}s",
        criteria.len() - failed,
        criteria.len(),
        total.elapsed().as_secs_f64()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
