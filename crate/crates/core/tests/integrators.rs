use gaugelab::catalog::{lookup, standard_entries};
use gaugelab::expr::{parse, Var};
use gaugelab::integrators::{
    darboux_riemann, gauge_integrate, lebesgue_distribution_integrate, oscillation_probe, rs_integrate,
    singular_gauges, ConvergenceController, DistributionFunction, ExtremaOracle, GridStrategy,
};
use gaugelab::model::{increments_of, length, make_integrand, point_fn, Convention, PointFn, Status};
use gaugelab::stochastic::brownian_path;

fn constant_against(beta: f64, g: PointFn<f64>, a: f64, b: f64) {
    let h = make_integrand("beta dg", Some(point_fn(move |_: &f64| beta)), increments_of(g.clone()), Convention::Tag)
        .unwrap();
    let ctrl = ConvergenceController::default();
    let r = rs_integrate(&h, a, b, &ctrl).unwrap();
    let (ga, gb) = (g(&a).unwrap(), g(&b).unwrap());
    let want = beta * (gb - ga);
    assert_eq!(r.status, Status::Converged);
    assert_eq!(r.stable_from, Some(ctrl.schedule.initial()));
    let scale = want.abs().max(beta.abs() * ga.abs().max(gb.abs()));
    assert!((r.estimate.unwrap() - want).abs() <= 1e-12 * scale, "{:?} vs {want}", r.estimate);
}

#[test]
fn constant_integrands_against_catalog_integrators() {
    for entry in standard_entries() {
        let Some(g) = entry.integrator() else { continue };
        let (a, b) = entry.domain;
        for beta in [-2.0, 0.0, 1.0, std::f64::consts::PI] {
            constant_against(beta, g.clone(), a, b);
        }
    }
}

#[test]
fn constant_integrands_against_brownian_paths() {
    for id in 1..=20 {
        let p = brownian_path(99, id, 1.0, 10).unwrap();
        let g = point_fn(move |s: &f64| p.value_at(*s));
        for beta in [-2.0, 0.0, 1.0, std::f64::consts::PI] {
            constant_against(beta, g.clone(), 0.0, 1.0);
        }
    }
}

#[test]
fn riemann_integrable_is_gauge_integrable() {
    for name in ["identity", "square", "cube"] {
        let e = lookup(name).unwrap();
        let ctrl = e.controller(0.0, 1.0);
        let d = e.run(0.0, 1.0, &ctrl).unwrap();
        assert_eq!(d.status, Status::Converged, "{name}");
        let f = e.integrator().unwrap();
        let h = make_integrand(name, Some(f), length(), Convention::Tag).unwrap();
        let g = gauge_integrate(&h, 0.0, 1.0, &ctrl, None).unwrap();
        assert_eq!(g.status, Status::Converged, "{name}");
        let eps = ctrl.tolerance.abs;
        assert!((g.estimate.unwrap() - d.estimate.unwrap()).abs() <= 2.0 * eps, "{name}");
    }
}

#[test]
fn monotone_sequence_converges_to_limit_integral() {
    let ctrl = ConvergenceController::default().with_tolerance(1e-4);
    let fam = singular_gauges(0.0, 1.0, 0.0);
    let mut previous = f64::NEG_INFINITY;
    for j in [1.0, 2.0, 4.0, 8.0, 16.0, 32.0] {
        let f = point_fn(move |s: &f64| if *s > 0.0 { (1.0 / s.sqrt()).min(j) } else { j });
        let h = make_integrand("min(j, s^-1/2)", Some(f), length(), Convention::Tag).unwrap();
        let r = gauge_integrate(&h, 0.0, 1.0, &ctrl, Some(&fam)).unwrap();
        let value = r.estimate.unwrap();
        assert!((value - (2.0 - 1.0 / j)).abs() <= 1e-3, "j = {j}: {value}");
        assert!(value > previous);
        previous = value;
    }
    let limit = lookup("inv_sqrt").unwrap();
    let r = limit.run(0.0, 1.0, &limit.controller(0.0, 1.0)).unwrap();
    assert!((r.estimate.unwrap() - 2.0).abs() <= 1e-3);
    assert!(r.estimate.unwrap() > previous - 1e-3);
}

#[test]
fn step_distributions_give_finite_sums() {
    let cases: [(f64, f64, Vec<(f64, f64)>); 3] = [
        (2.0, 5.0, vec![(2.0, 1.0 / 3.0), (5.0, 2.0 / 3.0)]),
        (0.0, 4.0, vec![(1.0, 0.25), (2.5, 0.5), (4.0, 0.25)]),
        (-1.0, 1.0, vec![(-1.0, 0.5), (0.0, 0.125), (0.75, 0.375)]),
    ];
    for (c, d, masses) in cases {
        let want: f64 = masses.iter().map(|(p, m)| p * m).sum();
        let g = DistributionFunction::point_masses("masses", c, d, masses).unwrap();
        let r = lebesgue_distribution_integrate(&g, &ConvergenceController::default()).unwrap();
        assert_eq!(r.status, Status::Converged);
        assert!((r.estimate.unwrap() - want).abs() <= 1e-9, "{:?} vs {want}", r.estimate);
    }
}

#[test]
fn probe_spreads() {
    let strategies = GridStrategy::DEFAULT;
    let h1 = make_integrand("h1", None, length(), Convention::IntervalOnly).unwrap();
    for row in oscillation_probe(&h1, 0.0, 1.0, &strategies, 0..=12).unwrap() {
        assert!(row.spread.abs() <= 1e-15);
    }
    let h3 = make_integrand("h3", Some(point_fn(|s: &f64| s * s)), length(), Convention::Tag).unwrap();
    let rows = oscillation_probe(&h3, 0.0, 1.0, &strategies, 4..=12).unwrap();
    assert!(rows.windows(2).all(|w| w[1].spread < w[0].spread));
    assert!(rows.last().unwrap().spread < 1e-3);
    assert!(oscillation_probe(&h3, 0.0, 1.0, &strategies[..1], 0..=1).is_err());
}

#[test]
fn darboux_with_expression_oracle() {
    let e = parse("exp(-s)").unwrap();
    let f = {
        let e = e.clone();
        std::sync::Arc::new(move |s: &f64| e.eval_s(*s)) as PointFn<f64>
    };
    let oracle = ExtremaOracle::new(move |u, v| e.extrema(Var::S, u, v));
    let ctrl = ConvergenceController::default().with_tolerance(1e-6);
    let r = darboux_riemann(&f, &oracle, 0.0, 1.0, &ctrl).unwrap();
    assert_eq!(r.status, Status::Converged);
    assert!((r.estimate.unwrap() - (1.0 - (-1.0f64).exp())).abs() <= 1e-6);
    assert!(parse("sin(s)").unwrap().extrema(Var::S, 0.0, 1.0).is_err());
}

#[test]
fn darboux_power_examples() {
    let ctrl = ConvergenceController::default().with_levels(0, 12).unwrap();
    let f = point_fn(|s: &f64| s * s);
    let r = darboux_riemann(&f, &ExtremaOracle::increasing(|s| s * s), 0.0, 1.0, &ctrl).unwrap();
    assert!((r.entry_at_level(12).unwrap().midpoint() - 1.0 / 3.0).abs() <= 1e-6);
    let beta = point_fn(|_: &f64| -1.5);
    let r = darboux_riemann(&beta, &ExtremaOracle::new(|_, _| Ok((-1.5, -1.5))), 1.0, 3.0, &ctrl).unwrap();
    assert_eq!((r.status, r.stable_from, r.estimate), (Status::Converged, Some(0), Some(-3.0)));
}
