use gaugelab::catalog::{
    conditional_series, dirichlet_integrand, lookup, standard_entries, step_half, Expected, Method, Subject,
};
use gaugelab::integrators::{oscillation_probe, rs_integrate, ConvergenceController, GridStrategy};
use gaugelab::model::{point_fn, Status};
use gaugelab::scalar::{QuadExt, Scalar, ScalarRegime};

#[test]
fn every_entry_reproduces_its_outcome() {
    for entry in standard_entries() {
        let (a, b) = entry.domain;
        let ctrl = entry.controller(a, b);
        let r = entry.run(a, b, &ctrl).unwrap_or_else(|e| panic!("{}: {e}", entry.name));
        assert!(
            entry.check(a, b, &r),
            "{}: expected {:?}, got {:?} estimate {:?}",
            entry.name,
            entry.expected(a, b),
            r.status,
            r.estimate
        );
    }
}

#[test]
fn integrand_entries_on_other_domains() {
    for name in ["h1", "h3"] {
        let e = lookup(name).unwrap();
        let (a, b) = (-0.5, 1.5);
        let r = e.run(a, b, &e.controller(a, b)).unwrap();
        assert!(e.check(a, b, &r), "{name}: {:?} {:?}", r.status, r.estimate);
    }
}

#[test]
fn dirichlet_entries_are_exact() {
    for e in standard_entries() {
        if e.name.ends_with("_dD") {
            assert_eq!(e.regime, ScalarRegime::Exact);
            assert!(matches!(e.subject, Subject::ExactIntegrand(_)));
        }
    }
}

#[test]
fn step_against_dirichlet_keeps_unit_spread() {
    let h = dirichlet_integrand("step_dD", step_half());
    let rows = oscillation_probe(
        &h,
        QuadExt::ratio(0, 1),
        QuadExt::ratio(1, 1),
        &[GridStrategy::RationalLeft, GridStrategy::IrrationalLeft],
        2..=11,
    )
    .unwrap();
    assert_eq!(rows.len(), 10);
    for row in rows {
        assert_eq!(row.sums, vec![QuadExt::ratio(0, 1), QuadExt::ratio(1, 1)]);
        assert_eq!(row.spread, QuadExt::ratio(1, 1));
    }
}

#[test]
fn constant_against_dirichlet_is_zero_at_every_level() {
    let h = dirichlet_integrand("beta_dD", point_fn(|_: &QuadExt| QuadExt::from_parts(-7, 3, 0, 1)));
    let r = rs_integrate(&h, QuadExt::ratio(0, 1), QuadExt::ratio(1, 1), &ConvergenceController::default()).unwrap();
    assert_eq!(r.status, Status::Converged);
    assert_eq!(r.stable_from, Some(4));
    assert!(r.final_sums.iter().all(|s| *s == QuadExt::zero()));
    assert!(r.trace.iter().all(|e| e.sums.iter().all(|s| *s == 0.0)));
}

#[test]
fn methods_match_subjects() {
    for e in standard_entries() {
        match e.subject {
            Subject::Point { .. } => assert_eq!(e.method, Method::Darboux),
            Subject::Distribution(_) => assert_eq!(e.method, Method::Lebesgue),
            _ => {}
        }
        if let Expected::Value { tol, .. } = e.expected(e.domain.0, e.domain.1) {
            assert!(tol > 0.0);
        }
    }
}

#[test]
fn zigzag_variation_on_fine_grids() {
    let e = lookup("path_zigzag").unwrap();
    for level in 2..=12 {
        let p = e.path(level).unwrap().unwrap();
        let tv = gaugelab::stochastic::total_variation(&p, level).unwrap();
        assert!((tv - 2.0).abs() < 1e-12, "level {level}: {tv}");
    }
}

#[test]
fn conditional_series_behaviour() {
    assert_eq!(conditional_series(2).unwrap(), (-0.5, 0.5, -1.0));
    for n in [10u64, 1000, 100_000] {
        let (s, _, _) = conditional_series(n).unwrap();
        assert!((s + std::f64::consts::LN_2).abs() <= 1.0 / n as f64);
    }
    let (_, pos, neg) = conditional_series(1_000_000).unwrap();
    assert!(pos >= 6.5);
    assert!(neg <= -7.0);
}
