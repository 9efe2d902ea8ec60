use std::path::PathBuf;

use paratensor::manifest::load_manifest;
use paratensor::oracle::{christoffel_deviation, compare, fd_christoffel, fd_riemann, sample_points, OracleConfig, Scheme};
use paratensor::{Chart, Connection, Expr, Metric, Status};

fn warped() -> (Metric, Chart) {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures/warped_r3.json");
    let loaded = load_manifest(&path).unwrap();
    let s = loaded.structure;
    (s.metric().clone(), s.chart().clone())
}

#[test]
fn symbolic_christoffel_agrees_with_differences() {
    let (metric, chart) = warped();
    let cfg = OracleConfig::default();
    let points = sample_points(&metric, &chart, &cfg);
    assert_eq!(points.len(), cfg.sample_count);
    let conn = Connection::levi_civita(&metric);
    let entry = compare("gamma", conn.symbols(), |p| fd_christoffel(&metric, p, &cfg), &points, &cfg).unwrap();
    assert_eq!(entry.status, Status::Pass, "{}", entry.details);
}

#[test]
fn perturbed_entry_is_caught() {
    let (metric, chart) = warped();
    let cfg = OracleConfig::default();
    let points = sample_points(&metric, &chart, &cfg);
    let conn = Connection::levi_civita(&metric);
    let mut gamma = conn.symbols().clone();
    let bumped = gamma.get(&[2, 0, 0]) + &Expr::constant(paratensor::Rational::new(1.into(), 1000.into()));
    gamma.set(&[2, 0, 0], bumped);
    let entry = compare("gamma", &gamma, |p| fd_christoffel(&metric, p, &cfg), &points, &cfg).unwrap();
    assert_eq!(entry.status, Status::Fail);
    assert!(entry.numeric_max.unwrap() > 1e-4);
    assert!(entry.details.contains("component [2, 0, 0]"), "{}", entry.details);
}

#[test]
fn halving_the_step_quarters_the_error() {
    let (metric, chart) = warped();
    let cfg = OracleConfig::default().with_h(1e-2);
    let points = sample_points(&metric, &chart, &cfg);
    let gamma = Connection::levi_civita(&metric).symbols().clone();
    let coarse = christoffel_deviation(&metric, &gamma, &points, &cfg).unwrap();
    let fine = christoffel_deviation(&metric, &gamma, &points, &cfg.with_h(5e-3)).unwrap();
    let ratio = coarse / fine;
    assert!((ratio - 4.0).abs() < 0.05, "ratio {ratio}");
}

#[test]
fn richardson_is_more_accurate_than_central() {
    let (metric, chart) = warped();
    let central = OracleConfig::default().with_h(1e-2);
    let richardson = OracleConfig {
        scheme: Scheme::Richardson,
        ..central
    };
    let points = sample_points(&metric, &chart, &central);
    let gamma = Connection::levi_civita(&metric).symbols().clone();
    let e1 = christoffel_deviation(&metric, &gamma, &points, &central).unwrap();
    let e2 = christoffel_deviation(&metric, &gamma, &points, &richardson).unwrap();
    assert!(e2 < e1 / 100.0, "central {e1}, richardson {e2}");
}

#[test]
fn riemann_oracle_matches_on_warped_product() {
    let (metric, chart) = warped();
    let cfg = OracleConfig::default();
    let points = sample_points(&metric, &chart, &cfg);
    let riemann = Connection::levi_civita(&metric).riemann();
    let entry = compare("riemann", &riemann, |p| fd_riemann(&metric, p, &cfg), &points, &cfg).unwrap();
    assert_eq!(entry.status, Status::Pass, "{}", entry.details);
}

#[test]
fn invalid_configuration_is_rejected() {
    assert!(OracleConfig::default().with_h(0.0).validate().is_err());
    assert!(OracleConfig::default().with_h(f64::NAN).validate().is_err());
    let none = OracleConfig {
        sample_count: 0,
        ..OracleConfig::default()
    };
    assert!(none.validate().is_err());
}

#[test]
fn samples_avoid_the_degeneracy_locus() {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures/ex5d_r5_g2.json");
    let s = load_manifest(&path).unwrap().structure;
    let cfg = OracleConfig::default();
    let points = sample_points(s.metric(), s.chart(), &cfg);
    for p in &points {
        let det = 1.0 + p[1] * p[1] - p[3] * p[3];
        assert!(det.abs() > 1e-3, "sample {p:?} too close to det = 0");
    }
}
