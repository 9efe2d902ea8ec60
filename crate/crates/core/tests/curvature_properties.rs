use proptest::prelude::*;

use paratensor::levi_civita::{lie_derivative_metric_connection, lie_derivative_metric_coordinates, ricci_weighted};
use paratensor::{Chart, Connection, Expr, Metric, Probe, TensorField};

/// One diagonal entry: a sign, a positive scale and a shape in one coordinate.
fn entry() -> impl Strategy<Value = String> {
    let coord = prop::sample::select(vec!["x", "y", "z"]);
    (prop::bool::ANY, 1i32..4, -2i32..=2, coord, 0usize..3).prop_map(|(neg, k, m, c, shape)| {
        let sign = if neg { "-" } else { "" };
        match shape {
            0 => format!("{sign}{k}*e^({m}*{c})"),
            1 => format!("{sign}({k} + {c}^2)"),
            _ => format!("{sign}{k}"),
        }
    })
}

fn off_diagonal() -> impl Strategy<Value = String> {
    prop::sample::select(vec!["0", "0", "1/2", "x/3", "-1/4"]).prop_map(str::to_string)
}

fn vector_field() -> impl Strategy<Value = [String; 3]> {
    let comp = prop::sample::select(vec!["0", "1", "x", "y*z", "e^z", "-2*y", "x^2"]);
    [comp.clone(), comp.clone(), comp].prop_map(|v| v.map(str::to_string))
}

struct Sample {
    metric: Metric,
    connection: Connection,
    probe: Probe,
    chart: Chart,
}

/// Diagonal entries plus one symmetric off-diagonal pair in the (x, y) block.
fn sample(diag: &[String; 3], off: &str) -> Option<Sample> {
    let chart = Chart::standard(&["x", "y", "z"]).unwrap();
    let p = |s: &str| chart.parse(s).unwrap();
    let mut rows: Vec<Vec<Expr>> = (0..3)
        .map(|i| (0..3).map(|j| if i == j { p(&diag[i]) } else { Expr::zero() }).collect())
        .collect();
    rows[0][1] = p(off);
    rows[1][0] = p(off);
    let metric = Metric::from_rows(rows).ok()?;
    let connection = Connection::levi_civita(&metric);
    let probe = Probe::new(&chart, 7);
    Some(Sample {
        metric,
        connection,
        probe,
        chart,
    })
}

fn assert_identity(probe: &Probe, id: &str, lhs: &TensorField, rhs: &TensorField) -> Result<(), TestCaseError> {
    let entry = probe.identity(id, lhs, rhs);
    prop_assert!(entry.passed() && entry.symbolic_zero, "{}: {}", id, entry.details);
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn levi_civita_is_torsion_free_and_metric(diag in [entry(), entry(), entry()], off in off_diagonal()) {
        let Some(s) = sample(&diag, &off) else { return Ok(()) };
        let gamma = s.connection.symbols();
        let swapped = TensorField::from_fn(1, 2, 3, |i| gamma.get(&[i[0], i[2], i[1]]).clone());
        assert_identity(&s.probe, "torsion", gamma, &swapped)?;
        let nabla_g = s.connection.covariant_derivative(s.metric.tensor());
        assert_identity(&s.probe, "nabla g", &nabla_g, &TensorField::zeros(0, 3, 3))?;
    }

    #[test]
    fn riemann_symmetries(diag in [entry(), entry(), entry()], off in off_diagonal()) {
        let Some(s) = sample(&diag, &off) else { return Ok(()) };
        let r = s.connection.riemann();
        let swapped = TensorField::from_fn(1, 3, 3, |i| -r.get(&[i[0], i[1], i[3], i[2]]));
        assert_identity(&s.probe, "antisymmetry", &r, &swapped)?;
        let lowered = s.metric.lower(&r, 0).unwrap();
        let swapped = TensorField::from_fn(0, 4, 3, |i| -lowered.get(&[i[3], i[1], i[2], i[0]]));
        assert_identity(&s.probe, "metric antisymmetry", &lowered, &swapped)?;
        let bianchi = TensorField::from_fn(1, 3, 3, |i| {
            let (a, b, c, d) = (i[0], i[1], i[2], i[3]);
            r.get(&[a, b, c, d]) + r.get(&[a, c, d, b]) + r.get(&[a, d, b, c])
        });
        assert_identity(&s.probe, "first Bianchi", &bianchi, &TensorField::zeros(1, 3, 3))?;
        let ricci = ricci_weighted(&r);
        assert_identity(&s.probe, "Ricci symmetry", &ricci, &ricci.transpose().unwrap())?;
    }

    #[test]
    fn lie_derivative_formulas_agree(diag in [entry(), entry(), entry()], v in vector_field()) {
        let Some(s) = sample(&diag, "0") else { return Ok(()) };
        let v = TensorField::vector(v.iter().map(|c| s.chart.parse(c).unwrap()).collect());
        let via_connection = lie_derivative_metric_connection(&s.metric, &s.connection, &v).unwrap();
        let coordinate = lie_derivative_metric_coordinates(&s.metric, &v);
        assert_identity(&s.probe, "Lie derivative", &via_connection, &coordinate)?;
    }
}

#[test]
fn flat_metric_has_vanishing_curvature() {
    let rows = (0..3)
        .map(|i| (0..3).map(|j| if i == j { Expr::one() } else { Expr::zero() }).collect())
        .collect();
    let metric = Metric::from_rows(rows).unwrap();
    let conn = Connection::levi_civita(&metric);
    assert!(conn.symbols().is_zero());
    assert!(conn.riemann().is_zero());
}

#[test]
fn hyperbolic_plane_curvature_is_minus_one() {
    // g = dx^2 + e^(2x) dy^2 has Gaussian curvature -1, so S = -g.
    let chart = Chart::standard(&["x", "y"]).unwrap();
    let rows = vec![
        vec![Expr::one(), Expr::zero()],
        vec![Expr::zero(), chart.parse("e^(2*x)").unwrap()],
    ];
    let metric = Metric::from_rows(rows).unwrap();
    let conn = Connection::levi_civita(&metric);
    let ricci = ricci_weighted(&conn.riemann());
    let expected = metric.tensor().scale(&Expr::int(-1));
    assert!(ricci.try_sub(&expected).unwrap().is_zero());
}
