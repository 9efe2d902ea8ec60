use paratensor::frame::{describe_frame_vector, Frame};
use paratensor::levi_civita::{apply_curvature, Connection, Curvature, RicciMode};
use paratensor::{Chart, Expr, Metric, TensorField};

struct Example {
    chart: Chart,
    metric: Metric,
    frame: Frame,
}

fn build(metric: [&str; 3], frame: [[&str; 3]; 3]) -> Example {
    let chart = Chart::standard(&["x", "y", "z"]).unwrap();
    let p = |s: &str| chart.parse(s).unwrap();
    let rows = (0..3)
        .map(|i| (0..3).map(|j| if i == j { p(metric[i]) } else { Expr::zero() }).collect())
        .collect();
    let metric = Metric::from_rows(rows).unwrap();
    let vectors = frame
        .iter()
        .map(|v| TensorField::vector(v.iter().map(|s| p(s)).collect()))
        .collect();
    let frame = Frame::orthonormal(vectors, &metric).unwrap();
    Example { chart, metric, frame }
}

fn spacelike() -> Example {
    build(
        ["e^(2*z)", "e^(-2*z)", "1"],
        [["e^(-z)", "0", "0"], ["0", "e^z", "0"], ["0", "0", "1"]],
    )
}

fn timelike() -> Example {
    build(
        ["e^(-2*z)", "e^(2*z)", "-1"],
        [["e^z", "0", "0"], ["0", "e^(-z)", "0"], ["0", "0", "1"]],
    )
}

fn connection_table(ex: &Example) -> Vec<String> {
    let conn = Connection::levi_civita(&ex.metric);
    let mut out = Vec::new();
    for ei in ex.frame.vectors() {
        for ej in ex.frame.vectors() {
            let v = conn.nabla(ei, ej).unwrap();
            let c = ex.frame.coefficients(&ex.metric, &v).unwrap();
            out.push(describe_frame_vector(&c, ex.chart.coords()));
        }
    }
    out
}

fn riemann_table(ex: &Example) -> Vec<String> {
    let riem = Connection::levi_civita(&ex.metric).riemann();
    let e = ex.frame.vectors();
    [(0, 1, 1), (0, 2, 2), (1, 0, 0), (1, 2, 2), (2, 0, 0), (2, 1, 1)]
        .iter()
        .map(|&(i, j, k)| {
            let v = apply_curvature(&riem, &e[i], &e[j], &e[k]);
            let c = ex.frame.coefficients(&ex.metric, &v).unwrap();
            describe_frame_vector(&c, ex.chart.coords())
        })
        .collect()
}

fn ricci_diagonal(ex: &Example, mode: RicciMode) -> (Vec<String>, String) {
    let riem = Connection::levi_civita(&ex.metric).riemann();
    let curv = Curvature::compute(&ex.metric, riem, mode, Some(&ex.frame)).unwrap();
    let m = ex.frame.components(&curv.ricci).unwrap();
    let diag = (0..3).map(|i| ex.chart.show(&m[i][i])).collect();
    (diag, ex.chart.show(&curv.scalar))
}

#[test]
fn spacelike_connection_table() {
    assert_eq!(
        connection_table(&spacelike()),
        ["-E3", "0", "E1", "0", "E3", "-E2", "0", "0", "0"]
    );
}

#[test]
fn spacelike_riemann_table() {
    assert_eq!(riemann_table(&spacelike()), ["E1", "-E1", "E2", "-E2", "-E3", "-E3"]);
}

#[test]
fn spacelike_ricci_agrees_in_both_modes() {
    for mode in [RicciMode::WeightedTrace, RicciMode::PaperFrameSum] {
        let (diag, scalar) = ricci_diagonal(&spacelike(), mode);
        assert_eq!(diag, ["0", "0", "-2"], "{mode}");
        assert_eq!(scalar, "-2");
    }
}

#[test]
fn timelike_connection_table() {
    assert_eq!(
        connection_table(&timelike()),
        ["-E3", "0", "-E1", "0", "E3", "E2", "0", "0", "0"]
    );
}

#[test]
fn timelike_riemann_table() {
    assert_eq!(riemann_table(&timelike()), ["-E1", "-E1", "-E2", "-E2", "E3", "E3"]);
}

#[test]
fn timelike_ricci_depends_on_mode() {
    let (diag, scalar) = ricci_diagonal(&timelike(), RicciMode::PaperFrameSum);
    assert_eq!(diag, ["-2", "-2", "-2"]);
    assert_eq!(scalar, "-2");
    let (diag, scalar) = ricci_diagonal(&timelike(), RicciMode::WeightedTrace);
    assert_eq!(diag, ["0", "0", "-2"]);
    assert_eq!(scalar, "2");
}

#[test]
fn frame_sum_without_frame_is_an_error() {
    let ex = spacelike();
    let riem = Connection::levi_civita(&ex.metric).riemann();
    assert!(Curvature::compute(&ex.metric, riem, RicciMode::PaperFrameSum, None).is_err());
}
