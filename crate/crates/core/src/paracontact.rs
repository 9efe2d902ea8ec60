use num_traits::{One, Signed};
use symexpr::Expr;

use crate::chart::Chart;
use crate::check::{CheckEntry, Probe, Report, Status};
use crate::error::{GeometryError, Result};
use crate::levi_civita::{Connection, Curvature, RicciMode};
use crate::metric::Metric;
use crate::tensor::TensorField;

/// The data `(φ, ξ, η, g, ε)` on one chart. Construction only checks shapes
/// and ε; the axioms are audited by [`validate_axioms`] and
/// [`validate_metric_compat`].
#[derive(Debug, Clone)]
pub struct ParacontactStructure {
    chart: Chart,
    metric: Metric,
    phi: TensorField,
    xi: TensorField,
    eta: TensorField,
    epsilon: i8,
}

impl ParacontactStructure {
    pub fn new(
        chart: Chart,
        metric: Metric,
        phi: TensorField,
        xi: TensorField,
        eta: TensorField,
        declared_epsilon: Option<i8>,
    ) -> Result<ParacontactStructure> {
        let n = chart.dim();
        for (what, t, valence) in [
            ("metric", metric.tensor(), (0, 2)),
            ("phi", &phi, (1, 1)),
            ("xi", &xi, (1, 0)),
            ("eta", &eta, (0, 1)),
        ] {
            if t.valence() != valence {
                return Err(GeometryError::Valence(format!(
                    "{what} must be a {valence:?} tensor, got {:?}",
                    t.valence()
                )));
            }
            if t.dim() != n {
                return Err(GeometryError::Dimension {
                    what: what.into(),
                    expected: n,
                    got: t.dim(),
                });
            }
        }
        let detected = detect_epsilon(&metric, &xi, &chart)?;
        if let Some(declared) = declared_epsilon {
            if declared != detected {
                return Err(GeometryError::EpsilonMismatch { declared, detected });
            }
        }
        Ok(ParacontactStructure {
            chart,
            metric,
            phi,
            xi,
            eta,
            epsilon: detected,
        })
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn metric(&self) -> &Metric {
        &self.metric
    }

    pub fn phi(&self) -> &TensorField {
        &self.phi
    }

    pub fn xi(&self) -> &TensorField {
        &self.xi
    }

    pub fn eta(&self) -> &TensorField {
        &self.eta
    }

    pub fn epsilon(&self) -> i8 {
        self.epsilon
    }

    pub fn epsilon_expr(&self) -> Expr {
        Expr::int(self.epsilon as i64)
    }

    pub fn dim(&self) -> usize {
        self.chart.dim()
    }

    pub fn phi_squared(&self) -> TensorField {
        self.phi.compose(&self.phi).expect("phi is (1,1)")
    }

    /// `Φ(X, Y) = g(φX, Y)`.
    pub fn fundamental_form(&self) -> TensorField {
        let n = self.dim();
        TensorField::from_fn(0, 2, n, |i| {
            (0..n).map(|k| self.phi.at2(k, i[0]) * self.metric.component(k, i[1])).sum()
        })
    }

    /// `g(φX, φY)`.
    pub fn phi_metric(&self) -> TensorField {
        let n = self.dim();
        TensorField::from_fn(0, 2, n, |i| {
            let mut acc = Expr::zero();
            for a in 0..n {
                for b in 0..n {
                    let g = self.metric.component(a, b);
                    if !g.is_zero() {
                        acc = acc + g * self.phi.at2(a, i[0]) * self.phi.at2(b, i[1]);
                    }
                }
            }
            acc
        })
    }

    pub fn eta_eta(&self) -> TensorField {
        self.eta.tensor(&self.eta).expect("same dimension")
    }

    /// `X ↦ η(X)ξ` as a (1,1) tensor.
    pub fn xi_eta(&self) -> TensorField {
        self.xi.tensor(&self.eta).expect("same dimension")
    }

    /// `∇ξ` as a (1,1) tensor, `[a][x] = (∇_∂x ξ)^a`.
    pub fn nabla_xi(&self, conn: &Connection) -> TensorField {
        conn.covariant_derivative(&self.xi)
    }
}

/// Reads ε off the canonical value of `g(ξ, ξ)`.
pub fn detect_epsilon(metric: &Metric, xi: &TensorField, chart: &Chart) -> Result<i8> {
    let value = metric.inner(xi, xi)?;
    match value.as_constant() {
        Some(c) if c.abs().is_one() => Ok(if c.is_positive() { 1 } else { -1 }),
        _ => Err(GeometryError::NotUnitXi(chart.show(&value))),
    }
}

/// The four defining relations of an almost paracontact structure, plus the
/// claim that the first two imply the last two.
pub fn validate_axioms(phi: &TensorField, xi: &TensorField, eta: &TensorField, probe: &Probe) -> Report {
    let n = phi.dim();
    let mut report = Report::new();
    let phi2 = phi.compose(phi).expect("phi is (1,1)");
    let id_minus = TensorField::identity(n)
        .try_sub(&xi.tensor(eta).expect("same dimension"))
        .expect("same shape");
    report.push(probe.identity("axioms.phi_squared", &phi2, &id_minus));
    let eta_xi = eta.pair(xi).expect("covector and vector");
    report.push(probe.scalar_identity("axioms.eta_xi", &eta_xi, &Expr::one()));
    let phi_xi = phi.apply(xi).expect("(1,1) and vector");
    report.push(probe.identity("axioms.phi_xi", &phi_xi, &TensorField::zeros(1, 0, n)));
    let eta_phi = TensorField::covector(
        (0..n).map(|b| (0..n).map(|a| eta.at(a) * phi.at2(a, b)).sum()).collect(),
    );
    report.push(probe.identity("axioms.eta_phi", &eta_phi, &TensorField::zeros(0, 1, n)));

    let hypothesis = report.entries()[0].passed() && report.entries()[1].passed();
    let conclusion = report.entries()[2].passed() && report.entries()[3].passed();
    report.push(implied("axioms.implied", hypothesis, conclusion));
    report
}

fn implied(id: &str, hypothesis: bool, conclusion: bool) -> CheckEntry {
    let status = if !hypothesis || conclusion {
        Status::Pass
    } else {
        Status::Fail
    };
    CheckEntry {
        symbolic_zero: conclusion,
        ..CheckEntry::new(
            id,
            status,
            format!("hypothesis_met={hypothesis}; conclusion_holds={conclusion}"),
        )
    }
}

/// Compatibility of `g` with `(φ, ξ, η, ε)`.
pub fn validate_metric_compat(s: &ParacontactStructure, probe: &Probe) -> Report {
    let n = s.dim();
    let eps = s.epsilon_expr();
    let g = s.metric().tensor();
    let mut report = Report::new();
    let rhs = g.try_sub(&s.eta_eta().scale(&eps)).expect("same shape");
    report.push(probe.identity("compat.phi_isometry", &s.phi_metric(), &rhs));
    let g_xi = TensorField::covector(
        (0..n).map(|x| (0..n).map(|a| g.at2(x, a) * s.xi().at(a)).sum()).collect(),
    );
    report.push(probe.identity("compat.xi_dual", &g_xi, &s.eta().scale(&eps)));
    let form = s.fundamental_form();
    report.push(probe.identity("compat.phi_symmetric", &form.transpose().expect("rank 2"), &form));

    // the derivation also uses φξ = 0 and η∘φ = 0
    let axioms = validate_axioms(s.phi(), s.xi(), s.eta(), probe);
    let hypothesis = report.entries()[0].passed() && axioms.passed();
    let conclusion = report.entries()[1].passed() && report.entries()[2].passed();
    report.push(implied("compat.implied", hypothesis, conclusion));
    report
}

/// The (ε)-para-Sasakian conditions `(∇_X φ)Y = -g(φX, φY)ξ - εη(Y)φ²X` and
/// `∇ξ = εφ`.
pub fn is_para_sasakian(s: &ParacontactStructure, conn: &Connection, probe: &Probe) -> Result<Report> {
    let axioms = validate_axioms(s.phi(), s.xi(), s.eta(), probe);
    let compat = validate_metric_compat(s, probe);
    if !axioms.passed() || !compat.passed() {
        let failed: Vec<&str> = axioms.failures().chain(compat.failures()).map(|e| e.id.as_str()).collect();
        return Err(GeometryError::Precondition(format!(
            "para-Sasakian test needs a valid structure; failed: {}",
            failed.join(", ")
        )));
    }
    let n = s.dim();
    let eps = s.epsilon_expr();
    let mut report = Report::new();

    // [a][x][y] = ((∇_x φ) ∂y)^a
    let nabla_phi = conn.covariant_derivative(s.phi());
    let lhs = TensorField::from_fn(1, 2, n, |i| nabla_phi.get(&[i[0], i[2], i[1]]).clone());
    let gpp = s.phi_metric();
    let phi2 = s.phi_squared();
    let rhs = TensorField::from_fn(1, 2, n, |i| {
        let (a, x, y) = (i[0], i[1], i[2]);
        -(gpp.at2(x, y) * s.xi().at(a)) - &eps * s.eta().at(y) * phi2.at2(a, x)
    });
    report.push(probe.identity("para_sasakian.nabla_phi", &lhs, &rhs));
    report.push(probe.identity("para_sasakian.nabla_xi", &s.nabla_xi(conn), &s.phi().scale(&eps)));
    let hypothesis = report.entries()[0].passed();
    let conclusion = report.entries()[1].passed();
    report.push(implied("para_sasakian.implied", hypothesis, conclusion));
    Ok(report)
}

/// Curvature identities that hold on every (ε)-para-Sasakian manifold.
pub fn sasakian_identity_suite(s: &ParacontactStructure, curv: &Curvature, probe: &Probe) -> Result<Report> {
    if curv.mode != RicciMode::WeightedTrace {
        return Err(GeometryError::Precondition(
            "the para-Sasakian identity suite uses the weighted_trace Ricci tensor".into(),
        ));
    }
    let n = s.dim();
    let eps = s.epsilon_expr();
    let (r, g, xi, eta) = (&curv.riemann, s.metric().tensor(), s.xi(), s.eta());
    let delta = |a: usize, b: usize| if a == b { Expr::one() } else { Expr::zero() };
    let mut report = Report::new();

    let lhs = TensorField::from_fn(1, 2, n, |i| {
        (0..n).map(|b| r.get(&[i[0], b, i[1], i[2]]) * xi.at(b)).sum()
    });
    let rhs = TensorField::from_fn(1, 2, n, |i| {
        eta.at(i[1]) * delta(i[0], i[2]) - eta.at(i[2]) * delta(i[0], i[1])
    });
    report.push(probe.identity("sasakian.curvature_xi", &lhs, &rhs));

    // [a][x][y] = R(ξ, ∂x)∂y
    let lhs = TensorField::from_fn(1, 2, n, |i| {
        (0..n).map(|c| r.get(&[i[0], i[2], c, i[1]]) * xi.at(c)).sum()
    });
    let rhs = TensorField::from_fn(1, 2, n, |i| {
        -(&eps * g.at2(i[1], i[2]) * xi.at(i[0])) + eta.at(i[2]) * delta(i[0], i[1])
    });
    report.push(probe.identity("sasakian.curvature_from_xi", &lhs, &rhs));

    // [x][y][z] = η(R(∂x, ∂y)∂z)
    let lhs = TensorField::from_fn(0, 3, n, |i| {
        (0..n).map(|a| eta.at(a) * r.get(&[a, i[2], i[0], i[1]])).sum()
    });
    let rhs = TensorField::from_fn(0, 3, n, |i| {
        &eps * (eta.at(i[1]) * g.at2(i[0], i[2]) - eta.at(i[0]) * g.at2(i[1], i[2]))
    });
    report.push(probe.identity("sasakian.eta_curvature", &lhs, &rhs));

    let s_xi = TensorField::covector(
        (0..n).map(|x| (0..n).map(|b| curv.ricci.at2(x, b) * xi.at(b)).sum()).collect(),
    );
    report.push(probe.identity("sasakian.ricci_xi", &s_xi, &eta.scale(&Expr::int(1 - n as i64))));
    Ok(report)
}
