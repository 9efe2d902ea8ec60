use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;
use symexpr::{Expr, Rational};

use crate::error::{GeometryError, Result};
use crate::frame::Frame;
use crate::metric::Metric;
use crate::tensor::TensorField;

/// How the Ricci tensor is contracted from the curvature tensor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum RicciMode {
    /// `S(X, Y) = trace(Z -> R(Z, X) Y)`, frame independent.
    #[default]
    WeightedTrace,
    /// `S(X, Y) = Σ_i g(R(E_i, X) Y, E_i)` over an orthonormal frame, with no
    /// sign weights; differs from the trace when the metric is indefinite.
    PaperFrameSum,
}

impl RicciMode {
    pub fn as_str(&self) -> &'static str {
        match self {
            RicciMode::WeightedTrace => "weighted_trace",
            RicciMode::PaperFrameSum => "paper_frame_sum",
        }
    }
}

impl fmt::Display for RicciMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for RicciMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "weighted_trace" => Ok(RicciMode::WeightedTrace),
            "paper_frame_sum" => Ok(RicciMode::PaperFrameSum),
            other => Err(format!(
                "unknown ricci mode '{other}' (expected weighted_trace or paper_frame_sum)"
            )),
        }
    }
}

/// Levi-Civita connection; `symbol(k, i, j)` is `Γ^k_ij` with `∇_∂i ∂j = Γ^k_ij ∂k`.
#[derive(Debug, Clone)]
pub struct Connection {
    gamma: TensorField,
}

impl Connection {
    pub fn levi_civita(metric: &Metric) -> Connection {
        let n = metric.dim();
        let g = metric.tensor();
        let dg: Vec<TensorField> = (0..n).map(|l| g.derivative(l)).collect();
        let half = Rational::new(1.into(), 2.into());
        let gamma = TensorField::from_fn(1, 2, n, |idx| {
            let (k, i, j) = (idx[0], idx[1], idx[2]);
            let sum: Expr = (0..n)
                .map(|l| {
                    let ginv = metric.inverse_component(k, l);
                    if ginv.is_zero() {
                        return Expr::zero();
                    }
                    ginv * (dg[i].at2(j, l) + dg[j].at2(i, l) - dg[l].at2(i, j))
                })
                .sum();
            sum.scale(&half)
        });
        Connection { gamma }
    }

    pub fn symbol(&self, k: usize, i: usize, j: usize) -> &Expr {
        self.gamma.get(&[k, i, j])
    }

    pub fn symbols(&self) -> &TensorField {
        &self.gamma
    }

    pub fn dim(&self) -> usize {
        self.gamma.dim()
    }

    /// `∇T`, with the differentiating slot appended as the last covariant index.
    pub fn covariant_derivative(&self, t: &TensorField) -> TensorField {
        let (p, q) = t.valence();
        let n = t.dim();
        let partials: Vec<TensorField> = (0..n).map(|c| t.derivative(c)).collect();
        TensorField::from_fn(p, q + 1, n, |idx| {
            let c = idx[p + q];
            let base = &idx[..p + q];
            let mut acc = partials[c].get(base).clone();
            let mut slot = base.to_vec();
            for s in 0..p {
                let a = base[s];
                for e in 0..n {
                    let gam = self.symbol(a, c, e);
                    if gam.is_zero() {
                        continue;
                    }
                    slot[s] = e;
                    acc = acc + gam * t.get(&slot);
                }
                slot[s] = a;
            }
            for s in p..p + q {
                let b = base[s];
                for e in 0..n {
                    let gam = self.symbol(e, c, b);
                    if gam.is_zero() {
                        continue;
                    }
                    slot[s] = e;
                    acc = acc - gam * t.get(&slot);
                }
                slot[s] = b;
            }
            acc
        })
    }

    /// `∇_X Y` for vector fields.
    pub fn nabla(&self, x: &TensorField, y: &TensorField) -> Result<TensorField> {
        if x.valence() != (1, 0) || y.valence() != (1, 0) {
            return Err(GeometryError::Valence("nabla needs two vector fields".into()));
        }
        let n = self.dim();
        Ok(TensorField::vector(
            (0..n)
                .map(|k| {
                    let mut acc = x.directional(y.at(k))?;
                    for i in 0..n {
                        for j in 0..n {
                            let gam = self.symbol(k, i, j);
                            if !gam.is_zero() {
                                acc = acc + gam * x.at(i) * y.at(j);
                            }
                        }
                    }
                    Ok(acc)
                })
                .collect::<Result<_>>()?,
        ))
    }

    /// `R^a_bcd` with `R(∂c, ∂d)∂b = R^a_bcd ∂a` and
    /// `R(X, Y)Z = ∇_X ∇_Y Z - ∇_Y ∇_X Z - ∇_[X,Y] Z`.
    pub fn riemann(&self) -> TensorField {
        let n = self.dim();
        let dgamma: Vec<TensorField> = (0..n).map(|c| self.gamma.derivative(c)).collect();
        TensorField::from_fn(1, 3, n, |idx| {
            let (a, b, c, d) = (idx[0], idx[1], idx[2], idx[3]);
            let mut acc = dgamma[c].get(&[a, d, b]) - dgamma[d].get(&[a, c, b]);
            for e in 0..n {
                let t1 = self.symbol(a, c, e);
                let t2 = self.symbol(a, d, e);
                if !t1.is_zero() {
                    acc = acc + t1 * self.symbol(e, d, b);
                }
                if !t2.is_zero() {
                    acc = acc - t2 * self.symbol(e, c, b);
                }
            }
            acc
        })
    }
}

/// `R(X, Y)Z` from a (1,3) curvature tensor.
pub fn apply_curvature(
    riemann: &TensorField,
    x: &TensorField,
    y: &TensorField,
    z: &TensorField,
) -> TensorField {
    let n = riemann.dim();
    TensorField::vector(
        (0..n)
            .map(|a| {
                let mut acc = Expr::zero();
                for b in 0..n {
                    if z.at(b).is_zero() {
                        continue;
                    }
                    for c in 0..n {
                        if x.at(c).is_zero() {
                            continue;
                        }
                        for d in 0..n {
                            let r = riemann.get(&[a, b, c, d]);
                            if !r.is_zero() && !y.at(d).is_zero() {
                                acc = acc + r * z.at(b) * x.at(c) * y.at(d);
                            }
                        }
                    }
                }
                acc
            })
            .collect(),
    )
}

/// Weighted trace `S_xy = R^a_{y a x}`.
pub fn ricci_weighted(riemann: &TensorField) -> TensorField {
    let n = riemann.dim();
    TensorField::from_fn(0, 2, n, |i| {
        (0..n).map(|a| riemann.get(&[a, i[1], a, i[0]]).clone()).sum()
    })
}

/// Unweighted frame sum `S(X, Y) = Σ_i g(R(E_i, X)Y, E_i)`.
pub fn ricci_frame_sum(riemann: &TensorField, metric: &Metric, frame: &Frame) -> TensorField {
    let n = riemann.dim();
    // P^{cb} = Σ_i E_i^c E_i^b; the sign-weighted version would be g^{cb}
    let p = TensorField::from_fn(2, 0, n, |i| {
        frame.vectors().iter().map(|e| e.at(i[0]) * e.at(i[1])).sum()
    });
    let gp = TensorField::from_fn(1, 1, n, |i| {
        (0..n).map(|b| metric.component(i[0], b) * p.at2(i[1], b)).sum()
    });
    TensorField::from_fn(0, 2, n, |i| {
        let (x, y) = (i[0], i[1]);
        let mut acc = Expr::zero();
        for a in 0..n {
            for c in 0..n {
                let w = gp.at2(a, c);
                if !w.is_zero() {
                    acc = acc + w * riemann.get(&[a, y, c, x]);
                }
            }
        }
        acc
    })
}

/// Curvature quantities under one Ricci convention.
#[derive(Debug, Clone)]
pub struct Curvature {
    pub mode: RicciMode,
    pub riemann: TensorField,
    pub ricci: TensorField,
    /// `Q^a_b = g^{ac} S_cb`.
    pub ricci_operator: TensorField,
    pub scalar: Expr,
}

impl Curvature {
    pub fn compute(
        metric: &Metric,
        riemann: TensorField,
        mode: RicciMode,
        frame: Option<&Frame>,
    ) -> Result<Curvature> {
        let ricci = match mode {
            RicciMode::WeightedTrace => ricci_weighted(&riemann),
            RicciMode::PaperFrameSum => {
                let frame = frame
                    .ok_or_else(|| GeometryError::FrameRequired("the paper_frame_sum Ricci mode".into()))?;
                ricci_frame_sum(&riemann, metric, frame)
            }
        };
        let ricci_operator = ricci_operator(metric, &ricci);
        let scalar = scalar_curvature(metric, &ricci);
        Ok(Curvature {
            mode,
            riemann,
            ricci,
            ricci_operator,
            scalar,
        })
    }
}

pub fn ricci_operator(metric: &Metric, ricci: &TensorField) -> TensorField {
    let n = metric.dim();
    TensorField::from_fn(1, 1, n, |i| {
        (0..n).map(|c| metric.inverse_component(i[0], c) * ricci.at2(c, i[1])).sum()
    })
}

pub fn scalar_curvature(metric: &Metric, ricci: &TensorField) -> Expr {
    let n = metric.dim();
    (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .map(|(i, j)| metric.inverse_component(i, j) * ricci.at2(i, j))
        .sum()
}

/// `(£_V g)_ij = V^k ∂_k g_ij + g_kj ∂_i V^k + g_ik ∂_j V^k`.
pub fn lie_derivative_metric_coordinates(metric: &Metric, v: &TensorField) -> TensorField {
    let n = metric.dim();
    let g = metric.tensor();
    TensorField::from_fn(0, 2, n, |idx| {
        let (i, j) = (idx[0], idx[1]);
        (0..n)
            .map(|k| {
                v.at(k) * g.at2(i, j).derivative(k)
                    + g.at2(k, j) * v.at(k).derivative(i)
                    + g.at2(i, k) * v.at(k).derivative(j)
            })
            .sum()
    })
}

/// `(£_V g)(X, Y) = g(∇_X V, Y) + g(X, ∇_Y V)`.
pub fn lie_derivative_metric_connection(metric: &Metric, conn: &Connection, v: &TensorField) -> Result<TensorField> {
    if v.valence() != (1, 0) {
        return Err(GeometryError::Valence("Lie derivative needs a vector field".into()));
    }
    let n = metric.dim();
    let nabla_v = conn.covariant_derivative(v);
    Ok(TensorField::from_fn(0, 2, n, |idx| {
        let (i, j) = (idx[0], idx[1]);
        (0..n)
            .map(|k| metric.component(k, j) * nabla_v.at2(k, i) + metric.component(i, k) * nabla_v.at2(k, j))
            .sum()
    }))
}

/// [`lie_derivative_metric_connection`], cross-checked against the
/// coordinate formula.
pub fn lie_derivative_metric(metric: &Metric, conn: &Connection, v: &TensorField) -> Result<TensorField> {
    let via_connection = lie_derivative_metric_connection(metric, conn, v)?;
    let coordinate = lie_derivative_metric_coordinates(metric, v);
    assert!(
        via_connection.try_sub(&coordinate)?.is_zero(),
        "Lie derivative formulas disagree: {via_connection:?} vs {coordinate:?}"
    );
    Ok(via_connection)
}
