use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;
use symexpr::{Expr, Rational};

use super::rational;
use crate::check::{CheckEntry, Report};
use crate::error::{GeometryError, Result};
use crate::geometry::Geometry;
use crate::tensor::TensorField;

const ZERO_SET_SAMPLES: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TorseClass {
    General,
    /// `f = -1`.
    IrrotationalCaseI,
    /// `f = 0`.
    RecurrentCaseII,
    NotTorseForming,
}

impl fmt::Display for TorseClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TorseClass::General => "general",
            TorseClass::IrrotationalCaseI => "irrotational_case_I",
            TorseClass::RecurrentCaseII => "recurrent_case_II",
            TorseClass::NotTorseForming => "not_torse_forming",
        })
    }
}

/// `∇_X ξ = f X + w(X) ξ` data.
#[derive(Debug, Clone)]
pub struct TorseFormingData {
    /// `trace(∇ξ)/(n-1)`; only meaningful when torse-forming.
    pub f: Expr,
    pub w: TensorField,
    pub classification: TorseClass,
    pub regular: bool,
    /// `f² + ξ(f)`.
    pub regularity: Expr,
    /// Sampled behavior of a nonconstant regularity function.
    pub zero_set: Option<String>,
}

impl TorseFormingData {
    pub fn is_torse_forming(&self) -> bool {
        self.classification != TorseClass::NotTorseForming
    }
}

pub fn detect_torse_forming(geom: &Geometry) -> Result<TorseFormingData> {
    let s = &geom.structure;
    let n = s.dim();
    let k = geom.nabla_xi();
    let f = k.trace()?.scale(&Rational::new(1.into(), (n as i64 - 1).into()));
    let w = s.eta().scale(&-f.clone());
    let forming = k.try_sub(&s.phi_squared().scale(&f))?.is_zero();
    let regularity = &f * &f + s.xi().directional(&f)?;
    if !forming {
        return Ok(TorseFormingData {
            f,
            w,
            classification: TorseClass::NotTorseForming,
            regular: false,
            regularity,
            zero_set: None,
        });
    }
    let classification = match f.as_constant() {
        Some(c) if c.is_zero() => TorseClass::RecurrentCaseII,
        Some(c) if (-&c).is_one() => TorseClass::IrrotationalCaseI,
        _ => TorseClass::General,
    };
    let zero_set = (!regularity.is_constant()).then(|| {
        let values: Vec<f64> = s
            .chart()
            .domain_samples(geom.seed, ZERO_SET_SAMPLES)
            .iter()
            .filter_map(|p| regularity.eval(p).ok())
            .collect();
        let min = values.iter().fold(f64::INFINITY, |m, v| m.min(v.abs()));
        let sign_change = values.iter().any(|v| *v > 0.0) && values.iter().any(|v| *v < 0.0);
        format!(
            "f^2 + xi(f) is nonconstant; min |value| over {} samples = {:.3e}; sign change: {}",
            values.len(),
            min,
            sign_change
        )
    });
    Ok(TorseFormingData {
        f,
        w,
        classification,
        regular: !regularity.is_zero(),
        regularity,
        zero_set,
    })
}

/// Values forced on an η-Einstein soliton with torse-forming ξ.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TorseConstants {
    pub c: Rational,
    pub mu: Rational,
    /// `ε(a+λ) + c + μ`, which must vanish.
    pub check: Rational,
}

pub fn torse_forming_constants(a: &Rational, lambda: &Rational, epsilon: i8, n: usize) -> TorseConstants {
    assert!(n >= 2, "dimension must be at least 2");
    let eps = rational(epsilon as i64);
    let s = a + lambda;
    let q = &s * &s * rational(1 - n as i64);
    let c = -(&eps * a) + &q;
    let mu = -(&eps * (lambda + &eps * &q));
    let check = &eps * &s + &c + &mu;
    TorseConstants { c, mu, check }
}

/// Checks `R(X,Y)ξ` against the torse-forming curvature form and, given
/// `a + λ` with `f = -(a+λ)`, the η-Einstein soliton forms.
pub fn curvature_from_torse_forming(
    geom: &Geometry,
    tf: &TorseFormingData,
    a_plus_lambda: Option<&Rational>,
) -> Result<Report> {
    if !tf.is_torse_forming() {
        return Err(GeometryError::Precondition("xi is not torse-forming".into()));
    }
    let s = &geom.structure;
    let probe = &geom.probe;
    let n = s.dim();
    let r = &geom.weighted.riemann;
    let (xi, eta) = (s.xi(), s.eta());
    let phi2 = s.phi_squared();
    let delta = |a: usize, b: usize| if a == b { Expr::one() } else { Expr::zero() };
    let mut report = Report::new();

    // [a][x][y] = (R(∂x, ∂y)ξ)^a
    let lhs = TensorField::from_fn(1, 2, n, |i| {
        (0..n).map(|b| r.get(&[i[0], b, i[1], i[2]]) * xi.at(b)).sum()
    });
    let f2 = &tf.f * &tf.f;
    let df: Vec<Expr> = (0..n).map(|k| tf.f.derivative(k)).collect();
    let rhs = TensorField::from_fn(1, 2, n, |i| {
        let (a, x, y) = (i[0], i[1], i[2]);
        &f2 * (eta.at(x) * delta(a, y) - eta.at(y) * delta(a, x)) + &df[x] * phi2.at2(a, y)
            - &df[y] * phi2.at2(a, x)
    });
    report.push(probe.identity("torse.curvature_xi", &lhs, &rhs));

    match a_plus_lambda {
        Some(al) => {
            let minus = Expr::constant(-al.clone());
            let matches = (&tf.f - &minus).is_zero();
            report.push(probe.scalar_identity("torse.f_matches", &tf.f, &minus));
            if matches {
                let sq = al * al;
                let rhs = TensorField::from_fn(1, 2, n, |i| {
                    (eta.at(i[1]) * delta(i[0], i[2]) - eta.at(i[2]) * delta(i[0], i[1])).scale(&sq)
                });
                report.push(probe.identity("torse.curvature_xi_soliton", &lhs, &rhs));
                let sm = &geom.weighted.ricci;
                let s_xi = TensorField::covector(
                    (0..n).map(|x| (0..n).map(|b| sm.at2(x, b) * xi.at(b)).sum()).collect(),
                );
                let factor = &sq * rational(1 - n as i64);
                report.push(probe.identity("torse.ricci_xi_soliton", &s_xi, &eta.scale_rational(&factor)));
            } else {
                let why = "f differs from -(a+lambda)";
                report.push(CheckEntry::inapplicable("torse.curvature_xi_soliton", why));
                report.push(CheckEntry::inapplicable("torse.ricci_xi_soliton", why));
            }
        }
        None => {
            let why = "no soliton constants supplied";
            report.push(CheckEntry::inapplicable("torse.curvature_xi_soliton", why));
            report.push(CheckEntry::inapplicable("torse.ricci_xi_soliton", why));
        }
    }
    Ok(report)
}
