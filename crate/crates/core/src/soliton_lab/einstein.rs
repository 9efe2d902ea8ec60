use num_traits::Zero;
use symexpr::{Expr, Rational};

use super::{rational, show_matrix, upper_pairs, values_at, SolitonData};
use crate::check::{CheckEntry, Report, Status};
use crate::error::{GeometryError, Result};
use crate::exact::least_squares;
use crate::geometry::Geometry;
use crate::levi_civita::RicciMode;
use crate::tensor::TensorField;

/// Constants of `S = a g + b g(φ·,·) + c η⊗η`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EinsteinLikeConstants {
    pub a: Rational,
    pub b: Rational,
    pub c: Rational,
}

impl EinsteinLikeConstants {
    pub fn new(a: Rational, b: Rational, c: Rational) -> Self {
        EinsteinLikeConstants { a, b, c }
    }

    /// `a g + b g(φ·,·) + c η⊗η` on the given structure.
    pub fn ricci_model(&self, geom: &Geometry) -> Result<TensorField> {
        let s = &geom.structure;
        s.metric()
            .tensor()
            .scale_rational(&self.a)
            .try_add(&s.fundamental_form().scale_rational(&self.b))?
            .try_add(&s.eta_eta().scale_rational(&self.c))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum EinsteinFit {
    Fitted(EinsteinLikeConstants),
    /// The base-point fit does not hold globally; `witness` names a
    /// component of `S - model`.
    NotEinsteinLike {
        candidate: EinsteinLikeConstants,
        witness: String,
    },
}

impl EinsteinFit {
    pub fn constants(&self) -> Option<&EinsteinLikeConstants> {
        match self {
            EinsteinFit::Fitted(k) => Some(k),
            EinsteinFit::NotEinsteinLike { .. } => None,
        }
    }
}

/// Fits `(a, b, c)` from exact components at the base point, adding the
/// points `base + e_k` while the equations are rank deficient, then verifies
/// the fit symbolically.
pub fn einstein_like_fit(geom: &Geometry, mode: RicciMode) -> Result<EinsteinFit> {
    let s = &geom.structure;
    let curv = geom.curvature(mode)?;
    let n = s.dim();
    let base = s.chart().base_point().to_vec();
    let points = std::iter::once(base.clone()).chain((0..n).map(|k| {
        let mut p = base.clone();
        p[k] += rational(1);
        p
    }));
    let form = s.fundamental_form();
    let eta_eta = s.eta_eta();
    let pairs = upper_pairs(n);
    let mut design: Vec<Vec<Rational>> = Vec::new();
    let mut rhs: Vec<Rational> = Vec::new();
    let mut solved = None;
    for (k, p) in points.enumerate() {
        let values = (|| {
            Ok::<_, GeometryError>((
                values_at(geom, &curv.ricci, &p, "ricci")?,
                values_at(geom, s.metric().tensor(), &p, "metric")?,
                values_at(geom, &form, &p, "phi form")?,
                values_at(geom, &eta_eta, &p, "eta")?,
            ))
        })();
        let (sv, g, f, h) = match values {
            Ok(v) => v,
            Err(e) if k == 0 => return Err(e),
            Err(_) => continue,
        };
        for &(i, j) in &pairs {
            design.push(vec![g[i][j].clone(), f[i][j].clone(), h[i][j].clone()]);
            rhs.push(sv[i][j].clone());
        }
        if let Some(ls) = least_squares(&design, &rhs) {
            solved = Some(ls);
            break;
        }
    }
    let k = match solved {
        Some(ls) => EinsteinLikeConstants::new(ls.solution[0].clone(), ls.solution[1].clone(), ls.solution[2].clone()),
        None => {
            // g(φ·,·) depends on g and η⊗η, so b is not identifiable; take b = 0
            let reduced: Vec<Vec<Rational>> = design.iter().map(|r| vec![r[0].clone(), r[2].clone()]).collect();
            let ls = least_squares(&reduced, &rhs).ok_or_else(|| GeometryError::RankDeficient(show_matrix(&design)))?;
            EinsteinLikeConstants::new(ls.solution[0].clone(), Rational::zero(), ls.solution[1].clone())
        }
    };
    let residual = curv.ricci.try_sub(&k.ricci_model(geom)?)?;
    if residual.is_zero() {
        Ok(EinsteinFit::Fitted(k))
    } else {
        Ok(EinsteinFit::NotEinsteinLike {
            candidate: k,
            witness: geom.probe.witness(&residual),
        })
    }
}

/// Identities satisfied by an Einstein-like structure with constants `k`.
pub fn einstein_like_suite(
    geom: &Geometry,
    mode: RicciMode,
    k: &EinsteinLikeConstants,
    para_sasakian: bool,
) -> Result<Report> {
    let s = &geom.structure;
    let probe = &geom.probe;
    let curv = geom.curvature(mode)?;
    let n = s.dim();
    let (g, phi, xi, eta) = (s.metric().tensor(), s.phi(), s.xi(), s.eta());
    let sm = &curv.ricci;
    let eps_r = rational(s.epsilon() as i64);
    let eps = s.epsilon_expr();
    let xi_value = &eps_r * &k.a + &k.c;
    let mut report = Report::new();

    report.push(probe.identity("einstein.fit", sm, &k.ricci_model(geom)?));

    let s_phi_x = TensorField::from_fn(0, 2, n, |i| (0..n).map(|a| sm.at2(a, i[1]) * phi.at2(a, i[0])).sum());
    let s_phi_y = TensorField::from_fn(0, 2, n, |i| (0..n).map(|a| sm.at2(i[0], a) * phi.at2(a, i[1])).sum());
    report.push(probe.identity("einstein.ricci_phi_symmetric", &s_phi_x, &s_phi_y));

    let s_phi_phi = TensorField::from_fn(0, 2, n, |i| {
        let mut acc = Expr::zero();
        for a in 0..n {
            for b in 0..n {
                if !sm.at2(a, b).is_zero() {
                    acc = acc + sm.at2(a, b) * phi.at2(a, i[0]) * phi.at2(b, i[1]);
                }
            }
        }
        acc
    });
    let rhs = sm.try_sub(&s.eta_eta().scale_rational(&xi_value))?;
    report.push(probe.identity("einstein.ricci_phi_phi", &s_phi_phi, &rhs));

    let s_xi = TensorField::covector((0..n).map(|x| (0..n).map(|b| sm.at2(x, b) * xi.at(b)).sum()).collect());
    report.push(probe.identity("einstein.ricci_xi", &s_xi, &eta.scale_rational(&xi_value)));
    let s_xi_xi = sm.bilinear(xi, xi)?;
    report.push(probe.scalar_identity("einstein.ricci_xi_xi", &s_xi_xi, &Expr::constant(xi_value.clone())));

    let conn = &geom.connection;
    let nabla_s = conn.covariant_derivative(sm);
    let nabla_q = conn.covariant_derivative(&curv.ricci_operator);
    let nabla_phi = conn.covariant_derivative(phi);
    let nabla_xi = geom.nabla_xi();
    let b = Expr::constant(k.b.clone());
    let ec = &eps * Expr::constant(k.c.clone());
    // g(∇_x ξ, ∂z) at [x][z]
    let g_nxi = TensorField::from_fn(0, 2, n, |i| (0..n).map(|a| g.at2(a, i[1]) * nabla_xi.at2(a, i[0])).sum());

    // [x][y][z] = (∇_x S)(∂y, ∂z)
    let lhs = TensorField::from_fn(0, 3, n, |i| nabla_s.get(&[i[1], i[2], i[0]]).clone());
    let rhs = TensorField::from_fn(0, 3, n, |i| {
        let (x, y, z) = (i[0], i[1], i[2]);
        let dphi: Expr = (0..n).map(|a| g.at2(a, z) * nabla_phi.get(&[a, y, x])).sum();
        &b * dphi + &ec * (eta.at(y) * g_nxi.at2(x, z) + eta.at(z) * g_nxi.at2(x, y))
    });
    report.push(probe.identity("einstein.nabla_ricci", &lhs, &rhs));

    // [a][x][y] = ((∇_x Q) ∂y)^a
    let lhs = TensorField::from_fn(1, 2, n, |i| nabla_q.get(&[i[0], i[2], i[1]]).clone());
    let rhs = TensorField::from_fn(1, 2, n, |i| {
        let (a, x, y) = (i[0], i[1], i[2]);
        &b * nabla_phi.get(&[a, y, x])
            + &ec * (eta.at(y) * nabla_xi.at2(a, x) + &eps * g_nxi.at2(x, y) * xi.at(a))
    });
    report.push(probe.identity("einstein.nabla_ricci_operator", &lhs, &rhs));

    let q_model = TensorField::identity(n)
        .scale_rational(&k.a)
        .try_add(&phi.scale_rational(&k.b))?
        .try_add(&s.xi_eta().scale(&ec))?;
    report.push(probe.identity("einstein.ricci_operator", &curv.ricci_operator, &q_model));

    if para_sasakian {
        let one_minus_n = rational(1 - n as i64);
        report.push(
            probe
                .scalar_identity(
                    "einstein.para_sasakian_constants",
                    &Expr::constant(xi_value.clone()),
                    &Expr::constant(one_minus_n.clone()),
                )
                .with_details(format!("eps*a + c = {xi_value}; 1 - n = {one_minus_n}")),
        );
        let predicted = Expr::constant(rational(n as i64) * &k.a + &eps_r * &k.c) + &b * phi.trace()?;
        let mut entry = probe.scalar_identity("einstein.scalar_curvature", &curv.scalar, &predicted);
        entry.details = format!(
            "r = {}; n*a + b*trace(phi) + eps*c = {}",
            probe.show(&curv.scalar),
            probe.show(&predicted)
        );
        report.push(entry);
    } else {
        let why = "structure is not para-Sasakian";
        report.push(CheckEntry::inapplicable("einstein.para_sasakian_constants", why));
        report.push(CheckEntry::inapplicable("einstein.scalar_curvature", why));
    }

    // Codazzi is a property of the structure, reported without failing
    let codazzi_lhs = TensorField::from_fn(1, 2, n, |i| nabla_q.get(&[i[0], i[2], i[1]]).clone());
    let codazzi_rhs = TensorField::from_fn(1, 2, n, |i| nabla_q.get(&[i[0], i[1], i[2]]).clone());
    let mut entry = probe.identity("einstein.codazzi", &codazzi_lhs, &codazzi_rhs);
    let class = if entry.symbolic_zero { "codazzi" } else { "not_codazzi" };
    entry.details = format!("classification={class}; {}", entry.details);
    entry.status = Status::Pass;
    report.push(entry);

    // (ε + b, a + λ, c + μ) = 0 makes (g, ξ, -a, -c) a soliton
    let hypothesis = para_sasakian && (&eps_r + &k.b).is_zero();
    let data = SolitonData {
        potential: xi.clone(),
        lambda: -k.a.clone(),
        mu: -k.c.clone(),
    };
    let residual = super::soliton_residual(geom, mode, &data)?;
    report.push(probe.implication(
        "einstein.remark_soliton",
        hypothesis,
        &residual,
        &TensorField::zeros(0, 2, n),
    ));
    Ok(report)
}
