use num_traits::Zero;
use symexpr::{Expr, Rational};

use super::{base_values, frame_matrix, rational, show_matrix, upper_pairs, EinsteinLikeConstants};
use crate::check::{CheckEntry, Report};
use crate::error::{GeometryError, Result};
use crate::exact::least_squares;
use crate::geometry::Geometry;
use crate::levi_civita::{lie_derivative_metric, RicciMode};
use crate::tensor::TensorField;

/// Extra seeded points at which a least-squares residual is sampled.
const SOLITON_SAMPLES: usize = 10;

/// Potential field and constants of a candidate η-Ricci soliton.
#[derive(Debug, Clone)]
pub struct SolitonData {
    pub potential: TensorField,
    pub lambda: Rational,
    pub mu: Rational,
}

/// `½ £_V g + S`.
fn soliton_base(geom: &Geometry, mode: RicciMode, potential: &TensorField) -> Result<TensorField> {
    let curv = geom.curvature(mode)?;
    let lie = lie_derivative_metric(geom.structure.metric(), &geom.connection, potential)?;
    lie.scale_rational(&Rational::new(1.into(), 2.into())).try_add(&curv.ricci)
}

/// `½ £_V g + S + λ g + μ η⊗η`; zero exactly when the data is an η-Ricci soliton.
pub fn soliton_residual(geom: &Geometry, mode: RicciMode, data: &SolitonData) -> Result<TensorField> {
    let s = &geom.structure;
    soliton_base(geom, mode, &data.potential)?
        .try_add(&s.metric().tensor().scale_rational(&data.lambda))?
        .try_add(&s.eta_eta().scale_rational(&data.mu))
}

#[derive(Debug, Clone, PartialEq)]
pub enum SolitonSolution {
    /// The residual vanishes identically at these constants.
    Exact { lambda: Rational, mu: Rational },
    /// Best fit at the base point; the soliton equation does not hold.
    LeastSquares {
        lambda: Rational,
        mu: Rational,
        /// Frame (or coordinate) components of the residual at the base point.
        residual: Vec<Vec<Rational>>,
        /// Euclidean norm over the components `i <= j`.
        residual_norm: f64,
        /// `AᵀA` for the unknowns `(λ, μ)`.
        normal_matrix: Vec<Vec<Rational>>,
        /// Largest residual component at extra seeded sample points.
        sampled_max: f64,
    },
}

impl SolitonSolution {
    pub fn lambda(&self) -> &Rational {
        match self {
            SolitonSolution::Exact { lambda, .. } | SolitonSolution::LeastSquares { lambda, .. } => lambda,
        }
    }

    pub fn mu(&self) -> &Rational {
        match self {
            SolitonSolution::Exact { mu, .. } | SolitonSolution::LeastSquares { mu, .. } => mu,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, SolitonSolution::Exact { .. })
    }

    pub fn residual_diagonal(&self) -> Vec<Rational> {
        match self {
            SolitonSolution::Exact { .. } => Vec::new(),
            SolitonSolution::LeastSquares { residual, .. } => {
                (0..residual.len()).map(|i| residual[i][i].clone()).collect()
            }
        }
    }

    pub fn residual_norm(&self) -> f64 {
        match self {
            SolitonSolution::Exact { .. } => 0.0,
            SolitonSolution::LeastSquares { residual_norm, .. } => *residual_norm,
        }
    }
}

/// Solves `½ £_V g + S + λ g + μ η⊗η = 0` for constant `(λ, μ)` by exact
/// least squares over the base-point components, then checks globally.
pub fn solve_soliton_constants(geom: &Geometry, mode: RicciMode, potential: &TensorField) -> Result<SolitonSolution> {
    let s = &geom.structure;
    let base = soliton_base(geom, mode, potential)?;
    let b = base_values(geom, &base, "soliton")?;
    let g = base_values(geom, s.metric().tensor(), "metric")?;
    let h = base_values(geom, &s.eta_eta(), "eta")?;
    let pairs = upper_pairs(s.dim());
    let design: Vec<Vec<Rational>> = pairs.iter().map(|&(i, j)| vec![g[i][j].clone(), h[i][j].clone()]).collect();
    let rhs: Vec<Rational> = pairs.iter().map(|&(i, j)| -b[i][j].clone()).collect();
    let ls = least_squares(&design, &rhs).ok_or_else(|| GeometryError::RankDeficient(show_matrix(&design)))?;
    let (lambda, mu) = (ls.solution[0].clone(), ls.solution[1].clone());
    let data = SolitonData {
        potential: potential.clone(),
        lambda: lambda.clone(),
        mu: mu.clone(),
    };
    let residual = soliton_residual(geom, mode, &data)?;
    if residual.is_zero() {
        return Ok(SolitonSolution::Exact { lambda, mu });
    }
    let residual_norm = ls.residual_norm();
    let comps = frame_matrix(geom, &residual)?;
    let mut sampled_max: f64 = 0.0;
    for p in s.chart().domain_samples(geom.seed, SOLITON_SAMPLES) {
        for e in comps.iter().flatten() {
            if let Ok(v) = e.eval(&p) {
                sampled_max = sampled_max.max(v.abs());
            }
        }
    }
    Ok(SolitonSolution::LeastSquares {
        lambda,
        mu,
        residual: base_values(geom, &residual, "residual")?,
        residual_norm,
        normal_matrix: ls.normal_matrix,
        sampled_max,
    })
}

/// `∇_ξ T`.
fn along_xi(geom: &Geometry, t: &TensorField) -> TensorField {
    let xi = geom.structure.xi();
    let nabla = geom.connection.covariant_derivative(t);
    let (p, q) = t.valence();
    let n = t.dim();
    TensorField::from_fn(p, q, n, |idx| {
        let mut full = idx.to_vec();
        full.push(0);
        (0..n)
            .map(|c| {
                full[p + q] = c;
                nabla.get(&full) * xi.at(c)
            })
            .sum()
    })
}

/// Consequences of an η-Ricci soliton with potential ξ.
pub fn xi_consequence_suite(
    geom: &Geometry,
    mode: RicciMode,
    lambda: &Rational,
    mu: &Rational,
    fit: Option<&EinsteinLikeConstants>,
    para_sasakian: bool,
) -> Result<Report> {
    let s = &geom.structure;
    let probe = &geom.probe;
    let n = s.dim();
    let curv = geom.curvature(mode)?;
    let eps = rational(s.epsilon() as i64);
    let mut report = Report::new();
    let no_fit = "needs Einstein-like constants";

    match fit {
        Some(k) => {
            let value = &eps * (&k.a + lambda) + &k.c + mu;
            report.push(
                probe
                    .scalar_identity("xi.constants", &Expr::constant(value.clone()), &Expr::zero())
                    .with_details(format!("eps*(a+lambda)+c+mu = {value}")),
            );
        }
        None => report.push(CheckEntry::inapplicable("xi.constants", no_fit)),
    }

    let zero_vec = TensorField::zeros(1, 0, n);
    report.push(probe.identity("xi.geodesic", &along_xi(geom, s.xi()), &zero_vec));
    let nabla_xi_phi = along_xi(geom, s.phi());
    report.push(probe.identity("xi.phi_xi", &nabla_xi_phi.apply(s.xi())?, &zero_vec));
    report.push(probe.identity("xi.eta", &along_xi(geom, s.eta()), &TensorField::zeros(0, 1, n)));

    let nabla_xi_s = along_xi(geom, &curv.ricci);
    let nabla_xi_q = along_xi(geom, &curv.ricci_operator);
    match fit {
        Some(k) => {
            let g = s.metric().tensor();
            let rhs = TensorField::from_fn(0, 2, n, |i| {
                (0..n).map(|a| g.at2(a, i[1]) * nabla_xi_phi.at2(a, i[0])).sum::<Expr>().scale(&k.b)
            });
            report.push(probe.identity("xi.ricci", &nabla_xi_s, &rhs));
            report.push(probe.identity("xi.ricci_operator", &nabla_xi_q, &nabla_xi_phi.scale_rational(&k.b)));
        }
        None => {
            report.push(CheckEntry::inapplicable("xi.ricci", no_fit));
            report.push(CheckEntry::inapplicable("xi.ricci_operator", no_fit));
        }
    }
    if para_sasakian {
        report.push(probe.identity("xi.parallel_ricci", &nabla_xi_s, &TensorField::zeros(0, 2, n)));
        report.push(probe.identity("xi.parallel_ricci_operator", &nabla_xi_q, &TensorField::zeros(1, 1, n)));
    } else {
        let why = "structure is not para-Sasakian";
        report.push(CheckEntry::inapplicable("xi.parallel_ricci", why));
        report.push(CheckEntry::inapplicable("xi.parallel_ricci_operator", why));
    }
    Ok(report)
}

/// Potential `V = kξ`: the contraction `ξ(k) = ε(n-1) - λ - εμ`, constancy of
/// `k` when that gate vanishes, and the induced Einstein-like Ricci form.
pub fn collinear_potential_analysis(
    geom: &Geometry,
    mode: RicciMode,
    k: &Expr,
    lambda: &Rational,
    mu: &Rational,
    para_sasakian: bool,
) -> Result<Report> {
    if !para_sasakian {
        return Err(GeometryError::Precondition(
            "collinear potential analysis needs a para-Sasakian structure".into(),
        ));
    }
    let s = &geom.structure;
    let probe = &geom.probe;
    let n = s.dim() as i64;
    let eps = rational(s.epsilon() as i64);
    let gate = &eps * rational(n - 1) - lambda - &eps * mu;
    let data = SolitonData {
        potential: s.xi().scale(k),
        lambda: lambda.clone(),
        mu: mu.clone(),
    };
    let soliton = soliton_residual(geom, mode, &data)?;
    let hypothesis = soliton.is_zero();
    let mut report = Report::new();

    let mut gate_details = format!("eps*(n-1) - lambda - eps*mu = {gate}; soliton_residual_zero={hypothesis}");
    if !gate.is_zero() {
        gate_details.push_str(&format!("; forced derivative xi(k) = {gate}"));
    }
    report.push(CheckEntry::info("collinear.gate", gate_details));

    let dk = TensorField::differential(k, s.dim());
    let forced = s.eta().scale_rational(&gate);
    let mut entry = probe.implication("collinear.dk", hypothesis, &dk, &forced);
    if gate.is_zero() {
        entry.details = format!("k constant: {}", entry.details);
    }
    report.push(entry);

    let g = s.metric().tensor();
    let induced = g
        .scale_rational(&-lambda)
        .try_sub(&s.fundamental_form().scale(&(Expr::constant(eps) * k)))?
        .try_sub(&s.eta_eta().scale_rational(mu))?;
    let curv = geom.curvature(mode)?;
    report.push(probe.implication("collinear.induced_ricci", hypothesis, &curv.ricci, &induced));
    Ok(report)
}

/// `(R(ξ,X)·S)(Y,Z)`, up to sign: `S(R(ξ,X)Y, Z) + S(Y, R(ξ,X)Z)` at `[x][y][z]`.
pub fn semi_symmetry_residual(geom: &Geometry, mode: RicciMode) -> Result<TensorField> {
    let curv = geom.curvature(mode)?;
    let xi = geom.structure.xi();
    let n = geom.dim();
    let r = &curv.riemann;
    // [a][x][y] = (R(ξ, ∂x)∂y)^a
    let rx = TensorField::from_fn(1, 2, n, |i| {
        (0..n).map(|c| r.get(&[i[0], i[2], c, i[1]]) * xi.at(c)).sum()
    });
    let sm = &curv.ricci;
    Ok(TensorField::from_fn(0, 3, n, |i| {
        let (x, y, z) = (i[0], i[1], i[2]);
        (0..n)
            .map(|a| sm.at2(a, z) * rx.get(&[a, x, y]) + sm.at2(y, a) * rx.get(&[a, x, z]))
            .sum()
    }))
}
