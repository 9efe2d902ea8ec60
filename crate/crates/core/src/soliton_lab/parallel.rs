use symexpr::{Expr, Rational};

use super::{rational, EinsteinLikeConstants, TorseFormingData};
use crate::check::{CheckEntry, Report};
use crate::error::{GeometryError, Result};
use crate::geometry::Geometry;
use crate::levi_civita::{lie_derivative_metric, RicciMode};
use crate::tensor::TensorField;

/// A symmetric (0,2) tensor to be tested for parallelism.
#[derive(Debug, Clone)]
pub struct ParallelCandidate {
    alpha: TensorField,
    /// Set when `α = ½ £_ξ g + S + μ η⊗η`.
    soliton_mu: Option<Rational>,
}

impl ParallelCandidate {
    pub fn new(alpha: TensorField) -> Result<ParallelCandidate> {
        if alpha.valence() != (0, 2) || !alpha.is_symmetric() {
            return Err(GeometryError::NotSymmetricTensor("alpha".into()));
        }
        Ok(ParallelCandidate {
            alpha,
            soliton_mu: None,
        })
    }

    /// `α = ½ £_ξ g + S + μ η⊗η`.
    pub fn soliton_form(geom: &Geometry, mode: RicciMode, mu: &Rational) -> Result<ParallelCandidate> {
        let s = &geom.structure;
        let curv = geom.curvature(mode)?;
        let lie = lie_derivative_metric(s.metric(), &geom.connection, s.xi())?;
        let alpha = lie
            .scale_rational(&Rational::new(1.into(), 2.into()))
            .try_add(&curv.ricci)?
            .try_add(&s.eta_eta().scale_rational(mu))?;
        Ok(ParallelCandidate {
            soliton_mu: Some(mu.clone()),
            ..ParallelCandidate::new(alpha)?
        })
    }

    pub fn alpha(&self) -> &TensorField {
        &self.alpha
    }

    pub fn soliton_mu(&self) -> Option<&Rational> {
        self.soliton_mu.as_ref()
    }
}

/// Parallelism of `α`, the Ricci-identity consequence, proportionality to `g`
/// and the soliton constant it determines.
pub fn parallel_tensor_check(
    geom: &Geometry,
    candidate: &ParallelCandidate,
    torse: &TorseFormingData,
    para_sasakian: bool,
    fit: Option<&EinsteinLikeConstants>,
) -> Result<Report> {
    let s = &geom.structure;
    let probe = &geom.probe;
    let n = s.dim();
    let alpha = &candidate.alpha;
    let r = &geom.weighted.riemann;
    let mut report = Report::new();

    let nabla_alpha = geom.connection.covariant_derivative(alpha);
    // parallelism is a property of α, reported without failing
    let mut entry = probe.identity("parallel.nabla_alpha", &nabla_alpha, &TensorField::zeros(0, 3, n));
    let parallel = entry.symbolic_zero;
    let class = if parallel { "parallel" } else { "not_parallel" };
    entry.details = format!("classification={class}; {}", entry.details);
    entry.status = crate::check::Status::Pass;
    report.push(entry);

    // [x][y][z][w] = α(R(∂x,∂y)∂z, ∂w) + α(R(∂x,∂y)∂w, ∂z)
    let ricci_identity = TensorField::from_fn(0, 4, n, |i| {
        let (x, y, z, w) = (i[0], i[1], i[2], i[3]);
        (0..n)
            .map(|a| alpha.at2(a, w) * r.get(&[a, z, x, y]) + alpha.at2(a, z) * r.get(&[a, w, x, y]))
            .sum()
    });
    let entry = probe.implication(
        "parallel.ricci_identity",
        parallel,
        &ricci_identity,
        &TensorField::zeros(0, 4, n),
    );
    assert!(
        !parallel || entry.symbolic_zero,
        "a parallel tensor must satisfy the Ricci identity"
    );
    report.push(entry);

    let a_xi_xi = alpha.bilinear(s.xi(), s.xi())?;
    let eps = s.epsilon_expr();
    let structural = para_sasakian || (torse.is_torse_forming() && torse.regular);
    let applicable = structural && parallel;
    let reason = if !structural {
        "structure is neither para-Sasakian nor regular torse-forming"
    } else {
        "alpha is not parallel"
    };
    if applicable {
        let a_xi = TensorField::covector((0..n).map(|y| (0..n).map(|b| alpha.at2(y, b) * s.xi().at(b)).sum()).collect());
        report.push(probe.identity("parallel.alpha_xi", &a_xi, &s.eta().scale(&a_xi_xi)));
        let mut entry = probe.identity(
            "parallel.proportionality",
            alpha,
            &s.metric().tensor().scale(&(&eps * &a_xi_xi)),
        );
        entry.details = format!("alpha(xi,xi) = {}; {}", probe.show(&a_xi_xi), entry.details);
        report.push(entry);
    } else {
        report.push(CheckEntry::inapplicable("parallel.alpha_xi", reason));
        report.push(CheckEntry::inapplicable("parallel.proportionality", reason));
    }

    if let Some(mu) = candidate.soliton_mu() {
        let lambda = -(&eps * &a_xi_xi);
        match (lambda.as_constant(), fit) {
            (None, _) => report.push(CheckEntry::new(
                "parallel.soliton_lambda",
                crate::check::Status::Fail,
                format!("-eps*alpha(xi,xi) = {} is not constant", probe.show(&lambda)),
            )),
            (Some(l), Some(k)) => {
                let eps_r = rational(s.epsilon() as i64);
                let predicted = -(&k.a + &eps_r * (&k.c + mu));
                let mut entry = probe.scalar_identity(
                    "parallel.soliton_lambda",
                    &lambda,
                    &Expr::constant(predicted.clone()),
                );
                entry.details = format!("lambda = -eps*alpha(xi,xi) = {l}; -(a + eps*(c + mu)) = {predicted}");
                report.push(entry);
            }
            (Some(l), None) => report.push(CheckEntry::info(
                "parallel.soliton_lambda",
                format!("lambda = -eps*alpha(xi,xi) = {l}; no Einstein-like fit to compare"),
            )),
        }
        // α parallel under the theorem hypotheses makes (g, ξ, λ, μ) a soliton
        let residual = alpha.try_add(&s.metric().tensor().scale(&lambda))?;
        report.push(probe.implication(
            "parallel.soliton_equivalence",
            applicable,
            &residual,
            &TensorField::zeros(0, 2, n),
        ));
    }
    Ok(report)
}
