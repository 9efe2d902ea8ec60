//! Runs the analyses on a loaded manifest and assembles a verification report.

use num_traits::Zero;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::str::FromStr;
use symexpr::{Expr, Rational};

use crate::check::{round_sig, CheckEntry, Report, Status};
use crate::error::{GeometryError, Result};
use crate::frame::describe_frame_vector;
use crate::geometry::Geometry;
use crate::levi_civita::{
    apply_curvature, lie_derivative_metric_connection, lie_derivative_metric_coordinates, RicciMode,
};
use crate::manifest::{Loaded, Potential};
use crate::oracle::{self, OracleConfig, Scheme};
use crate::paracontact::{is_para_sasakian, sasakian_identity_suite, validate_axioms, validate_metric_compat};
use crate::soliton_lab::{
    collinear_potential_analysis, curvature_from_torse_forming, detect_torse_forming, einstein_like_fit,
    einstein_like_suite, parallel_tensor_check, semi_symmetry_residual, soliton_residual, solve_soliton_constants,
    torse_forming_constants, xi_consequence_suite, EinsteinFit, EinsteinLikeConstants, ParallelCandidate,
    SolitonData, SolitonSolution, TorseFormingData,
};
use crate::tensor::TensorField;

pub const CURVATURE_SIGN: &str = "R(X,Y)Z = nabla_X nabla_Y Z - nabla_Y nabla_X Z - nabla_[X,Y] Z";

const SIGNATURE_SAMPLES: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Validate,
    Curvature,
    Sasakian,
    EinsteinFit,
    SolitonCheck,
    SolitonSolve,
    Torse,
    Collinear,
    Parallel,
    Oracle,
    /// Every step above, in order; missing inputs become inapplicable entries.
    All,
}

impl Command {
    const STEPS: [Command; 10] = [
        Command::Validate,
        Command::Curvature,
        Command::Sasakian,
        Command::EinsteinFit,
        Command::SolitonCheck,
        Command::SolitonSolve,
        Command::Torse,
        Command::Collinear,
        Command::Parallel,
        Command::Oracle,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Command::Validate => "validate",
            Command::Curvature => "curvature",
            Command::Sasakian => "sasakian",
            Command::EinsteinFit => "einstein-fit",
            Command::SolitonCheck => "soliton check",
            Command::SolitonSolve => "soliton solve",
            Command::Torse => "torse",
            Command::Collinear => "collinear",
            Command::Parallel => "parallel",
            Command::Oracle => "oracle",
            Command::All => "report --all",
        }
    }
}

impl FromStr for Command {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let words: Vec<&str> = s.split_whitespace().collect();
        Ok(match words.as_slice() {
            ["validate"] => Command::Validate,
            ["curvature"] => Command::Curvature,
            ["sasakian"] => Command::Sasakian,
            ["einstein-fit"] => Command::EinsteinFit,
            ["soliton", "check"] => Command::SolitonCheck,
            ["soliton", "solve"] => Command::SolitonSolve,
            ["torse"] => Command::Torse,
            ["collinear"] => Command::Collinear,
            ["parallel"] => Command::Parallel,
            ["oracle"] => Command::Oracle,
            ["report", "--all"] | ["report"] | ["all"] => Command::All,
            _ => return Err(format!("unknown command '{s}'")),
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOptions {
    /// Overrides the manifest's Ricci mode.
    pub ricci_mode: Option<RicciMode>,
    pub seed: u64,
    pub h: f64,
    pub tolerance: f64,
}

impl Default for RunOptions {
    fn default() -> Self {
        let cfg = OracleConfig::default();
        RunOptions {
            ricci_mode: None,
            seed: cfg.seed,
            h: cfg.h,
            tolerance: cfg.tolerance,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Conventions {
    pub curvature_sign: String,
    pub ricci_mode: RicciMode,
    pub seed: u64,
}

/// Constants derived (or declared) for the structure; rationals as `p/q` text.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct DerivedConstants {
    pub epsilon: Option<i8>,
    pub a: Option<String>,
    pub b: Option<String>,
    pub c: Option<String>,
    pub lambda: Option<String>,
    pub mu: Option<String>,
    pub f: Option<String>,
    pub classification: Option<String>,
    pub regular: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub name: String,
    pub conventions: Conventions,
    pub checks: Vec<CheckEntry>,
    pub constants: DerivedConstants,
}

impl VerificationReport {
    pub fn get(&self, id: &str) -> Option<&CheckEntry> {
        self.checks.iter().find(|e| e.id == id)
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|e| e.status != Status::Fail)
    }

    /// 0 when no check failed, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.passed() {
            0
        } else {
            1
        }
    }

    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("report serializes");
        text.push('\n');
        text
    }

    pub fn render_table(&self) -> String {
        let mut out = String::new();
        let c = &self.conventions;
        let _ = writeln!(out, "manifest: {}", self.name);
        let _ = writeln!(out, "curvature: {}", c.curvature_sign);
        let _ = writeln!(out, "ricci mode: {}; seed: {}", c.ricci_mode, c.seed);
        let _ = writeln!(out);
        let width = self.checks.iter().map(|e| e.id.len()).max().unwrap_or(2).max(2);
        let _ = writeln!(out, "{:<width$}  {:<12}  {:<8}  {:<10}  details", "id", "status", "symbolic", "numeric");
        for e in &self.checks {
            let numeric = e.numeric_max.map_or("-".to_string(), |v| format!("{v:.3e}"));
            let symbolic = match (e.status, e.symbolic_zero) {
                (Status::Inapplicable, _) => "-",
                (_, true) => "zero",
                (_, false) => "nonzero",
            };
            let _ = writeln!(
                out,
                "{:<width$}  {:<12}  {:<8}  {:<10}  {}",
                e.id,
                e.status.to_string(),
                symbolic,
                numeric,
                e.details
            );
        }
        let _ = writeln!(out);
        let k = &self.constants;
        let show = |v: &Option<String>| v.clone().unwrap_or_else(|| "-".into());
        let _ = writeln!(
            out,
            "constants: epsilon={} a={} b={} c={} lambda={} mu={} f={} classification={} regular={}",
            k.epsilon.map_or("-".into(), |e| e.to_string()),
            show(&k.a),
            show(&k.b),
            show(&k.c),
            show(&k.lambda),
            show(&k.mu),
            show(&k.f),
            show(&k.classification),
            k.regular.map_or("-".into(), |r| r.to_string()),
        );
        let count = |s: Status| self.checks.iter().filter(|e| e.status == s).count();
        let _ = writeln!(
            out,
            "summary: {} pass, {} fail, {} inapplicable",
            count(Status::Pass),
            count(Status::Fail),
            count(Status::Inapplicable)
        );
        out
    }
}

/// Runs `command` on a loaded manifest. Errors are input errors; failed
/// checks are reported in the result.
pub fn run(command: Command, loaded: &Loaded, opts: &RunOptions) -> Result<VerificationReport> {
    let mode = opts.ricci_mode.unwrap_or_else(|| loaded.ricci_mode());
    let geom = Geometry::new(loaded.structure.clone(), loaded.frame.clone(), opts.seed)?;
    geom.curvature(mode)?;
    let mut session = Session {
        loaded,
        geom,
        mode,
        opts,
        strict: command != Command::All,
        checks: Report::new(),
        constants: DerivedConstants {
            epsilon: Some(loaded.structure.epsilon()),
            ..DerivedConstants::default()
        },
        para_sasakian: None,
        fit: None,
        torse: None,
    };
    let declared = &loaded.constants;
    if let (Some(l), Some(m)) = (&declared.lambda, &declared.mu) {
        session.constants.lambda = Some(l.to_string());
        session.constants.mu = Some(m.to_string());
    }
    session.step(command)?;
    Ok(VerificationReport {
        name: loaded.manifest.name.clone(),
        conventions: Conventions {
            curvature_sign: CURVATURE_SIGN.to_string(),
            ricci_mode: mode,
            seed: opts.seed,
        },
        checks: session.checks.into_entries(),
        constants: session.constants,
    })
}

struct Session<'a> {
    loaded: &'a Loaded,
    geom: Geometry,
    mode: RicciMode,
    opts: &'a RunOptions,
    strict: bool,
    checks: Report,
    constants: DerivedConstants,
    para_sasakian: Option<bool>,
    fit: Option<std::result::Result<EinsteinFit, String>>,
    torse: Option<TorseFormingData>,
}

impl Session<'_> {
    fn step(&mut self, command: Command) -> Result<()> {
        match command {
            Command::Validate => self.validate(),
            Command::Curvature => self.curvature(),
            Command::Sasakian => self.sasakian(),
            Command::EinsteinFit => self.einstein(),
            Command::SolitonCheck => self.soliton_check(),
            Command::SolitonSolve => self.soliton_solve(),
            Command::Torse => self.torse_step(),
            Command::Collinear => self.collinear(),
            Command::Parallel => self.parallel(),
            Command::Oracle => self.oracle(),
            Command::All => Command::STEPS.iter().try_for_each(|&c| self.step(c)),
        }
    }

    /// A single command with missing inputs is a usage error; inside
    /// `report --all` the affected checks are marked inapplicable.
    fn missing(&mut self, ids: &[&str], reason: &str) -> Result<()> {
        if self.strict {
            return Err(GeometryError::Precondition(reason.to_string()));
        }
        for id in ids {
            self.checks.push(CheckEntry::inapplicable(*id, reason));
        }
        Ok(())
    }

    fn show(&self, e: &Expr) -> String {
        self.geom.probe.show(e)
    }

    /// The potential field, or ξ when none is given.
    fn potential_or_xi(&self) -> (TensorField, &'static str) {
        let xi = self.geom.structure.xi();
        match &self.loaded.potential {
            Some(p) => (p.field(xi), "V = potential"),
            None => (xi.clone(), "V = xi"),
        }
    }

    fn declared_lambda_mu(&self) -> Option<(Rational, Rational)> {
        let c = &self.loaded.constants;
        Some((c.lambda.clone()?, c.mu.clone()?))
    }

    fn para_sasakian(&mut self) -> Result<bool> {
        if let Some(flag) = self.para_sasakian {
            return Ok(flag);
        }
        let s = &self.geom.structure;
        let flag = match is_para_sasakian(s, &self.geom.connection, &self.geom.probe) {
            Ok(report) => report.passed(),
            Err(GeometryError::Precondition(_)) => false,
            Err(e) => return Err(e),
        };
        self.para_sasakian = Some(flag);
        Ok(flag)
    }

    fn fit(&mut self) -> Result<Option<EinsteinLikeConstants>> {
        if self.fit.is_none() {
            let fit = match einstein_like_fit(&self.geom, self.mode) {
                Ok(fit) => Ok(fit),
                Err(e @ (GeometryError::NotExact(_) | GeometryError::RankDeficient(_))) => Err(e.to_string()),
                Err(e) => return Err(e),
            };
            if let Ok(EinsteinFit::Fitted(k)) = &fit {
                self.constants.a = Some(k.a.to_string());
                self.constants.b = Some(k.b.to_string());
                self.constants.c = Some(k.c.to_string());
            }
            self.fit = Some(fit);
        }
        Ok(match &self.fit {
            Some(Ok(fit)) => fit.constants().cloned(),
            _ => None,
        })
    }

    fn torse(&mut self) -> Result<TorseFormingData> {
        if self.torse.is_none() {
            self.torse = Some(detect_torse_forming(&self.geom)?);
        }
        Ok(self.torse.clone().expect("computed above"))
    }

    /// Whether `(g, ξ, λ, μ)` solves the soliton equation exactly.
    fn xi_soliton_holds(&self, lambda: &Rational, mu: &Rational) -> Result<bool> {
        let data = SolitonData {
            potential: self.geom.structure.xi().clone(),
            lambda: lambda.clone(),
            mu: mu.clone(),
        };
        Ok(soliton_residual(&self.geom, self.mode, &data)?.is_zero())
    }

    fn validate(&mut self) -> Result<()> {
        let geom = &self.geom;
        let s = &geom.structure;
        let probe = &geom.probe;
        self.checks.extend(validate_axioms(s.phi(), s.xi(), s.eta(), probe));
        self.checks.extend(validate_metric_compat(s, probe));
        let g_xi = s.metric().inner(s.xi(), s.xi())?;
        self.checks.push(CheckEntry::info(
            "structure.epsilon",
            format!("epsilon = {}; g(xi,xi) = {}", s.epsilon(), probe.show(&g_xi)),
        ));
        self.signature()
    }

    fn signature(&mut self) -> Result<()> {
        let s = &self.geom.structure;
        let chart = s.chart();
        let metric = s.metric();
        let det = metric.det();
        let locus = match det.as_constant() {
            Some(c) => format!("det g = {c} (constant)"),
            None => format!("det g = {0}; degenerate where {0} = 0", chart.show(det)),
        };
        let at = format!(
            "({}) = ({})",
            chart.coords().join(", "),
            chart.base_point().iter().map(|r| r.to_string()).collect::<Vec<_>>().join(", ")
        );
        let entry = match metric.signature_at(&chart.base_point_f64()) {
            Ok(sig) => CheckEntry::info(
                "metric.signature",
                format!("index {} at base point {at}; {locus}", sig.index()),
            ),
            Err(GeometryError::DegenerateAt { det }) => CheckEntry::new(
                "metric.signature",
                Status::Fail,
                format!("degenerate at base point {at} (det = {:e}); {locus}", round_sig(det)),
            ),
            Err(e) => return Err(e),
        };
        self.checks.push(entry);

        let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
        let mut degenerate = 0;
        for p in chart.domain_samples(self.geom.seed, SIGNATURE_SAMPLES) {
            match metric.signature_at(&p) {
                Ok(sig) => *counts.entry(sig.index()).or_default() += 1,
                Err(GeometryError::DegenerateAt { .. }) => degenerate += 1,
                Err(e) => return Err(e),
            }
        }
        let summary: Vec<String> = counts.iter().map(|(k, v)| format!("index {k} at {v}")).collect();
        self.checks.push(CheckEntry::info(
            "metric.signature_samples",
            format!(
                "{} of {SIGNATURE_SAMPLES} seeded samples; {degenerate} degenerate",
                summary.join(", ")
            ),
        ));
        Ok(())
    }

    fn curvature(&mut self) -> Result<()> {
        let (v, v_name) = self.potential_or_xi();
        let geom = &self.geom;
        let s = &geom.structure;
        let probe = &geom.probe;
        let n = geom.dim();
        let conn = &geom.connection;

        let gamma = conn.symbols();
        let swapped = TensorField::from_fn(1, 2, n, |i| gamma.get(&[i[0], i[2], i[1]]).clone());
        self.checks.push(probe.identity("connection.torsion_free", gamma, &swapped));
        let nabla_g = conn.covariant_derivative(s.metric().tensor());
        self.checks
            .push(probe.identity("connection.metric_compatible", &nabla_g, &TensorField::zeros(0, 3, n)));

        let r = &geom.weighted.riemann;
        let swapped = TensorField::from_fn(1, 3, n, |i| -r.get(&[i[0], i[1], i[3], i[2]]));
        self.checks.push(probe.identity("curvature.antisymmetry", r, &swapped));
        // [b][c][d][a] = g(R(∂c,∂d)∂b, ∂a)
        let lowered = s.metric().lower(r, 0)?;
        let swapped = TensorField::from_fn(0, 4, n, |i| -lowered.get(&[i[3], i[1], i[2], i[0]]));
        self.checks
            .push(probe.identity("curvature.metric_antisymmetry", &lowered, &swapped));
        let bianchi = TensorField::from_fn(1, 3, n, |i| {
            let (a, b, c, d) = (i[0], i[1], i[2], i[3]);
            r.get(&[a, b, c, d]) + r.get(&[a, c, d, b]) + r.get(&[a, d, b, c])
        });
        self.checks
            .push(probe.identity("curvature.first_bianchi", &bianchi, &TensorField::zeros(1, 3, n)));

        let curv = geom.curvature(self.mode)?;
        self.checks
            .push(probe.identity("ricci.symmetric", &curv.ricci, &curv.ricci.transpose()?));
        let via_connection = lie_derivative_metric_connection(s.metric(), conn, &v)?;
        let coordinate = lie_derivative_metric_coordinates(s.metric(), &v);
        let entry = probe.identity("lie.dual_formula", &via_connection, &coordinate);
        let details = format!("{v_name}; {}", entry.details);
        self.checks.push(entry.with_details(details));
        self.checks.push(CheckEntry::info(
            "curvature.scalar",
            format!("r = {} ({})", probe.show(&curv.scalar), self.mode),
        ));
        self.frame_tables()
    }

    fn frame_tables(&mut self) -> Result<()> {
        let geom = &self.geom;
        let Some(frame) = &geom.frame else {
            self.checks
                .push(CheckEntry::inapplicable("frame.connection", "manifest declares no frame"));
            return Ok(());
        };
        let s = &geom.structure;
        let metric = s.metric();
        let names = s.chart().coords();
        let e = frame.vectors();
        let n = e.len();

        let mut parts = Vec::new();
        for i in 0..n {
            for j in 0..n {
                let v = geom.connection.nabla(&e[i], &e[j])?;
                let c = frame.coefficients(metric, &v)?;
                parts.push(format!("nabla(E{},E{}) = {}", i + 1, j + 1, describe_frame_vector(&c, names)));
            }
        }
        self.checks.push(CheckEntry::info("frame.connection", parts.join("; ")));

        let r = &geom.weighted.riemann;
        let mut parts = Vec::new();
        for i in 0..n {
            for j in (0..n).filter(|&j| j != i) {
                let v = apply_curvature(r, &e[i], &e[j], &e[j]);
                let c = frame.coefficients(metric, &v)?;
                parts.push(format!("R(E{0},E{1})E{1} = {2}", i + 1, j + 1, describe_frame_vector(&c, names)));
            }
        }
        self.checks.push(CheckEntry::info("frame.riemann", parts.join("; ")));

        for mode in [RicciMode::WeightedTrace, RicciMode::PaperFrameSum] {
            let curv = geom.curvature(mode)?;
            let m = frame.components(&curv.ricci)?;
            let diag: Vec<String> = (0..n).map(|i| self.show(&m[i][i])).collect();
            let mut details = format!("diag({}); r = {}", diag.join(", "), self.show(&curv.scalar));
            let off: Vec<String> = (0..n)
                .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
                .filter(|&(i, j)| !m[i][j].is_zero())
                .map(|(i, j)| format!("S(E{},E{}) = {}", i + 1, j + 1, self.show(&m[i][j])))
                .collect();
            if !off.is_empty() {
                details.push_str(&format!("; {}", off.join("; ")));
            }
            self.checks.push(CheckEntry::info(format!("frame.ricci.{mode}"), details));
        }

        // the weighted trace re-expressed through the frame with signs ε_i
        let weighted = frame.components(&geom.weighted.ricci)?;
        let mut from_frame = vec![vec![Expr::zero(); n]; n];
        for (i, row) in from_frame.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                for k in 0..n {
                    let v = apply_curvature(r, &e[k], &e[i], &e[j]);
                    let sign = Expr::int(frame.signs()[k] as i64);
                    *cell = &*cell + sign * metric.inner(&v, &e[k])?;
                }
            }
        }
        let lhs = TensorField::from_matrix(0, weighted)?;
        let rhs = TensorField::from_matrix(0, from_frame)?;
        self.checks
            .push(geom.probe.identity("frame.weighted_trace_consistency", &lhs, &rhs));
        Ok(())
    }

    fn sasakian(&mut self) -> Result<()> {
        let ids = ["para_sasakian.nabla_phi", "para_sasakian.nabla_xi", "para_sasakian.implied"];
        let geom = &self.geom;
        let s = &geom.structure;
        let probe = &geom.probe;
        let flag = match is_para_sasakian(s, &geom.connection, probe) {
            Ok(report) => {
                let flag = report.passed();
                self.checks.extend(report);
                flag
            }
            Err(GeometryError::Precondition(reason)) => {
                for id in ids {
                    self.checks.push(CheckEntry::inapplicable(id, reason.clone()));
                }
                false
            }
            Err(e) => return Err(e),
        };
        self.para_sasakian = Some(flag);

        self.checks
            .extend(sasakian_identity_suite(s, &geom.weighted, probe)?);

        let residual = semi_symmetry_residual(geom, self.mode)?;
        let mut entry = probe.identity("ricci.semi_symmetry", &residual, &TensorField::zeros(0, 3, geom.dim()));
        let class = if entry.symbolic_zero { "semi_symmetric" } else { "not_semi_symmetric" };
        entry.details = format!("classification={class}; {}", entry.details);
        entry.status = Status::Pass;
        self.checks.push(entry);
        Ok(())
    }

    fn einstein(&mut self) -> Result<()> {
        let ps = self.para_sasakian()?;
        self.fit()?;
        let fit = self.fit.clone().expect("computed by fit()");
        match fit {
            Ok(EinsteinFit::Fitted(k)) => {
                let kind = if k.b.is_zero() { "eta-Einstein" } else { "Einstein-like" };
                self.checks.push(CheckEntry::info(
                    "einstein.constants",
                    format!("a = {}, b = {}, c = {} ({kind})", k.a, k.b, k.c),
                ));
                self.checks
                    .extend(einstein_like_suite(&self.geom, self.mode, &k, ps)?);
            }
            Ok(EinsteinFit::NotEinsteinLike { candidate, witness }) => {
                self.checks.push(CheckEntry::new(
                    "einstein.fit",
                    Status::Fail,
                    format!(
                        "not Einstein-like; base-point candidate a = {}, b = {}, c = {}; {witness}",
                        candidate.a, candidate.b, candidate.c
                    ),
                ));
            }
            Err(reason) => {
                self.checks
                    .push(CheckEntry::new("einstein.fit", Status::Fail, reason));
            }
        }
        Ok(())
    }

    fn soliton_check(&mut self) -> Result<()> {
        let ids = ["soliton.residual"];
        let Some(potential) = &self.loaded.potential else {
            return self.missing(&ids, "soliton check needs a potential");
        };
        let Some((lambda, mu)) = self.declared_lambda_mu() else {
            return self.missing(&ids, "soliton check needs constants lambda and mu");
        };
        let ps = self.para_sasakian()?;
        let fit = self.fit()?;
        let geom = &self.geom;
        let n = geom.dim();
        let data = SolitonData {
            potential: potential.field(geom.structure.xi()),
            lambda: lambda.clone(),
            mu: mu.clone(),
        };
        let residual = soliton_residual(geom, self.mode, &data)?;
        let entry = geom
            .probe
            .identity("soliton.residual", &residual, &TensorField::zeros(0, 2, n));
        let details = format!("lambda = {lambda}, mu = {mu}; {}", entry.details);
        self.checks.push(entry.with_details(details));

        let is_xi = potential.collinear_factor().is_some_and(|k| (k - &Expr::one()).is_zero());
        if is_xi {
            self.checks
                .extend(xi_consequence_suite(geom, self.mode, &lambda, &mu, fit.as_ref(), ps)?);
        }
        Ok(())
    }

    fn soliton_solve(&mut self) -> Result<()> {
        let Some(potential) = &self.loaded.potential else {
            return self.missing(&["soliton.solve"], "soliton solve needs a potential");
        };
        let geom = &self.geom;
        let v = potential.field(geom.structure.xi());
        let solution = match solve_soliton_constants(geom, self.mode, &v) {
            Ok(sol) => sol,
            Err(e @ (GeometryError::NotExact(_) | GeometryError::RankDeficient(_))) => {
                self.checks
                    .push(CheckEntry::new("soliton.solve", Status::Fail, e.to_string()));
                return Ok(());
            }
            Err(e) => return Err(e),
        };
        let entry = match &solution {
            SolitonSolution::Exact { lambda, mu } => {
                CheckEntry::new("soliton.solve", Status::Pass, format!("exact: lambda = {lambda}, mu = {mu}"))
            }
            SolitonSolution::LeastSquares {
                lambda,
                mu,
                residual_norm,
                normal_matrix,
                sampled_max,
                ..
            } => {
                let diag: Vec<String> = solution.residual_diagonal().iter().map(|r| r.to_string()).collect();
                let normal: Vec<String> = normal_matrix
                    .iter()
                    .map(|row| format!("[{}]", row.iter().map(|r| r.to_string()).collect::<Vec<_>>().join(", ")))
                    .collect();
                CheckEntry {
                    id: "soliton.solve".into(),
                    status: Status::Fail,
                    symbolic_zero: false,
                    numeric_max: Some(round_sig(*residual_norm)),
                    details: format!(
                        "least squares: lambda = {lambda}, mu = {mu}; residual diag ({}); residual norm {residual_norm}; normal matrix [{}]; sampled max {:e}",
                        diag.join(", "),
                        normal.join(", "),
                        round_sig(*sampled_max)
                    ),
                }
            }
        };
        self.checks.push(entry);
        if self.constants.lambda.is_none() {
            self.constants.lambda = Some(solution.lambda().to_string());
            self.constants.mu = Some(solution.mu().to_string());
        }
        Ok(())
    }

    fn torse_step(&mut self) -> Result<()> {
        let tf = self.torse()?;
        let fit = self.fit()?;
        let lambda_mu = self.declared_lambda_mu();
        let hypothesis = match &lambda_mu {
            Some((l, m)) => self.xi_soliton_holds(l, m)?,
            None => false,
        };
        let geom = &self.geom;
        let s = &geom.structure;
        let n = geom.dim();

        self.constants.classification = Some(tf.classification.to_string());
        self.constants.regular = Some(tf.regular);
        let mut details = format!("classification={}", tf.classification);
        if tf.is_torse_forming() {
            let w: Vec<String> = tf.w.components().iter().map(|c| self.show(c)).collect();
            self.constants.f = Some(self.show(&tf.f));
            details.push_str(&format!(
                "; f = {}; w = ({}); regular={}; f^2 + xi(f) = {}",
                self.show(&tf.f),
                w.join(", "),
                tf.regular,
                self.show(&tf.regularity)
            ));
            if let Some(z) = &tf.zero_set {
                details.push_str(&format!("; {z}"));
            }
        }
        self.checks.push(CheckEntry::info("torse.classification", details));

        if !tf.is_torse_forming() {
            let why = "xi is not torse-forming";
            for id in [
                "torse.curvature_xi",
                "torse.f_matches",
                "torse.curvature_xi_soliton",
                "torse.ricci_xi_soliton",
                "torse.forced_constants",
            ] {
                self.checks.push(CheckEntry::inapplicable(id, why));
            }
            return Ok(());
        }
        let a_plus_lambda = match (&fit, &lambda_mu) {
            (Some(k), Some((l, _))) => Some(&k.a + l),
            _ => None,
        };
        self.checks
            .extend(curvature_from_torse_forming(geom, &tf, a_plus_lambda.as_ref())?);

        match (&fit, &lambda_mu) {
            (Some(k), Some((lambda, mu))) => {
                let tc = torse_forming_constants(&k.a, lambda, s.epsilon(), n);
                let hypothesis = hypothesis && k.b.is_zero();
                let gap = (&k.c - &tc.c) * (&k.c - &tc.c) + (mu - &tc.mu) * (mu - &tc.mu);
                let entry = geom.probe.implication(
                    "torse.forced_constants",
                    hypothesis,
                    &TensorField::scalar(Expr::constant(gap), n),
                    &TensorField::scalar(Expr::zero(), n),
                );
                let details = format!(
                    "forced c = {}, mu = {}, eps*(a+lambda)+c+mu = {}; fitted c = {}, declared mu = {}; {}",
                    tc.c, tc.mu, tc.check, k.c, mu, entry.details
                );
                self.checks.push(entry.with_details(details));
            }
            _ => self.checks.push(CheckEntry::inapplicable(
                "torse.forced_constants",
                "needs Einstein-like constants and declared lambda, mu",
            )),
        }
        Ok(())
    }

    fn collinear(&mut self) -> Result<()> {
        let ids = ["collinear.gate", "collinear.dk", "collinear.induced_ricci"];
        let k = match &self.loaded.potential {
            Some(Potential::Collinear(k)) => k.clone(),
            _ => return self.missing(&ids, "collinear analysis needs a potential of the form k*xi"),
        };
        let Some((lambda, mu)) = self.declared_lambda_mu() else {
            return self.missing(&ids, "collinear analysis needs constants lambda and mu");
        };
        if !self.para_sasakian()? {
            for id in ids {
                self.checks
                    .push(CheckEntry::inapplicable(id, "structure is not para-Sasakian"));
            }
            return Ok(());
        }
        self.checks
            .extend(collinear_potential_analysis(&self.geom, self.mode, &k, &lambda, &mu, true)?);
        Ok(())
    }

    fn parallel(&mut self) -> Result<()> {
        let alpha = self.loaded.alpha.clone();
        let lambda_mu = self.declared_lambda_mu();
        if alpha.is_none() && lambda_mu.is_none() {
            return self.missing(
                &["parallel.nabla_alpha"],
                "parallel check needs alpha or declared soliton constants",
            );
        }
        let tf = self.torse()?;
        let ps = self.para_sasakian()?;
        let fit = self.fit()?;
        let geom = &self.geom;
        if let Some(alpha) = alpha {
            let candidate = ParallelCandidate::new(alpha)?;
            self.checks
                .extend(parallel_tensor_check(geom, &candidate, &tf, ps, fit.as_ref())?);
        }
        if let Some((_, mu)) = lambda_mu {
            let candidate = ParallelCandidate::soliton_form(geom, self.mode, &mu)?;
            for mut entry in parallel_tensor_check(geom, &candidate, &tf, ps, fit.as_ref())?.into_entries() {
                entry.id = entry.id.replacen("parallel.", "parallel.soliton_form.", 1);
                self.checks.push(entry);
            }
        }
        Ok(())
    }

    fn oracle(&mut self) -> Result<()> {
        let cfg = OracleConfig {
            h: self.opts.h,
            scheme: Scheme::Central,
            seed: self.opts.seed,
            tolerance: self.opts.tolerance,
            ..OracleConfig::default()
        };
        cfg.validate()?;
        let (v, v_name) = self.potential_or_xi();
        let geom = &self.geom;
        let s = &geom.structure;
        let metric = s.metric();
        let points = oracle::sample_points(metric, s.chart(), &cfg);
        if points.len() < cfg.sample_count {
            self.checks.push(CheckEntry::new(
                "oracle.samples",
                Status::Fail,
                format!(
                    "only {} of {} sample points clear the degeneracy locus",
                    points.len(),
                    cfg.sample_count
                ),
            ));
            if points.is_empty() {
                return Ok(());
            }
        }
        let gamma = geom.connection.symbols();
        self.checks.push(oracle::compare(
            "oracle.christoffel",
            gamma,
            |p| oracle::fd_christoffel(metric, p, &cfg),
            &points,
            &cfg,
        )?);
        self.checks.push(oracle::compare(
            "oracle.riemann",
            &geom.weighted.riemann,
            |p| oracle::fd_riemann(metric, p, &cfg),
            &points,
            &cfg,
        )?);
        self.checks.push(oracle::compare(
            "oracle.ricci",
            &geom.weighted.ricci,
            |p| oracle::fd_ricci(metric, p, &cfg),
            &points,
            &cfg,
        )?);
        let lie = lie_derivative_metric_connection(metric, &geom.connection, &v)?;
        let entry = oracle::compare(
            "oracle.lie_derivative",
            &lie,
            |p| oracle::fd_lie_derivative(metric, &v, p, &cfg),
            &points,
            &cfg,
        )?;
        let details = format!("{v_name}; {}", entry.details);
        self.checks.push(entry.with_details(details));

        let coarse = oracle::christoffel_deviation(metric, gamma, &points, &cfg)?;
        let fine = oracle::christoffel_deviation(metric, gamma, &points, &cfg.with_h(cfg.h / 2.0))?;
        let shown = format!(
            "deviation(h) = {:e}, deviation(h/2) = {:e}",
            round_sig(coarse),
            round_sig(fine)
        );
        let entry = if coarse < 1e-10 {
            CheckEntry::inapplicable(
                "oracle.halving",
                format!("{shown}; differences are exact up to rounding"),
            )
        } else {
            let ratio = coarse / fine;
            let ok = (3.0..=5.0).contains(&ratio);
            CheckEntry {
                id: "oracle.halving".into(),
                status: if ok { Status::Pass } else { Status::Fail },
                symbolic_zero: false,
                numeric_max: Some(round_sig(ratio)),
                details: format!("{shown}; ratio {} (expected in [3, 5])", round_sig(ratio)),
            }
        };
        self.checks.push(entry);
        Ok(())
    }
}
