use serde::{Deserialize, Serialize};
use std::path::Path;
use symexpr::{parse_rational, Expr, Rational};
use thiserror::Error;

use crate::chart::Chart;
use crate::error::GeometryError;
use crate::frame::Frame;
use crate::levi_civita::RicciMode;
use crate::metric::Metric;
use crate::paracontact::ParacontactStructure;
use crate::tensor::TensorField;

#[derive(Debug, Error)]
pub enum ManifestError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed manifest at line {line}, column {column}: {message}")]
    Json {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{field}: {message}")]
    Field { field: String, message: String },
    #[error("{field}: expected {expected} entries, got {got}")]
    Dimension {
        field: String,
        expected: usize,
        got: usize,
    },
    #[error("{field}: '{value}' is not an exact rational")]
    InvalidRational { field: String, value: String },
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

/// A rational written as a JSON integer or a `"p/q"` string.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RationalText {
    Int(i64),
    Text(String),
}

impl RationalText {
    fn parse(&self, field: &str) -> Result<Rational, ManifestError> {
        match self {
            RationalText::Int(n) => Ok(Rational::from_integer((*n).into())),
            RationalText::Text(s) => parse_rational(s).map_err(|_| ManifestError::InvalidRational {
                field: field.to_string(),
                value: s.clone(),
            }),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PotentialSpec {
    /// `"xi"` or `"<k>*xi"`.
    Named(String),
    Components(Vec<String>),
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConstantsSpec {
    #[serde(default)]
    pub lambda: Option<RationalText>,
    #[serde(default)]
    pub mu: Option<RationalText>,
    #[serde(default)]
    pub a: Option<RationalText>,
    #[serde(default)]
    pub b: Option<RationalText>,
    #[serde(default)]
    pub c: Option<RationalText>,
}

/// On-disk description of a structure on one chart.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    pub name: String,
    pub coordinates: Vec<String>,
    pub base_point: Vec<RationalText>,
    pub domain_box: Vec<[f64; 2]>,
    #[serde(default)]
    pub epsilon: Option<i8>,
    pub metric: Vec<Vec<String>>,
    pub phi: Vec<Vec<String>>,
    pub xi: Vec<String>,
    pub eta: Vec<String>,
    #[serde(default)]
    pub frame: Option<Vec<Vec<String>>>,
    #[serde(default)]
    pub potential: Option<PotentialSpec>,
    #[serde(default)]
    pub constants: Option<ConstantsSpec>,
    #[serde(default)]
    pub alpha: Option<Vec<Vec<String>>>,
    #[serde(default)]
    pub ricci_mode: Option<RicciMode>,
}

impl Manifest {
    pub fn from_json(text: &str) -> Result<Manifest, ManifestError> {
        serde_json::from_str(text).map_err(|e| {
            let mut message = e.to_string();
            if let Some(at) = message.rfind(" at line ") {
                message.truncate(at);
            }
            ManifestError::Json {
                line: e.line(),
                column: e.column(),
                message,
            }
        })
    }

    pub fn read(path: &Path) -> Result<Manifest, ManifestError> {
        let text = std::fs::read_to_string(path).map_err(|source| ManifestError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Manifest::from_json(&text)
    }
}

/// Potential field of a soliton candidate.
#[derive(Debug, Clone)]
pub enum Potential {
    /// `V = kξ`.
    Collinear(Expr),
    Field(TensorField),
}

impl Potential {
    pub fn parse(spec: &PotentialSpec, chart: &Chart) -> Result<Potential, ManifestError> {
        match spec {
            PotentialSpec::Named(text) => {
                let text = text.trim();
                if text == "xi" {
                    return Ok(Potential::Collinear(Expr::one()));
                }
                let k = text
                    .strip_suffix("xi")
                    .and_then(|rest| rest.trim_end().strip_suffix('*'))
                    .ok_or_else(|| ManifestError::Field {
                        field: "potential".into(),
                        message: format!("'{text}' is neither \"xi\", \"k*xi\" nor a component list"),
                    })?;
                Ok(Potential::Collinear(parse_field(chart, k, "potential")?))
            }
            PotentialSpec::Components(comps) => {
                check_len("potential", comps.len(), chart.dim())?;
                let comps = comps
                    .iter()
                    .enumerate()
                    .map(|(i, s)| parse_field(chart, s, &format!("potential[{i}]")))
                    .collect::<Result<_, _>>()?;
                Ok(Potential::Field(TensorField::vector(comps)))
            }
        }
    }

    pub fn field(&self, xi: &TensorField) -> TensorField {
        match self {
            Potential::Collinear(k) => xi.scale(k),
            Potential::Field(v) => v.clone(),
        }
    }

    pub fn collinear_factor(&self) -> Option<&Expr> {
        match self {
            Potential::Collinear(k) => Some(k),
            Potential::Field(_) => None,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Constants {
    pub lambda: Option<Rational>,
    pub mu: Option<Rational>,
    pub a: Option<Rational>,
    pub b: Option<Rational>,
    pub c: Option<Rational>,
}

/// A validated manifest with every expression parsed.
#[derive(Debug, Clone)]
pub struct Loaded {
    pub manifest: Manifest,
    pub structure: ParacontactStructure,
    pub frame: Option<Frame>,
    pub potential: Option<Potential>,
    pub constants: Constants,
    pub alpha: Option<TensorField>,
}

impl Loaded {
    pub fn from_manifest(manifest: Manifest, base_point: Option<Vec<Rational>>) -> Result<Loaded, ManifestError> {
        let base_point = match base_point {
            Some(p) => p,
            None => manifest
                .base_point
                .iter()
                .enumerate()
                .map(|(i, r)| r.parse(&format!("base_point[{i}]")))
                .collect::<Result<_, _>>()?,
        };
        let domain_box = manifest.domain_box.iter().map(|b| (b[0], b[1])).collect();
        let chart = Chart::new(manifest.coordinates.clone(), base_point, domain_box)?;

        let metric = Metric::from_rows(parse_matrix(&chart, &manifest.metric, "metric")?)?;
        let phi = TensorField::from_matrix(1, parse_matrix(&chart, &manifest.phi, "phi")?)?;
        let xi = TensorField::vector(parse_vector(&chart, &manifest.xi, "xi")?);
        let eta = TensorField::covector(parse_vector(&chart, &manifest.eta, "eta")?);
        if let Some(eps) = manifest.epsilon {
            if eps != 1 && eps != -1 {
                return Err(ManifestError::Field {
                    field: "epsilon".into(),
                    message: format!("must be 1 or -1, got {eps}"),
                });
            }
        }
        let frame = match &manifest.frame {
            Some(rows) => {
                let vectors = parse_matrix(&chart, rows, "frame")?
                    .into_iter()
                    .map(TensorField::vector)
                    .collect();
                Some(Frame::orthonormal(vectors, &metric)?)
            }
            None => None,
        };
        let potential = match &manifest.potential {
            Some(spec) => Some(Potential::parse(spec, &chart)?),
            None => None,
        };
        let alpha = match &manifest.alpha {
            Some(rows) => Some(TensorField::from_matrix(0, parse_matrix(&chart, rows, "alpha")?)?),
            None => None,
        };
        let constants = match &manifest.constants {
            Some(spec) => {
                let get = |v: &Option<RationalText>, name: &str| -> Result<Option<Rational>, ManifestError> {
                    v.as_ref().map(|r| r.parse(&format!("constants.{name}"))).transpose()
                };
                Constants {
                    lambda: get(&spec.lambda, "lambda")?,
                    mu: get(&spec.mu, "mu")?,
                    a: get(&spec.a, "a")?,
                    b: get(&spec.b, "b")?,
                    c: get(&spec.c, "c")?,
                }
            }
            None => Constants::default(),
        };
        let structure = ParacontactStructure::new(chart, metric, phi, xi, eta, manifest.epsilon)?;
        Ok(Loaded {
            manifest,
            structure,
            frame,
            potential,
            constants,
            alpha,
        })
    }

    pub fn ricci_mode(&self) -> RicciMode {
        self.manifest.ricci_mode.unwrap_or_default()
    }
}

pub fn load_manifest(path: &Path) -> Result<Loaded, ManifestError> {
    Loaded::from_manifest(Manifest::read(path)?, None)
}

fn check_len(field: &str, got: usize, expected: usize) -> Result<(), ManifestError> {
    if got != expected {
        return Err(ManifestError::Dimension {
            field: field.to_string(),
            expected,
            got,
        });
    }
    Ok(())
}

fn parse_field(chart: &Chart, source: &str, field: &str) -> Result<Expr, ManifestError> {
    chart.parse(source).map_err(|e| ManifestError::Field {
        field: field.to_string(),
        message: format!("{e} in \"{source}\""),
    })
}

fn parse_vector(chart: &Chart, items: &[String], field: &str) -> Result<Vec<Expr>, ManifestError> {
    check_len(field, items.len(), chart.dim())?;
    items
        .iter()
        .enumerate()
        .map(|(i, s)| parse_field(chart, s, &format!("{field}[{i}]")))
        .collect()
}

fn parse_matrix(chart: &Chart, rows: &[Vec<String>], field: &str) -> Result<Vec<Vec<Expr>>, ManifestError> {
    check_len(field, rows.len(), chart.dim())?;
    rows.iter()
        .enumerate()
        .map(|(i, row)| parse_vector(chart, row, &format!("{field}[{i}]")))
        .collect()
}
