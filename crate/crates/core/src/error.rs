use symexpr::{ExprError, ParseError};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("invalid chart: {0}")]
    Chart(String),
    #[error("unknown coordinate '{0}'")]
    UnknownCoordinate(String),
    #[error("dimension mismatch in {what}: expected {expected}, got {got}")]
    Dimension {
        what: String,
        expected: usize,
        got: usize,
    },
    #[error("valence mismatch: {0}")]
    Valence(String),
    #[error("metric is not symmetric: g[{i}][{j}] differs from g[{j}][{i}]")]
    NotSymmetric { i: usize, j: usize },
    #[error("{0} is not a symmetric (0,2) tensor")]
    NotSymmetricTensor(String),
    #[error("metric is singular: its determinant is identically zero")]
    SingularMetric,
    #[error("metric is degenerate at the point: determinant {det:e}")]
    DegenerateAt { det: f64 },
    #[error("frame is not orthonormal: g(E{i}, E{j}) = {value}")]
    NotOrthonormal { i: usize, j: usize, value: String },
    #[error("frame vectors are linearly dependent at the base point")]
    FrameNotInvertible,
    #[error("g(xi, xi) = {0} is not the constant 1 or -1")]
    NotUnitXi(String),
    #[error("declared epsilon {declared} disagrees with g(xi, xi) = {detected}")]
    EpsilonMismatch { declared: i8, detected: i8 },
    #[error("{0} needs an orthonormal frame")]
    FrameRequired(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("design matrix is rank deficient: {0}")]
    RankDeficient(String),
    #[error("cannot evaluate exactly at the base point: {0}")]
    NotExact(String),
    #[error("finite-difference stencil is degenerate at {point:?}: {reason}")]
    Stencil { point: Vec<f64>, reason: String },
    #[error(transparent)]
    Expr(#[from] ExprError),
    #[error(transparent)]
    Parse(#[from] ParseError),
}

pub type Result<T, E = GeometryError> = std::result::Result<T, E>;
