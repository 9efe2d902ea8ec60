//! Exact symbolic scalars for coordinate-chart tensor calculus.
//!
//! An [`Expr`] is a quotient of sums of terms
//! `rational * x_1^k_1 ... x_n^k_n * exp(affine form)`, kept in a canonical
//! form in which zero-testing is exact. Coordinates are referred to by index;
//! names only matter for parsing and printing.

mod expr;
mod parse;
pub mod poly;

use thiserror::Error;

pub use expr::{Expr, ExprDisplay, DEFAULT_DEGENERACY_THRESHOLD};
pub use parse::{parse, parse_rational};

/// Arbitrary-precision rational used for every exact coefficient.
pub type Rational = num_rational::BigRational;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ExprError {
    #[error("division by canonical zero")]
    DivisionByZero,
    #[error("degenerate point: denominator value {value:e} is below {threshold:e}")]
    Degenerate { value: f64, threshold: f64 },
    #[error("point has {got} coordinates, expression needs {expected}")]
    PointDimension { expected: usize, got: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error("unknown identifier '{0}'")]
    UnknownIdentifier(String),
    #[error("exp argument must be affine in the coordinates")]
    NonLinearExp,
    #[error("exponent must be an integer")]
    NonIntegerExponent,
    #[error("division by zero")]
    DivisionByZero,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{kind} at offset {position}")]
pub struct ParseError {
    pub kind: ParseErrorKind,
    pub position: usize,
}

impl ParseError {
    pub fn new(kind: ParseErrorKind, position: usize) -> Self {
        ParseError { kind, position }
    }
}
