use num_traits::{One, Signed};
use symexpr::Expr;

use crate::error::{GeometryError, Result};
use crate::metric::Metric;
use crate::tensor::TensorField;

/// An orthonormal frame `E_1..E_n` with `g(E_i, E_j) = signs[i] δ_ij`.
#[derive(Debug, Clone)]
pub struct Frame {
    vectors: Vec<TensorField>,
    signs: Vec<i8>,
}

impl Frame {
    pub fn orthonormal(vectors: Vec<TensorField>, metric: &Metric) -> Result<Frame> {
        let n = metric.dim();
        if vectors.len() != n {
            return Err(GeometryError::Dimension {
                what: "frame".into(),
                expected: n,
                got: vectors.len(),
            });
        }
        for v in &vectors {
            if v.valence() != (1, 0) || v.dim() != n {
                return Err(GeometryError::Valence("frame members must be vector fields".into()));
            }
        }
        let mut signs = Vec::with_capacity(n);
        for i in 0..n {
            for j in i..n {
                let value = metric.inner(&vectors[i], &vectors[j])?;
                let ok = match (i == j, value.as_constant()) {
                    (false, _) => value.is_zero(),
                    (true, Some(c)) if c.abs().is_one() => {
                        signs.push(if c.is_positive() { 1 } else { -1 });
                        true
                    }
                    (true, _) => false,
                };
                if !ok {
                    return Err(GeometryError::NotOrthonormal {
                        i: i + 1,
                        j: j + 1,
                        value: value.display(&generic_names(n)).to_string(),
                    });
                }
            }
        }
        Ok(Frame { vectors, signs })
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn vectors(&self) -> &[TensorField] {
        &self.vectors
    }

    pub fn vector(&self, i: usize) -> &TensorField {
        &self.vectors[i]
    }

    pub fn signs(&self) -> &[i8] {
        &self.signs
    }

    /// Coefficients `c_k` with `X = Σ c_k E_k`.
    pub fn coefficients(&self, metric: &Metric, x: &TensorField) -> Result<Vec<Expr>> {
        self.vectors
            .iter()
            .zip(&self.signs)
            .map(|(e, &s)| Ok(metric.inner(x, e)? * Expr::int(s as i64)))
            .collect()
    }

    /// Matrix of `T(E_i, E_j)` for a (0,2) tensor.
    pub fn components(&self, t: &TensorField) -> Result<Vec<Vec<Expr>>> {
        self.vectors
            .iter()
            .map(|ei| self.vectors.iter().map(|ej| t.bilinear(ei, ej)).collect())
            .collect()
    }
}

fn generic_names(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("x{i}")).collect()
}

/// Renders frame coefficients as `E1 - 2*E3`, or `0`.
pub fn describe_frame_vector<S: AsRef<str>>(coeffs: &[Expr], names: &[S]) -> String {
    let mut out = String::new();
    for (k, c) in coeffs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let (negative, body) = match c.as_constant() {
            Some(r) if r.abs().is_one() => (r.is_negative(), String::new()),
            Some(r) => (r.is_negative(), format!("{}*", r.abs())),
            None => (false, format!("({})*", c.display(names))),
        };
        if out.is_empty() {
            if negative {
                out.push('-');
            }
        } else {
            out.push_str(if negative { " - " } else { " + " });
        }
        out.push_str(&format!("{body}E{}", k + 1));
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}
