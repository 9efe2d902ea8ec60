use nalgebra::{DMatrix, SymmetricEigen};
use symexpr::Expr;

use crate::error::{GeometryError, Result};
use crate::tensor::TensorField;

/// Below this absolute determinant a sampled point counts as degenerate.
pub const DEGENERACY_THRESHOLD: f64 = 1e-6;

/// Counts of positive and negative eigenvalues of the metric at a point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Signature {
    pub positive: usize,
    pub negative: usize,
}

impl Signature {
    /// Number of negative directions.
    pub fn index(&self) -> usize {
        self.negative
    }
}

/// A pseudo-Riemannian metric with its exact inverse and determinant.
#[derive(Debug, Clone)]
pub struct Metric {
    g: TensorField,
    inverse: TensorField,
    det: Expr,
}

impl Metric {
    pub fn new(g: TensorField) -> Result<Metric> {
        if g.valence() != (0, 2) {
            return Err(GeometryError::Valence("metric must be a (0,2) tensor".into()));
        }
        let n = g.dim();
        for i in 0..n {
            for j in i + 1..n {
                if !(g.at2(i, j) - g.at2(j, i)).is_zero() {
                    return Err(GeometryError::NotSymmetric { i, j });
                }
            }
        }
        let rows: Vec<Vec<Expr>> = (0..n).map(|i| (0..n).map(|j| g.at2(i, j).clone()).collect()).collect();
        let (det, inv) = invert(rows).ok_or(GeometryError::SingularMetric)?;
        let inverse = TensorField::from_matrix(2, inv)?;
        Ok(Metric { g, inverse, det })
    }

    pub fn from_rows(rows: Vec<Vec<Expr>>) -> Result<Metric> {
        Metric::new(TensorField::from_matrix(0, rows)?)
    }

    pub fn dim(&self) -> usize {
        self.g.dim()
    }

    pub fn tensor(&self) -> &TensorField {
        &self.g
    }

    pub fn inverse(&self) -> &TensorField {
        &self.inverse
    }

    pub fn det(&self) -> &Expr {
        &self.det
    }

    pub fn component(&self, i: usize, j: usize) -> &Expr {
        self.g.at2(i, j)
    }

    pub fn inverse_component(&self, i: usize, j: usize) -> &Expr {
        self.inverse.at2(i, j)
    }

    /// `g(X, Y)` for vector fields.
    pub fn inner(&self, x: &TensorField, y: &TensorField) -> Result<Expr> {
        self.g.bilinear(x, y)
    }

    pub fn signature_at(&self, point: &[f64]) -> Result<Signature> {
        let values = self.g.eval(point)?;
        let n = self.dim();
        let m = DMatrix::from_row_slice(n, n, &values);
        let det = m.determinant();
        if !det.is_finite() || det.abs() < DEGENERACY_THRESHOLD {
            return Err(GeometryError::DegenerateAt { det });
        }
        let eigen = SymmetricEigen::new(m);
        let negative = eigen.eigenvalues.iter().filter(|v| **v < 0.0).count();
        Ok(Signature {
            positive: n - negative,
            negative,
        })
    }

    /// Lowers upper slot `slot`; the new covariant index goes last.
    pub fn lower(&self, t: &TensorField, slot: usize) -> Result<TensorField> {
        let (p, q) = t.valence();
        if slot >= p {
            return Err(GeometryError::Valence(format!("no upper slot {slot} in a ({p},{q}) tensor")));
        }
        let n = self.dim();
        Ok(TensorField::from_fn(p - 1, q + 1, n, |idx| {
            let l = idx[p - 1 + q];
            let mut src: Vec<usize> = idx[..p - 1 + q].to_vec();
            src.insert(slot, 0);
            (0..n)
                .map(|m| {
                    src[slot] = m;
                    self.g.at2(l, m) * t.get(&src)
                })
                .sum()
        }))
    }

    /// Raises lower slot `slot`; the new contravariant index goes last among
    /// the upper slots.
    pub fn raise(&self, t: &TensorField, slot: usize) -> Result<TensorField> {
        let (p, q) = t.valence();
        if slot >= q {
            return Err(GeometryError::Valence(format!("no lower slot {slot} in a ({p},{q}) tensor")));
        }
        let n = self.dim();
        Ok(TensorField::from_fn(p + 1, q - 1, n, |idx| {
            let l = idx[p];
            let mut src: Vec<usize> = idx[..p].to_vec();
            src.extend_from_slice(&idx[p + 1..]);
            let at = p + slot;
            src.insert(at, 0);
            (0..n)
                .map(|m| {
                    src[at] = m;
                    self.inverse.at2(l, m) * t.get(&src)
                })
                .sum()
        }))
    }
}

/// Gauss-Jordan elimination over expressions. Returns the determinant and the
/// inverse, or `None` when the matrix is singular.
pub(crate) fn invert(mut a: Vec<Vec<Expr>>) -> Option<(Expr, Vec<Vec<Expr>>)> {
    let n = a.len();
    let mut inv: Vec<Vec<Expr>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { Expr::one() } else { Expr::zero() }).collect())
        .collect();
    let mut det = Expr::one();
    for col in 0..n {
        // prefer constant pivots, they keep the entries small
        let pivot = (col..n)
            .filter(|&r| !a[r][col].is_zero())
            .min_by_key(|&r| (!a[r][col].is_constant(), r))?;
        if pivot != col {
            a.swap(pivot, col);
            inv.swap(pivot, col);
            det = -det;
        }
        let p = a[col][col].clone();
        det = &det * &p;
        let p_inv = p.recip().ok()?;
        for j in 0..n {
            a[col][j] = &a[col][j] * &p_inv;
            inv[col][j] = &inv[col][j] * &p_inv;
        }
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let factor = a[r][col].clone();
            for j in 0..n {
                let da = &factor * &a[col][j];
                a[r][j] = &a[r][j] - &da;
                let di = &factor * &inv[col][j];
                inv[r][j] = &inv[r][j] - &di;
            }
        }
    }
    Some((det, inv))
}
