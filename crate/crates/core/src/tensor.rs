use std::fmt;
use symexpr::{Expr, ExprError, Rational};

use crate::error::{GeometryError, Result};

/// Row-major iteration over all multi-indices of the given rank.
pub fn multi_indices(rank: usize, dim: usize) -> impl Iterator<Item = Vec<usize>> {
    let total = dim.pow(rank as u32);
    (0..total).map(move |mut flat| {
        let mut idx = vec![0; rank];
        for slot in (0..rank).rev() {
            idx[slot] = flat % dim;
            flat /= dim;
        }
        idx
    })
}

/// A `(p, q)` tensor field in coordinate components. Index order is all
/// contravariant slots first, then all covariant slots.
#[derive(Clone, PartialEq)]
pub struct TensorField {
    up: usize,
    down: usize,
    dim: usize,
    comps: Vec<Expr>,
}

impl TensorField {
    pub fn zeros(up: usize, down: usize, dim: usize) -> TensorField {
        TensorField {
            up,
            down,
            dim,
            comps: vec![Expr::zero(); dim.pow((up + down) as u32)],
        }
    }

    pub fn from_fn(
        up: usize,
        down: usize,
        dim: usize,
        mut f: impl FnMut(&[usize]) -> Expr,
    ) -> TensorField {
        let comps = multi_indices(up + down, dim).map(|idx| f(&idx)).collect();
        TensorField {
            up,
            down,
            dim,
            comps,
        }
    }

    pub fn from_components(up: usize, down: usize, dim: usize, comps: Vec<Expr>) -> Result<Self> {
        let expected = dim.pow((up + down) as u32);
        if comps.len() != expected {
            return Err(GeometryError::Dimension {
                what: format!("({up},{down}) tensor components"),
                expected,
                got: comps.len(),
            });
        }
        Ok(TensorField {
            up,
            down,
            dim,
            comps,
        })
    }

    pub fn scalar(value: Expr, dim: usize) -> TensorField {
        TensorField {
            up: 0,
            down: 0,
            dim,
            comps: vec![value],
        }
    }

    pub fn vector(comps: Vec<Expr>) -> TensorField {
        TensorField {
            up: 1,
            down: 0,
            dim: comps.len(),
            comps,
        }
    }

    pub fn covector(comps: Vec<Expr>) -> TensorField {
        TensorField {
            up: 0,
            down: 1,
            dim: comps.len(),
            comps,
        }
    }

    /// A (1,1) or (0,2) tensor from a square matrix of rows `m[i][j]`.
    pub fn from_matrix(up: usize, rows: Vec<Vec<Expr>>) -> Result<TensorField> {
        let n = rows.len();
        if up > 2 {
            return Err(GeometryError::Valence(format!("matrix tensor with {up} upper slots")));
        }
        let mut comps = Vec::with_capacity(n * n);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != n {
                return Err(GeometryError::Dimension {
                    what: format!("row {i}"),
                    expected: n,
                    got: row.len(),
                });
            }
            comps.extend(row);
        }
        Ok(TensorField {
            up,
            down: 2 - up,
            dim: n,
            comps,
        })
    }

    /// The identity endomorphism as a (1,1) tensor.
    pub fn identity(dim: usize) -> TensorField {
        TensorField::from_fn(1, 1, dim, |i| if i[0] == i[1] { Expr::one() } else { Expr::zero() })
    }

    pub fn valence(&self) -> (usize, usize) {
        (self.up, self.down)
    }

    pub fn rank(&self) -> usize {
        self.up + self.down
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn components(&self) -> &[Expr] {
        &self.comps
    }

    fn flat(&self, idx: &[usize]) -> usize {
        assert_eq!(idx.len(), self.rank(), "index length does not match tensor rank");
        idx.iter().fold(0, |acc, &i| {
            assert!(i < self.dim, "index {i} out of range for dimension {}", self.dim);
            acc * self.dim + i
        })
    }

    pub fn get(&self, idx: &[usize]) -> &Expr {
        &self.comps[self.flat(idx)]
    }

    pub fn set(&mut self, idx: &[usize], value: Expr) {
        let k = self.flat(idx);
        self.comps[k] = value;
    }

    /// Component of a rank-1 tensor.
    pub fn at(&self, i: usize) -> &Expr {
        self.get(&[i])
    }

    /// Component of a rank-2 tensor.
    pub fn at2(&self, i: usize, j: usize) -> &Expr {
        self.get(&[i, j])
    }

    pub fn map(&self, f: impl FnMut(&Expr) -> Expr) -> TensorField {
        TensorField {
            comps: self.comps.iter().map(f).collect(),
            ..*self
        }
    }

    fn check_same_shape(&self, other: &TensorField) -> Result<()> {
        if self.valence() != other.valence() || self.dim != other.dim {
            return Err(GeometryError::Valence(format!(
                "({},{}) in dimension {} vs ({},{}) in dimension {}",
                self.up, self.down, self.dim, other.up, other.down, other.dim
            )));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &TensorField) -> Result<TensorField> {
        self.check_same_shape(other)?;
        Ok(self.zip(other, |a, b| a + b))
    }

    pub fn try_sub(&self, other: &TensorField) -> Result<TensorField> {
        self.check_same_shape(other)?;
        Ok(self.zip(other, |a, b| a - b))
    }

    fn zip(&self, other: &TensorField, f: impl Fn(&Expr, &Expr) -> Expr) -> TensorField {
        TensorField {
            comps: self.comps.iter().zip(&other.comps).map(|(a, b)| f(a, b)).collect(),
            ..*self
        }
    }

    pub fn scale(&self, factor: &Expr) -> TensorField {
        self.map(|c| c * factor)
    }

    pub fn scale_rational(&self, factor: &Rational) -> TensorField {
        self.map(|c| c.scale(factor))
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(Expr::is_zero)
    }

    /// First nonzero component, as a multi-index and value.
    pub fn first_nonzero(&self) -> Option<(Vec<usize>, &Expr)> {
        multi_indices(self.rank(), self.dim)
            .zip(&self.comps)
            .find(|(_, c)| !c.is_zero())
    }

    /// Outer product; the result's upper slots are `self`'s then `other`'s,
    /// followed by `self`'s lower slots then `other`'s.
    pub fn tensor(&self, other: &TensorField) -> Result<TensorField> {
        if self.dim != other.dim {
            return Err(GeometryError::Dimension {
                what: "tensor product".into(),
                expected: self.dim,
                got: other.dim,
            });
        }
        let (p1, q1, p2) = (self.up, self.down, other.up);
        Ok(TensorField::from_fn(p1 + p2, q1 + other.down, self.dim, |idx| {
            let mut a = idx[..p1].to_vec();
            a.extend_from_slice(&idx[p1 + p2..p1 + p2 + q1]);
            let mut b = idx[p1..p1 + p2].to_vec();
            b.extend_from_slice(&idx[p1 + p2 + q1..]);
            self.get(&a) * other.get(&b)
        }))
    }

    /// Contracts upper slot `up_slot` with lower slot `down_slot`.
    pub fn contract(&self, up_slot: usize, down_slot: usize) -> Result<TensorField> {
        if up_slot >= self.up || down_slot >= self.down {
            return Err(GeometryError::Valence(format!(
                "cannot contract slots ({up_slot},{down_slot}) of a ({},{}) tensor",
                self.up, self.down
            )));
        }
        let (up, down) = (self.up - 1, self.down - 1);
        Ok(TensorField::from_fn(up, down, self.dim, |idx| {
            let mut full = Vec::with_capacity(self.rank());
            full.extend_from_slice(&idx[..up_slot]);
            full.push(0);
            full.extend_from_slice(&idx[up_slot..up]);
            let lower_at = self.up + down_slot;
            let mut tail = idx[up..].to_vec();
            tail.insert(down_slot, 0);
            full.extend(tail);
            (0..self.dim)
                .map(|k| {
                    full[up_slot] = k;
                    full[lower_at] = k;
                    self.get(&full).clone()
                })
                .sum()
        }))
    }

    /// Trace of a (1,1) tensor.
    pub fn trace(&self) -> Result<Expr> {
        if self.valence() != (1, 1) {
            return Err(GeometryError::Valence("trace needs a (1,1) tensor".into()));
        }
        Ok((0..self.dim).map(|i| self.at2(i, i).clone()).sum())
    }

    /// Swaps the two slots of a rank-2 tensor.
    pub fn transpose(&self) -> Result<TensorField> {
        if self.rank() != 2 {
            return Err(GeometryError::Valence("transpose needs rank 2".into()));
        }
        let (up, down) = match self.valence() {
            (1, 1) => return Err(GeometryError::Valence("transpose of a mixed tensor".into())),
            v => v,
        };
        Ok(TensorField::from_fn(up, down, self.dim, |i| self.at2(i[1], i[0]).clone()))
    }

    pub fn is_symmetric(&self) -> bool {
        self.rank() == 2
            && self.valence() != (1, 1)
            && (0..self.dim).all(|i| (i + 1..self.dim).all(|j| (self.at2(i, j) - self.at2(j, i)).is_zero()))
    }

    pub fn derivative(&self, var: usize) -> TensorField {
        self.map(|c| c.derivative(var))
    }

    pub fn eval(&self, point: &[f64]) -> Result<Vec<f64>, ExprError> {
        self.comps.iter().map(|c| c.eval(point)).collect()
    }

    pub fn eval_exact(&self, point: &[Rational]) -> Option<Vec<Rational>> {
        self.comps.iter().map(|c| c.eval_exact(point)).collect()
    }

    /// Applies a (1,1) tensor to a vector field.
    pub fn apply(&self, v: &TensorField) -> Result<TensorField> {
        if self.valence() != (1, 1) || v.valence() != (1, 0) || v.dim != self.dim {
            return Err(GeometryError::Valence("apply needs a (1,1) tensor and a vector".into()));
        }
        Ok(TensorField::vector(
            (0..self.dim)
                .map(|a| (0..self.dim).map(|b| self.at2(a, b) * v.at(b)).sum())
                .collect(),
        ))
    }

    /// Composition `self ∘ other` of (1,1) tensors.
    pub fn compose(&self, other: &TensorField) -> Result<TensorField> {
        if self.valence() != (1, 1) || other.valence() != (1, 1) || self.dim != other.dim {
            return Err(GeometryError::Valence("compose needs two (1,1) tensors".into()));
        }
        Ok(TensorField::from_fn(1, 1, self.dim, |i| {
            (0..self.dim).map(|k| self.at2(i[0], k) * other.at2(k, i[1])).sum()
        }))
    }

    /// Pairs a covector with a vector, or feeds two vectors to a (0,2) tensor.
    pub fn pair(&self, x: &TensorField) -> Result<Expr> {
        if self.valence() != (0, 1) || x.valence() != (1, 0) || x.dim != self.dim {
            return Err(GeometryError::Valence("pair needs a covector and a vector".into()));
        }
        Ok((0..self.dim).map(|a| self.at(a) * x.at(a)).sum())
    }

    pub fn bilinear(&self, x: &TensorField, y: &TensorField) -> Result<Expr> {
        if self.valence() != (0, 2) || x.valence() != (1, 0) || y.valence() != (1, 0) {
            return Err(GeometryError::Valence("bilinear needs a (0,2) tensor and two vectors".into()));
        }
        let n = self.dim;
        Ok((0..n)
            .flat_map(|a| (0..n).map(move |b| (a, b)))
            .map(|(a, b)| self.at2(a, b) * x.at(a) * y.at(b))
            .sum())
    }

    /// Directional derivative `X(f)` of a scalar expression.
    pub fn directional(&self, f: &Expr) -> Result<Expr> {
        if self.valence() != (1, 0) {
            return Err(GeometryError::Valence("directional derivative needs a vector".into()));
        }
        Ok((0..self.dim).map(|k| self.at(k) * f.derivative(k)).sum())
    }

    /// `df` as a covector.
    pub fn differential(f: &Expr, dim: usize) -> TensorField {
        TensorField::covector((0..dim).map(|k| f.derivative(k)).collect())
    }

    /// Renders the nonzero components with coordinate names.
    pub fn describe<S: AsRef<str>>(&self, names: &[S]) -> String {
        let parts: Vec<String> = multi_indices(self.rank(), self.dim)
            .zip(&self.comps)
            .filter(|(_, c)| !c.is_zero())
            .map(|(idx, c)| format!("{idx:?}: {}", c.display(names)))
            .collect();
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(", ")
        }
    }
}

impl fmt::Debug for TensorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (0..self.dim).map(|i| format!("x{i}")).collect();
        write!(f, "TensorField({},{}; {})", self.up, self.down, self.describe(&names))
    }
}

/// Lie bracket `[X, Y]^k = X^j ∂_j Y^k - Y^j ∂_j X^k`.
pub fn lie_bracket(x: &TensorField, y: &TensorField) -> Result<TensorField> {
    if x.valence() != (1, 0) || y.valence() != (1, 0) || x.dim() != y.dim() {
        return Err(GeometryError::Valence("lie bracket needs two vector fields".into()));
    }
    let n = x.dim();
    Ok(TensorField::vector(
        (0..n)
            .map(|k| x.directional(y.at(k)).unwrap() - y.directional(x.at(k)).unwrap())
            .collect(),
    ))
}

/// Coordinate basis vector `∂_i`.
pub fn basis_vector(i: usize, dim: usize) -> TensorField {
    TensorField::vector((0..dim).map(|k| if k == i { Expr::one() } else { Expr::zero() }).collect())
}
