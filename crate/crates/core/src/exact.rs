//! Exact rational linear algebra for the small systems behind constant fitting.

use num_traits::{ToPrimitive, Zero};
use symexpr::Rational;

/// Solves a square system by Gaussian elimination; `None` when singular.
pub fn solve(mut a: Vec<Vec<Rational>>, mut b: Vec<Rational>) -> Option<Vec<Rational>> {
    let n = a.len();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(pivot, col);
        b.swap(pivot, col);
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let factor = &a[r][col] / &a[col][col];
            let pivot_row = a[col].clone();
            for (v, p) in a[r].iter_mut().zip(&pivot_row).skip(col) {
                *v -= &factor * p;
            }
            let d = &factor * &b[col];
            b[r] -= d;
        }
    }
    Some((0..n).map(|i| &b[i] / &a[i][i]).collect())
}

/// Result of an exact least-squares solve `min |A x - b|`.
#[derive(Debug, Clone, PartialEq)]
pub struct LeastSquares {
    pub solution: Vec<Rational>,
    /// `A x - b` at the solution.
    pub residual: Vec<Rational>,
    /// `AᵀA`.
    pub normal_matrix: Vec<Vec<Rational>>,
}

impl LeastSquares {
    pub fn residual_norm_squared(&self) -> Rational {
        self.residual.iter().map(|r| r * r).sum()
    }

    pub fn residual_norm(&self) -> f64 {
        self.residual_norm_squared().to_f64().unwrap_or(f64::NAN).sqrt()
    }

    pub fn is_exact(&self) -> bool {
        self.residual.iter().all(Zero::is_zero)
    }
}

/// Exact normal-equation solve; `None` when `A` has dependent columns.
pub fn least_squares(a: &[Vec<Rational>], b: &[Rational]) -> Option<LeastSquares> {
    let m = a.first().map_or(0, Vec::len);
    let normal_matrix: Vec<Vec<Rational>> = (0..m)
        .map(|i| (0..m).map(|j| a.iter().map(|row| &row[i] * &row[j]).sum()).collect())
        .collect();
    let rhs: Vec<Rational> = (0..m).map(|i| a.iter().zip(b).map(|(row, bi)| &row[i] * bi).sum()).collect();
    let solution = solve(normal_matrix.clone(), rhs)?;
    let residual = a
        .iter()
        .zip(b)
        .map(|(row, bi)| row.iter().zip(&solution).map(|(x, y)| x * y).sum::<Rational>() - bi)
        .collect();
    Some(LeastSquares {
        solution,
        residual,
        normal_matrix,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    #[test]
    fn solves_square_system() {
        let a = vec![vec![q(2), q(1)], vec![q(1), q(3)]];
        let x = solve(a, vec![q(3), q(5)]).unwrap();
        assert_eq!(x, vec![Rational::new(4.into(), 5.into()), Rational::new(7.into(), 5.into())]);
    }

    #[test]
    fn singular_system_is_none() {
        let a = vec![vec![q(1), q(2)], vec![q(2), q(4)]];
        assert!(solve(a, vec![q(1), q(2)]).is_none());
    }

    #[test]
    fn least_squares_minimizer() {
        // min (1+l)^2 + (-1+l)^2 + (-2+l+m)^2
        let a = vec![vec![q(1), q(0)], vec![q(1), q(0)], vec![q(1), q(1)]];
        let b = vec![q(-1), q(1), q(2)];
        let ls = least_squares(&a, &b).unwrap();
        assert_eq!(ls.solution, vec![q(0), q(2)]);
        assert_eq!(ls.residual, vec![q(1), q(-1), q(0)]);
        assert_eq!(ls.residual_norm_squared(), q(2));
    }
}
