use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::HashSet;
use symexpr::{Expr, ParseError, Rational};

use crate::error::{GeometryError, Result};

/// A single coordinate chart: coordinate names, a rational base point and the
/// sampling box used by numeric checks.
#[derive(Debug, Clone, PartialEq)]
pub struct Chart {
    coords: Vec<String>,
    base_point: Vec<Rational>,
    domain_box: Vec<(f64, f64)>,
}

impl Chart {
    pub fn new(
        coords: Vec<String>,
        base_point: Vec<Rational>,
        domain_box: Vec<(f64, f64)>,
    ) -> Result<Chart> {
        let n = coords.len();
        if n < 2 {
            return Err(GeometryError::Chart(format!("need at least 2 coordinates, got {n}")));
        }
        let mut seen = HashSet::new();
        for c in &coords {
            let valid = c.chars().next().is_some_and(|ch| ch.is_ascii_alphabetic() || ch == '_')
                && c.chars().all(|ch| ch.is_ascii_alphanumeric() || ch == '_');
            if !valid || c == "exp" {
                return Err(GeometryError::Chart(format!("'{c}' is not a usable coordinate name")));
            }
            if !seen.insert(c.as_str()) {
                return Err(GeometryError::Chart(format!("duplicate coordinate '{c}'")));
            }
        }
        if base_point.len() != n {
            return Err(GeometryError::Dimension {
                what: "base_point".into(),
                expected: n,
                got: base_point.len(),
            });
        }
        if domain_box.len() != n {
            return Err(GeometryError::Dimension {
                what: "domain_box".into(),
                expected: n,
                got: domain_box.len(),
            });
        }
        for (i, &(lo, hi)) in domain_box.iter().enumerate() {
            if !(lo.is_finite() && hi.is_finite() && lo < hi) {
                return Err(GeometryError::Chart(format!(
                    "domain_box[{i}] = [{lo}, {hi}] is not a proper interval"
                )));
            }
        }
        Ok(Chart {
            coords,
            base_point,
            domain_box,
        })
    }

    /// Chart with the given names, base point at the origin and box [-1, 1]^n.
    pub fn standard(coords: &[&str]) -> Result<Chart> {
        let n = coords.len();
        Chart::new(
            coords.iter().map(|s| s.to_string()).collect(),
            vec![Rational::from_integer(0.into()); n],
            vec![(-1.0, 1.0); n],
        )
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[String] {
        &self.coords
    }

    pub fn base_point(&self) -> &[Rational] {
        &self.base_point
    }

    pub fn base_point_f64(&self) -> Vec<f64> {
        use num_traits::ToPrimitive;
        self.base_point.iter().map(|r| r.to_f64().unwrap_or(f64::NAN)).collect()
    }

    pub fn domain_box(&self) -> &[(f64, f64)] {
        &self.domain_box
    }

    pub fn with_base_point(&self, base_point: Vec<Rational>) -> Result<Chart> {
        Chart::new(self.coords.clone(), base_point, self.domain_box.clone())
    }

    pub fn coord_index(&self, name: &str) -> Result<usize> {
        self.coords
            .iter()
            .position(|c| c == name)
            .ok_or_else(|| GeometryError::UnknownCoordinate(name.to_string()))
    }

    pub fn parse(&self, source: &str) -> Result<Expr, ParseError> {
        symexpr::parse(source, &self.coords)
    }

    pub fn differentiate(&self, expr: &Expr, coord: &str) -> Result<Expr> {
        Ok(expr.derivative(self.coord_index(coord)?))
    }

    pub fn show(&self, expr: &Expr) -> String {
        expr.display(&self.coords).to_string()
    }

    /// Seeded points of the box `[-1, 1]^n` translated to the base point.
    pub fn probe_points(&self, seed: u64, count: usize) -> Vec<Vec<f64>> {
        let base = self.base_point_f64();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..count)
            .map(|_| base.iter().map(|b| b + rng.gen_range(-1.0..=1.0)).collect())
            .collect()
    }

    /// Seeded uniform samples of the domain box.
    pub fn domain_samples(&self, seed: u64, count: usize) -> Vec<Vec<f64>> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..count)
            .map(|_| self.domain_box.iter().map(|&(lo, hi)| rng.gen_range(lo..=hi)).collect())
            .collect()
    }
}
