use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use crate::poly::{Key, Poly};
use crate::{ExprError, Rational};

/// Default absolute threshold below which a denominator counts as zero
/// during floating evaluation.
pub const DEFAULT_DEGENERACY_THRESHOLD: f64 = 1e-12;

/// Exact scalar function on a chart: a numerator sum over a product of
/// normalized, non-unit denominator factors.
///
/// Canonical form:
/// * zero is the empty numerator with no denominator factors;
/// * every denominator factor has leading coefficient one and is not a unit
///   (units are absorbed into the numerator);
/// * no denominator factor divides the numerator exactly.
///
/// Two expressions denote the same function iff their difference
/// [`is_zero`](Expr::is_zero); structural equality is only a sufficient test.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Expr {
    num: Poly,
    den: BTreeMap<Poly, u32>,
}

impl Expr {
    pub fn zero() -> Self {
        Expr::default()
    }

    pub fn one() -> Self {
        Expr::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Expr::from_poly(Poly::constant(c))
    }

    pub fn int(n: i64) -> Self {
        Expr::constant(Rational::from_integer(n.into()))
    }

    pub fn ratio(n: i64, d: i64) -> Self {
        Expr::constant(Rational::new(n.into(), d.into()))
    }

    /// The coordinate function with index `index`.
    pub fn var(index: usize) -> Self {
        Expr::from_poly(Poly::var(index))
    }

    /// `exp(sum rate[i] x_i + offset)`.
    pub fn exp_affine(rate: Vec<Rational>, offset: Rational) -> Self {
        Expr::from_poly(Poly::term(Key::exponential(rate, offset), Rational::one()))
    }

    pub fn from_poly(num: Poly) -> Self {
        Expr {
            num,
            den: BTreeMap::new(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn as_constant(&self) -> Option<Rational> {
        if self.den.is_empty() {
            self.num.as_constant()
        } else {
            None
        }
    }

    pub fn is_constant(&self) -> bool {
        self.as_constant().is_some()
    }

    pub fn numerator(&self) -> &Poly {
        &self.num
    }

    /// Denominator factors with multiplicities.
    pub fn denominator_factors(&self) -> impl Iterator<Item = (&Poly, u32)> {
        self.den.iter().map(|(p, &k)| (p, k))
    }

    /// Expanded denominator (one when there are no factors).
    pub fn denominator(&self) -> Poly {
        self.den
            .iter()
            .fold(Poly::one(), |acc, (f, &k)| &acc * &f.pow(k))
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_empty()
    }

    /// Largest variable index referenced plus one.
    pub fn arity(&self) -> usize {
        self.den
            .keys()
            .map(Poly::arity)
            .chain(std::iter::once(self.num.arity()))
            .max()
            .unwrap_or(0)
    }

    fn reduce(mut num: Poly, mut den: BTreeMap<Poly, u32>) -> Expr {
        if num.is_zero() {
            return Expr::zero();
        }
        for (factor, mult) in den.iter_mut() {
            while *mult > 0 {
                match num.exact_div(factor) {
                    Some(q) => {
                        num = q;
                        *mult -= 1;
                    }
                    None => break,
                }
            }
        }
        den.retain(|_, k| *k > 0);
        Expr { num, den }
    }

    /// Adds `factor^mult` to a denominator map, splitting it against factors
    /// already present. Units peeled off during splitting are multiplied into
    /// `num_scale` (inverted, since they leave the denominator).
    fn insert_factor(
        den: &mut BTreeMap<Poly, u32>,
        num_scale: &mut Poly,
        mut factor: Poly,
        mult: u32,
    ) {
        if let Some(k) = den.get_mut(&factor) {
            *k += mult;
            return;
        }
        let existing: Vec<Poly> = den.keys().cloned().collect();
        for known in existing {
            let mut hits = 0;
            while let Some(q) = factor.exact_div(&known) {
                hits += 1;
                let (uk, uc, norm) = q.split_unit();
                let unit = Poly::term(uk.inv(), uc.recip()).pow(mult);
                *num_scale = &*num_scale * &unit;
                factor = norm;
                if factor.is_unit() {
                    break;
                }
            }
            if hits > 0 {
                *den.get_mut(&known).unwrap() += hits * mult;
            }
            if factor.is_unit() {
                return;
            }
        }
        *den.entry(factor).or_insert(0) += mult;
    }

    fn lift(&self, den: &BTreeMap<Poly, u32>) -> Poly {
        let mut num = self.num.clone();
        for (f, &k) in den {
            let have = self.den.get(f).copied().unwrap_or(0);
            if k > have {
                num = &num * &f.pow(k - have);
            }
        }
        num
    }

    fn add_impl(&self, rhs: &Expr, negate: bool) -> Expr {
        if rhs.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return if negate { -rhs } else { rhs.clone() };
        }
        if self.den == rhs.den {
            let num = if negate {
                &self.num - &rhs.num
            } else {
                &self.num + &rhs.num
            };
            return Expr::reduce(num, self.den.clone());
        }
        let mut den = self.den.clone();
        for (f, &k) in &rhs.den {
            let e = den.entry(f.clone()).or_insert(0);
            *e = (*e).max(k);
        }
        let a = self.lift(&den);
        let b = rhs.lift(&den);
        let num = if negate { &a - &b } else { &a + &b };
        Expr::reduce(num, den)
    }

    fn mul_impl(&self, rhs: &Expr) -> Expr {
        if self.is_zero() || rhs.is_zero() {
            return Expr::zero();
        }
        let mut den = self.den.clone();
        let mut scale = Poly::one();
        for (f, &k) in &rhs.den {
            Expr::insert_factor(&mut den, &mut scale, f.clone(), k);
        }
        let num = &(&self.num * &rhs.num) * &scale;
        Expr::reduce(num, den)
    }

    pub fn recip(&self) -> Result<Expr, ExprError> {
        if self.is_zero() {
            return Err(ExprError::DivisionByZero);
        }
        let (uk, uc, norm) = self.num.split_unit();
        let mut num = Poly::term(uk.inv(), uc.recip());
        for (f, &k) in &self.den {
            num = &num * &f.pow(k);
        }
        let mut den = BTreeMap::new();
        if !norm.is_unit() {
            den.insert(norm, 1);
        }
        Ok(Expr::reduce(num, den))
    }

    pub fn checked_div(&self, rhs: &Expr) -> Result<Expr, ExprError> {
        Ok(self.mul_impl(&rhs.recip()?))
    }

    pub fn powi(&self, exp: i32) -> Result<Expr, ExprError> {
        let base = if exp < 0 { self.recip()? } else { self.clone() };
        let mut out = Expr::one();
        for _ in 0..exp.unsigned_abs() {
            out = out.mul_impl(&base);
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Rational) -> Expr {
        if c.is_zero() {
            return Expr::zero();
        }
        Expr {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    /// Exact partial derivative with respect to the variable `var`.
    pub fn derivative(&self, var: usize) -> Expr {
        let mut out = Expr::reduce(self.num.derivative(var), self.den.clone());
        for (f, &k) in &self.den {
            let df = f.derivative(var);
            if df.is_zero() {
                continue;
            }
            let mut den = self.den.clone();
            *den.get_mut(f).unwrap() += 1;
            let term_num = (&self.num * &df).scale(&Rational::from_integer(k.into()));
            out = &out - &Expr::reduce(term_num, den);
        }
        out
    }

    pub fn eval(&self, point: &[f64]) -> Result<f64, ExprError> {
        self.eval_with_threshold(point, DEFAULT_DEGENERACY_THRESHOLD)
    }

    /// Floating evaluation; fails when a denominator factor (or a coordinate
    /// raised to a negative power) is within `threshold` of zero.
    pub fn eval_with_threshold(&self, point: &[f64], threshold: f64) -> Result<f64, ExprError> {
        if point.len() < self.arity() {
            return Err(ExprError::PointDimension {
                expected: self.arity(),
                got: point.len(),
            });
        }
        for var in self.num.negative_exponent_vars() {
            if point[var].abs() < threshold {
                return Err(ExprError::Degenerate {
                    value: point[var],
                    threshold,
                });
            }
        }
        let mut den = 1.0;
        for (f, &k) in &self.den {
            let v = f.eval(point);
            if v.abs() < threshold {
                return Err(ExprError::Degenerate { value: v, threshold });
            }
            den *= v.powi(k as i32);
        }
        Ok(self.num.eval(point) / den)
    }

    /// Exact value at a rational point; `None` when an exponential factor has
    /// a nonzero argument there or a denominator vanishes.
    pub fn eval_exact(&self, point: &[Rational]) -> Option<Rational> {
        if point.len() < self.arity() {
            return None;
        }
        let mut den = Rational::one();
        for (f, &k) in &self.den {
            let v = f.eval_exact(point)?;
            if v.is_zero() {
                return None;
            }
            den *= num_traits::pow::Pow::pow(&v, k);
        }
        Some(self.num.eval_exact(point)? / den)
    }

    /// Renders the expression with coordinate names; the output parses back
    /// to the same canonical form.
    pub fn display<'a, S: AsRef<str>>(&'a self, names: &'a [S]) -> ExprDisplay<'a, S> {
        ExprDisplay { expr: self, names }
    }
}

impl From<i64> for Expr {
    fn from(n: i64) -> Self {
        Expr::int(n)
    }
}

impl From<Rational> for Expr {
    fn from(c: Rational) -> Self {
        Expr::constant(c)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $body:expr) => {
        impl $trait<&Expr> for &Expr {
            type Output = Expr;
            fn $method(self, rhs: &Expr) -> Expr {
                let f: fn(&Expr, &Expr) -> Expr = $body;
                f(self, rhs)
            }
        }
        impl $trait<Expr> for Expr {
            type Output = Expr;
            fn $method(self, rhs: Expr) -> Expr {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&Expr> for Expr {
            type Output = Expr;
            fn $method(self, rhs: &Expr) -> Expr {
                (&self).$method(rhs)
            }
        }
        impl $trait<Expr> for &Expr {
            type Output = Expr;
            fn $method(self, rhs: Expr) -> Expr {
                self.$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, |a, b| a.add_impl(b, false));
forward_binop!(Sub, sub, |a, b| a.add_impl(b, true));
forward_binop!(Mul, mul, |a, b| a.mul_impl(b));
// Panics on a zero divisor; use `checked_div` when the divisor is untrusted.
forward_binop!(Div, div, |a, b| a
    .checked_div(b)
    .expect("division by canonical zero"));

impl Neg for &Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        -&self
    }
}

impl std::iter::Sum for Expr {
    fn sum<I: Iterator<Item = Expr>>(iter: I) -> Expr {
        iter.fold(Expr::zero(), |acc, e| acc + e)
    }
}

pub struct ExprDisplay<'a, S> {
    expr: &'a Expr,
    names: &'a [S],
}

fn fmt_rational(c: &Rational) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

fn var_name<S: AsRef<str>>(names: &[S], i: usize) -> String {
    names
        .get(i)
        .map(|s| s.as_ref().to_string())
        .unwrap_or_else(|| format!("x{i}"))
}

/// Signed affine form `sum rate[i] x_i + offset`, e.g. `2*z - x + 1/2`.
fn fmt_affine<S: AsRef<str>>(rate: &[Rational], offset: &Rational, names: &[S]) -> String {
    let mut parts: Vec<(bool, String)> = Vec::new();
    for (i, r) in rate.iter().enumerate() {
        if r.is_zero() {
            continue;
        }
        let mag = r.abs();
        let body = if mag.is_one() {
            var_name(names, i)
        } else {
            format!("{}*{}", fmt_rational(&mag), var_name(names, i))
        };
        parts.push((r < &Rational::zero(), body));
    }
    if !offset.is_zero() {
        parts.push((offset < &Rational::zero(), fmt_rational(&offset.abs())));
    }
    join_signed(parts)
}

fn join_signed(parts: Vec<(bool, String)>) -> String {
    let mut out = String::new();
    for (idx, (negative, body)) in parts.into_iter().enumerate() {
        match (idx, negative) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        out.push_str(&body);
    }
    out
}

fn fmt_poly<S: AsRef<str>>(p: &Poly, names: &[S]) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut parts = Vec::new();
    for (key, coeff) in p.terms() {
        let mut factors = Vec::new();
        for (i, &e) in key.exponents().iter().enumerate() {
            match e {
                0 => {}
                1 => factors.push(var_name(names, i)),
                _ => factors.push(format!("{}^{}", var_name(names, i), e)),
            }
        }
        if key.has_exponential() {
            factors.push(format!("exp({})", fmt_affine(key.rates(), key.offset(), names)));
        }
        let mag = coeff.abs();
        let body = if factors.is_empty() {
            fmt_rational(&mag)
        } else if mag.is_one() {
            factors.join("*")
        } else {
            format!("{}*{}", fmt_rational(&mag), factors.join("*"))
        };
        parts.push((coeff < &Rational::zero(), body));
    }
    join_signed(parts)
}

impl<S: AsRef<str>> fmt::Display for ExprDisplay<'_, S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let num = fmt_poly(&self.expr.num, self.names);
        if self.expr.den.is_empty() {
            return f.write_str(&num);
        }
        if self.expr.num.len() > 1 {
            write!(f, "({num})")?;
        } else {
            f.write_str(&num)?;
        }
        for (factor, &k) in &self.expr.den {
            let body = fmt_poly(factor, self.names);
            if k == 1 {
                write!(f, "/({body})")?;
            } else {
                write!(f, "/({body})^{k}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> Expr {
        Expr::var(0)
    }
    fn y() -> Expr {
        Expr::var(1)
    }
    fn z() -> Expr {
        Expr::var(2)
    }
    fn expz(k: i64) -> Expr {
        Expr::exp_affine(
            vec![Rational::zero(), Rational::zero(), Rational::from_integer(k.into())],
            Rational::zero(),
        )
    }

    #[test]
    fn exponential_atoms_merge() {
        assert!((expz(1) * expz(-1) - Expr::one()).is_zero());
        assert!((expz(2) * expz(-2) - Expr::one()).is_zero());
    }

    #[test]
    fn binomial_square_cancels() {
        let s = &x() + &y();
        let expanded = &x() * &x() + Expr::int(2) * &x() * &y() + &y() * &y();
        assert!((&s * &s - expanded).is_zero());
    }

    #[test]
    fn common_factor_cancels() {
        let e = x().checked_div(&x()).unwrap();
        assert_eq!(e, Expr::one());
        let p = &x() + Expr::one();
        let q = (&p * &y()).checked_div(&p).unwrap();
        assert_eq!(q, y());
    }

    #[test]
    fn quotient_keeps_nontrivial_denominator() {
        let t = Expr::var(3);
        let det = Expr::one() + &y() * &y() - &t * &t;
        let inv = det.recip().unwrap();
        assert!(!inv.is_polynomial());
        assert_eq!(inv.denominator_factors().count(), 1);
        assert!((&inv * &det - Expr::one()).is_zero());
    }

    #[test]
    fn division_by_zero_is_an_error() {
        assert_eq!(x().checked_div(&Expr::zero()), Err(ExprError::DivisionByZero));
    }

    #[test]
    fn derivatives() {
        assert!((expz(2).derivative(2) - Expr::int(2) * expz(2)).is_zero());
        assert!(((&y() * &x() * &x()).derivative(0) - Expr::int(2) * &x() * &y()).is_zero());
        let d = (&z() * &expz(2)).derivative(2);
        assert!((d - (Expr::int(2) * &z() + Expr::one()) * expz(2)).is_zero());
    }

    #[test]
    fn quotient_rule() {
        let p = Expr::one() + &x() * &x();
        let e = y().checked_div(&p).unwrap();
        let d = e.derivative(0);
        let expected = -(Expr::int(2) * &x() * &y()) / (&p * &p);
        assert!((d - expected).is_zero());
    }

    #[test]
    fn evaluation() {
        assert_eq!(expz(2).eval(&[0.0, 0.0, 0.0]).unwrap(), 1.0);
        let e = &x() + Expr::int(2) * &y();
        assert_eq!(e.eval(&[1.0, 2.0]).unwrap(), 5.0);
        let t = Expr::var(3);
        let det = Expr::one() + &y() * &y() - &t * &t;
        assert_eq!(det.eval(&[0.0, 0.0, 0.0, 2.0]).unwrap(), -3.0);
    }

    #[test]
    fn degenerate_evaluation_is_reported() {
        let e = Expr::one() / (&x() - Expr::one());
        assert!(matches!(e.eval(&[1.0]), Err(ExprError::Degenerate { .. })));
        let inv_x = x().recip().unwrap();
        assert!(matches!(inv_x.eval(&[0.0]), Err(ExprError::Degenerate { .. })));
    }

    #[test]
    fn exact_evaluation() {
        let e = (&x() + Expr::ratio(1, 2)) * expz(2);
        let pt = [Rational::from_integer(1.into()), Rational::zero(), Rational::zero()];
        assert_eq!(e.eval_exact(&pt), Some(Rational::new(3.into(), 2.into())));
        let pt2 = [Rational::zero(), Rational::zero(), Rational::one()];
        assert_eq!(e.eval_exact(&pt2), None);
    }

    #[test]
    fn display_forms() {
        let names = ["x", "y", "z", "t"];
        let t = Expr::var(3);
        let det = Expr::one() + &y() * &y() - &t * &t;
        assert_eq!(det.display(&names).to_string(), "y^2 - t^2 + 1");
        assert_eq!(expz(-2).display(&names).to_string(), "exp(-2*z)");
        let q = Expr::int(3) / (Expr::int(2) * det);
        assert_eq!(q.display(&names).to_string(), "3/2/(y^2 - t^2 + 1)");
    }
}
