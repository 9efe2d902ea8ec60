//! Sums of `coefficient * monomial * exp(affine form)` terms.
//!
//! Monomial exponents are arbitrary integers, so every single term is a unit
//! of the ring. Terms are keyed by [`Key`] and ordered lexicographically on
//! (exponents, exp rates, exp offset); this order is compatible with
//! multiplication, which the exact division below relies on.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, ToPrimitive, Zero};

use crate::Rational;

/// Compares two sparse vectors as if both were padded with zeros.
fn cmp_padded<T: Ord + Zero>(a: &[T], b: &[T]) -> Ordering {
    let zero = T::zero();
    let len = a.len().max(b.len());
    for i in 0..len {
        let x = a.get(i).unwrap_or(&zero);
        let y = b.get(i).unwrap_or(&zero);
        match x.cmp(y) {
            Ordering::Equal => continue,
            other => return other,
        }
    }
    Ordering::Equal
}

fn trim<T: Zero>(v: &mut Vec<T>) {
    while v.last().is_some_and(|x| x.is_zero()) {
        v.pop();
    }
}

fn add_padded<T: Zero + Clone + Add<Output = T>>(a: &[T], b: &[T]) -> Vec<T> {
    let len = a.len().max(b.len());
    let mut out: Vec<T> = (0..len)
        .map(|i| {
            let x = a.get(i).cloned().unwrap_or_else(T::zero);
            let y = b.get(i).cloned().unwrap_or_else(T::zero);
            x + y
        })
        .collect();
    trim(&mut out);
    out
}

/// The non-coefficient part of a term: `prod x_i^exps[i] * exp(sum rate[i] x_i + offset)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Key {
    exps: Vec<i32>,
    rate: Vec<Rational>,
    offset: Rational,
}

impl Ord for Key {
    fn cmp(&self, other: &Self) -> Ordering {
        cmp_padded(&self.exps, &other.exps)
            .then_with(|| cmp_padded(&self.rate, &other.rate))
            .then_with(|| self.offset.cmp(&other.offset))
    }
}

impl PartialOrd for Key {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Key {
    pub fn one() -> Self {
        Key::default()
    }

    pub fn new(mut exps: Vec<i32>, mut rate: Vec<Rational>, offset: Rational) -> Self {
        trim(&mut exps);
        trim(&mut rate);
        Key { exps, rate, offset }
    }

    pub fn var(index: usize) -> Self {
        let mut exps = vec![0; index + 1];
        exps[index] = 1;
        Key::new(exps, Vec::new(), Rational::zero())
    }

    pub fn exponential(rate: Vec<Rational>, offset: Rational) -> Self {
        Key::new(Vec::new(), rate, offset)
    }

    pub fn is_one(&self) -> bool {
        self.exps.is_empty() && self.rate.is_empty() && self.offset.is_zero()
    }

    pub fn exponent(&self, var: usize) -> i32 {
        self.exps.get(var).copied().unwrap_or(0)
    }

    pub fn exponents(&self) -> &[i32] {
        &self.exps
    }

    pub fn rate(&self, var: usize) -> Rational {
        self.rate.get(var).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn rates(&self) -> &[Rational] {
        &self.rate
    }

    pub fn offset(&self) -> &Rational {
        &self.offset
    }

    pub fn has_exponential(&self) -> bool {
        !self.rate.is_empty() || !self.offset.is_zero()
    }

    /// Highest variable index referenced plus one.
    pub fn arity(&self) -> usize {
        self.exps.len().max(self.rate.len())
    }

    pub fn mul(&self, other: &Key) -> Key {
        Key {
            exps: add_padded(&self.exps, &other.exps),
            rate: add_padded(&self.rate, &other.rate),
            offset: &self.offset + &other.offset,
        }
    }

    pub fn inv(&self) -> Key {
        Key {
            exps: self.exps.iter().map(|e| -e).collect(),
            rate: self.rate.iter().map(|r| -r).collect(),
            offset: -&self.offset,
        }
    }

    pub fn div(&self, other: &Key) -> Key {
        self.mul(&other.inv())
    }

    /// Same key with the exponent of `var` shifted by `delta`.
    fn shift_exp(&self, var: usize, delta: i32) -> Key {
        let mut exps = self.exps.clone();
        if exps.len() <= var {
            exps.resize(var + 1, 0);
        }
        exps[var] += delta;
        Key::new(exps, self.rate.clone(), self.offset.clone())
    }

    pub fn eval(&self, point: &[f64]) -> f64 {
        let mut value = 1.0;
        for (i, &e) in self.exps.iter().enumerate() {
            if e != 0 {
                value *= point[i].powi(e);
            }
        }
        if self.has_exponential() {
            let mut arg = self.offset.to_f64().unwrap_or(f64::NAN);
            for (i, r) in self.rate.iter().enumerate() {
                arg += r.to_f64().unwrap_or(f64::NAN) * point[i];
            }
            value *= arg.exp();
        }
        value
    }

    /// Exact value when the exponential argument vanishes at `point`.
    pub fn eval_exact(&self, point: &[Rational]) -> Option<Rational> {
        let mut arg = self.offset.clone();
        for (i, r) in self.rate.iter().enumerate() {
            arg += r * &point[i];
        }
        if !arg.is_zero() {
            return None;
        }
        let mut value = Rational::one();
        for (i, &e) in self.exps.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if point[i].is_zero() && e < 0 {
                return None;
            }
            value *= num_traits::pow::Pow::pow(&point[i], e);
        }
        Some(value)
    }
}

/// A finite sum of terms with distinct keys and nonzero rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Poly {
    terms: BTreeMap<Key, Rational>,
}

const DIVISION_STEP_FLOOR: usize = 256;

fn widen(lo: &mut Option<Rational>, hi: &mut Option<Rational>, v: Rational) {
    if lo.as_ref().is_none_or(|l| &v < l) {
        *lo = Some(v.clone());
    }
    if hi.as_ref().is_none_or(|h| &v > h) {
        *hi = Some(v);
    }
}

struct KeyBox {
    exp_lo: Vec<i32>,
    exp_hi: Vec<i32>,
    rate_lo: Vec<Option<Rational>>,
    rate_hi: Vec<Option<Rational>>,
    off_lo: Option<Rational>,
    off_hi: Option<Rational>,
}

/// Per-component closed ranges a quotient key must lie in.
struct QuotientBox {
    exp: Vec<(i32, i32)>,
    rate: Vec<(Rational, Rational)>,
    offset: (Rational, Rational),
}

impl KeyBox {
    fn get_exp(&self, i: usize) -> (i32, i32) {
        if i < self.exp_lo.len() {
            (self.exp_lo[i], self.exp_hi[i])
        } else {
            (0, 0)
        }
    }

    fn get_rate(&self, i: usize) -> (Rational, Rational) {
        match (self.rate_lo.get(i), self.rate_hi.get(i)) {
            (Some(Some(l)), Some(Some(h))) => (l.clone(), h.clone()),
            _ => (Rational::zero(), Rational::zero()),
        }
    }

    /// Range of quotient keys for `self / divisor`; `None` when empty.
    fn quotient_box(&self, divisor: &KeyBox) -> Option<QuotientBox> {
        let arity = self.exp_lo.len().max(divisor.exp_lo.len());
        let mut exp = Vec::with_capacity(arity);
        let mut rate = Vec::with_capacity(arity);
        for i in 0..arity {
            let (nl, nh) = self.get_exp(i);
            let (dl, dh) = divisor.get_exp(i);
            let (lo, hi) = (nl - dl, nh - dh);
            if lo > hi {
                return None;
            }
            exp.push((lo, hi));
            let (nl, nh) = self.get_rate(i);
            let (dl, dh) = divisor.get_rate(i);
            let (lo, hi) = (nl - dl, nh - dh);
            if lo > hi {
                return None;
            }
            rate.push((lo, hi));
        }
        let (nl, nh) = (self.off_lo.clone()?, self.off_hi.clone()?);
        let (dl, dh) = (divisor.off_lo.clone()?, divisor.off_hi.clone()?);
        let offset = (nl - dl, nh - dh);
        if offset.0 > offset.1 {
            return None;
        }
        Some(QuotientBox { exp, rate, offset })
    }
}

impl QuotientBox {
    fn contains(&self, key: &Key) -> bool {
        if key.arity() > self.exp.len() {
            return false;
        }
        let zero = Rational::zero();
        self.exp.iter().enumerate().all(|(i, (lo, hi))| {
            let e = key.exponent(i);
            *lo <= e && e <= *hi
        }) && self.rate.iter().enumerate().all(|(i, (lo, hi))| {
            let r = key.rates().get(i).unwrap_or(&zero);
            lo <= r && r <= hi
        }) && &self.offset.0 <= key.offset()
            && key.offset() <= &self.offset.1
    }
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn one() -> Self {
        Poly::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Poly::term(Key::one(), c)
    }

    pub fn term(key: Key, coeff: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(key, coeff);
        }
        Poly { terms }
    }

    pub fn var(index: usize) -> Self {
        Poly::term(Key::var(index), Rational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// A single term, hence invertible.
    pub fn is_unit(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => {
                let (k, c) = self.terms.iter().next().unwrap();
                k.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    /// Terms in descending key order.
    pub fn terms(&self) -> impl Iterator<Item = (&Key, &Rational)> {
        self.terms.iter().rev()
    }

    pub fn lead(&self) -> Option<(&Key, &Rational)> {
        self.terms.iter().next_back()
    }

    pub fn low(&self) -> Option<(&Key, &Rational)> {
        self.terms.iter().next()
    }

    pub fn arity(&self) -> usize {
        self.terms.keys().map(Key::arity).max().unwrap_or(0)
    }

    fn accumulate(&mut self, key: Key, coeff: Rational) {
        if coeff.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(key) {
            Entry::Vacant(v) => {
                v.insert(coeff);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += coeff;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(k, v)| (k.clone(), v * c)).collect(),
        }
    }

    pub fn mul_term(&self, key: &Key, coeff: &Rational) -> Poly {
        if coeff.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(k, v)| (k.mul(key), v * coeff))
                .collect(),
        }
    }

    pub fn pow(&self, exp: u32) -> Poly {
        let mut out = Poly::one();
        for _ in 0..exp {
            out = &out * self;
        }
        out
    }

    pub fn derivative(&self, var: usize) -> Poly {
        let mut out = Poly::zero();
        for (k, c) in &self.terms {
            let e = k.exponent(var);
            if e != 0 {
                out.accumulate(k.shift_exp(var, -1), c * Rational::from_integer(e.into()));
            }
            let r = k.rate(var);
            if !r.is_zero() {
                out.accumulate(k.clone(), c * r);
            }
        }
        out
    }

    pub fn eval(&self, point: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(k, c)| c.to_f64().unwrap_or(f64::NAN) * k.eval(point))
            .sum()
    }

    pub fn eval_exact(&self, point: &[Rational]) -> Option<Rational> {
        let mut acc = Rational::zero();
        for (k, c) in &self.terms {
            acc += c * k.eval_exact(point)?;
        }
        Some(acc)
    }

    /// Variables that carry a negative exponent in some term.
    pub fn negative_exponent_vars(&self) -> Vec<usize> {
        let mut vars = Vec::new();
        for k in self.terms.keys() {
            for (i, &e) in k.exponents().iter().enumerate() {
                if e < 0 && !vars.contains(&i) {
                    vars.push(i);
                }
            }
        }
        vars.sort_unstable();
        vars
    }

    /// Splits `self` (with at least one term) into `unit * normalized`, where
    /// the normalized factor has leading coefficient one, leading exp-atom
    /// zero, and every variable's minimum exponent zero. The normalized part is
    /// the same for any two polys differing by a unit.
    pub fn split_unit(&self) -> (Key, Rational, Poly) {
        let (lead_key, lead_coeff) = self.lead().expect("split_unit on zero poly");
        let arity = self.arity();
        let mut min_exps = vec![i32::MAX; arity];
        for k in self.terms.keys() {
            for (i, m) in min_exps.iter_mut().enumerate() {
                *m = (*m).min(k.exponent(i));
            }
        }
        let unit_key = Key::new(
            min_exps,
            lead_key.rates().to_vec(),
            lead_key.offset().clone(),
        );
        let unit_coeff = lead_coeff.clone();
        let normalized = self.mul_term(&unit_key.inv(), &unit_coeff.recip());
        (unit_key, unit_coeff, normalized)
    }

    /// Componentwise (min, max) of the keys over all terms: exponents, exp
    /// rates, and exp offset. Each component grades the ring, so for an exact
    /// product the extremes add.
    fn key_box(&self) -> KeyBox {
        let arity = self.arity();
        let mut b = KeyBox {
            exp_lo: vec![i32::MAX; arity],
            exp_hi: vec![i32::MIN; arity],
            rate_lo: vec![None; arity],
            rate_hi: vec![None; arity],
            off_lo: None,
            off_hi: None,
        };
        for k in self.terms.keys() {
            for i in 0..arity {
                let e = k.exponent(i);
                b.exp_lo[i] = b.exp_lo[i].min(e);
                b.exp_hi[i] = b.exp_hi[i].max(e);
                let r = k.rate(i);
                widen(&mut b.rate_lo[i], &mut b.rate_hi[i], r);
            }
            widen(&mut b.off_lo, &mut b.off_hi, k.offset().clone());
        }
        b
    }

    /// Exact quotient `self / divisor` when it exists in the term ring.
    ///
    /// Returns `None` when the division leaves a remainder, and also when the
    /// step budget is exhausted; callers treat both as "does not divide".
    pub fn exact_div(&self, divisor: &Poly) -> Option<Poly> {
        if divisor.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Poly::zero());
        }
        if divisor.is_unit() {
            let (k, c) = divisor.lead().unwrap();
            return Some(self.mul_term(&k.inv(), &c.recip()));
        }
        let allowed = self.key_box().quotient_box(&divisor.key_box())?;
        let (d_lead_key, d_lead_coeff) = divisor.lead().unwrap();
        let budget = DIVISION_STEP_FLOOR.max(8 * (self.len() + 1) * (divisor.len() + 1));
        let d_lead_inv = d_lead_coeff.recip();

        let mut remainder = self.clone();
        let mut quotient = Poly::zero();
        let mut steps = 0;
        while let Some((r_key, r_coeff)) = remainder.lead() {
            let q_key = r_key.div(d_lead_key);
            if !allowed.contains(&q_key) {
                return None;
            }
            let q_coeff = r_coeff * &d_lead_inv;
            for (k, c) in &divisor.terms {
                remainder.accumulate(k.mul(&q_key), -(c * &q_coeff));
            }
            quotient.accumulate(q_key, q_coeff);
            steps += 1;
            if steps > budget {
                return None;
            }
        }
        Some(quotient)
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let (mut big, small) = if self.len() >= rhs.len() {
            (self.clone(), rhs)
        } else {
            (rhs.clone(), self)
        };
        for (k, c) in &small.terms {
            big.accumulate(k.clone(), c.clone());
        }
        big
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        for (k, c) in &rhs.terms {
            out.accumulate(k.clone(), -c);
        }
        out
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(k, c)| (k.clone(), -c)).collect(),
        }
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (ka, ca) in &self.terms {
            for (kb, cb) in &rhs.terms {
                out.accumulate(ka.mul(kb), ca * cb);
            }
        }
        out
    }
}
