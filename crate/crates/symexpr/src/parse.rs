//! Recursive-descent parser for the expression grammar
//!
//! ```text
//! expr   := ['+'|'-'] term (('+'|'-') term)*
//! term   := unary (('*'|'/') unary)*
//! unary  := ('+'|'-') unary | power
//! power  := base ('^' signed-integer)?
//! base   := integer | decimal | identifier | '(' expr ')' | 'exp' '(' expr ')'
//! ```
//!
//! `e^(...)` is sugar for `exp(...)` and a bare `e` is Euler's number, unless
//! the chart has a coordinate named `e`. Exponential arguments must be affine
//! in the coordinates with rational coefficients.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::{Expr, ParseError, ParseErrorKind, Rational};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(Rational, bool),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn tokenize(src: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let tok = match c {
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '0'..='9' | '.' => {
                while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'.') {
                    i += 1;
                }
                let text = &src[start..i];
                out.push((parse_number(text, start)?, start));
                continue;
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((Tok::Ident(src[start..i].to_string()), start));
                continue;
            }
            other => {
                return Err(ParseError::new(
                    ParseErrorKind::Syntax(format!("unexpected character '{other}'")),
                    start,
                ))
            }
        };
        out.push((tok, start));
        i += 1;
    }
    Ok(out)
}

fn parse_number(text: &str, pos: usize) -> Result<Tok, ParseError> {
    let bad = || ParseError::new(ParseErrorKind::Syntax(format!("malformed number '{text}'")), pos);
    match text.split_once('.') {
        None => {
            let n: BigInt = text.parse().map_err(|_| bad())?;
            Ok(Tok::Num(Rational::from_integer(n), false))
        }
        Some((int_part, frac_part)) => {
            if frac_part.contains('.') || (int_part.is_empty() && frac_part.is_empty()) {
                return Err(bad());
            }
            let digits = format!("{int_part}{frac_part}");
            let n: BigInt = digits.parse().map_err(|_| bad())?;
            let d = num_traits::pow::Pow::pow(BigInt::from(10), frac_part.len());
            Ok(Tok::Num(Rational::new(n, d), true))
        }
    }
}

struct Parser<'a, S> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end: usize,
    coords: &'a [S],
}

impl<'a, S: AsRef<str>> Parser<'a, S> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map(|(_, p)| *p).unwrap_or(self.end)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(t, _)| t.clone());
        self.pos += 1;
        t
    }

    fn syntax<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError::new(ParseErrorKind::Syntax(msg.into()), self.offset()))
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<(), ParseError> {
        if self.peek() == Some(&tok) {
            self.pos += 1;
            Ok(())
        } else {
            self.syntax(format!("expected {what}"))
        }
    }

    fn coord_index(&self, name: &str) -> Option<usize> {
        self.coords.iter().position(|c| c.as_ref() == name)
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut acc = match self.peek() {
            Some(Tok::Minus) => {
                self.pos += 1;
                -self.term()?
            }
            Some(Tok::Plus) => {
                self.pos += 1;
                self.term()?
            }
            _ => self.term()?,
        };
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    acc = acc + self.term()?;
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    acc = acc - self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    acc = acc * self.unary()?;
                }
                Some(Tok::Slash) => {
                    self.pos += 1;
                    let mut negative = false;
                    while let Some(t @ (Tok::Minus | Tok::Plus)) = self.peek() {
                        negative ^= *t == Tok::Minus;
                        self.pos += 1;
                    }
                    if negative {
                        acc = -acc;
                    }
                    let at = self.offset();
                    let (base, exp) = self.power_parts()?;
                    // a / b^k is a * (1/b)^k so that b stays a single denominator factor
                    let inv = base
                        .recip()
                        .map_err(|_| ParseError::new(ParseErrorKind::DivisionByZero, at))?;
                    acc = acc * inv.powi(exp).expect("reciprocal is nonzero");
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        match self.peek() {
            Some(Tok::Minus) => {
                self.pos += 1;
                Ok(-self.unary()?)
            }
            Some(Tok::Plus) => {
                self.pos += 1;
                self.unary()
            }
            _ => {
                let at = self.offset();
                let (base, exp) = self.power_parts()?;
                base.powi(exp)
                    .map_err(|_| ParseError::new(ParseErrorKind::DivisionByZero, at))
            }
        }
    }

    /// A base with its (possibly absent) integer exponent.
    fn power_parts(&mut self) -> Result<(Expr, i32), ParseError> {
        if let Some(Tok::Ident(name)) = self.peek() {
            if name == "e" && self.coord_index("e").is_none() {
                self.pos += 1;
                if self.peek() == Some(&Tok::Caret) {
                    self.pos += 1;
                    let at = self.offset();
                    let arg = self.exp_operand()?;
                    return Ok((exp_of(&arg, at, self.coords)?, 1));
                }
                return Ok((exp_of(&Expr::one(), 0, self.coords)?, self.exponent()?));
            }
        }
        let base = self.base()?;
        let exp = self.exponent()?;
        Ok((base, exp))
    }

    fn exp_operand(&mut self) -> Result<Expr, ParseError> {
        match self.peek() {
            Some(Tok::Minus) => {
                self.pos += 1;
                Ok(-self.exp_operand()?)
            }
            _ => self.base(),
        }
    }

    fn exponent(&mut self) -> Result<i32, ParseError> {
        if self.peek() != Some(&Tok::Caret) {
            return Ok(1);
        }
        self.pos += 1;
        let parens = self.peek() == Some(&Tok::LParen);
        if parens {
            self.pos += 1;
        }
        let negative = match self.peek() {
            Some(Tok::Minus) => {
                self.pos += 1;
                true
            }
            Some(Tok::Plus) => {
                self.pos += 1;
                false
            }
            _ => false,
        };
        let at = self.offset();
        let value = match self.bump() {
            Some(Tok::Num(r, false)) if r.is_integer() => r.to_integer(),
            Some(Tok::Num(..)) | Some(Tok::Ident(_)) => {
                return Err(ParseError::new(ParseErrorKind::NonIntegerExponent, at))
            }
            _ => return Err(ParseError::new(ParseErrorKind::Syntax("expected exponent".into()), at)),
        };
        let value: i32 = i32::try_from(value)
            .ok()
            .filter(|v| v.abs() <= 4096)
            .ok_or_else(|| ParseError::new(ParseErrorKind::Syntax("exponent out of range".into()), at))?;
        if parens {
            self.expect(Tok::RParen, "')'")?;
        }
        Ok(if negative { -value } else { value })
    }

    fn base(&mut self) -> Result<Expr, ParseError> {
        let at = self.offset();
        match self.bump() {
            Some(Tok::Num(r, _)) => Ok(Expr::constant(r)),
            Some(Tok::LParen) => {
                let e = self.expr()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(e)
            }
            Some(Tok::Ident(name)) => {
                if let Some(i) = self.coord_index(&name) {
                    return Ok(Expr::var(i));
                }
                if name == "exp" {
                    self.expect(Tok::LParen, "'(' after exp")?;
                    let arg = self.expr()?;
                    self.expect(Tok::RParen, "')'")?;
                    return exp_of(&arg, at, self.coords);
                }
                if name == "e" {
                    return exp_of(&Expr::one(), at, self.coords);
                }
                Err(ParseError::new(ParseErrorKind::UnknownIdentifier(name), at))
            }
            Some(_) => Err(ParseError::new(ParseErrorKind::Syntax("expected a value".into()), at)),
            None => Err(ParseError::new(
                ParseErrorKind::Syntax("unexpected end of input".into()),
                at,
            )),
        }
    }
}

/// `exp(arg)` when `arg` is affine in the coordinates.
fn exp_of<S: AsRef<str>>(arg: &Expr, at: usize, coords: &[S]) -> Result<Expr, ParseError> {
    let nonlinear = || ParseError::new(ParseErrorKind::NonLinearExp, at);
    if !arg.is_polynomial() {
        return Err(nonlinear());
    }
    let mut rate = vec![Rational::zero(); coords.len().max(arg.arity())];
    let mut offset = Rational::zero();
    for (key, coeff) in arg.numerator().terms() {
        if key.has_exponential() {
            return Err(nonlinear());
        }
        let nonzero: Vec<(usize, i32)> = key
            .exponents()
            .iter()
            .copied()
            .enumerate()
            .filter(|(_, e)| *e != 0)
            .collect();
        match nonzero.as_slice() {
            [] => offset += coeff,
            [(i, 1)] => rate[*i] += coeff,
            _ => return Err(nonlinear()),
        }
    }
    if rate.iter().all(Zero::is_zero) && offset.is_zero() {
        return Ok(Expr::one());
    }
    Ok(Expr::exp_affine(rate, offset))
}

/// Parses `source` with the given coordinate names into canonical form.
pub fn parse<S: AsRef<str>>(source: &str, coords: &[S]) -> Result<Expr, ParseError> {
    let toks = tokenize(source)?;
    if toks.is_empty() {
        return Err(ParseError::new(
            ParseErrorKind::Syntax("empty expression".into()),
            0,
        ));
    }
    let mut p = Parser {
        toks,
        pos: 0,
        end: source.len(),
        coords,
    };
    let e = p.expr()?;
    if p.pos < p.toks.len() {
        return p.syntax("unexpected trailing input");
    }
    Ok(e)
}

/// Parses an exact rational such as `"3"`, `"-3/2"` or `"0.25"`.
pub fn parse_rational(source: &str) -> Result<Rational, ParseError> {
    let empty: [&str; 0] = [];
    let e = parse(source, &empty)?;
    e.as_constant().ok_or_else(|| {
        ParseError::new(
            ParseErrorKind::Syntax(format!("'{source}' is not a rational constant")),
            0,
        )
    })
}
