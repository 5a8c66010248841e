//! A small expression language shared by every textual input.
//!
//! Grammar (whitespace ignored):
//!
//! ```text
//! sum    := ['-'] term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := '-' unary | power
//! power  := atom ['^' exp]
//! exp    := int | '(' ['-'] int ['/' int] ')' | '-' int
//! atom   := int | ident ['[' raw ']'] | '(' sum ')'
//! ```
//!
//! Identifiers keep their bracket argument as raw text so each algebra can
//! interpret it (`k[1,-1]`, `c[2,0]`, `d[e1*e2]`).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::scalar::{QExp, QField, RatFunc, ScalarError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExprError {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown symbol `{0}`")]
    Unknown(String),
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Int(BigInt),
    Ident { name: String, args: Option<String> },
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    Pow(Box<Expr>, BigRational),
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, msg: &str) -> Result<T, ExprError> {
        Err(ExprError::Syntax { pos: self.pos, msg: msg.to_string() })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn int(&mut self) -> Result<BigInt, ExprError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected integer");
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        Ok(s.parse().unwrap())
    }

    fn sum(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.term()?;
        loop {
            if self.eat(b'+') {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat(b'-') {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat(b'*') {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if self.eat(b'/') {
                lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, ExprError> {
        if self.eat(b'-') {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ExprError> {
        let base = self.atom()?;
        if !self.eat(b'^') {
            return Ok(base);
        }
        let e = if self.eat(b'(') {
            let neg = self.eat(b'-');
            let n = self.int()?;
            let d = if self.eat(b'/') { self.int()? } else { BigInt::one() };
            if !self.eat(b')') {
                return self.err("expected `)` after exponent");
            }
            if d.is_zero() {
                return self.err("zero denominator in exponent");
            }
            let r = BigRational::new(n, d);
            if neg {
                -r
            } else {
                r
            }
        } else {
            let neg = self.eat(b'-');
            let n = BigRational::from_integer(self.int()?);
            if neg {
                -n
            } else {
                n
            }
        };
        Ok(Expr::Pow(Box::new(base), e))
    }

    fn atom(&mut self) -> Result<Expr, ExprError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.sum()?;
                if !self.eat(b')') {
                    return self.err("expected `)`");
                }
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => Ok(Expr::Int(self.int()?)),
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap().to_string();
                let args = if self.pos < self.src.len() && self.src[self.pos] == b'[' {
                    let open = self.pos + 1;
                    let mut depth = 0usize;
                    loop {
                        match self.src.get(self.pos) {
                            None => return self.err("unclosed `[`"),
                            Some(b'[') => depth += 1,
                            Some(b']') => {
                                depth -= 1;
                                if depth == 0 {
                                    break;
                                }
                            }
                            _ => {}
                        }
                        self.pos += 1;
                    }
                    let raw = std::str::from_utf8(&self.src[open..self.pos]).unwrap().to_string();
                    self.pos += 1;
                    Some(raw)
                } else {
                    None
                };
                Ok(Expr::Ident { name, args })
            }
            Some(_) => self.err("unexpected character"),
            None => self.err("unexpected end of input"),
        }
    }
}

pub fn parse(src: &str) -> Result<Expr, ExprError> {
    let mut p = Parser { src: src.as_bytes(), pos: 0 };
    let e = p.sum()?;
    if p.peek().is_some() {
        return p.err("trailing input");
    }
    Ok(e)
}

/// Parse a comma separated list of integers, e.g. the inside of `k[1,-1]`.
pub fn parse_int_list(raw: &str) -> Result<Vec<i64>, ExprError> {
    if raw.trim().is_empty() {
        return Ok(Vec::new());
    }
    raw.split(',')
        .map(|s| {
            s.trim().parse::<i64>().map_err(|_| ExprError::Invalid(format!("expected integer, found `{}`", s.trim())))
        })
        .collect()
}

fn rational_to_qexp(r: &BigRational) -> Result<QExp, ExprError> {
    let n = r.numer().to_i64().ok_or_else(|| ExprError::Invalid("exponent too large".into()))?;
    let d = r.denom().to_i64().ok_or_else(|| ExprError::Invalid("exponent too large".into()))?;
    Ok(QExp::ratio(n, d)?)
}

/// A target algebra for evaluating parsed expressions.
pub trait ExprTarget: Clone {
    fn from_scalar(c: RatFunc) -> Self;
    fn ident(name: &str, args: Option<&str>) -> Result<Self, ExprError>;
    fn add(self, o: Self) -> Self;
    fn mul(self, o: Self) -> Result<Self, ExprError>;
    fn scale(self, c: &RatFunc) -> Self;
    fn neg(self) -> Self {
        self.scale(&-RatFunc::one())
    }
}

impl Expr {
    /// Evaluate if the expression only involves numbers and `q`.
    pub fn as_scalar(&self) -> Result<Option<RatFunc>, ExprError> {
        Ok(match self {
            Expr::Int(n) => Some(RatFunc::from_rational(BigRational::from_integer(n.clone()))),
            Expr::Ident { name, args: None } if name == "q" => Some(RatFunc::q_pow(QExp::int(1))),
            Expr::Ident { .. } => None,
            Expr::Add(a, b) => match (a.as_scalar()?, b.as_scalar()?) {
                (Some(x), Some(y)) => Some(x + y),
                _ => None,
            },
            Expr::Sub(a, b) => match (a.as_scalar()?, b.as_scalar()?) {
                (Some(x), Some(y)) => Some(x - y),
                _ => None,
            },
            Expr::Mul(a, b) => match (a.as_scalar()?, b.as_scalar()?) {
                (Some(x), Some(y)) => Some(x * y),
                _ => None,
            },
            Expr::Div(a, b) => match (a.as_scalar()?, b.as_scalar()?) {
                (Some(x), Some(y)) => Some(x.try_div(&y)?),
                _ => None,
            },
            Expr::Neg(a) => a.as_scalar()?.map(|x| -x),
            Expr::Pow(a, e) => {
                if let Expr::Ident { name, args: None } = a.as_ref() {
                    if name == "q" {
                        return Ok(Some(RatFunc::q_pow(rational_to_qexp(e)?)));
                    }
                }
                match a.as_scalar()? {
                    Some(x) => {
                        if !e.is_integer() {
                            return Err(ExprError::Invalid("fractional powers are only defined for q".into()));
                        }
                        let k = e.to_integer().to_i64().unwrap_or(i64::MAX);
                        let base = if k < 0 { x.inv()? } else { x };
                        let mut acc = RatFunc::one();
                        for _ in 0..k.unsigned_abs() {
                            acc = acc * base.clone();
                        }
                        Some(acc)
                    }
                    None => None,
                }
            }
        })
    }

    pub fn eval<T: ExprTarget>(&self) -> Result<T, ExprError> {
        if let Some(c) = self.as_scalar()? {
            return Ok(T::from_scalar(c));
        }
        match self {
            Expr::Int(_) => unreachable!(),
            Expr::Ident { name, args } => T::ident(name, args.as_deref()),
            Expr::Add(a, b) => Ok(a.eval::<T>()?.add(b.eval()?)),
            Expr::Sub(a, b) => Ok(a.eval::<T>()?.add(b.eval::<T>()?.neg())),
            Expr::Mul(a, b) => {
                if let Some(c) = a.as_scalar()? {
                    return Ok(b.eval::<T>()?.scale(&c));
                }
                if let Some(c) = b.as_scalar()? {
                    return Ok(a.eval::<T>()?.scale(&c));
                }
                a.eval::<T>()?.mul(b.eval()?)
            }
            Expr::Div(a, b) => match b.as_scalar()? {
                Some(c) => Ok(a.eval::<T>()?.scale(&c.inv()?)),
                None => Err(ExprError::Invalid("can only divide by scalars".into())),
            },
            Expr::Neg(a) => Ok(a.eval::<T>()?.neg()),
            Expr::Pow(a, e) => {
                if !e.is_integer() || e.is_negative() {
                    return Err(ExprError::Invalid("algebra elements only take non-negative integer powers".into()));
                }
                let k = e.to_integer().to_u32().ok_or_else(|| ExprError::Invalid("power too large".into()))?;
                let base = a.eval::<T>()?;
                let mut acc = T::from_scalar(RatFunc::one());
                for _ in 0..k {
                    acc = acc.mul(base.clone())?;
                }
                Ok(acc)
            }
        }
    }
}

/// An identifier with its raw bracket argument.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Atom {
    pub name: String,
    pub args: Option<String>,
}

/// A linear combination of words in atoms; each algebra interprets the atoms.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Formal {
    pub terms: Vec<(RatFunc, Vec<Atom>)>,
}

impl ExprTarget for Formal {
    fn from_scalar(c: RatFunc) -> Self {
        Formal { terms: vec![(c, Vec::new())] }
    }

    fn ident(name: &str, args: Option<&str>) -> Result<Self, ExprError> {
        let a = Atom { name: name.to_string(), args: args.map(str::to_string) };
        Ok(Formal { terms: vec![(RatFunc::one(), vec![a])] })
    }

    fn add(mut self, o: Self) -> Self {
        self.terms.extend(o.terms);
        self
    }

    fn mul(self, o: Self) -> Result<Self, ExprError> {
        let mut terms = Vec::new();
        for (a, x) in &self.terms {
            for (b, y) in &o.terms {
                let mut w = x.clone();
                w.extend(y.iter().cloned());
                terms.push((a.clone() * b.clone(), w));
            }
        }
        Ok(Formal { terms })
    }

    fn scale(self, c: &RatFunc) -> Self {
        Formal { terms: self.terms.into_iter().map(|(a, w)| (a * c.clone(), w)).collect() }
    }
}

/// Parse into a formal combination of atom words.
pub fn parse_formal(src: &str) -> Result<Formal, ExprError> {
    parse(src)?.eval()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_bracketed_identifiers() {
        let e = parse("d[e1*e2] * m[xi1] + 2").unwrap();
        match e {
            Expr::Add(a, _) => match *a {
                Expr::Mul(x, _) => {
                    assert_eq!(*x, Expr::Ident { name: "d".into(), args: Some("e1*e2".into()) })
                }
                _ => panic!(),
            },
            _ => panic!(),
        }
    }

    #[test]
    fn rejects_trailing_garbage() {
        assert!(parse("q + )").is_err());
        assert!(parse("k[1,").is_err());
    }

    #[test]
    fn formal_words_distribute() {
        let f = parse_formal("(d[e1] + 2*m[xi1]) * t[2,0]").unwrap();
        assert_eq!(f.terms.len(), 2);
        assert_eq!(f.terms[1].1.len(), 2);
        assert_eq!(f.terms[1].1[0].name, "m");
        assert_eq!(f.terms[1].0, RatFunc::from_int(2));
        let g = parse_formal("q^(1/2)*e1^2").unwrap();
        assert_eq!(g.terms[0].1.len(), 2);
    }

    #[test]
    fn int_lists() {
        assert_eq!(parse_int_list(" 1, -1 ").unwrap(), vec![1, -1]);
        assert!(parse_int_list("1,x").is_err());
    }
}
