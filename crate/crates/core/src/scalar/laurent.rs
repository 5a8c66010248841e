use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::QExp;

/// Laurent polynomial in `t = q^{1/EXP_DENOM}` with rational coefficients.
///
/// Terms are kept sorted by ascending exponent with no zero coefficients, so
/// structural equality is mathematical equality.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct LaurentPoly {
    terms: Vec<(i64, BigRational)>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Self::monomial(QExp::ZERO, BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        Self::monomial(QExp::ZERO, c)
    }

    pub fn monomial(e: QExp, c: BigRational) -> Self {
        if c.is_zero() {
            Self::zero()
        } else {
            LaurentPoly { terms: vec![(e.0, c)] }
        }
    }

    /// Builds from arbitrary (possibly repeated, possibly zero) terms.
    pub fn from_terms(terms: impl IntoIterator<Item = (QExp, BigRational)>) -> Self {
        let mut v: Vec<(i64, BigRational)> = terms.into_iter().map(|(e, c)| (e.0, c)).collect();
        v.sort_by_key(|t| t.0);
        let mut out: Vec<(i64, BigRational)> = Vec::with_capacity(v.len());
        for (e, c) in v {
            match out.last_mut() {
                Some((le, lc)) if *le == e => *lc += c,
                _ => out.push((e, c)),
            }
        }
        out.retain(|t| !t.1.is_zero());
        LaurentPoly { terms: out }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0 == 0 && self.terms[0].1.is_one()
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn terms(&self) -> impl Iterator<Item = (QExp, &BigRational)> {
        self.terms.iter().map(|(e, c)| (QExp(*e), c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.terms.first().map(|t| t.0)
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.terms.last().map(|t| t.0)
    }

    pub fn leading_coeff(&self) -> Option<&BigRational> {
        self.terms.last().map(|t| &t.1)
    }

    /// Multiply by `t^k`.
    pub fn shift(&self, k: i64) -> Self {
        LaurentPoly { terms: self.terms.iter().map(|(e, c)| (e + k, c.clone())).collect() }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        LaurentPoly { terms: self.terms.iter().map(|(e, x)| (*e, x * c)).collect() }
    }

    pub fn neg(&self) -> Self {
        LaurentPoly { terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect() }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = Vec::with_capacity(self.terms.len() + o.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() && j < o.terms.len() {
            let (a, b) = (&self.terms[i], &o.terms[j]);
            match a.0.cmp(&b.0) {
                Ordering::Less => {
                    out.push(a.clone());
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b.clone());
                    j += 1;
                }
                Ordering::Equal => {
                    let s = &a.1 + &b.1;
                    if !s.is_zero() {
                        out.push((a.0, s));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.terms[i..]);
        out.extend_from_slice(&o.terms[j..]);
        LaurentPoly { terms: out }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        if self.terms.len() == 1 {
            let (e, c) = &self.terms[0];
            return LaurentPoly { terms: o.terms.iter().map(|(f, d)| (e + f, c * d)).collect() };
        }
        if o.terms.len() == 1 {
            return o.mul(self);
        }
        let lo = self.terms[0].0 + o.terms[0].0;
        let hi = self.terms.last().unwrap().0 + o.terms.last().unwrap().0;
        let span = (hi - lo) as usize + 1;
        if span <= 4 * (self.terms.len() * o.terms.len()) + 64 {
            let mut acc: Vec<BigRational> = vec![BigRational::zero(); span];
            for (e, c) in &self.terms {
                for (f, d) in &o.terms {
                    acc[(e + f - lo) as usize] += c * d;
                }
            }
            let terms =
                acc.into_iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(k, c)| (lo + k as i64, c)).collect();
            LaurentPoly { terms }
        } else {
            let mut v = Vec::with_capacity(self.terms.len() * o.terms.len());
            for (e, c) in &self.terms {
                for (f, d) in &o.terms {
                    v.push((QExp(e + f), c * d));
                }
            }
            Self::from_terms(v)
        }
    }

    pub fn eval(&self, t: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for (e, c) in &self.terms {
            acc += c * pow_rational(t, *e);
        }
        acc
    }

    /// Gcd of all exponents after shifting the lowest to zero; 0 for monomials.
    pub(super) fn exponent_stride(&self) -> i64 {
        let base = match self.min_exp() {
            Some(b) => b,
            None => return 0,
        };
        self.terms.iter().fold(0i64, |g, (e, _)| g.gcd(&(e - base)))
    }

    /// Dense coefficients in `s = t^stride` after shifting the lowest exponent
    /// to zero. Returns (shift, dense).
    pub(super) fn to_dense(&self, stride: i64) -> (i64, Vec<BigRational>) {
        let base = self.min_exp().unwrap_or(0);
        let deg = if let Some(m) = self.max_exp() { ((m - base) / stride) as usize } else { 0 };
        let mut d = vec![BigRational::zero(); deg + 1];
        for (e, c) in &self.terms {
            d[((e - base) / stride) as usize] = c.clone();
        }
        (base, d)
    }

    pub(super) fn from_dense(shift: i64, stride: i64, d: &[BigRational]) -> Self {
        LaurentPoly {
            terms: d
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(k, c)| (shift + k as i64 * stride, c.clone()))
                .collect(),
        }
    }
}

pub(super) fn pow_rational(t: &BigRational, e: i64) -> BigRational {
    if e >= 0 {
        num_traits::pow(t.clone(), e as usize)
    } else {
        num_traits::pow(t.recip(), (-e) as usize)
    }
}

// ---------------------------------------------------------------------------
// Dense univariate polynomials over Q (index = degree), used by the gcd.

pub(super) type Dense = Vec<BigRational>;

fn trim(p: &mut Dense) {
    while p.len() > 1 && p.last().map_or(false, |c| c.is_zero()) {
        p.pop();
    }
    if p.len() == 1 && p[0].is_zero() {
        p.clear();
    }
}

fn degree(p: &Dense) -> Option<usize> {
    if p.is_empty() {
        None
    } else {
        Some(p.len() - 1)
    }
}

/// Remainder of `a` modulo `b` (b nonzero).
fn rem(mut a: Dense, b: &Dense) -> Dense {
    trim(&mut a);
    let db = degree(b).expect("nonzero divisor");
    let lb = b[db].clone();
    while let Some(da) = degree(&a) {
        if da < db {
            break;
        }
        let f = &a[da] / &lb;
        for k in 0..=db {
            let v = &f * &b[k];
            a[da - db + k] -= v;
        }
        a.pop();
        trim(&mut a);
    }
    a
}

/// Quotient of an exact division `a / b`.
pub(super) fn exact_div(a: &Dense, b: &Dense) -> Dense {
    let mut a = a.clone();
    trim(&mut a);
    let db = degree(b).expect("nonzero divisor");
    let da = match degree(&a) {
        Some(d) => d,
        None => return Vec::new(),
    };
    if da < db {
        debug_assert!(false, "exact_div: degree too small");
        return Vec::new();
    }
    let lb = b[db].clone();
    let mut q = vec![BigRational::zero(); da - db + 1];
    for k in (0..=da - db).rev() {
        let f = &a[k + db] / &lb;
        if !f.is_zero() {
            for j in 0..=db {
                let v = &f * &b[j];
                a[k + j] -= v;
            }
        }
        q[k] = f;
    }
    debug_assert!(a.iter().all(|c| c.is_zero()), "exact_div: nonzero remainder");
    q
}

fn make_monic(p: &mut Dense) {
    if let Some(d) = degree(p) {
        let l = p[d].clone();
        if !l.is_one() {
            for c in p.iter_mut() {
                *c = &*c / &l;
            }
        }
    }
}

const PRIME: u64 = 2_305_843_009_213_693_951; // 2^61 - 1

fn mulmod(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % PRIME as u128) as u64
}

fn powmod(mut a: u64, mut e: u64) -> u64 {
    let mut r = 1u64;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a);
        }
        a = mulmod(a, a);
        e >>= 1;
    }
    r
}

fn invmod(a: u64) -> u64 {
    powmod(a, PRIME - 2)
}

fn bigint_mod(x: &BigInt) -> u64 {
    let p = BigInt::from(PRIME);
    let r = x.mod_floor(&p);
    r.to_u64().unwrap()
}

fn reduce_mod(p: &Dense) -> Option<Vec<u64>> {
    let mut out = Vec::with_capacity(p.len());
    for c in p {
        let d = bigint_mod(c.denom());
        if d == 0 {
            return None;
        }
        out.push(mulmod(bigint_mod(c.numer()), invmod(d)));
    }
    Some(out)
}

fn gcd_degree_mod(a: &Dense, b: &Dense) -> Option<usize> {
    let mut x = reduce_mod(a)?;
    let mut y = reduce_mod(b)?;
    // leading coefficients must survive reduction
    if *x.last()? == 0 || *y.last()? == 0 {
        return None;
    }
    fn tr(v: &mut Vec<u64>) {
        while v.last() == Some(&0) {
            v.pop();
        }
    }
    tr(&mut x);
    tr(&mut y);
    while !y.is_empty() {
        // x mod y
        let dy = y.len() - 1;
        let inv = invmod(y[dy]);
        while x.len() > dy {
            let dx = x.len() - 1;
            let f = mulmod(x[dx], inv);
            for k in 0..=dy {
                let v = mulmod(f, y[k]);
                let idx = dx - dy + k;
                x[idx] = (x[idx] + PRIME - v) % PRIME;
            }
            tr(&mut x);
        }
        std::mem::swap(&mut x, &mut y);
    }
    Some(x.len().saturating_sub(1))
}

/// Monic gcd over Q.
pub(super) fn gcd_dense(a: &Dense, b: &Dense) -> Dense {
    let mut a = a.clone();
    let mut b = b.clone();
    trim(&mut a);
    trim(&mut b);
    if a.is_empty() {
        make_monic(&mut b);
        return b;
    }
    if b.is_empty() {
        make_monic(&mut a);
        return a;
    }
    if a.len() == 1 || b.len() == 1 {
        return vec![BigRational::one()];
    }
    if gcd_degree_mod(&a, &b) == Some(0) {
        return vec![BigRational::one()];
    }
    if a.len() < b.len() {
        std::mem::swap(&mut a, &mut b);
    }
    while !b.is_empty() {
        let mut r = rem(a, &b);
        make_monic(&mut r);
        a = b;
        b = r;
    }
    make_monic(&mut a);
    a
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

fn fmt_exponent(e: i64) -> String {
    let (n, d) = QExp(e).as_ratio();
    match (n, d) {
        (1, 1) => "q".to_string(),
        (n, 1) if n > 0 => format!("q^{n}"),
        (n, 1) => format!("q^({n})"),
        (n, d) => format!("q^({n}/{d})"),
    }
}

fn fmt_rational(c: &BigRational) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

impl fmt::Display for LaurentPoly {
    /// Descending exponents, e.g. `3/2*q^(1/2) - q^(-1)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (e, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if *e == 0 {
                write!(f, "{}", fmt_rational(&a))?;
            } else if a.is_one() {
                write!(f, "{}", fmt_exponent(*e))?;
            } else {
                write!(f, "{}*{}", fmt_rational(&a), fmt_exponent(*e))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn display_orders_descending() {
        let p = LaurentPoly::from_terms(vec![
            (QExp::int(-1), r(-1)),
            (QExp::ratio(1, 2).unwrap(), BigRational::new(3.into(), 2.into())),
        ]);
        assert_eq!(p.to_string(), "3/2*q^(1/2) - q^(-1)");
    }

    #[test]
    fn gcd_finds_common_factor() {
        // (s-1)(s+2) and (s-1)(s+3)
        let a = vec![r(-2), r(1), r(1)];
        let b = vec![r(-3), r(2), r(1)];
        assert_eq!(gcd_dense(&a, &b), vec![r(-1), r(1)]);
        let c = vec![r(1), r(1)];
        assert_eq!(gcd_dense(&a, &c), vec![r(1)]);
    }
}
