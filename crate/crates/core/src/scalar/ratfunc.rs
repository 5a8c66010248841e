use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::laurent::{exact_div, gcd_dense};
use super::{LaurentPoly, QExp, QField, ScalarError};

/// An element of `F = Q(q^{1/N})` as a reduced fraction of Laurent polynomials.
///
/// Canonical form: the denominator has lowest exponent 0 and leading
/// coefficient 1, and numerator and denominator are coprime. Two fractions are
/// equal iff their canonical representations are identical.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: LaurentPoly,
    den: LaurentPoly,
}

fn compressed(a: &LaurentPoly, b: &LaurentPoly) -> i64 {
    let g = num_integer::gcd(a.exponent_stride(), b.exponent_stride());
    if g == 0 {
        1
    } else {
        g
    }
}

/// Gcd of two nonzero Laurent polynomials, normalized to lowest exponent 0 and
/// leading coefficient 1 (unit ambiguity of `Q[t, 1/t]` removed).
fn laurent_gcd(a: &LaurentPoly, b: &LaurentPoly) -> LaurentPoly {
    if a.is_monomial() || b.is_monomial() {
        return LaurentPoly::one();
    }
    let stride = compressed(a, b);
    let (_, da) = a.to_dense(stride);
    let (_, db) = b.to_dense(stride);
    let g = gcd_dense(&da, &db);
    LaurentPoly::from_dense(0, stride, &g)
}

/// Exact quotient `a / g` where `g` was produced by `laurent_gcd`.
fn laurent_exact_div(a: &LaurentPoly, g: &LaurentPoly) -> LaurentPoly {
    if g.is_one() {
        return a.clone();
    }
    let stride = compressed(a, g);
    let (sa, da) = a.to_dense(stride);
    let (sg, dg) = g.to_dense(stride);
    let q = exact_div(&da, &dg);
    LaurentPoly::from_dense(sa - sg, stride, &q)
}

impl RatFunc {
    fn from_parts_unchecked(num: LaurentPoly, den: LaurentPoly) -> Self {
        RatFunc { num, den }
    }

    /// Fix the unit ambiguity only (inputs already coprime).
    fn normalize_units(num: LaurentPoly, den: LaurentPoly) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        let shift = den.min_exp().unwrap();
        let (num, den) = if shift != 0 { (num.shift(-shift), den.shift(-shift)) } else { (num, den) };
        let lc = den.leading_coeff().unwrap().clone();
        if lc.is_one() {
            RatFunc { num, den }
        } else {
            let inv = lc.recip();
            RatFunc { num: num.scale(&inv), den: den.scale(&inv) }
        }
    }

    /// General constructor: reduces to canonical form.
    pub fn new(num: LaurentPoly, den: LaurentPoly) -> Result<Self, ScalarError> {
        if den.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(Self::zero());
        }
        let g = laurent_gcd(&num, &den);
        let (num, den) =
            if g.is_one() { (num, den) } else { (laurent_exact_div(&num, &g), laurent_exact_div(&den, &g)) };
        Ok(Self::normalize_units(num, den))
    }

    pub fn from_laurent(p: LaurentPoly) -> Self {
        RatFunc { num: p, den: LaurentPoly::one() }
    }

    pub fn numer(&self) -> &LaurentPoly {
        &self.num
    }

    pub fn denom(&self) -> &LaurentPoly {
        &self.den
    }

    /// True when the reduced denominator is 1 (a Laurent polynomial).
    pub fn is_laurent(&self) -> bool {
        self.den.is_one()
    }

    /// Value at `q^{1/EXP_DENOM} = t`; `None` at a pole.
    pub fn eval(&self, t: &BigRational) -> Option<BigRational> {
        let d = self.den.eval(t);
        if d.is_zero() {
            None
        } else {
            Some(self.num.eval(t) / d)
        }
    }

    /// If this is `c q^e` for a rational `c`, return it.
    pub fn as_monomial(&self) -> Option<(BigRational, QExp)> {
        if self.den.is_one() && self.num.is_monomial() {
            let (e, c) = self.num.terms().next().unwrap();
            Some((c.clone(), e))
        } else {
            None
        }
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        match self.as_monomial() {
            Some((c, e)) if e == QExp::ZERO => Some(c),
            _ if self.is_zero() => Some(BigRational::zero()),
            _ => None,
        }
    }

    fn add_impl(&self, o: &Self) -> Self {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        if self.den == o.den {
            let n = self.num.add(&o.num);
            if self.den.is_one() {
                return RatFunc { num: n, den: LaurentPoly::one() };
            }
            return RatFunc::new(n, self.den.clone()).unwrap();
        }
        if self.den.is_one() {
            let n = self.num.mul(&o.den).add(&o.num);
            return Self::normalize_units(n, o.den.clone());
        }
        if o.den.is_one() {
            let n = o.num.mul(&self.den).add(&self.num);
            return Self::normalize_units(n, self.den.clone());
        }
        let g = laurent_gcd(&self.den, &o.den);
        let a = laurent_exact_div(&self.den, &g);
        let b = laurent_exact_div(&o.den, &g);
        let n = self.num.mul(&b).add(&o.num.mul(&a));
        let d = self.den.mul(&b);
        if g.is_one() {
            // lcm denominator of coprime parts: only g-factors could cancel
            Self::normalize_units(n, d)
        } else {
            RatFunc::new(n, d).unwrap()
        }
    }

    fn mul_impl(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        if self.den.is_one() && o.den.is_one() {
            return RatFunc { num: self.num.mul(&o.num), den: LaurentPoly::one() };
        }
        let g1 = laurent_gcd(&self.num, &o.den);
        let g2 = laurent_gcd(&o.num, &self.den);
        let n1 = laurent_exact_div(&self.num, &g1);
        let d2 = laurent_exact_div(&o.den, &g1);
        let n2 = laurent_exact_div(&o.num, &g2);
        let d1 = laurent_exact_div(&self.den, &g2);
        Self::normalize_units(n1.mul(&n2), d1.mul(&d2))
    }

    pub fn recip(&self) -> Result<Self, ScalarError> {
        if self.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        Ok(Self::normalize_units(self.den.clone(), self.num.clone()))
    }
}

impl Zero for RatFunc {
    fn zero() -> Self {
        RatFunc::from_parts_unchecked(LaurentPoly::zero(), LaurentPoly::one())
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

impl One for RatFunc {
    fn one() -> Self {
        RatFunc::from_parts_unchecked(LaurentPoly::one(), LaurentPoly::one())
    }
}

impl Add for RatFunc {
    type Output = RatFunc;
    fn add(self, o: RatFunc) -> RatFunc {
        self.add_impl(&o)
    }
}

impl Sub for RatFunc {
    type Output = RatFunc;
    fn sub(self, o: RatFunc) -> RatFunc {
        self.add_impl(&-o)
    }
}

impl Mul for RatFunc {
    type Output = RatFunc;
    fn mul(self, o: RatFunc) -> RatFunc {
        self.mul_impl(&o)
    }
}

impl<'a> Add<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;
    fn add(self, o: &RatFunc) -> RatFunc {
        self.add_impl(o)
    }
}

impl<'a> Sub<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;
    fn sub(self, o: &RatFunc) -> RatFunc {
        self.add_impl(&-o.clone())
    }
}

impl<'a> Mul<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;
    fn mul(self, o: &RatFunc) -> RatFunc {
        self.mul_impl(o)
    }
}

/// Panics on division by zero; use [`QField::try_div`] for the checked form.
impl Div for RatFunc {
    type Output = RatFunc;
    fn div(self, o: RatFunc) -> RatFunc {
        self.try_div(&o).expect("division by zero")
    }
}

impl Neg for RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc { num: self.num.neg(), den: self.den }
    }
}

impl QField for RatFunc {
    fn q_pow(e: QExp) -> Self {
        RatFunc::from_laurent(LaurentPoly::monomial(e, BigRational::one()))
    }

    fn from_rational(r: BigRational) -> Self {
        RatFunc::from_laurent(LaurentPoly::constant(r))
    }

    fn inv(&self) -> Result<Self, ScalarError> {
        self.recip()
    }

    fn add_ref(&self, o: &Self) -> Self {
        self.add_impl(o)
    }

    fn sub_ref(&self, o: &Self) -> Self {
        self.add_impl(&-o.clone())
    }

    fn mul_ref(&self, o: &Self) -> Self {
        self.mul_impl(o)
    }

    fn mul_q_pow(&self, e: QExp) -> Self {
        if e == QExp::ZERO || self.is_zero() {
            return self.clone();
        }
        Self::normalize_units(self.num.shift(e.0), self.den.clone())
    }

    fn from_ratfunc(r: &RatFunc) -> Result<Self, ScalarError> {
        Ok(r.clone())
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for RatFunc {
    type Err = ScalarError;
    fn from_str(s: &str) -> Result<Self, ScalarError> {
        super::parse_scalar(s)
    }
}

impl serde::Serialize for RatFunc {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> serde::Deserialize<'de> for RatFunc {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> RatFunc {
        RatFunc::q_pow(QExp::int(1))
    }
    fn qi() -> RatFunc {
        RatFunc::q_pow(QExp::int(-1))
    }

    #[test]
    fn q_over_q_is_one() {
        assert_eq!(q().try_div(&q()).unwrap(), RatFunc::one());
    }

    #[test]
    fn difference_times_sum() {
        let a = q() - qi();
        let b = q() + qi();
        let expect = RatFunc::q_pow(QExp::int(2)) - RatFunc::q_pow(QExp::int(-2));
        assert_eq!(a * b, expect);
    }

    #[test]
    fn division_by_zero_is_an_error() {
        assert_eq!(RatFunc::one().try_div(&RatFunc::zero()), Err(ScalarError::DivisionByZero));
    }

    #[test]
    fn pairing_constant_is_reduced() {
        // 1/(q^{-1} - q) = -q/(q^2 - 1)
        let c = RatFunc::one().try_div(&(qi() - q())).unwrap();
        assert_eq!(c.to_string(), "(-q)/(q^2 - 1)");
        assert_eq!(c.clone() * (qi() - q()), RatFunc::one());
    }

    #[test]
    fn cancellation_through_compressed_exponents() {
        // (q - q^{-1}) / (q^{1/2} - q^{-1/2}) = q^{1/2} + q^{-1/2}
        let h = RatFunc::q_pow(QExp::ratio(1, 2).unwrap());
        let hi = RatFunc::q_pow(QExp::ratio(-1, 2).unwrap());
        let x = (q() - qi()).try_div(&(h.clone() - hi.clone())).unwrap();
        assert_eq!(x, h + hi);
        assert!(x.is_laurent());
    }
}
