//! Exact scalars for the base field `Q(q^{1/N})`.
//!
//! All algebra in this crate is generic over [`QField`], a field containing a
//! distinguished family of powers `q^e` for rational exponents `e` with
//! denominator dividing [`EXP_DENOM`]. Two implementations are provided:
//!
//! * [`RatFunc`]: the rational function field itself, with canonical reduced
//!   fractions. This is the ground truth for every verification suite.
//! * [`Specialized`]: the image of `RatFunc` under the substitution
//!   `q^{1/EXP_DENOM} = NUM/DEN`, computed in exact rationals. Used as a fast
//!   probabilistic cross-check of exact arithmetic.

mod laurent;
mod parse;
mod qnum;
mod ratfunc;
mod specialized;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::BigRational;

pub use laurent::LaurentPoly;
pub use num_traits::{One, Zero};
pub use parse::parse_scalar;
pub use qnum::{qbinom, qfact, qint};
pub use ratfunc::RatFunc;
pub use specialized::Specialized;

/// Every exponent of `q` is stored as an integer multiple of `1/EXP_DENOM`.
///
/// This is the least common multiple of the minimal `N` of every shipped
/// Cartan type (A1: 2, A2: 3, B2: 1).
pub const EXP_DENOM: i64 = 6;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ScalarError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("exponent {0} is not a multiple of 1/{EXP_DENOM}")]
    Exponent(String),
}

/// A rational exponent of `q`, stored in units of `1/EXP_DENOM`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct QExp(pub i64);

impl QExp {
    pub const ZERO: QExp = QExp(0);

    /// `n/d` as an exponent; fails unless `EXP_DENOM * n / d` is integral.
    pub fn ratio(n: i64, d: i64) -> Result<QExp, ScalarError> {
        if d == 0 || (n * EXP_DENOM) % d != 0 {
            return Err(ScalarError::Exponent(format!("{n}/{d}")));
        }
        Ok(QExp(n * EXP_DENOM / d))
    }

    pub fn int(n: i64) -> QExp {
        QExp(n * EXP_DENOM)
    }

    /// Reduced numerator and denominator of the exponent value.
    pub fn as_ratio(self) -> (i64, i64) {
        let g = num_integer::gcd(self.0, EXP_DENOM);
        (self.0 / g, EXP_DENOM / g)
    }

    pub fn is_integral(self) -> bool {
        self.0 % EXP_DENOM == 0
    }
}

impl Add for QExp {
    type Output = QExp;
    fn add(self, o: QExp) -> QExp {
        QExp(self.0 + o.0)
    }
}

impl Sub for QExp {
    type Output = QExp;
    fn sub(self, o: QExp) -> QExp {
        QExp(self.0 - o.0)
    }
}

impl Neg for QExp {
    type Output = QExp;
    fn neg(self) -> QExp {
        QExp(-self.0)
    }
}

impl Mul<i64> for QExp {
    type Output = QExp;
    fn mul(self, k: i64) -> QExp {
        QExp(self.0 * k)
    }
}

impl fmt::Display for QExp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (n, d) = self.as_ratio();
        if d == 1 {
            write!(f, "{n}")
        } else {
            write!(f, "{n}/{d}")
        }
    }
}

/// A field containing `Q` and the powers `q^e`, `e ∈ (1/EXP_DENOM)Z`.
///
/// The owned operator traits are required; the `*_ref` methods exist so that
/// hot loops can avoid clones where the implementation supports it.
pub trait QField:
    Clone
    + fmt::Debug
    + fmt::Display
    + PartialEq
    + Send
    + Sync
    + 'static
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn q_pow(e: QExp) -> Self;

    fn from_rational(r: BigRational) -> Self;

    fn from_int(n: i64) -> Self {
        Self::from_rational(BigRational::from_integer(n.into()))
    }

    fn inv(&self) -> Result<Self, ScalarError>;

    fn try_div(&self, other: &Self) -> Result<Self, ScalarError> {
        Ok(self.mul_ref(&other.inv()?))
    }

    fn add_ref(&self, o: &Self) -> Self {
        self.clone() + o.clone()
    }

    fn sub_ref(&self, o: &Self) -> Self {
        self.clone() - o.clone()
    }

    fn mul_ref(&self, o: &Self) -> Self {
        self.clone() * o.clone()
    }

    /// `self * q^e`.
    fn mul_q_pow(&self, e: QExp) -> Self {
        if e == QExp::ZERO {
            self.clone()
        } else {
            self.mul_ref(&Self::q_pow(e))
        }
    }

    /// Map an exact scalar into this field. Fails when a denominator vanishes
    /// under the specialization.
    fn from_ratfunc(r: &RatFunc) -> Result<Self, ScalarError>;
}
