use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::laurent::pow_rational;
use super::{QExp, QField, RatFunc, ScalarError};

/// `F` specialized at `q^{1/EXP_DENOM} = NUM/DEN`.
///
/// This is a ring homomorphism on the subring of `RatFunc` whose denominators
/// do not vanish at the point, so any identity that holds exactly also holds
/// here. The converse fails only on a proper algebraic subset.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Specialized<const NUM: i64, const DEN: i64>(pub BigRational);

impl<const NUM: i64, const DEN: i64> Specialized<NUM, DEN> {
    pub fn point() -> BigRational {
        BigRational::new(BigInt::from(NUM), BigInt::from(DEN))
    }

    pub fn value(&self) -> &BigRational {
        &self.0
    }
}

impl<const NUM: i64, const DEN: i64> Zero for Specialized<NUM, DEN> {
    fn zero() -> Self {
        Specialized(BigRational::zero())
    }
    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
}

impl<const NUM: i64, const DEN: i64> One for Specialized<NUM, DEN> {
    fn one() -> Self {
        Specialized(BigRational::one())
    }
}

impl<const NUM: i64, const DEN: i64> Add for Specialized<NUM, DEN> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Specialized(self.0 + o.0)
    }
}

impl<const NUM: i64, const DEN: i64> Sub for Specialized<NUM, DEN> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Specialized(self.0 - o.0)
    }
}

impl<const NUM: i64, const DEN: i64> Mul for Specialized<NUM, DEN> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Specialized(self.0 * o.0)
    }
}

impl<const NUM: i64, const DEN: i64> Neg for Specialized<NUM, DEN> {
    type Output = Self;
    fn neg(self) -> Self {
        Specialized(-self.0)
    }
}

impl<const NUM: i64, const DEN: i64> QField for Specialized<NUM, DEN> {
    fn q_pow(e: QExp) -> Self {
        Specialized(pow_rational(&Self::point(), e.0))
    }

    fn from_rational(r: BigRational) -> Self {
        Specialized(r)
    }

    fn inv(&self) -> Result<Self, ScalarError> {
        if self.0.is_zero() {
            Err(ScalarError::DivisionByZero)
        } else {
            Ok(Specialized(self.0.recip()))
        }
    }

    fn add_ref(&self, o: &Self) -> Self {
        Specialized(&self.0 + &o.0)
    }

    fn sub_ref(&self, o: &Self) -> Self {
        Specialized(&self.0 - &o.0)
    }

    fn mul_ref(&self, o: &Self) -> Self {
        Specialized(&self.0 * &o.0)
    }

    fn from_ratfunc(r: &RatFunc) -> Result<Self, ScalarError> {
        r.eval(&Self::point()).map(Specialized).ok_or(ScalarError::DivisionByZero)
    }
}

impl<const NUM: i64, const DEN: i64> fmt::Display for Specialized<NUM, DEN> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<const NUM: i64, const DEN: i64> fmt::Debug for Specialized<NUM, DEN> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@{}/{}", self.0, NUM, DEN)
    }
}
