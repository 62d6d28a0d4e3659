use std::fmt::{Debug, Display};
use std::ops::{AddAssign, MulAssign, Neg, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{NumOps, One, Zero};

use crate::Cyclo;

/// Exact field of characteristic zero used as the coefficient ring of every model.
pub trait Scalar:
    Clone
    + Debug
    + Display
    + PartialEq
    + Send
    + Sync
    + Zero
    + One
    + NumOps
    + Neg<Output = Self>
    + for<'a> AddAssign<&'a Self>
    + for<'a> SubAssign<&'a Self>
    + for<'a> MulAssign<&'a Self>
    + 'static
{
    fn inverse(&self) -> Option<Self>;
    fn from_rational(r: BigRational) -> Self;
    fn conjugate(&self) -> Self;
    fn as_rational(&self) -> Option<BigRational>;
    /// `zeta_order^power` when the field contains it.
    fn root_of_unity(order: u32, power: i64) -> Option<Self>;

    fn from_i64(v: i64) -> Self {
        Self::from_rational(BigRational::from_integer(BigInt::from(v)))
    }

    fn ratio(p: i64, q: i64) -> Self {
        Self::from_rational(BigRational::new(BigInt::from(p), BigInt::from(q)))
    }

    fn powi(&self, e: i64) -> Option<Self> {
        let base = if e < 0 { self.inverse()? } else { self.clone() };
        let mut acc = Self::one();
        for _ in 0..e.unsigned_abs() {
            acc = acc * base.clone();
        }
        Some(acc)
    }
}

impl Scalar for Cyclo {
    fn inverse(&self) -> Option<Self> {
        Cyclo::inverse(self)
    }
    fn from_rational(r: BigRational) -> Self {
        Cyclo::from_rational(r)
    }
    fn conjugate(&self) -> Self {
        self.conj()
    }
    fn as_rational(&self) -> Option<BigRational> {
        self.to_rational()
    }
    fn root_of_unity(order: u32, power: i64) -> Option<Self> {
        (order > 0).then(|| Cyclo::root_of_unity(order, power))
    }
    fn powi(&self, e: i64) -> Option<Self> {
        if e < 0 && self.is_zero() {
            return None;
        }
        Some(self.pow(e))
    }
}

impl Scalar for BigRational {
    fn inverse(&self) -> Option<Self> {
        (!self.is_zero()).then(|| self.recip())
    }
    fn from_rational(r: BigRational) -> Self {
        r
    }
    fn conjugate(&self) -> Self {
        self.clone()
    }
    fn as_rational(&self) -> Option<BigRational> {
        Some(self.clone())
    }
    fn root_of_unity(order: u32, power: i64) -> Option<Self> {
        match order {
            1 => Some(Self::one()),
            2 => Some(if power.rem_euclid(2) == 0 { Self::one() } else { -Self::one() }),
            _ if power.rem_euclid(order as i64) == 0 => Some(Self::one()),
            _ if order.is_multiple_of(2) && power.rem_euclid(order as i64) == (order / 2) as i64 => Some(-Self::one()),
            _ => None,
        }
    }
}
