//! Arbitrary-precision integers and exact factorials.

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use std::fmt;
use std::ops::{Add, Mul, Sub};

/// Arbitrary-precision signed integer. Complex Grassmannian degrees and the
/// factorial products feeding them are computed exactly in this type; no
/// floating point is involved until a caller explicitly converts.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExactInteger(BigInt);

impl ExactInteger {
    pub fn from_u64(v: u64) -> Self {
        ExactInteger(BigInt::from(v))
    }

    pub fn from_i64(v: i64) -> Self {
        ExactInteger(BigInt::from(v))
    }

    pub fn one() -> Self {
        ExactInteger(BigInt::from(1u8))
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    /// Exact division; reports the remainder if the division is not exact.
    pub fn div_exact(&self, divisor: &ExactInteger) -> Result<ExactInteger> {
        if divisor.0.is_zero() {
            return Err(Error::Domain("division by zero".into()));
        }
        let r = &self.0 % &divisor.0;
        if !r.is_zero() {
            return Err(Error::NonExactDivision(format!(
                "{} / {} leaves remainder {}",
                self.0, divisor.0, r
            )));
        }
        Ok(ExactInteger(&self.0 / &divisor.0))
    }

    /// Nearest `f64`; loses precision above 2^53 but never panics.
    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::INFINITY)
    }

    pub fn to_u64(&self) -> Option<u64> {
        self.0.to_u64()
    }

    pub fn as_bigint(&self) -> &BigInt {
        &self.0
    }
}

impl fmt::Display for ExactInteger {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl From<u64> for ExactInteger {
    fn from(v: u64) -> Self {
        ExactInteger::from_u64(v)
    }
}

impl Mul for &ExactInteger {
    type Output = ExactInteger;
    fn mul(self, rhs: &ExactInteger) -> ExactInteger {
        ExactInteger(&self.0 * &rhs.0)
    }
}

impl Add for &ExactInteger {
    type Output = ExactInteger;
    fn add(self, rhs: &ExactInteger) -> ExactInteger {
        ExactInteger(&self.0 + &rhs.0)
    }
}

impl Sub for &ExactInteger {
    type Output = ExactInteger;
    fn sub(self, rhs: &ExactInteger) -> ExactInteger {
        ExactInteger(&self.0 - &rhs.0)
    }
}

/// `n!` as an exact integer.
pub fn exact_factorial(n: u64) -> ExactInteger {
    let mut acc = BigInt::from(1u8);
    for i in 2..=n {
        acc *= i;
    }
    ExactInteger(acc)
}
