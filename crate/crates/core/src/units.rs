//! Exact time-unit arithmetic.

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Mul};
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, Zero};

/// A nonnegative delay or moment in abstract time units.
///
/// One unit is the shortest realizable delay; every delay in a device is an
/// integer multiple of it. Arithmetic is arbitrary-precision and exact.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TimeUnits(BigUint);

impl TimeUnits {
    pub fn zero() -> Self {
        TimeUnits(BigUint::zero())
    }

    pub fn one() -> Self {
        TimeUnits(BigUint::one())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    /// `self - other`, or `None` when the result would be negative.
    pub fn checked_sub(&self, other: &Self) -> Option<Self> {
        if self.0 >= other.0 {
            Some(TimeUnits(&self.0 - &other.0))
        } else {
            None
        }
    }

    pub fn pow(&self, exponent: u32) -> Self {
        TimeUnits(num_traits::Pow::pow(&self.0, exponent))
    }

    pub fn magnitude(&self) -> &BigUint {
        &self.0
    }

    pub fn into_magnitude(self) -> BigUint {
        self.0
    }

    /// Parses a plain decimal digit string. Signs, whitespace, and empty
    /// strings are rejected; leading zeros are tolerated.
    pub fn from_decimal(text: &str) -> Result<Self, ParseTimeError> {
        if text.is_empty() || !text.bytes().all(|b| b.is_ascii_digit()) {
            return Err(ParseTimeError(text.to_owned()));
        }
        let value = BigUint::parse_bytes(text.as_bytes(), 10).ok_or_else(|| ParseTimeError(text.to_owned()))?;
        Ok(TimeUnits(value))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseTimeError(String);

impl fmt::Display for ParseTimeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "`{}` is not a nonnegative decimal integer", self.0)
    }
}

impl std::error::Error for ParseTimeError {}

impl fmt::Display for TimeUnits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl FromStr for TimeUnits {
    type Err = ParseTimeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        TimeUnits::from_decimal(s)
    }
}

impl From<u64> for TimeUnits {
    fn from(value: u64) -> Self {
        TimeUnits(BigUint::from(value))
    }
}

impl From<u32> for TimeUnits {
    fn from(value: u32) -> Self {
        TimeUnits(BigUint::from(value))
    }
}

impl From<usize> for TimeUnits {
    fn from(value: usize) -> Self {
        TimeUnits(BigUint::from(value))
    }
}

impl From<BigUint> for TimeUnits {
    fn from(value: BigUint) -> Self {
        TimeUnits(value)
    }
}

impl Add for TimeUnits {
    type Output = TimeUnits;
    fn add(self, rhs: TimeUnits) -> TimeUnits {
        TimeUnits(self.0 + rhs.0)
    }
}

impl Add<&TimeUnits> for TimeUnits {
    type Output = TimeUnits;
    fn add(self, rhs: &TimeUnits) -> TimeUnits {
        TimeUnits(self.0 + &rhs.0)
    }
}

impl Add<&TimeUnits> for &TimeUnits {
    type Output = TimeUnits;
    fn add(self, rhs: &TimeUnits) -> TimeUnits {
        TimeUnits(&self.0 + &rhs.0)
    }
}

impl AddAssign<&TimeUnits> for TimeUnits {
    fn add_assign(&mut self, rhs: &TimeUnits) {
        self.0 += &rhs.0;
    }
}

impl Mul for TimeUnits {
    type Output = TimeUnits;
    fn mul(self, rhs: TimeUnits) -> TimeUnits {
        TimeUnits(self.0 * rhs.0)
    }
}

impl Mul<&TimeUnits> for TimeUnits {
    type Output = TimeUnits;
    fn mul(self, rhs: &TimeUnits) -> TimeUnits {
        TimeUnits(self.0 * &rhs.0)
    }
}

impl Mul<&TimeUnits> for &TimeUnits {
    type Output = TimeUnits;
    fn mul(self, rhs: &TimeUnits) -> TimeUnits {
        TimeUnits(&self.0 * &rhs.0)
    }
}

impl Sum for TimeUnits {
    fn sum<I: Iterator<Item = TimeUnits>>(iter: I) -> TimeUnits {
        iter.fold(TimeUnits::zero(), |acc, t| acc + t)
    }
}

impl<'a> Sum<&'a TimeUnits> for TimeUnits {
    fn sum<I: Iterator<Item = &'a TimeUnits>>(iter: I) -> TimeUnits {
        iter.fold(TimeUnits::zero(), |mut acc, t| {
            acc += t;
            acc
        })
    }
}
