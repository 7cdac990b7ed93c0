//! Exact half-integers for angular-momentum labels.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::Error;

/// A value in ½ℤ, stored as twice its logical value.
///
/// `HalfInt::from_twice(3)` is 3/2.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct HalfInt(i32);

impl HalfInt {
    pub const ZERO: HalfInt = HalfInt(0);
    pub const HALF: HalfInt = HalfInt(1);
    pub const ONE: HalfInt = HalfInt(2);

    #[inline]
    pub const fn from_twice(twice: i32) -> Self {
        HalfInt(twice)
    }

    #[inline]
    pub const fn from_int(n: i32) -> Self {
        HalfInt(2 * n)
    }

    #[inline]
    pub const fn twice(self) -> i32 {
        self.0
    }

    #[inline]
    pub const fn is_integer(self) -> bool {
        self.0 % 2 == 0
    }

    #[inline]
    pub fn to_f64(self) -> f64 {
        f64::from(self.0) / 2.0
    }

    #[inline]
    pub const fn abs(self) -> Self {
        HalfInt(self.0.abs())
    }

    /// The integer value, if this is one.
    pub fn as_int(self) -> Option<i32> {
        self.is_integer().then_some(self.0 / 2)
    }

    /// Exact product, when it lands back in ½ℤ.
    pub fn checked_mul(self, other: HalfInt) -> Option<HalfInt> {
        let p = i64::from(self.0) * i64::from(other.0);
        if p % 2 != 0 {
            return None;
        }
        i32::try_from(p / 2).ok().map(HalfInt)
    }

    /// `true` when `self - other` is an integer.
    #[inline]
    pub const fn same_parity(self, other: HalfInt) -> bool {
        (self.0 - other.0) % 2 == 0
    }

    /// Integer difference `self - other`, if it is one.
    pub fn int_diff(self, other: HalfInt) -> Option<i32> {
        (self - other).as_int()
    }
}

impl Add for HalfInt {
    type Output = HalfInt;
    #[inline]
    fn add(self, rhs: HalfInt) -> HalfInt {
        HalfInt(self.0 + rhs.0)
    }
}

impl Sub for HalfInt {
    type Output = HalfInt;
    #[inline]
    fn sub(self, rhs: HalfInt) -> HalfInt {
        HalfInt(self.0 - rhs.0)
    }
}

impl Neg for HalfInt {
    type Output = HalfInt;
    #[inline]
    fn neg(self) -> HalfInt {
        HalfInt(-self.0)
    }
}

impl Add<i32> for HalfInt {
    type Output = HalfInt;
    #[inline]
    fn add(self, rhs: i32) -> HalfInt {
        HalfInt(self.0 + 2 * rhs)
    }
}

impl Sub<i32> for HalfInt {
    type Output = HalfInt;
    #[inline]
    fn sub(self, rhs: i32) -> HalfInt {
        HalfInt(self.0 - 2 * rhs)
    }
}

impl PartialEq<i32> for HalfInt {
    fn eq(&self, other: &i32) -> bool {
        self.0 == 2 * other
    }
}

impl PartialOrd<i32> for HalfInt {
    fn partial_cmp(&self, other: &i32) -> Option<Ordering> {
        self.0.partial_cmp(&(2 * other))
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.as_int() {
            Some(n) => write!(f, "{n}"),
            None => write!(f, "{}/2", self.0),
        }
    }
}

/// Accepts `"3/2"`, `"1.5"`, `"2"`, `"-1/2"`.
impl FromStr for HalfInt {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let s = s.trim();
        let bad = || Error::Domain(format!("not a half-integer: {s:?}"));
        if let Some((num, den)) = s.split_once('/') {
            let num: i32 = num.trim().parse().map_err(|_| bad())?;
            return match den.trim() {
                "1" => Ok(HalfInt::from_int(num)),
                "2" => Ok(HalfInt(num)),
                _ => Err(bad()),
            };
        }
        if let Ok(n) = s.parse::<i32>() {
            return Ok(HalfInt::from_int(n));
        }
        let x: f64 = s.parse().map_err(|_| bad())?;
        let twice = 2.0 * x;
        if !twice.is_finite() || twice.fract() != 0.0 || twice.abs() > f64::from(i32::MAX) {
            return Err(bad());
        }
        Ok(HalfInt(twice as i32))
    }
}

impl Serialize for HalfInt {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_f64(self.to_f64())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_forms() {
        assert_eq!("3/2".parse::<HalfInt>().unwrap(), HalfInt::from_twice(3));
        assert_eq!("1.5".parse::<HalfInt>().unwrap(), HalfInt::from_twice(3));
        assert_eq!("2".parse::<HalfInt>().unwrap(), HalfInt::from_int(2));
        assert_eq!("-1/2".parse::<HalfInt>().unwrap(), HalfInt::from_twice(-1));
        assert_eq!("4/1".parse::<HalfInt>().unwrap(), HalfInt::from_int(4));
        assert!("1/3".parse::<HalfInt>().is_err());
        assert!("0.3".parse::<HalfInt>().is_err());
        assert!("abc".parse::<HalfInt>().is_err());
    }

    #[test]
    fn display_round_trips() {
        for t in -9..9 {
            let h = HalfInt::from_twice(t);
            assert_eq!(h.to_string().parse::<HalfInt>().unwrap(), h);
        }
    }

    #[test]
    fn exact_products() {
        let half = HalfInt::HALF;
        assert_eq!(half.checked_mul(half), None);
        assert_eq!(
            HalfInt::from_twice(3).checked_mul(HalfInt::from_int(3)),
            Some(HalfInt::from_twice(9))
        );
        assert_eq!(HalfInt::from_int(2).checked_mul(HalfInt::from_int(3)), Some(HalfInt::from_int(6)));
    }

    #[test]
    fn parity() {
        assert!(HalfInt::from_twice(4).is_integer());
        assert!(!HalfInt::from_twice(5).is_integer());
        assert!(HalfInt::from_twice(5).same_parity(HalfInt::HALF));
        assert_eq!(HalfInt::from_twice(5).int_diff(HalfInt::HALF), Some(2));
        assert_eq!(HalfInt::from_twice(5).int_diff(HalfInt::ONE), None);
    }
}
