//! Nonzero rationals in lowest terms.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// A nonzero rational number, always reduced, with a positive denominator.
///
/// Zero is excluded on purpose: every consumer in this crate works in the
/// multiplicative group of the rationals, and admitting zero would push a
/// special case into each of them.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Rational {
    num: BigInt,
    den: BigInt,
}

impl Rational {
    /// Builds `num/den`, reducing and normalizing the sign into the numerator.
    pub fn new(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Result<Self> {
        let num = num.into();
        let den = den.into();
        if num.is_zero() {
            return Err(Error::InvalidArgument("rational must be nonzero".into()));
        }
        if den.is_zero() {
            return Err(Error::InvalidArgument("denominator must be nonzero".into()));
        }
        let g = num.gcd(&den);
        let mut num = num / &g;
        let mut den = den / g;
        if den.is_negative() {
            num = -num;
            den = -den;
        }
        Ok(Rational { num, den })
    }

    /// Builds the integer `n` as a rational; `n` must be nonzero.
    pub fn from_integer(n: impl Into<BigInt>) -> Result<Self> {
        Self::new(n, BigInt::one())
    }

    pub fn num(&self) -> &BigInt {
        &self.num
    }

    pub fn den(&self) -> &BigInt {
        &self.den
    }

    pub fn is_integer(&self) -> bool {
        self.den.is_one()
    }

    pub fn is_positive(&self) -> bool {
        self.num.is_positive()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn is_neg_one(&self) -> bool {
        self.den.is_one() && (-&self.num).is_one()
    }

    /// True for 1 and -1, the two rationals excluded from pair classification.
    pub fn is_one_or_neg_one(&self) -> bool {
        self.is_one() || self.is_neg_one()
    }

    pub fn mul(&self, other: &Rational) -> Rational {
        // Product of nonzero rationals is nonzero, so new() cannot fail.
        Rational::new(&self.num * &other.num, &self.den * &other.den).unwrap()
    }

    pub fn square(&self) -> Rational {
        self.mul(self)
    }

    pub fn recip(&self) -> Rational {
        Rational::new(self.den.clone(), self.num.clone()).unwrap()
    }

    pub fn neg(&self) -> Rational {
        Rational {
            num: -&self.num,
            den: self.den.clone(),
        }
    }

    /// `self - other`, or `None` when the difference is zero.
    pub fn checked_sub(&self, other: &Rational) -> Option<Rational> {
        let num = &self.num * &other.den - &other.num * &self.den;
        if num.is_zero() {
            return None;
        }
        Some(Rational::new(num, &self.den * &other.den).unwrap())
    }

    /// `self - 1`, or `None` when self is 1.
    pub fn sub_one(&self) -> Option<Rational> {
        let num = &self.num - &self.den;
        if num.is_zero() {
            return None;
        }
        Some(Rational::new(num, self.den.clone()).unwrap())
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

impl FromStr for Rational {
    type Err = Error;

    /// Parses `"a"` or `"a/b"` in decimal; a leading `-` (ASCII or U+2212)
    /// negates the value.
    fn from_str(s: &str) -> Result<Self> {
        let bad = |what: &str| Error::Parse(format!("{what} in rational {s:?}"));
        let (neg, body) = match s.strip_prefix('-').or_else(|| s.strip_prefix('\u{2212}')) {
            Some(rest) => (true, rest),
            None => (false, s),
        };
        let (num_str, den_str) = match body.split_once('/') {
            Some((a, b)) => (a, b),
            None => (body, "1"),
        };
        if num_str.is_empty() || !num_str.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad("bad numerator"));
        }
        if den_str.is_empty() || !den_str.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad("bad denominator"));
        }
        let num: BigInt = num_str.parse().map_err(|_| bad("bad numerator"))?;
        let den: BigInt = den_str.parse().map_err(|_| bad("bad denominator"))?;
        let num = if neg { -num } else { num };
        Rational::new(num, den).map_err(|_| bad("zero value"))
    }
}
