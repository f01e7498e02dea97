//! Exact rationals for every combinatorial quantity.
//!
//! [`Rat`] wraps a reduced `i128` fraction. Arithmetic is checked: an overflow
//! panics with a descriptive message instead of wrapping silently. Values are
//! serialized as `"num/den"` strings.

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use num_traits::{CheckedAdd, CheckedDiv, CheckedMul, CheckedSub, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Rat(Ratio<i128>);

impl Rat {
    pub const ZERO: Rat = Rat(Ratio::new_raw(0, 1));
    pub const ONE: Rat = Rat(Ratio::new_raw(1, 1));

    /// Reduces `num/den`. Panics when `den == 0`.
    pub fn new(num: i128, den: i128) -> Rat {
        Rat(Ratio::new(num, den))
    }

    pub fn int(n: i128) -> Rat {
        Rat(Ratio::from_integer(n))
    }

    pub fn numer(&self) -> i128 {
        *self.0.numer()
    }

    pub fn denom(&self) -> i128 {
        *self.0.denom()
    }

    pub fn abs(self) -> Rat {
        Rat(self.0.abs())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn in_unit_interval(&self) -> bool {
        *self >= Rat::ZERO && *self <= Rat::ONE
    }

    pub fn to_f64(&self) -> f64 {
        self.numer() as f64 / self.denom() as f64
    }

    pub fn floor(&self) -> i128 {
        Integer::div_floor(&self.numer(), &self.denom())
    }

    pub fn ceil(&self) -> i128 {
        -Integer::div_floor(&-self.numer(), &self.denom())
    }

    pub fn recip(self) -> Rat {
        Rat(self.0.recip())
    }

    /// `(self + other) / 2`.
    pub fn midpoint(self, other: Rat) -> Rat {
        (self + other) / Rat::int(2)
    }

    pub fn checked_add(self, rhs: Rat) -> Option<Rat> {
        self.0.checked_add(&rhs.0).map(Rat)
    }

    pub fn checked_sub(self, rhs: Rat) -> Option<Rat> {
        self.0.checked_sub(&rhs.0).map(Rat)
    }

    pub fn checked_mul(self, rhs: Rat) -> Option<Rat> {
        self.0.checked_mul(&rhs.0).map(Rat)
    }

    pub fn to_big(self) -> BigRational {
        BigRational::new(BigInt::from(self.numer()), BigInt::from(self.denom()))
    }

    pub fn from_big(b: &BigRational) -> Result<Rat> {
        match (b.numer().to_i128(), b.denom().to_i128()) {
            (Some(n), Some(d)) => Ok(Rat::new(n, d)),
            _ => Err(Error::Overflow(format!("{b} does not fit in i128/i128"))),
        }
    }

    /// Exact power of two `2^-k`.
    pub fn pow2_neg(k: u32) -> Rat {
        Rat::new(1, 1i128 << k)
    }
}

macro_rules! checked_op {
    ($tr:ident, $m:ident, $checked:ident, $sym:literal) => {
        impl $tr for Rat {
            type Output = Rat;
            fn $m(self, rhs: Rat) -> Rat {
                match self.0.$checked(&rhs.0) {
                    Some(v) => Rat(v),
                    None => panic!("rational overflow in {} {} {}", self, $sym, rhs),
                }
            }
        }
    };
}

checked_op!(Add, add, checked_add, "+");
checked_op!(Sub, sub, checked_sub, "-");
checked_op!(Mul, mul, checked_mul, "*");

impl Div for Rat {
    type Output = Rat;
    fn div(self, rhs: Rat) -> Rat {
        assert!(!rhs.is_zero(), "division by zero rational");
        match self.0.checked_div(&rhs.0) {
            Some(v) => Rat(v),
            None => panic!("rational overflow in {self} / {rhs}"),
        }
    }
}

impl Neg for Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-self.0)
    }
}

impl AddAssign for Rat {
    fn add_assign(&mut self, rhs: Rat) {
        *self = *self + rhs;
    }
}

impl SubAssign for Rat {
    fn sub_assign(&mut self, rhs: Rat) {
        *self = *self - rhs;
    }
}

impl Sum for Rat {
    fn sum<I: Iterator<Item = Rat>>(iter: I) -> Rat {
        iter.fold(Rat::ZERO, |a, b| a + b)
    }
}

impl<'a> Sum<&'a Rat> for Rat {
    fn sum<I: Iterator<Item = &'a Rat>>(iter: I) -> Rat {
        iter.fold(Rat::ZERO, |a, b| a + *b)
    }
}

impl From<i128> for Rat {
    fn from(n: i128) -> Rat {
        Rat::int(n)
    }
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numer(), self.denom())
    }
}

impl fmt::Debug for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rat {
    type Err = Error;

    /// Accepts `"n/d"` with `d > 0` and `gcd(n, d) = 1`, or a bare integer.
    fn from_str(s: &str) -> Result<Rat> {
        let s = s.trim();
        let bad = || Error::Parse(format!("not a rational: {s:?}"));
        match s.split_once('/') {
            None => s.parse::<i128>().map(Rat::int).map_err(|_| bad()),
            Some((n, d)) => {
                let n: i128 = n.trim().parse().map_err(|_| bad())?;
                let d: i128 = d.trim().parse().map_err(|_| bad())?;
                if d <= 0 {
                    return Err(Error::Parse(format!("denominator must be positive: {s:?}")));
                }
                if n.gcd(&d) != 1 && !(n == 0 && d == 1) {
                    return Err(Error::Parse(format!("rational not reduced: {s:?}")));
                }
                Ok(Rat::new(n, d))
            }
        }
    }
}

impl Serialize for Rat {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rat {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Rat, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Shorthand for building rationals in tests and generators.
pub fn r(num: i128, den: i128) -> Rat {
    Rat::new(num, den)
}
