//! Exact rational scalars.
//!
//! Every matrix entry and tree weight is a [`Scalar`]. Arithmetic is checked:
//! an `i128` overflow panics instead of wrapping, since a silently wrong tie
//! would corrupt every membership test downstream.

use std::cmp::Ordering;
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{CheckedAdd, CheckedMul, CheckedSub, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Scalar(Ratio<i128>);

impl Scalar {
    pub const ZERO: Scalar = Scalar(Ratio::new_raw(0, 1));
    pub const ONE: Scalar = Scalar(Ratio::new_raw(1, 1));

    pub fn new(numer: i128, denom: i128) -> Scalar {
        assert!(denom != 0, "zero denominator");
        Scalar(Ratio::new(numer, denom))
    }

    pub fn int(v: i64) -> Scalar {
        Scalar(Ratio::from_integer(v as i128))
    }

    pub fn numer(&self) -> i128 {
        *self.0.numer()
    }

    pub fn denom(&self) -> i128 {
        *self.0.denom()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn abs(&self) -> Scalar {
        Scalar(self.0.abs())
    }

    pub fn half(self) -> Scalar {
        self / Scalar::int(2)
    }

    pub fn min(self, other: Scalar) -> Scalar {
        if other < self {
            other
        } else {
            self
        }
    }

    pub fn max(self, other: Scalar) -> Scalar {
        if other > self {
            other
        } else {
            self
        }
    }

    /// Multiply by a small integer.
    pub fn times(self, k: i64) -> Scalar {
        self * Scalar::int(k)
    }

    /// Round towards negative infinity.
    pub fn floor(&self) -> i128 {
        Integer::div_floor(&self.numer(), &self.denom())
    }

    /// Lossy conversion for display and sampling only.
    pub fn to_f64(&self) -> f64 {
        self.numer() as f64 / self.denom() as f64
    }

    /// Render as an exact decimal when the denominator has only the prime
    /// factors 2 and 5, and as `p/q` otherwise.
    pub fn to_decimal_string(&self) -> String {
        let (p, q) = (self.numer(), self.denom());
        if q == 1 {
            return p.to_string();
        }
        let mut twos = 0u32;
        let mut fives = 0u32;
        let mut rest = q;
        while rest % 2 == 0 {
            rest /= 2;
            twos += 1;
        }
        while rest % 5 == 0 {
            rest /= 5;
            fives += 1;
        }
        if rest != 1 {
            return format!("{p}/{q}");
        }
        let digits = twos.max(fives);
        let scale = 10i128.pow(digits);
        let scaled = p * (scale / q);
        let sign = if scaled < 0 { "-" } else { "" };
        let a = scaled.abs();
        format!(
            "{sign}{}.{:0width$}",
            a / scale,
            a % scale,
            width = digits as usize
        )
    }

    /// Least common multiple of the denominators of `values`.
    pub fn common_denominator<'a, I: IntoIterator<Item = &'a Scalar>>(values: I) -> i128 {
        values.into_iter().fold(1i128, |acc, v| acc.lcm(&v.denom()))
    }
}

impl From<i64> for Scalar {
    fn from(v: i64) -> Scalar {
        Scalar::int(v)
    }
}

impl From<i32> for Scalar {
    fn from(v: i32) -> Scalar {
        Scalar::int(v as i64)
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(self, rhs: Scalar) -> Scalar {
        Scalar(self.0.checked_add(&rhs.0).expect("rational overflow in addition"))
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(self, rhs: Scalar) -> Scalar {
        Scalar(self.0.checked_sub(&rhs.0).expect("rational overflow in subtraction"))
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: Scalar) -> Scalar {
        Scalar(self.0.checked_mul(&rhs.0).expect("rational overflow in multiplication"))
    }
}

impl Div for Scalar {
    type Output = Scalar;
    fn div(self, rhs: Scalar) -> Scalar {
        assert!(!rhs.is_zero(), "division by zero");
        let inv = Ratio::new(*rhs.0.denom(), *rhs.0.numer());
        Scalar(self.0.checked_mul(&inv).expect("rational overflow in division"))
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar(-self.0)
    }
}

impl AddAssign for Scalar {
    fn add_assign(&mut self, rhs: Scalar) {
        *self = *self + rhs;
    }
}

impl SubAssign for Scalar {
    fn sub_assign(&mut self, rhs: Scalar) {
        *self = *self - rhs;
    }
}

impl Sum for Scalar {
    fn sum<I: Iterator<Item = Scalar>>(iter: I) -> Scalar {
        iter.fold(Scalar::ZERO, |a, b| a + b)
    }
}

impl<'a> Sum<&'a Scalar> for Scalar {
    fn sum<I: Iterator<Item = &'a Scalar>>(iter: I) -> Scalar {
        iter.fold(Scalar::ZERO, |a, b| a + *b)
    }
}

impl PartialEq<i64> for Scalar {
    fn eq(&self, other: &i64) -> bool {
        *self == Scalar::int(*other)
    }
}

impl PartialOrd<i64> for Scalar {
    fn partial_cmp(&self, other: &i64) -> Option<Ordering> {
        Some(self.cmp(&Scalar::int(*other)))
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.numer())
        } else {
            write!(f, "{}/{}", self.numer(), self.denom())
        }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Scalar {
    type Err = Error;

    /// Accepts integers, `p/q`, and terminating decimals such as `-1.25`.
    fn from_str(s: &str) -> Result<Scalar, Error> {
        let s = s.trim();
        let bad = || Error::Parse(format!("not a rational number: {s:?}"));
        if let Some((p, q)) = s.split_once('/') {
            let p: i128 = p.trim().parse().map_err(|_| bad())?;
            let q: i128 = q.trim().parse().map_err(|_| bad())?;
            if q == 0 {
                return Err(bad());
            }
            return Ok(Scalar::new(p, q));
        }
        if let Some((whole, frac)) = s.split_once('.') {
            if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) || frac.len() > 30 {
                return Err(bad());
            }
            let negative = whole.starts_with('-');
            let w: i128 = if whole == "-" || whole.is_empty() {
                0
            } else {
                whole.parse().map_err(|_| bad())?
            };
            let scale = 10i128.pow(frac.len() as u32);
            let f: i128 = frac.parse().map_err(|_| bad())?;
            let mag = w.abs() * scale + f;
            return Ok(Scalar::new(if negative { -mag } else { mag }, scale));
        }
        let v: i128 = s.parse().map_err(|_| bad())?;
        Ok(Scalar(Ratio::from_integer(v)))
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Scalar, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Int(i64),
            Text(String),
        }
        match Repr::deserialize(deserializer)? {
            Repr::Int(v) => Ok(Scalar::int(v)),
            Repr::Text(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}
