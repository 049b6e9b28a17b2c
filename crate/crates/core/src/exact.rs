//! Exact scalars and the combinatorial primitives used by the identity catalog.
//!
//! [`Scalar`] keeps integers on a fast path and only falls back to a reduced
//! big rational when a non-integral value actually appears. Every operation
//! is exact; nothing here ever rounds.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;

/// An arbitrary-precision integer or rational number.
///
/// The `Rational` variant is never integral: any result whose reduced
/// denominator is 1 collapses back to `Integer`, so structural equality is
/// numeric equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Scalar {
    Integer(BigInt),
    Rational(BigRational),
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar::Integer(BigInt::zero())
    }

    pub fn one() -> Self {
        Scalar::Integer(BigInt::one())
    }

    pub fn int(v: i64) -> Self {
        Scalar::Integer(BigInt::from(v))
    }

    /// Builds `numer / denom` in lowest terms. Returns `None` for a zero denominator.
    pub fn ratio(numer: impl Into<BigInt>, denom: impl Into<BigInt>) -> Option<Self> {
        let denom = denom.into();
        if denom.is_zero() {
            return None;
        }
        Some(Self::from_rational(BigRational::new(numer.into(), denom)))
    }

    fn from_rational(r: BigRational) -> Self {
        if r.denom().is_one() {
            Scalar::Integer(r.to_integer())
        } else {
            Scalar::Rational(r)
        }
    }

    fn to_rational(&self) -> BigRational {
        match self {
            Scalar::Integer(i) => BigRational::from_integer(i.clone()),
            Scalar::Rational(r) => r.clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Scalar::Integer(i) if i.is_zero())
    }

    pub fn is_integer(&self) -> bool {
        matches!(self, Scalar::Integer(_))
    }

    pub fn as_integer(&self) -> Option<&BigInt> {
        match self {
            Scalar::Integer(i) => Some(i),
            Scalar::Rational(_) => None,
        }
    }

    pub fn numer(&self) -> BigInt {
        match self {
            Scalar::Integer(i) => i.clone(),
            Scalar::Rational(r) => r.numer().clone(),
        }
    }

    pub fn denom(&self) -> BigInt {
        match self {
            Scalar::Integer(_) => BigInt::one(),
            Scalar::Rational(r) => r.denom().clone(),
        }
    }

    pub fn abs(&self) -> Self {
        match self {
            Scalar::Integer(i) => Scalar::Integer(i.abs()),
            Scalar::Rational(r) => Scalar::Rational(r.abs()),
        }
    }

    /// Exact division; `None` when dividing by zero.
    pub fn checked_div(&self, rhs: &Scalar) -> Option<Scalar> {
        if rhs.is_zero() {
            return None;
        }
        match (self, rhs) {
            (Scalar::Integer(a), Scalar::Integer(b)) => {
                let (q, r) = a.div_rem(b);
                if r.is_zero() {
                    Some(Scalar::Integer(q))
                } else {
                    Some(Self::from_rational(BigRational::new(a.clone(), b.clone())))
                }
            }
            _ => Some(Self::from_rational(self.to_rational() / rhs.to_rational())),
        }
    }

    pub fn pow(&self, exp: u32) -> Scalar {
        match self {
            Scalar::Integer(i) => Scalar::Integer(num_traits::pow(i.clone(), exp as usize)),
            Scalar::Rational(r) => Scalar::Rational(num_traits::pow(r.clone(), exp as usize)),
        }
    }

    /// Integer power with a possibly negative exponent. `None` for `0^k`, `k < 0`.
    pub fn powi(&self, exp: i64) -> Option<Scalar> {
        let mag = u32::try_from(exp.unsigned_abs()).ok()?;
        if exp >= 0 {
            Some(self.pow(mag))
        } else {
            Scalar::one().checked_div(&self.pow(mag))
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Scalar::Integer(i) => i.to_f64().unwrap_or(f64::NAN),
            Scalar::Rational(r) => r.to_f64().unwrap_or(f64::NAN),
        }
    }
}

impl Default for Scalar {
    fn default() -> Self {
        Scalar::zero()
    }
}

impl From<i64> for Scalar {
    fn from(v: i64) -> Self {
        Scalar::int(v)
    }
}

impl From<i32> for Scalar {
    fn from(v: i32) -> Self {
        Scalar::int(v.into())
    }
}

impl From<u32> for Scalar {
    fn from(v: u32) -> Self {
        Scalar::Integer(BigInt::from(v))
    }
}

impl From<BigInt> for Scalar {
    fn from(v: BigInt) -> Self {
        Scalar::Integer(v)
    }
}

impl From<BigRational> for Scalar {
    fn from(v: BigRational) -> Self {
        Scalar::from_rational(v)
    }
}

impl PartialEq<i64> for Scalar {
    fn eq(&self, other: &i64) -> bool {
        matches!(self, Scalar::Integer(i) if *i == BigInt::from(*other))
    }
}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Scalar {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Scalar::Integer(a), Scalar::Integer(b)) => a.cmp(b),
            _ => self.to_rational().cmp(&other.to_rational()),
        }
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident) => {
        impl $trait<&Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                match (self, rhs) {
                    (Scalar::Integer(a), Scalar::Integer(b)) => Scalar::Integer(a.$method(b)),
                    _ => Scalar::from_rational(self.to_rational().$method(rhs.to_rational())),
                }
            }
        }

        impl $trait<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                match (self, rhs) {
                    (Scalar::Integer(a), Scalar::Integer(b)) => Scalar::Integer(a.$method(b)),
                    (a, b) => Scalar::from_rational(a.to_rational().$method(b.to_rational())),
                }
            }
        }

        impl $trait<&Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                (&self).$method(rhs)
            }
        }

        impl $trait<Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                self.$method(&rhs)
            }
        }
    };
}

binop!(Add, add);
binop!(Sub, sub);
binop!(Mul, mul);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Integer(i) => Scalar::Integer(-i),
            Scalar::Rational(r) => Scalar::Rational(-r),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -(self.clone())
    }
}

impl std::iter::Sum for Scalar {
    fn sum<I: Iterator<Item = Scalar>>(iter: I) -> Scalar {
        iter.fold(Scalar::zero(), |acc, x| acc + x)
    }
}

impl std::iter::Product for Scalar {
    fn product<I: Iterator<Item = Scalar>>(iter: I) -> Scalar {
        iter.fold(Scalar::one(), |acc, x| acc * x)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Integer(i) => write!(f, "{i}"),
            Scalar::Rational(r) => write!(f, "{}/{}", r.numer(), r.denom()),
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

    /// Parses `"-7"` or `"3/4"`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || Error::Parse(format!("not an exact scalar: {s:?}"));
        let s = s.trim();
        match s.split_once('/') {
            None => s.parse::<BigInt>().map(Scalar::Integer).map_err(|_| bad()),
            Some((n, d)) => {
                let n: BigInt = n.trim().parse().map_err(|_| bad())?;
                let d: BigInt = d.trim().parse().map_err(|_| bad())?;
                Scalar::ratio(n, d).ok_or_else(bad)
            }
        }
    }
}

// Decimal strings on the wire: values overflow every fixed-width JSON number.
impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// `(-1)^k` as a scalar.
pub fn sign(k: i64) -> Scalar {
    if k.rem_euclid(2) == 0 {
        Scalar::one()
    } else {
        Scalar::int(-1)
    }
}

/// Binomial coefficient C(a, k); zero outside `0 <= k <= a`.
pub fn binomial(a: u32, k: i64) -> Scalar {
    if k < 0 || k > i64::from(a) {
        return Scalar::zero();
    }
    let k = k.min(i64::from(a) - k) as u32;
    let mut acc = BigInt::one();
    // acc * (a - i) / (i + 1) is always integral at step i.
    for i in 0..k {
        acc *= a - i;
        acc /= i + 1;
    }
    Scalar::Integer(acc)
}

/// Rising factorial `a (a+1) ... (a+n-1)`.
pub fn pochhammer(a: impl Into<BigInt>, n: u32) -> Scalar {
    let a = a.into();
    let mut acc = BigInt::one();
    for i in 0..n {
        acc *= &a + i;
        if acc.is_zero() {
            break;
        }
    }
    Scalar::Integer(acc)
}

/// `m! / (m-n)!` as the product `m (m-1) ... (m-n+1)`.
pub fn falling_factorial(m: u32, n: u32) -> Result<Scalar, Error> {
    if n > m {
        return Err(Error::Domain(format!(
            "falling_factorial requires m >= n (got m={m}, n={n})"
        )));
    }
    let acc = (0..n).fold(BigInt::one(), |acc, i| acc * (m - i));
    Ok(Scalar::Integer(acc))
}

pub fn factorial(n: u32) -> Scalar {
    Scalar::Integer((1..=n).fold(BigInt::one(), |acc, i| acc * i))
}

/// `sum_{l=1}^{n} (-1)^l C(n,l) l^(n+1)`, which equals `(-1)^n n! n(n+1)/2`.
pub fn gould_sum(n: u32) -> Scalar {
    (1..=n)
        .map(|l| sign(l.into()) * binomial(n, l.into()) * Scalar::from(l).pow(n + 1))
        .sum()
}

/// The closed form `gould_sum` is known to equal.
pub fn gould_closed_form(n: u32) -> Scalar {
    let tri = BigInt::from(n) * (n + 1) / 2u32;
    sign(n.into()) * factorial(n) * Scalar::Integer(tri)
}
