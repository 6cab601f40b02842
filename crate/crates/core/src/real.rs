//! Scalars: exact rationals or binary64, behind one trait.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::farey::{ratio_to_f64, ExtRat};

/// Field element usable by the geometric formulas.
pub trait Scalar: Clone + PartialOrd + fmt::Debug + Num + Signed + Send + Sync + 'static {
    fn to_float(&self) -> f64;
    fn from_rational(q: &BigRational) -> Self;
    fn from_i64(n: i64) -> Self;
}

impl Scalar for BigRational {
    fn to_float(&self) -> f64 {
        ratio_to_f64(self.numer(), self.denom())
    }

    fn from_rational(q: &BigRational) -> Self {
        q.clone()
    }

    fn from_i64(n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }
}

impl Scalar for f64 {
    fn to_float(&self) -> f64 {
        *self
    }

    fn from_rational(q: &BigRational) -> Self {
        ratio_to_f64(q.numer(), q.denom())
    }

    fn from_i64(n: i64) -> Self {
        n as f64
    }
}

/// Arithmetic mode for computations that can run exactly.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Arith {
    #[default]
    Exact,
    Float,
}

/// A point of the real projective line over `S`.
#[derive(Clone, Debug, PartialEq)]
pub enum Point<S> {
    Finite(S),
    Infinity,
}

impl<S: Scalar> Point<S> {
    pub fn from_ext(v: &ExtRat) -> Self {
        match v.to_rational() {
            Some(q) => Point::Finite(S::from_rational(&q)),
            None => Point::Infinity,
        }
    }

    pub fn finite(&self) -> Option<&S> {
        match self {
            Point::Finite(x) => Some(x),
            Point::Infinity => None,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Point::Finite(x) => x.to_float(),
            Point::Infinity => f64::INFINITY,
        }
    }

    /// Homogeneous coordinates `(x, 1)` or `(1, 0)`.
    pub(crate) fn homogeneous(&self) -> (S, S) {
        match self {
            Point::Finite(x) => (x.clone(), S::one()),
            Point::Infinity => (S::one(), S::zero()),
        }
    }

    pub(crate) fn from_homogeneous(p: S, q: S) -> Result<Self> {
        if q.is_zero() {
            if p.is_zero() {
                return Err(Error::Undefined);
            }
            Ok(Point::Infinity)
        } else {
            Ok(Point::Finite(p / q))
        }
    }
}

impl Point<BigRational> {
    pub fn to_ext(&self) -> ExtRat {
        match self {
            Point::Finite(q) => ExtRat::from_rational(q),
            Point::Infinity => ExtRat::infinity(),
        }
    }
}

/// Natural logarithm of a positive big integer.
pub fn ln_bigint(n: &BigInt) -> f64 {
    let bits = n.bits();
    if bits <= 1000 {
        return n.to_f64().unwrap_or(f64::NAN).ln();
    }
    let shift = bits - 64;
    (n >> shift).to_f64().unwrap_or(f64::NAN).ln() + shift as f64 * std::f64::consts::LN_2
}

/// Natural logarithm of a positive rational, accurate beyond `f64` range.
pub fn ln_rational(q: &BigRational) -> f64 {
    ln_bigint(q.numer()) - ln_bigint(q.denom())
}

/// A number that stays exact as long as its inputs were exact.
#[derive(Clone, Debug)]
pub enum Real {
    Exact(BigRational),
    Float(f64),
}

impl Real {
    pub fn exact(q: BigRational) -> Self {
        Real::Exact(q)
    }

    pub fn integer(n: i64) -> Self {
        Real::Exact(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Real::Exact(q) => q.to_float(),
            Real::Float(x) => *x,
        }
    }

    pub fn as_exact(&self) -> Option<&BigRational> {
        match self {
            Real::Exact(q) => Some(q),
            Real::Float(_) => None,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Real::Exact(_))
    }

    /// Exact value; binary64 inputs convert to the rational they denote.
    pub fn to_exact(&self) -> Option<BigRational> {
        match self {
            Real::Exact(q) => Some(q.clone()),
            Real::Float(x) => BigRational::from_f64(*x),
        }
    }

    pub fn ln(&self) -> f64 {
        match self {
            Real::Exact(q) => ln_rational(q),
            Real::Float(x) => x.ln(),
        }
    }

    pub fn recip(&self) -> Real {
        match self {
            Real::Exact(q) => Real::Exact(q.recip()),
            Real::Float(x) => Real::Float(1.0 / x),
        }
    }

    pub fn is_positive(&self) -> bool {
        match self {
            Real::Exact(q) => q.is_positive(),
            Real::Float(x) => *x > 0.0,
        }
    }
    /// Square root, exact when numerator and denominator are perfect squares.
    pub fn sqrt(&self) -> Real {
        if let Real::Exact(q) = self {
            if !q.is_negative() {
                let (n, d) = (q.numer().sqrt(), q.denom().sqrt());
                if &(&n * &n) == q.numer() && &(&d * &d) == q.denom() {
                    return Real::Exact(BigRational::new(n, d));
                }
            }
        }
        Real::Float(self.to_f64().sqrt())
    }

    fn combine(
        &self,
        other: &Real,
        exact: impl FnOnce(&BigRational, &BigRational) -> BigRational,
        float: impl FnOnce(f64, f64) -> f64,
    ) -> Real {
        match (self, other) {
            (Real::Exact(a), Real::Exact(b)) => Real::Exact(exact(a, b)),
            _ => Real::Float(float(self.to_f64(), other.to_f64())),
        }
    }
}

impl std::ops::Add for &Real {
    type Output = Real;
    fn add(self, rhs: &Real) -> Real {
        self.combine(rhs, |a, b| a + b, |a, b| a + b)
    }
}

impl std::ops::Sub for &Real {
    type Output = Real;
    fn sub(self, rhs: &Real) -> Real {
        self.combine(rhs, |a, b| a - b, |a, b| a - b)
    }
}

impl std::ops::Mul for &Real {
    type Output = Real;
    fn mul(self, rhs: &Real) -> Real {
        self.combine(rhs, |a, b| a * b, |a, b| a * b)
    }
}

impl std::ops::Div for &Real {
    type Output = Real;
    fn div(self, rhs: &Real) -> Real {
        self.combine(rhs, |a, b| a / b, |a, b| a / b)
    }
}

impl PartialEq for Real {
    fn eq(&self, other: &Self) -> bool {
        self.partial_cmp(other) == Some(Ordering::Equal)
    }
}

impl PartialOrd for Real {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match (self, other) {
            (Real::Exact(a), Real::Exact(b)) => Some(a.cmp(b)),
            _ => self.to_f64().partial_cmp(&other.to_f64()),
        }
    }
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Real::Exact(q) if q.denom().is_one() => write!(f, "{}", q.numer()),
            Real::Exact(q) => write!(f, "{}/{}", q.numer(), q.denom()),
            Real::Float(x) => write!(f, "{x:?}"),
        }
    }
}

impl FromStr for Real {
    type Err = Error;

    /// Parses `a/b` or an integer exactly, a decimal literal exactly, and
    /// anything else `f64` accepts as a float.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Ok(q) = parse_rational(s) {
            return Ok(Real::Exact(q));
        }
        s.parse::<f64>()
            .map(Real::Float)
            .map_err(|_| Error::Parse(format!("not a number: {s:?}")))
    }
}

/// Exact parse of `a/b`, `a`, or a plain decimal such as `-0.25`.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    if let Some((p, q)) = s.split_once('/') {
        let p = BigInt::from_str(p.trim()).map_err(|_| bad())?;
        let q = BigInt::from_str(q.trim()).map_err(|_| bad())?;
        if q.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(p, q));
    }
    if let Some((int, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let negative = int.starts_with('-');
        let int_digits = int.trim_start_matches(['-', '+']);
        if !int_digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let digits = format!("{int_digits}{frac}");
        let mut n = BigInt::from_str_radix(if digits.is_empty() { "0" } else { &digits }, 10)
            .map_err(|_| bad())?;
        if negative {
            n = -n;
        }
        let den = num_traits::pow(BigInt::from(10), frac.len());
        return Ok(BigRational::new(n, den));
    }
    BigInt::from_str(s)
        .map(BigRational::from_integer)
        .map_err(|_| bad())
}

impl Serialize for Real {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Real {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Str(String),
            Int(i64),
            Num(f64),
        }
        match Raw::deserialize(deserializer)? {
            Raw::Str(s) => s.parse().map_err(serde::de::Error::custom),
            Raw::Int(n) => Ok(Real::integer(n)),
            Raw::Num(x) => Ok(Real::Float(x)),
        }
    }
}
