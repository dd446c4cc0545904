//! Numeric plumbing: the integer capacity abstraction used by the flow
//! engine and helpers for exact rationals.

use std::fmt::{Debug, Display};
use std::ops::{Add, AddAssign, Sub, SubAssign};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::Rational;

/// Integer type usable as an arc capacity.
///
/// Fixed-width types are fast but can overflow under the capacity scaling done
/// by the parametric networks; `BigInt` never does. Routines that receive a
/// `BigInt` network narrow it to `i128` internally whenever the magnitudes
/// allow.
pub trait FlowScalar:
    Clone
    + Ord
    + Debug
    + Display
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + AddAssign
    + SubAssign
    + for<'a> AddAssign<&'a Self>
    + for<'a> SubAssign<&'a Self>
{
    const ARBITRARY_PRECISION: bool;

    fn to_bigint(&self) -> BigInt;
    /// Converts back from an exact integer; `None` if it does not fit.
    fn from_bigint(v: &BigInt) -> Option<Self>;
    fn as_i128(&self) -> Option<i128>;
    fn from_i128(v: i128) -> Option<Self>;
    fn as_f64(&self) -> f64;
    /// Number of significant bits of a non-negative value.
    fn bit_length(&self) -> u64;
    fn pow2(exp: u64) -> Self;
}

impl FlowScalar for i64 {
    const ARBITRARY_PRECISION: bool = false;

    fn to_bigint(&self) -> BigInt {
        BigInt::from(*self)
    }
    fn from_bigint(v: &BigInt) -> Option<Self> {
        v.to_i64()
    }
    fn as_i128(&self) -> Option<i128> {
        Some(*self as i128)
    }
    fn from_i128(v: i128) -> Option<Self> {
        i64::try_from(v).ok()
    }
    fn as_f64(&self) -> f64 {
        *self as f64
    }
    fn bit_length(&self) -> u64 {
        (64 - self.leading_zeros()) as u64
    }
    fn pow2(exp: u64) -> Self {
        1i64 << exp
    }
}

impl FlowScalar for i128 {
    const ARBITRARY_PRECISION: bool = false;

    fn to_bigint(&self) -> BigInt {
        BigInt::from(*self)
    }
    fn from_bigint(v: &BigInt) -> Option<Self> {
        v.to_i128()
    }
    fn as_i128(&self) -> Option<i128> {
        Some(*self)
    }
    fn from_i128(v: i128) -> Option<Self> {
        Some(v)
    }
    fn as_f64(&self) -> f64 {
        *self as f64
    }
    fn bit_length(&self) -> u64 {
        (128 - self.leading_zeros()) as u64
    }
    fn pow2(exp: u64) -> Self {
        1i128 << exp
    }
}

impl FlowScalar for BigInt {
    const ARBITRARY_PRECISION: bool = true;

    fn to_bigint(&self) -> BigInt {
        self.clone()
    }
    fn from_bigint(v: &BigInt) -> Option<Self> {
        Some(v.clone())
    }
    fn as_i128(&self) -> Option<i128> {
        ToPrimitive::to_i128(self)
    }
    fn from_i128(v: i128) -> Option<Self> {
        Some(BigInt::from(v))
    }
    fn as_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::INFINITY)
    }
    fn bit_length(&self) -> u64 {
        self.bits()
    }
    fn pow2(exp: u64) -> Self {
        BigInt::one() << exp
    }
}

/// `num / den` as a normalized rational.
pub fn ratio(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Rational {
    Rational::new(num.into(), den.into())
}

pub fn integer(v: impl Into<BigInt>) -> Rational {
    Rational::from_integer(v.into())
}

/// Always `p/q`, including integral values (`100/1`).
pub fn format_ratio(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parses `p/q`, a plain integer, or a finite decimal such as `0.1`.
pub fn parse_ratio(s: &str) -> Result<Rational> {
    let bad = || Error::BadRational(s.to_string());
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(bad());
        }
        return Ok(Rational::new(p, q));
    }
    if let Some((int, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let negative = int.starts_with('-');
        let int: BigInt = match int.trim_start_matches(['-', '+']) {
            "" => BigInt::zero(),
            digits => digits.parse().map_err(|_| bad())?,
        };
        let frac_val: BigInt = frac.parse().map_err(|_| bad())?;
        let den = num_traits::pow(BigInt::from(10), frac.len());
        let mag = Rational::new(int * &den + frac_val, den);
        return Ok(if negative { -mag } else { mag });
    }
    let v: BigInt = s.parse().map_err(|_| bad())?;
    Ok(Rational::from_integer(v))
}

/// Largest rational `h` such that both `a / h` and `b / h` are integers.
pub fn rational_gcd(a: &Rational, b: &Rational) -> Rational {
    let num = (a.numer() * b.denom()).gcd(&(b.numer() * a.denom()));
    Rational::new(num, a.denom() * b.denom())
}

pub fn ceil_to_int(r: &Rational) -> BigInt {
    r.ceil().to_integer()
}

pub fn rational_to_f64(r: &Rational) -> f64 {
    // Scale down huge fractions before converting so neither side overflows.
    let (n, d) = (r.numer(), r.denom());
    let shift = n.bits().max(d.bits()).saturating_sub(1000);
    let n = ToPrimitive::to_f64(&(n.abs() >> shift)).unwrap_or(f64::INFINITY);
    let d = ToPrimitive::to_f64(&(d >> shift)).unwrap_or(f64::INFINITY);
    if r.is_negative() {
        -n / d
    } else {
        n / d
    }
}
