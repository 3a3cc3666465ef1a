//! Scalar fields used throughout the crate.
//!
//! Group and Lie-algebra computations are carried out over exact rationals
//! ([`Rational`]). Anything that needs a square root of a non-square length,
//! or a Fock-state exponential, is evaluated in double precision. The
//! [`Scalar`] trait lets the polynomial and group code run unchanged over
//! either field.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational in canonical form.
pub type Rational = num_rational::BigRational;

/// Complex double used for coefficients and state values.
pub type ComplexValue = Complex64;

/// Field operations needed by the polynomial transport operators and the
/// composition law.
pub trait Scalar:
    Clone
    + PartialEq
    + fmt::Debug
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn from_rational(q: &Rational) -> Self;

    /// Equality up to the rounding of the field: exact for rationals.
    fn near(&self, other: &Self) -> bool;
}

/// Relative tolerance of [`Scalar::near`] on doubles.
pub const F64_NEAR: f64 = 1e-12;

impl Scalar for Rational {
    fn from_rational(q: &Rational) -> Self {
        q.clone()
    }

    fn near(&self, other: &Self) -> bool {
        self == other
    }
}

impl Scalar for f64 {
    fn from_rational(q: &Rational) -> Self {
        rat_to_f64(q)
    }

    fn near(&self, other: &Self) -> bool {
        (self - other).abs() <= F64_NEAR * self.abs().max(other.abs()).max(1.0)
    }
}

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn rat_to_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

/// Formats a rational as the canonical `"p/q"` string used in JSON documents.
pub fn format_rational(q: &Rational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

/// Parses `"p/q"` or a bare integer `"p"`. The result is reduced.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("invalid rational {s:?}"));
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(Error::Parse(format!("zero denominator in {s:?}")));
    }
    Ok(Rational::new(num, den))
}

fn exact_isqrt(v: &BigInt) -> Option<BigInt> {
    let r = v.sqrt();
    if &(&r * &r) == v {
        Some(r)
    } else {
        None
    }
}

/// Exact square root of a non-negative rational, when it exists.
pub fn rat_sqrt_exact(q: &Rational) -> Result<Option<Rational>> {
    if q.is_negative() {
        return Err(Error::Domain(format!(
            "square root of negative rational {}",
            format_rational(q)
        )));
    }
    let num = exact_isqrt(q.numer());
    let den = exact_isqrt(q.denom());
    Ok(match (num, den) {
        (Some(n), Some(d)) => Some(Rational::new(n, d)),
        _ => None,
    })
}

/// A value that is exact when possible and a double otherwise.
#[derive(Debug, Clone, PartialEq)]
pub enum ExactOrFloat {
    Exact(Rational),
    Float(f64),
}

impl ExactOrFloat {
    pub fn is_exact(&self) -> bool {
        matches!(self, ExactOrFloat::Exact(_))
    }

    pub fn exact(&self) -> Option<&Rational> {
        match self {
            ExactOrFloat::Exact(q) => Some(q),
            ExactOrFloat::Float(_) => None,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            ExactOrFloat::Exact(q) => rat_to_f64(q),
            ExactOrFloat::Float(x) => *x,
        }
    }
}

fn rat_powi(base: &Rational, exp: i64) -> Rational {
    let mut acc = Rational::one();
    for _ in 0..exp.unsigned_abs() {
        acc *= base;
    }
    if exp < 0 {
        acc.recip()
    } else {
        acc
    }
}

/// `length^(k/2)`, exact whenever `k` is even or `length` is a rational square.
pub fn pow_half_int(length: &Rational, k: i64) -> Result<ExactOrFloat> {
    if !length.is_positive() {
        return Err(Error::Domain(format!(
            "half-integer power of non-positive length {}",
            format_rational(length)
        )));
    }
    if k % 2 == 0 {
        return Ok(ExactOrFloat::Exact(rat_powi(length, k / 2)));
    }
    if let Some(root) = rat_sqrt_exact(length)? {
        return Ok(ExactOrFloat::Exact(rat_powi(&root, k)));
    }
    // length^(k/2) = length^((k-1)/2) * sqrt(length), integer part kept exact
    let whole = rat_powi(length, (k - 1).div_euclid(2));
    Ok(ExactOrFloat::Float(
        rat_to_f64(&whole) * rat_to_f64(length).sqrt(),
    ))
}

/// Principal square root: non-negative real part, cut along the negative
/// real axis with `-x + 0i` mapped to the upper half plane.
pub fn complex_principal_sqrt(z: ComplexValue) -> ComplexValue {
    if z.re == 0.0 && z.im == 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    let r = z.norm();
    if z.re >= 0.0 {
        let t = ((r + z.re) / 2.0).sqrt();
        Complex64::new(t, z.im / (2.0 * t))
    } else {
        let t = ((r - z.re) / 2.0).sqrt();
        let im = if z.im >= 0.0 { t } else { -t };
        Complex64::new(z.im.abs() / (2.0 * t), im)
    }
}

pub(crate) fn ensure_finite(z: ComplexValue, what: &str) -> Result<ComplexValue> {
    if z.re.is_finite() && z.im.is_finite() {
        Ok(z)
    } else {
        Err(Error::Domain(format!("{what} produced a non-finite value")))
    }
}
