//! Dual-mode arithmetic: IEEE doubles with tolerance-based comparisons, or exact
//! big rationals with exact comparisons.

use std::fmt::{Debug, Display};
use std::iter::Sum;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num::bigint::BigInt;
use num::rational::BigRational;
use num::traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;

/// Exact rational scalar.
pub type Rational = BigRational;

/// Default compute tolerance for float mode.
pub const TAU: f64 = 1e-9;
/// Tolerance used by the axiom checkers in float mode.
pub const TAU_CHECK: f64 = 1e-7;
/// Absolute tolerance on marginal contributions when detecting null players.
pub const TAU_NULL: f64 = 1e-9;

/// Numeric field used for worths and payoffs.
pub trait Scalar:
    Clone
    + Debug
    + Display
    + PartialEq
    + PartialOrd
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Zero
    + One
    + Sum
{
    /// `true` for exact arithmetic, where every comparison ignores tolerances.
    const EXACT: bool;
    /// Name of the arithmetic mode, used in reports.
    const MODE: &'static str;

    fn from_i64(v: i64) -> Self;
    fn from_ratio(numer: i64, denom: i64) -> Self;
    /// Converts a finite double. Rationals take the exact binary value.
    fn from_f64(v: f64) -> Option<Self>;
    fn to_f64(&self) -> f64;
    fn abs_val(&self) -> Self;
    fn is_finite_val(&self) -> bool;
    /// Parses a decimal (`-1.25`, `3e-2`) or fraction (`1/3`) literal.
    fn parse_literal(s: &str) -> Result<Self, String>;
    /// Draws a worth from `[lo, hi]`. Rationals are drawn on a grid of sixteenths so
    /// that exact runs stay cheap.
    fn sample_uniform<R: Rng + ?Sized>(rng: &mut R, lo: f64, hi: f64) -> Self;

    /// Absolute-or-relative comparison in float mode, exact equality otherwise.
    fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        if Self::EXACT {
            return self == other;
        }
        let (a, b) = (self.to_f64(), other.to_f64());
        (a - b).abs() <= tol * 1f64.max(a.abs()).max(b.abs())
    }

    /// `self >= other` up to the tolerance.
    fn approx_ge(&self, other: &Self, tol: f64) -> bool {
        if Self::EXACT {
            return self >= other;
        }
        let (a, b) = (self.to_f64(), other.to_f64());
        a >= b - tol * 1f64.max(a.abs()).max(b.abs())
    }

    fn is_zero_within(&self, tol: f64) -> bool {
        if Self::EXACT {
            self.is_zero()
        } else {
            self.to_f64().abs() <= tol
        }
    }

    fn powi(&self, k: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..k {
            acc = acc * self.clone();
        }
        acc
    }

    fn from_usize(v: usize) -> Self {
        Self::from_i64(v as i64)
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;
    const MODE: &'static str = "float";

    fn from_i64(v: i64) -> Self {
        v as f64
    }

    fn from_ratio(numer: i64, denom: i64) -> Self {
        numer as f64 / denom as f64
    }

    fn from_f64(v: f64) -> Option<Self> {
        v.is_finite().then_some(v)
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn abs_val(&self) -> Self {
        self.abs()
    }

    fn is_finite_val(&self) -> bool {
        self.is_finite()
    }

    fn parse_literal(s: &str) -> Result<Self, String> {
        let s = s.trim();
        if let Some((p, q)) = s.split_once('/') {
            let p: f64 = p.trim().parse().map_err(|_| format!("invalid numerator in {s:?}"))?;
            let q: f64 = q.trim().parse().map_err(|_| format!("invalid denominator in {s:?}"))?;
            if q == 0.0 {
                return Err(format!("zero denominator in {s:?}"));
            }
            return Ok(p / q);
        }
        let v: f64 = s.parse().map_err(|_| format!("invalid number {s:?}"))?;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(format!("non-finite number {s:?}"))
        }
    }

    fn sample_uniform<R: Rng + ?Sized>(rng: &mut R, lo: f64, hi: f64) -> Self {
        rng.gen_range(lo..=hi)
    }
}

impl Scalar for Rational {
    const EXACT: bool = true;
    const MODE: &'static str = "rational";

    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }

    fn from_ratio(numer: i64, denom: i64) -> Self {
        BigRational::new(BigInt::from(numer), BigInt::from(denom))
    }

    fn from_f64(v: f64) -> Option<Self> {
        BigRational::from_float(v)
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn abs_val(&self) -> Self {
        Signed::abs(self)
    }

    fn is_finite_val(&self) -> bool {
        true
    }

    fn parse_literal(s: &str) -> Result<Self, String> {
        parse_exact(s.trim())
    }

    fn sample_uniform<R: Rng + ?Sized>(rng: &mut R, lo: f64, hi: f64) -> Self {
        let lo = (lo * 16.0).ceil() as i64;
        let hi = (hi * 16.0).floor() as i64;
        Self::from_ratio(rng.gen_range(lo..=hi), 16)
    }
}

fn parse_exact(s: &str) -> Result<Rational, String> {
    if let Some((p, q)) = s.split_once('/') {
        let p = parse_exact(p.trim())?;
        let q = parse_exact(q.trim())?;
        if q.is_zero() {
            return Err(format!("zero denominator in {s:?}"));
        }
        return Ok(p / q);
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(pos) => {
            let e: i32 = s[pos + 1..].parse().map_err(|_| format!("invalid exponent in {s:?}"))?;
            (&s[..pos], e)
        }
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty()
        || !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit())
    {
        return Err(format!("invalid number {s:?}"));
    }
    let all_digits = format!("{int_part}{frac_part}");
    let numer: BigInt = all_digits.parse().map_err(|_| format!("invalid number {s:?}"))?;
    let scale = exponent - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let mut value = BigRational::from_integer(numer);
    if scale >= 0 {
        value *= BigRational::from_integer(num::pow(ten, scale as usize));
    } else {
        value /= BigRational::from_integer(num::pow(ten, (-scale) as usize));
    }
    Ok(if negative { -value } else { value })
}

/// Binomial coefficient as an exact integer (fits `i64` for every `n <= 60`).
pub fn binomial(n: usize, k: usize) -> i64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: i64 = 1;
    for i in 0..k {
        acc = acc * (n - i) as i64 / (i + 1) as i64;
    }
    acc
}

/// Maximum absolute coordinate difference, as a double.
pub fn max_deviation<T: Scalar>(a: &[T], b: &[T]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x.clone() - y.clone()).abs_val().to_f64())
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_literals() {
        assert_eq!(Rational::parse_literal("1/3").unwrap(), Rational::from_ratio(1, 3));
        assert_eq!(Rational::parse_literal("-1.25").unwrap(), Rational::from_ratio(-5, 4));
        assert_eq!(Rational::parse_literal("2.5e-1").unwrap(), Rational::from_ratio(1, 4));
        assert_eq!(Rational::parse_literal("7").unwrap(), Rational::from_i64(7));
        assert!(Rational::parse_literal("1/0").is_err());
        assert!(Rational::parse_literal("abc").is_err());
        assert!(Rational::parse_literal(".").is_err());
    }

    #[test]
    fn float_literals() {
        assert_eq!(f64::parse_literal("1/4").unwrap(), 0.25);
        assert_eq!(f64::parse_literal(" 3.5 ").unwrap(), 3.5);
        assert!(f64::parse_literal("inf").is_err());
    }

    #[test]
    fn tolerance_is_relative_for_large_values() {
        assert!(1e12f64.approx_eq(&(1e12 + 1.0), TAU));
        assert!(!1.0f64.approx_eq(&(1.0 + 1e-6), TAU));
        assert!(!Rational::from_ratio(1, 3).approx_eq(&Rational::from_ratio(333_333, 1_000_000), 1.0));
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), 10);
        assert_eq!(binomial(20, 10), 184_756);
        assert_eq!(binomial(3, 4), 0);
        assert_eq!(binomial(0, 0), 1);
    }
}
