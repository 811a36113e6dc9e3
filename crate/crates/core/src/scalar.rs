//! Scalar abstraction over the two arithmetic backends.
//!
//! Everything identity-bearing runs on [`Rational`] (arbitrary-precision, drift-free);
//! the `f64` backend covers instances whose magnitudes or inputs (decimal `p`) rule
//! exact arithmetic out.

use num_bigint::BigInt;
use num_traits::{Num, Signed, ToPrimitive};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::Rational;

pub trait Scalar: Num + Clone + PartialOrd + fmt::Debug + fmt::Display {
    /// True for backends where `==` is mathematical equality.
    const EXACT: bool;

    fn from_u128(v: u128) -> Self;

    /// num / den as a scalar; `den` must be nonzero.
    fn from_ratio_u128(num: u128, den: u128) -> Self;

    fn to_f64(&self) -> f64;

    /// Rendering for external interfaces: `num/den` for rationals, a
    /// 17-significant-digit decimal for reals.
    fn render(&self) -> String;

    fn from_u64(v: u64) -> Self {
        Self::from_u128(v as u128)
    }

    fn from_usize(v: usize) -> Self {
        Self::from_u128(v as u128)
    }

    /// Nonnegative integer power by repeated squaring.
    fn powu(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base.clone();
            }
            e >>= 1;
            if e > 0 {
                base = base.clone() * base;
            }
        }
        acc
    }
}

impl Scalar for Rational {
    const EXACT: bool = true;

    fn from_u128(v: u128) -> Self {
        Rational::from_integer(BigInt::from(v))
    }

    fn from_ratio_u128(num: u128, den: u128) -> Self {
        Rational::new(BigInt::from(num), BigInt::from(den))
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn render(&self) -> String {
        self.to_string()
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn from_u128(v: u128) -> Self {
        v as f64
    }

    fn from_ratio_u128(num: u128, den: u128) -> Self {
        num as f64 / den as f64
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn render(&self) -> String {
        format_real(*self)
    }
}

/// A probability as given on an external interface: `"3/4"` (exact) or `"0.75"` (float).
#[derive(Debug, Clone, PartialEq)]
pub enum ProbSpec {
    Exact(Rational),
    Float(f64),
}

impl ProbSpec {
    pub fn as_f64(&self) -> f64 {
        match self {
            ProbSpec::Exact(q) => Scalar::to_f64(q),
            ProbSpec::Float(x) => *x,
        }
    }

    pub fn exact(&self) -> Option<&Rational> {
        match self {
            ProbSpec::Exact(q) => Some(q),
            ProbSpec::Float(_) => None,
        }
    }
}

/// Parses `"num/den"`, a bare integer, or a decimal. Decimals force float mode.
pub fn parse_probability(s: &str) -> Result<ProbSpec> {
    let s = s.trim();
    let spec = if let Some((num, den)) = s.split_once('/') {
        let num = BigInt::from_str(num.trim())
            .map_err(|_| Error::InvalidParameter(format!("bad rational numerator in {s:?}")))?;
        let den = BigInt::from_str(den.trim())
            .map_err(|_| Error::InvalidParameter(format!("bad rational denominator in {s:?}")))?;
        if den == BigInt::from(0) {
            return Err(Error::InvalidParameter(format!("zero denominator in {s:?}")));
        }
        ProbSpec::Exact(Rational::new(num, den))
    } else if s.contains(['.', 'e', 'E']) {
        let x: f64 = s
            .parse()
            .map_err(|_| Error::InvalidParameter(format!("bad decimal probability {s:?}")))?;
        ProbSpec::Float(x)
    } else {
        let num = BigInt::from_str(s)
            .map_err(|_| Error::InvalidParameter(format!("bad probability {s:?}")))?;
        ProbSpec::Exact(Rational::from_integer(num))
    };
    let x = spec.as_f64();
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::InvalidParameter(format!("probability {s:?} outside [0,1]")));
    }
    Ok(spec)
}

/// Parses a rational written as `"num/den"` or a bare integer.
pub fn parse_rational(s: &str) -> Result<Rational> {
    match parse_probability_unchecked(s)? {
        ProbSpec::Exact(q) => Ok(q),
        ProbSpec::Float(_) => Err(Error::InvalidParameter(format!(
            "{s:?} is a decimal; an exact rational is required here"
        ))),
    }
}

fn parse_probability_unchecked(s: &str) -> Result<ProbSpec> {
    let s = s.trim();
    if let Some((num, den)) = s.split_once('/') {
        let num = BigInt::from_str(num.trim())
            .map_err(|_| Error::InvalidParameter(format!("bad rational {s:?}")))?;
        let den = BigInt::from_str(den.trim())
            .map_err(|_| Error::InvalidParameter(format!("bad rational {s:?}")))?;
        if den == BigInt::from(0) {
            return Err(Error::InvalidParameter(format!("zero denominator in {s:?}")));
        }
        Ok(ProbSpec::Exact(Rational::new(num, den)))
    } else if s.contains(['.', 'e', 'E']) {
        let x: f64 = s
            .parse()
            .map_err(|_| Error::InvalidParameter(format!("bad decimal {s:?}")))?;
        Ok(ProbSpec::Float(x))
    } else {
        let num = BigInt::from_str(s)
            .map_err(|_| Error::InvalidParameter(format!("bad rational {s:?}")))?;
        Ok(ProbSpec::Exact(Rational::from_integer(num)))
    }
}

/// Fixed-width decimal rendering for reals on external interfaces: 17 significant
/// digits, so round-trips are exact and output never depends on locale.
pub fn format_real(x: f64) -> String {
    format!("{:.16e}", x)
}

/// `num/den` rendering (plain integer when the denominator is 1).
pub fn format_rational(q: &Rational) -> String {
    q.to_string()
}

/// Dot product of an exponent histogram with powers of `p`: sum of `hist[k] * p^k`.
pub fn dot_powers<T: Scalar>(hist: &[u64], p: &T) -> T {
    let mut acc = T::zero();
    let mut pw = T::one();
    for (k, &c) in hist.iter().enumerate() {
        if k > 0 {
            pw = pw * p.clone();
        }
        if c != 0 {
            acc = acc + T::from_u64(c) * pw.clone();
        }
    }
    acc
}

/// True when `|a| <= tol` (used by float-mode checks; exact mode compares directly).
pub fn within(a: f64, tol: f64) -> bool {
    a.abs() <= tol
}

/// Absolute value helper that works for both backends.
pub fn abs_rational(q: &Rational) -> Rational {
    q.abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_forms() {
        assert_eq!(parse_probability("1/2").unwrap(), ProbSpec::Exact(Rational::new(1.into(), 2.into())));
        assert_eq!(parse_probability("0.25").unwrap(), ProbSpec::Float(0.25));
        assert_eq!(parse_probability("1").unwrap(), ProbSpec::Exact(Rational::from_integer(1.into())));
        assert!(parse_probability("3/2").is_err());
        assert!(parse_probability("-0.5").is_err());
        assert!(parse_probability("1/0").is_err());
    }

    #[test]
    fn powu_matches_naive() {
        let p = Rational::new(2.into(), 3.into());
        let mut naive = Rational::from_integer(1.into());
        for e in 0..10u64 {
            assert_eq!(p.powu(e), naive);
            naive *= p.clone();
        }
        assert_eq!(0.5f64.powu(6), 0.015625);
    }

    #[test]
    fn histogram_dot() {
        let p = Rational::new(1.into(), 2.into());
        // 3 + 2 p^2 at p = 1/2 is 7/2
        assert_eq!(dot_powers(&[3, 0, 2], &p), Rational::new(7.into(), 2.into()));
    }

    #[test]
    fn real_formatting_is_fixed_width() {
        assert_eq!(format_real(0.11), "1.1000000000000000e-1");
        assert_eq!(format_real(1.0), "1.0000000000000000e0");
    }
}
