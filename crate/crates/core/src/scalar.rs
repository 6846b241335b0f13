//! Scalar fields used by every kernel in the crate.
//!
//! Two arithmetic modes are supported. [`Rational`] (arbitrary precision) is
//! exact and is the default for all built-in constructors. `f64` is offered for
//! user-supplied data; every zero test in float mode goes through a
//! [`Tolerance`].

use std::fmt::{Debug, Display};

use num_bigint::BigInt;
use num_traits::{Num, Signed, ToPrimitive, Zero};

use crate::linalg::Matrix;

/// Arbitrary-precision rational number.
pub type Rational = num_rational::BigRational;

/// Absolute threshold used by float mode. Ignored by exact scalars.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance(pub f64);

impl Tolerance {
    pub const DEFAULT: Tolerance = Tolerance(1e-9);

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn squared(self) -> Tolerance {
        Tolerance(self.0 * self.0)
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Self::DEFAULT
    }
}

/// Arithmetic mode selector, mirrored by the `--mode` CLI flag.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Float,
}

/// A field element usable by the linear algebra kernels.
pub trait Scalar:
    Num + Signed + Clone + PartialOrd + Debug + Display + Send + Sync + 'static
{
    const MODE: Mode;

    fn from_i64(v: i64) -> Self;
    fn from_rational(r: &Rational) -> Self;
    fn to_f64(&self) -> f64;

    /// Zero test: exact equality for rationals, `|x| <= tol` for floats.
    fn is_negligible(&self, tol: Tolerance) -> bool;

    /// Right null space of `m`. Mode specific: row reduction for rationals,
    /// singular-value threshold for floats.
    fn kernel_of(m: &Matrix<Self>, tol: Tolerance) -> Vec<Vec<Self>>;

    fn half() -> Self {
        Self::one() / Self::from_i64(2)
    }

    /// Equality up to a tolerance relative to the magnitudes involved.
    fn approx_eq(&self, other: &Self, tol: Tolerance) -> bool {
        let scale = self.abs().to_f64().max(other.abs().to_f64()).max(1.0);
        (self.clone() - other.clone()).is_negligible(Tolerance(tol.0 * scale))
    }
}

impl Scalar for Rational {
    const MODE: Mode = Mode::Exact;

    fn from_i64(v: i64) -> Self {
        Rational::from_integer(BigInt::from(v))
    }

    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn is_negligible(&self, _tol: Tolerance) -> bool {
        self.is_zero()
    }

    fn kernel_of(m: &Matrix<Self>, tol: Tolerance) -> Vec<Vec<Self>> {
        crate::linalg::kernel_by_elimination(m, tol)
    }

    fn approx_eq(&self, other: &Self, _tol: Tolerance) -> bool {
        self == other
    }
}

impl Scalar for f64 {
    const MODE: Mode = Mode::Float;

    fn from_i64(v: i64) -> Self {
        v as f64
    }

    fn from_rational(r: &Rational) -> Self {
        ToPrimitive::to_f64(r).unwrap_or(f64::NAN)
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn is_negligible(&self, tol: Tolerance) -> bool {
        self.abs() <= tol.0
    }

    fn kernel_of(m: &Matrix<Self>, tol: Tolerance) -> Vec<Vec<Self>> {
        crate::linalg::kernel_by_svd(m, tol)
    }
}

/// Parses `7`, `-3/4` or a finite decimal such as `0.25` into an exact rational.
pub fn parse_rational(text: &str) -> Option<Rational> {
    let text = text.trim();
    if let Some((num, den)) = text.split_once('/') {
        let num: BigInt = num.trim().parse().ok()?;
        let den: BigInt = den.trim().parse().ok()?;
        if den.is_zero() {
            return None;
        }
        return Some(Rational::new(num, den));
    }
    if let Some((int, frac)) = text.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let negative = int.starts_with('-');
        let int_part: BigInt = match int {
            "" | "-" | "+" => BigInt::zero(),
            s => s.parse().ok()?,
        };
        let scale = num_traits::pow(BigInt::from(10), frac.len());
        let frac_part: BigInt = frac.parse().ok()?;
        let magnitude = int_part.abs() * &scale + frac_part;
        let num = if negative { -magnitude } else { magnitude };
        return Some(Rational::new(num, scale));
    }
    text.parse::<BigInt>().ok().map(Rational::from_integer)
}

/// Integer shorthand used throughout the constructors and tests.
pub fn int<S: Scalar>(v: i64) -> S {
    S::from_i64(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_rational_forms() {
        assert_eq!(parse_rational("7"), Some(int::<Rational>(7)));
        assert_eq!(
            parse_rational("-3/4"),
            Some(Rational::new((-3).into(), 4.into()))
        );
        assert_eq!(
            parse_rational("-0.25"),
            Some(Rational::new((-1).into(), 4.into()))
        );
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("abc"), None);
        assert_eq!(parse_rational("1."), None);
    }

    #[test]
    fn float_zero_test_uses_tolerance() {
        assert!(1e-12_f64.is_negligible(Tolerance::DEFAULT));
        assert!(!1e-6_f64.is_negligible(Tolerance::DEFAULT));
        let tiny = Rational::new(1.into(), BigInt::from(10).pow(30));
        assert!(!tiny.is_negligible(Tolerance::DEFAULT));
    }
}
