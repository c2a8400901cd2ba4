//! Exact scalar fields.
//!
//! All linear algebra in this crate is generic over [`Field`], which is only
//! implemented for exact fields: the rationals ([`Rational`]) and the Gaussian
//! rationals ([`GaussianRational`], the field `ℚ(i)`). Ranks over an inexact
//! type would not be trustworthy, so no float implementation is provided.

use std::cmp::Ordering;
use std::fmt;
use std::iter::{Product, Sum};
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::de::{self, Deserializer};
use serde::ser::{SerializeMap, Serializer};
use serde::{Deserialize, Serialize};

use crate::error::ParseScalarError;

/// Arbitrary-precision rational number, always in lowest terms.
pub type Rational = BigRational;

/// An exact field with a conjugation.
pub trait Field:
    Clone
    + PartialEq
    + fmt::Debug
    + fmt::Display
    + Send
    + Sync
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + for<'a> AddAssign<&'a Self>
    + for<'a> SubAssign<&'a Self>
    + for<'a> MulAssign<&'a Self>
    + 'static
{
    /// Field involution; the identity on real fields.
    fn conj(&self) -> Self;

    /// Multiplicative inverse, `None` for zero.
    fn inv(&self) -> Option<Self>;

    /// `Some(sign)` if the element is real, `None` otherwise.
    fn real_sign(&self) -> Option<Ordering>;

    fn from_i64(v: i64) -> Self;

    /// Product without consuming either operand.
    fn mul_ref(&self, rhs: &Self) -> Self;
}

impl Field for Rational {
    fn conj(&self) -> Self {
        self.clone()
    }

    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(self.recip())
        }
    }

    fn real_sign(&self) -> Option<Ordering> {
        Some(self.cmp(&Rational::zero()))
    }

    fn from_i64(v: i64) -> Self {
        Rational::from_integer(BigInt::from(v))
    }

    fn mul_ref(&self, rhs: &Self) -> Self {
        self * rhs
    }
}

/// An element `re + im·i` of the Gaussian rationals.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GaussianRational {
    pub re: Rational,
    pub im: Rational,
}

impl GaussianRational {
    pub fn new(re: Rational, im: Rational) -> Self {
        GaussianRational { re, im }
    }

    pub fn from_ints(re: i64, im: i64) -> Self {
        GaussianRational {
            re: Rational::from_i64(re),
            im: Rational::from_i64(im),
        }
    }

    /// `num/den` as a real Gaussian rational. Panics if `den == 0`.
    pub fn ratio(num: i64, den: i64) -> Self {
        GaussianRational {
            re: Rational::new(BigInt::from(num), BigInt::from(den)),
            im: Rational::zero(),
        }
    }

    pub fn i() -> Self {
        GaussianRational::from_ints(0, 1)
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    /// `|z|² = re² + im²`.
    pub fn norm_sqr(&self) -> Rational {
        &self.re * &self.re + &self.im * &self.im
    }
}

impl Zero for GaussianRational {
    fn zero() -> Self {
        GaussianRational {
            re: Rational::zero(),
            im: Rational::zero(),
        }
    }

    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl One for GaussianRational {
    fn one() -> Self {
        GaussianRational {
            re: Rational::one(),
            im: Rational::zero(),
        }
    }
}

impl From<Rational> for GaussianRational {
    fn from(re: Rational) -> Self {
        GaussianRational {
            re,
            im: Rational::zero(),
        }
    }
}

impl From<i64> for GaussianRational {
    fn from(v: i64) -> Self {
        GaussianRational::from_ints(v, 0)
    }
}

impl<'a> Add<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn add(self, rhs: &'a GaussianRational) -> GaussianRational {
        GaussianRational {
            re: &self.re + &rhs.re,
            im: &self.im + &rhs.im,
        }
    }
}

impl<'a> Sub<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn sub(self, rhs: &'a GaussianRational) -> GaussianRational {
        GaussianRational {
            re: &self.re - &rhs.re,
            im: &self.im - &rhs.im,
        }
    }
}

impl<'a> Mul<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn mul(self, rhs: &'a GaussianRational) -> GaussianRational {
        // Real operands are the overwhelmingly common case.
        if self.im.is_zero() && rhs.im.is_zero() {
            return GaussianRational::from(&self.re * &rhs.re);
        }
        GaussianRational {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }
}

impl<'a> Div<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn div(self, rhs: &'a GaussianRational) -> GaussianRational {
        let inv = rhs.inv().expect("division by zero in GaussianRational");
        self * &inv
    }
}

impl<'a> Neg for &'a GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational {
            re: -&self.re,
            im: -&self.im,
        }
    }
}

macro_rules! forward_owned {
    ($($tr:ident $method:ident),*) => {$(
        impl $tr for GaussianRational {
            type Output = GaussianRational;
            fn $method(self, rhs: GaussianRational) -> GaussianRational {
                (&self).$method(&rhs)
            }
        }
        impl<'a> $tr<&'a GaussianRational> for GaussianRational {
            type Output = GaussianRational;
            fn $method(self, rhs: &'a GaussianRational) -> GaussianRational {
                (&self).$method(rhs)
            }
        }
    )*};
}

forward_owned!(Add add, Sub sub, Mul mul, Div div);

impl Neg for GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational {
            re: -self.re,
            im: -self.im,
        }
    }
}

impl AddAssign<&GaussianRational> for GaussianRational {
    fn add_assign(&mut self, rhs: &GaussianRational) {
        self.re += &rhs.re;
        self.im += &rhs.im;
    }
}

impl SubAssign<&GaussianRational> for GaussianRational {
    fn sub_assign(&mut self, rhs: &GaussianRational) {
        self.re -= &rhs.re;
        self.im -= &rhs.im;
    }
}

impl MulAssign<&GaussianRational> for GaussianRational {
    fn mul_assign(&mut self, rhs: &GaussianRational) {
        *self = &*self * rhs;
    }
}

impl Sum for GaussianRational {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(GaussianRational::zero(), |acc, x| acc + x)
    }
}

impl Product for GaussianRational {
    fn product<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(GaussianRational::one(), |acc, x| acc * x)
    }
}

impl Field for GaussianRational {
    fn conj(&self) -> Self {
        GaussianRational {
            re: self.re.clone(),
            im: -&self.im,
        }
    }

    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        if self.im.is_zero() {
            return Some(GaussianRational::from(self.re.recip()));
        }
        let n = self.norm_sqr();
        Some(GaussianRational {
            re: &self.re / &n,
            im: -(&self.im / &n),
        })
    }

    fn real_sign(&self) -> Option<Ordering> {
        if self.im.is_zero() {
            Some(self.re.cmp(&Rational::zero()))
        } else {
            None
        }
    }

    fn from_i64(v: i64) -> Self {
        GaussianRational::from(v)
    }

    fn mul_ref(&self, rhs: &Self) -> Self {
        self * rhs
    }
}

impl fmt::Debug for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => write!(f, "{}", self.re),
            (true, false) => write!(f, "{}i", self.im),
            (false, false) => {
                if self.im.is_negative() {
                    write!(f, "{}-{}i", self.re, -&self.im)
                } else {
                    write!(f, "{}+{}i", self.re, self.im)
                }
            }
        }
    }
}

/// Parses `"a"` or `"a/b"` with integer `a`, `b` and `b != 0`.
pub fn parse_rational(s: &str) -> Result<Rational, ParseScalarError> {
    let s = s.trim();
    let bad = || ParseScalarError(s.to_string());
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num = BigInt::from_str(num).map_err(|_| bad())?;
    let den = BigInt::from_str(den).map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(num, den))
}

fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

// Serialized as {"re": "a/b", "im": "c/d"}; "im" is omitted when zero.
impl Serialize for GaussianRational {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let len = if self.im.is_zero() { 1 } else { 2 };
        let mut map = serializer.serialize_map(Some(len))?;
        map.serialize_entry("re", &format_rational(&self.re))?;
        if !self.im.is_zero() {
            map.serialize_entry("im", &format_rational(&self.im))?;
        }
        map.end()
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RationalRepr {
    Text(String),
    Int(i64),
}

impl RationalRepr {
    fn into_rational(self) -> Result<Rational, ParseScalarError> {
        match self {
            RationalRepr::Text(s) => parse_rational(&s),
            RationalRepr::Int(v) => Ok(Rational::from_i64(v)),
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ComplexRepr {
    re: Option<RationalRepr>,
    im: Option<RationalRepr>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum ScalarRepr {
    Complex(ComplexRepr),
    Real(RationalRepr),
}

// A bare string or integer is accepted as a real scalar.
impl<'de> Deserialize<'de> for GaussianRational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let repr = ScalarRepr::deserialize(deserializer)?;
        let (re, im) = match repr {
            ScalarRepr::Real(r) => (Some(r), None),
            ScalarRepr::Complex(c) => (c.re, c.im),
        };
        let conv = |r: Option<RationalRepr>| -> Result<Rational, D::Error> {
            match r {
                None => Ok(Rational::zero()),
                Some(r) => r.into_rational().map_err(de::Error::custom),
            }
        };
        Ok(GaussianRational {
            re: conv(re)?,
            im: conv(im)?,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(re: i64, im: i64) -> GaussianRational {
        GaussianRational::from_ints(re, im)
    }

    #[test]
    fn inverse_and_conjugate() {
        let x = g(3, -4);
        assert_eq!(&x * &x.inv().unwrap(), GaussianRational::one());
        assert_eq!(x.conj().conj(), x);
        assert_eq!(x.conj(), g(3, 4));
        assert!(GaussianRational::zero().inv().is_none());
        assert_eq!(&g(0, 1) * &g(0, 1), g(-1, 0));
    }

    #[test]
    fn rationals_are_reduced() {
        let r = parse_rational("6/-4").unwrap();
        assert_eq!(r.numer(), &BigInt::from(-3));
        assert_eq!(r.denom(), &BigInt::from(2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn serde_format() {
        let x = GaussianRational::new(parse_rational("1/2").unwrap(), Rational::from_i64(-3));
        let s = serde_json::to_string(&x).unwrap();
        assert_eq!(s, r#"{"re":"1/2","im":"-3"}"#);
        let back: GaussianRational = serde_json::from_str(&s).unwrap();
        assert_eq!(back, x);
        let real: GaussianRational = serde_json::from_str(r#"{"re":"5"}"#).unwrap();
        assert_eq!(real, g(5, 0));
        let bare: GaussianRational = serde_json::from_str(r#""-2/3""#).unwrap();
        assert_eq!(bare, GaussianRational::ratio(-2, 3));
        assert!(serde_json::from_str::<GaussianRational>(r#"{"re":"1","j":"2"}"#).is_err());
        assert!(serde_json::from_str::<GaussianRational>(r#""1.5""#).is_err());
    }

    #[test]
    fn display() {
        assert_eq!(g(1, -2).to_string(), "1-2i");
        assert_eq!(g(0, 3).to_string(), "3i");
        assert_eq!(GaussianRational::ratio(1, 3).to_string(), "1/3");
    }
}
