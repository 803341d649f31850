//! Exact fractions of unbounded integers.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{invalid, Error, Result};

/// A fraction in lowest terms with positive denominator.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rational(BigRational);

impl Rational {
    pub fn new(numer: impl Into<BigInt>, denom: impl Into<BigInt>) -> Result<Self> {
        let denom = denom.into();
        if denom.is_zero() {
            return Err(invalid("zero denominator"));
        }
        Ok(Self(BigRational::new(numer.into(), denom)))
    }

    pub fn from_integer(v: impl Into<BigInt>) -> Self {
        Self(BigRational::from_integer(v.into()))
    }

    pub fn zero() -> Self {
        Self(BigRational::zero())
    }

    pub fn one() -> Self {
        Self(BigRational::one())
    }

    pub fn half() -> Self {
        Self(BigRational::new(BigInt::one(), BigInt::from(2)))
    }

    /// The exact value of a finite double.
    pub fn from_f64(v: f64) -> Result<Self> {
        BigRational::from_float(v)
            .map(Self)
            .ok_or_else(|| invalid(format!("{v} is not a finite real")))
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    /// ⌊self⌋.
    pub fn floor(&self) -> BigInt {
        self.0.floor().to_integer()
    }

    /// {self} = self − ⌊self⌋, always in [0, 1).
    pub fn fract(&self) -> Rational {
        Self(&self.0 - self.0.floor())
    }

    pub fn recip(&self) -> Result<Rational> {
        if self.is_zero() {
            return Err(invalid("reciprocal of zero"));
        }
        Ok(Self(self.0.recip()))
    }

    pub fn square(&self) -> Rational {
        Self(&self.0 * &self.0)
    }

    /// Nearest double (correctly rounded).
    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    pub fn as_big_rational(&self) -> &BigRational {
        &self.0
    }
}

impl From<BigRational> for Rational {
    fn from(r: BigRational) -> Self {
        Self(r)
    }
}

impl From<i64> for Rational {
    fn from(v: i64) -> Self {
        Self::from_integer(v)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

/// Accepts `a/b`, integers and plain decimals such as `0.7` (read exactly as 7/10).
impl FromStr for Rational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || invalid(format!("cannot parse {s:?} as a rational number"));
        if let Some((n, d)) = s.split_once('/') {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            return Rational::new(n, d);
        }
        if let Some((int, frac)) = s.split_once('.') {
            if frac.is_empty() || !frac.bytes().all(|c| c.is_ascii_digit()) {
                return Err(bad());
            }
            let negative = int.starts_with('-');
            let int_digits = int.trim_start_matches(['-', '+']);
            if !int_digits.bytes().all(|c| c.is_ascii_digit()) {
                return Err(bad());
            }
            let digits: BigInt = format!("{int_digits}{frac}").parse().map_err(|_| bad())?;
            let scale = num_traits::pow(BigInt::from(10), frac.len());
            let v = Rational::new(digits, scale)?;
            return Ok(if negative { -v } else { v });
        }
        let n: BigInt = s.parse().map_err(|_| bad())?;
        Ok(Rational::from_integer(n))
    }
}

/// Serialized as `{"num": "...", "den": "..."}` with decimal strings.
impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Rational", 2)?;
        st.serialize_field("num", &self.0.numer().to_string())?;
        st.serialize_field("den", &self.0.denom().to_string())?;
        st.end()
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait<&Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational($trait::$method(&self.0, &rhs.0))
            }
        }
        impl $trait<Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational($trait::$method(self.0, rhs.0))
            }
        }
        impl $trait<&Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational($trait::$method(self.0, &rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
// Division by zero panics, as for the underlying type.
forward_binop!(Div, div);

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl std::iter::Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Self {
        iter.fold(Rational::zero(), |a, b| a + b)
    }
}

/// Dense square matrix of exact values, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalMatrix {
    dim: usize,
    entries: Vec<Rational>,
}

impl RationalMatrix {
    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Rational) -> Self {
        let mut entries = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                entries.push(f(i, j));
            }
        }
        Self { dim, entries }
    }

    pub(crate) fn from_rows(dim: usize, entries: Vec<Rational>) -> Self {
        assert_eq!(entries.len(), dim * dim);
        Self { dim, entries }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Zero-based entry access.
    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.entries[i * self.dim + j]
    }

    pub fn entries(&self) -> &[Rational] {
        &self.entries
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.dim).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn scaled(&self, factor: &Rational) -> RationalMatrix {
        Self {
            dim: self.dim,
            entries: self.entries.iter().map(|e| e * factor).collect(),
        }
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.entries.iter().map(Rational::to_f64).collect()
    }

    /// Rows as nested vectors, for serialization.
    pub fn rows(&self) -> Vec<Vec<Rational>> {
        self.entries.chunks(self.dim.max(1)).map(<[Rational]>::to_vec).collect()
    }
}

impl Serialize for RationalMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.rows().serialize(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d).unwrap()
    }

    #[test]
    fn normalizes() {
        let x = r(6, -4);
        assert_eq!(x.numer(), &BigInt::from(-3));
        assert_eq!(x.denom(), &BigInt::from(2));
        assert!(Rational::new(1, 0).is_err());
    }

    #[test]
    fn floor_and_fract() {
        assert_eq!(r(100, 49).floor(), BigInt::from(2));
        assert_eq!(r(100, 49).fract(), r(2, 49));
        assert_eq!(r(-1, 3).floor(), BigInt::from(-1));
        assert_eq!(r(-1, 3).fract(), r(2, 3));
        assert_eq!(r(4, 1).fract(), Rational::zero());
    }

    #[test]
    fn parsing() {
        assert_eq!("7/10".parse::<Rational>().unwrap(), r(7, 10));
        assert_eq!("0.7".parse::<Rational>().unwrap(), r(7, 10));
        assert_eq!("-1.25".parse::<Rational>().unwrap(), r(-5, 4));
        assert_eq!("3".parse::<Rational>().unwrap(), r(3, 1));
        assert_eq!(" 2 / 4 ".parse::<Rational>().unwrap(), r(1, 2));
        for bad in ["", "a/b", "1/0", "1.", ".5x", "1.2.3"] {
            assert!(bad.parse::<Rational>().is_err(), "{bad}");
        }
    }

    #[test]
    fn serializes_as_strings() {
        let v = serde_json::to_string(&r(-45, 98)).unwrap();
        assert_eq!(v, r#"{"num":"-45","den":"98"}"#);
    }

    #[test]
    fn display() {
        assert_eq!(r(45, 98).to_string(), "45/98");
        assert_eq!(r(4, 2).to_string(), "2");
    }

    proptest! {
        #[test]
        fn fract_in_unit_interval(n in -10_000i64..10_000, d in 1i64..10_000) {
            let x = r(n, d);
            let f = x.fract();
            prop_assert!(!f.is_negative());
            prop_assert!(f < Rational::one());
            prop_assert_eq!(Rational::from_integer(x.floor()) + f, x);
        }
    }
}
