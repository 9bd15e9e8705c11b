//! Exact rationals for bounds.
//!
//! A thin newtype over [`num_rational::BigRational`] that is always kept in
//! lowest terms with a positive denominator and serializes as `"p/q"`.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Rational(BigRational);

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseRationalError {
    #[error("malformed rational literal `{0}`")]
    Malformed(String),
    #[error("zero denominator in `{0}`")]
    ZeroDenominator(String),
}

impl Rational {
    /// Builds `numer / denom`, reducing to lowest terms.
    ///
    /// Panics if `denom` is zero.
    pub fn new(numer: impl Into<BigInt>, denom: impl Into<BigInt>) -> Self {
        Rational(BigRational::new(numer.into(), denom.into()))
    }

    pub fn from_integer(value: impl Into<BigInt>) -> Self {
        Rational(BigRational::from_integer(value.into()))
    }

    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
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

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    pub fn min(self, other: Self) -> Self {
        std::cmp::min(self, other)
    }

    pub fn max(self, other: Self) -> Self {
        std::cmp::max(self, other)
    }

    pub fn as_big(&self) -> &BigRational {
        &self.0
    }

    /// Lossy conversion, for plotting and display only.
    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    /// Decimal rendering rounded (half away from zero) to `digits`
    /// significant digits, e.g. `11/6` at 6 digits is `1.83333`.
    pub fn to_significant(&self, digits: u32) -> String {
        let digits = digits.max(1);
        if self.is_zero() {
            return if digits > 1 {
                format!("0.{}", "0".repeat(digits as usize - 1))
            } else {
                "0".to_string()
            };
        }
        let sign = if self.is_negative() { "-" } else { "" };
        let value = self.0.abs();
        let ten = BigInt::from(10u32);

        // exponent e with 10^e <= value < 10^(e+1)
        let mut exp: i64 =
            value.numer().to_string().len() as i64 - value.denom().to_string().len() as i64;
        let pow10 = |e: i64| -> BigRational {
            if e >= 0 {
                BigRational::from_integer(num_traits::pow(ten.clone(), e as usize))
            } else {
                BigRational::new(BigInt::one(), num_traits::pow(ten.clone(), (-e) as usize))
            }
        };
        while value < pow10(exp) {
            exp -= 1;
        }
        while value >= pow10(exp + 1) {
            exp += 1;
        }

        let shift = digits as i64 - 1 - exp;
        let scaled = &value * pow10(shift);
        let (q, r) = scaled.numer().div_rem(scaled.denom());
        let mut mantissa = q;
        if r * 2 >= *scaled.denom() {
            mantissa += 1;
        }
        // rounding may carry into a new digit (9.99999x -> 10.0000)
        let mut shift = shift;
        if mantissa.to_string().len() as u32 > digits {
            mantissa /= &ten;
            shift -= 1;
        }

        let text = mantissa.to_string();
        if shift <= 0 {
            let zeros = "0".repeat((-shift) as usize);
            format!("{sign}{text}{zeros}")
        } else if (shift as usize) < text.len() {
            let split = text.len() - shift as usize;
            format!("{sign}{}.{}", &text[..split], &text[split..])
        } else {
            let zeros = "0".repeat(shift as usize - text.len());
            format!("{sign}0.{zeros}{text}")
        }
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.0.numer(), self.0.denom())
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rational {
    type Err = ParseRationalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let text = s.trim();
        let (numer, denom) = match text.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (text, "1"),
        };
        let numer: BigInt = numer
            .parse()
            .map_err(|_| ParseRationalError::Malformed(s.to_string()))?;
        let denom: BigInt = denom
            .parse()
            .map_err(|_| ParseRationalError::Malformed(s.to_string()))?;
        if denom.is_zero() {
            return Err(ParseRationalError::ZeroDenominator(s.to_string()));
        }
        Ok(Rational::new(numer, denom))
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

macro_rules! from_int {
    ($($t:ty),*) => {$(
        impl From<$t> for Rational {
            fn from(v: $t) -> Self {
                Rational::from_integer(v)
            }
        }
    )*};
}
from_int!(i32, i64, i128, u32, u64, u128, usize);

impl From<BigInt> for Rational {
    fn from(v: BigInt) -> Self {
        Rational::from_integer(v)
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident) => {
        impl $trait for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational(self.0.$method(rhs.0))
            }
        }
        impl<'a> $trait<&'a Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &'a Rational) -> Rational {
                Rational(self.0.$method(&rhs.0))
            }
        }
        impl<'a, 'b> $trait<&'b Rational> for &'a Rational {
            type Output = Rational;
            fn $method(self, rhs: &'b Rational) -> Rational {
                Rational((&self.0).$method(&rhs.0))
            }
        }
    };
}
binop!(Add, add);
binop!(Sub, sub);
binop!(Mul, mul);
binop!(Div, div);

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl std::iter::Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Self {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stored_in_lowest_terms() {
        let q = Rational::new(8, 4);
        assert_eq!(q.to_string(), "2/1");
        let q = Rational::new(3, -6);
        assert_eq!(q.to_string(), "-1/2");
        assert!(q.denom() > &BigInt::zero());
    }

    #[test]
    fn parse_forms() {
        assert_eq!("11/6".parse::<Rational>().unwrap(), Rational::new(11, 6));
        assert_eq!("-4/2".parse::<Rational>().unwrap(), Rational::from(-2));
        assert_eq!("7".parse::<Rational>().unwrap(), Rational::from(7));
        assert!(matches!(
            "1/0".parse::<Rational>(),
            Err(ParseRationalError::ZeroDenominator(_))
        ));
        assert!("x/2".parse::<Rational>().is_err());
    }

    #[test]
    fn significant_digits() {
        assert_eq!(Rational::new(11, 6).to_significant(6), "1.83333");
        assert_eq!(Rational::new(5, 3).to_significant(6), "1.66667");
        assert_eq!(Rational::from(2).to_significant(6), "2.00000");
        assert_eq!(Rational::new(19, 10).to_significant(6), "1.90000");
        assert_eq!(Rational::new(1, 3000).to_significant(6), "0.000333333");
        assert_eq!(Rational::new(23, 2).to_significant(6), "11.5000");
        assert_eq!(Rational::from(1234567).to_significant(6), "1234570");
        assert_eq!(
            Rational::new(9_999_999, 1_000_000).to_significant(6),
            "10.0000"
        );
        assert_eq!(Rational::new(-1, 2).to_significant(3), "-0.500");
        assert_eq!(Rational::zero().to_significant(6), "0.00000");
    }

    #[test]
    fn serde_as_string() {
        let q = Rational::new(11, 6);
        let json = serde_json::to_string(&q).unwrap();
        assert_eq!(json, "\"11/6\"");
        let back: Rational = serde_json::from_str(&json).unwrap();
        assert_eq!(back, q);
    }
}
