use std::fmt;
use std::iter::Sum;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Arbitrary-precision rational in lowest terms with a positive denominator.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct ExactRational(BigRational);

impl ExactRational {
    /// Panics when `den` is zero.
    pub fn new(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Self {
        ExactRational(BigRational::new(num.into(), den.into()))
    }

    pub fn from_integer(v: impl Into<BigInt>) -> Self {
        ExactRational(BigRational::from_integer(v.into()))
    }

    pub fn zero() -> Self {
        ExactRational(BigRational::zero())
    }

    pub fn one() -> Self {
        ExactRational(BigRational::one())
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

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn abs(&self) -> Self {
        ExactRational(self.0.abs())
    }

    /// `None` when dividing by zero.
    pub fn checked_div(&self, rhs: &Self) -> Option<Self> {
        (!rhs.is_zero()).then(|| ExactRational(&self.0 / &rhs.0))
    }

    /// Nearest integer, ties away from zero.
    pub fn round(&self) -> BigInt {
        self.0.round().to_integer()
    }

    /// Approximate value; saturates to 0 or infinity outside the f64 range.
    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    /// Decimal exponent `e` with `10^e <= |x| < 10^(e+1)`; `None` for zero.
    pub fn decimal_exponent(&self) -> Option<i64> {
        if self.is_zero() {
            return None;
        }
        let num = self.numer().magnitude();
        let den = self.denom().magnitude();
        // log10 estimate from bit lengths, corrected exactly below
        let est = (num.bits() as f64 - den.bits() as f64) * std::f64::consts::LOG10_2;
        let mut e = est.floor() as i64;
        while !ge_pow10(num, den, e) {
            e -= 1;
        }
        while ge_pow10(num, den, e + 1) {
            e += 1;
        }
        Some(e)
    }

    /// Renders `digits` significant digits, correctly rounded (ties away from
    /// zero). Positional notation for `1e-3 <= |x| < 1e9`, scientific
    /// (`2.89e-6`) otherwise. Trailing fractional zeros are dropped.
    pub fn to_decimal(&self, digits: u32) -> String {
        let digits = digits.max(1);
        let Some(mut exp) = self.decimal_exponent() else {
            return "0".to_string();
        };
        let abs = self.0.abs();
        // mantissa = round(|x| * 10^(digits - 1 - exp))
        let shift = i64::from(digits) - 1 - exp;
        let scaled = scale_pow10(&abs, shift);
        let mut mantissa = round_half_away(&scaled);
        if mantissa == num_traits::pow(BigUint::from(10u32), digits as usize) {
            mantissa /= 10u32;
            exp += 1;
        }
        let mut ds = mantissa.to_str_radix(10);
        debug_assert_eq!(ds.len(), digits as usize);
        let sign = if self.is_negative() { "-" } else { "" };

        if !(-3..9).contains(&exp) {
            let (head, tail) = ds.split_at(1);
            let tail = tail.trim_end_matches('0');
            return if tail.is_empty() {
                format!("{sign}{head}e{exp}")
            } else {
                format!("{sign}{head}.{tail}e{exp}")
            };
        }
        let body = if exp < 0 {
            let zeros = "0".repeat((-exp - 1) as usize);
            let frac = format!("{zeros}{ds}");
            format!("0.{}", frac.trim_end_matches('0'))
        } else {
            let int_len = exp as usize + 1;
            if ds.len() <= int_len {
                ds.push_str(&"0".repeat(int_len - ds.len()));
                ds
            } else {
                let (int, frac) = ds.split_at(int_len);
                let frac = frac.trim_end_matches('0');
                if frac.is_empty() {
                    int.to_string()
                } else {
                    format!("{int}.{frac}")
                }
            }
        };
        format!("{sign}{body}")
    }
}

fn ge_pow10(num: &BigUint, den: &BigUint, e: i64) -> bool {
    let p = num_traits::pow(BigUint::from(10u32), e.unsigned_abs() as usize);
    if e >= 0 {
        num >= &(den * p)
    } else {
        &(num * p) >= den
    }
}

fn scale_pow10(x: &BigRational, shift: i64) -> BigRational {
    let p = BigInt::from(10u32).pow(shift.unsigned_abs() as u32);
    if shift >= 0 {
        x * BigRational::from_integer(p)
    } else {
        x / BigRational::from_integer(p)
    }
}

fn round_half_away(x: &BigRational) -> BigUint {
    let (q, r) = x.numer().div_rem(x.denom());
    let twice = r * 2u32;
    let q = if twice >= *x.denom() { q + 1u32 } else { q };
    q.to_biguint().expect("non-negative")
}

impl fmt::Display for ExactRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid rational literal `{0}`")]
pub struct ParseRationalError(String);

impl FromStr for ExactRational {
    type Err = ParseRationalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ParseRationalError(s.to_string());
        let (n, d) = match s.trim().split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s.trim(), "1"),
        };
        let n: BigInt = n.parse().map_err(|_| err())?;
        let d: BigInt = d.parse().map_err(|_| err())?;
        if d.is_zero() {
            return Err(err());
        }
        Ok(ExactRational::new(n, d))
    }
}

impl Serialize for ExactRational {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for ExactRational {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl From<BigInt> for ExactRational {
    fn from(v: BigInt) -> Self {
        ExactRational::from_integer(v)
    }
}

impl From<BigUint> for ExactRational {
    fn from(v: BigUint) -> Self {
        ExactRational::from_integer(BigInt::from_biguint(Sign::Plus, v))
    }
}

impl From<i64> for ExactRational {
    fn from(v: i64) -> Self {
        ExactRational::from_integer(v)
    }
}

impl From<u64> for ExactRational {
    fn from(v: u64) -> Self {
        ExactRational::from_integer(v)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident) => {
        impl $tr<ExactRational> for ExactRational {
            type Output = ExactRational;
            fn $method(self, rhs: ExactRational) -> ExactRational {
                ExactRational(self.0.$method(rhs.0))
            }
        }
        impl<'a> $tr<&'a ExactRational> for ExactRational {
            type Output = ExactRational;
            fn $method(self, rhs: &'a ExactRational) -> ExactRational {
                ExactRational(self.0.$method(&rhs.0))
            }
        }
        impl<'a> $tr<&'a ExactRational> for &ExactRational {
            type Output = ExactRational;
            fn $method(self, rhs: &'a ExactRational) -> ExactRational {
                ExactRational((&self.0).$method(&rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

impl Neg for ExactRational {
    type Output = ExactRational;
    fn neg(self) -> ExactRational {
        ExactRational(-self.0)
    }
}

impl Sum for ExactRational {
    fn sum<I: Iterator<Item = ExactRational>>(iter: I) -> Self {
        iter.fold(ExactRational::zero(), |a, b| a + b)
    }
}
