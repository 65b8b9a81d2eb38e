//! Exact rational scalars and the extended rationals `Rat ∪ {+∞}`.
//!
//! Every threshold and exponent in the crate is a [`Rat`]; strict-vs-nonstrict
//! boundary comparisons are therefore decided exactly.

use std::cmp::Ordering;
use std::fmt;
use std::iter::{Product, Sum};
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Arbitrary-precision rational number, always in lowest terms with a
/// positive denominator.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Rat(BigRational);

impl Rat {
    pub fn new(num: i64, den: i64) -> Rat {
        assert!(den != 0, "zero denominator");
        Rat(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn int(n: i64) -> Rat {
        Rat(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn zero() -> Rat {
        Rat(BigRational::zero())
    }

    pub fn one() -> Rat {
        Rat(BigRational::one())
    }

    pub fn from_big(r: BigRational) -> Rat {
        Rat(r)
    }

    pub fn as_big(&self) -> &BigRational {
        &self.0
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

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn abs(&self) -> Rat {
        Rat(self.0.abs())
    }

    pub fn signum(&self) -> i32 {
        if self.0.is_positive() {
            1
        } else if self.0.is_negative() {
            -1
        } else {
            0
        }
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn recip(&self) -> Option<Rat> {
        if self.is_zero() {
            None
        } else {
            Some(Rat(self.0.recip()))
        }
    }

    pub fn checked_div(&self, other: &Rat) -> Option<Rat> {
        if other.is_zero() {
            None
        } else {
            Some(Rat(&self.0 / &other.0))
        }
    }

    pub fn floor(&self) -> Rat {
        Rat(self.0.floor())
    }

    pub fn ceil(&self) -> Rat {
        Rat(self.0.ceil())
    }

    pub fn pow(&self, e: u32) -> Rat {
        let mut acc = Rat::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    pub fn min(self, other: Rat) -> Rat {
        if other < self {
            other
        } else {
            self
        }
    }

    pub fn max(self, other: Rat) -> Rat {
        if other > self {
            other
        } else {
            self
        }
    }
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Rat> {
        let s = s.trim();
        let bad = || Error::Parse(format!("invalid rational {s:?}"));
        match s.split_once('/') {
            Some((n, d)) => {
                let n: BigInt = n.trim().parse().map_err(|_| bad())?;
                let d: BigInt = d.trim().parse().map_err(|_| bad())?;
                if d.is_zero() {
                    return Err(Error::Parse(format!("zero denominator in {s:?}")));
                }
                Ok(Rat(BigRational::new(n, d)))
            }
            None => {
                let n: BigInt = s.parse().map_err(|_| bad())?;
                Ok(Rat(BigRational::from_integer(n)))
            }
        }
    }
}

impl From<i64> for Rat {
    fn from(n: i64) -> Rat {
        Rat::int(n)
    }
}

impl From<BigInt> for Rat {
    fn from(n: BigInt) -> Rat {
        Rat(BigRational::from_integer(n))
    }
}

impl Serialize for Rat {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Rat {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Rat, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Str(String),
            Int(i64),
        }
        match Repr::deserialize(d)? {
            Repr::Str(s) => s.parse().map_err(serde::de::Error::custom),
            Repr::Int(n) => Ok(Rat::int(n)),
        }
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $op:tt) => {
        impl $tr<Rat> for Rat {
            type Output = Rat;
            fn $method(self, rhs: Rat) -> Rat {
                Rat(self.0 $op rhs.0)
            }
        }
        impl<'a> $tr<&'a Rat> for Rat {
            type Output = Rat;
            fn $method(self, rhs: &'a Rat) -> Rat {
                Rat(self.0 $op &rhs.0)
            }
        }
        impl<'a> $tr<Rat> for &'a Rat {
            type Output = Rat;
            fn $method(self, rhs: Rat) -> Rat {
                Rat(&self.0 $op rhs.0)
            }
        }
        impl<'a, 'b> $tr<&'b Rat> for &'a Rat {
            type Output = Rat;
            fn $method(self, rhs: &'b Rat) -> Rat {
                Rat(&self.0 $op &rhs.0)
            }
        }
    };
}

forward_binop!(Add, add, +);
forward_binop!(Sub, sub, -);
forward_binop!(Mul, mul, *);
// Division panics on a zero divisor, like integer division; use `checked_div`
// where the divisor is data-dependent.
forward_binop!(Div, div, /);

impl AddAssign<&Rat> for Rat {
    fn add_assign(&mut self, rhs: &Rat) {
        self.0 += &rhs.0;
    }
}

impl AddAssign<Rat> for Rat {
    fn add_assign(&mut self, rhs: Rat) {
        self.0 += rhs.0;
    }
}

impl SubAssign<&Rat> for Rat {
    fn sub_assign(&mut self, rhs: &Rat) {
        self.0 -= &rhs.0;
    }
}

impl MulAssign<&Rat> for Rat {
    fn mul_assign(&mut self, rhs: &Rat) {
        self.0 *= &rhs.0;
    }
}

impl Neg for Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-self.0)
    }
}

impl Neg for &Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-&self.0)
    }
}

impl Sum for Rat {
    fn sum<I: Iterator<Item = Rat>>(iter: I) -> Rat {
        iter.fold(Rat::zero(), |a, b| a + b)
    }
}

impl<'a> Sum<&'a Rat> for Rat {
    fn sum<I: Iterator<Item = &'a Rat>>(iter: I) -> Rat {
        iter.fold(Rat::zero(), |a, b| a + b)
    }
}

impl Product for Rat {
    fn product<I: Iterator<Item = Rat>>(iter: I) -> Rat {
        iter.fold(Rat::one(), |a, b| a * b)
    }
}

/// Extended rational: a finite [`Rat`] or `+∞`.
///
/// Only `+∞` exists; thresholds of the form `h / w` have `h > 0` and `w ≥ 0`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum XRat {
    Finite(Rat),
    PosInf,
}

impl XRat {
    pub fn finite(&self) -> Option<&Rat> {
        match self {
            XRat::Finite(r) => Some(r),
            XRat::PosInf => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, XRat::PosInf)
    }

    /// `num / den`, with `num / 0 = +∞` for `num > 0`.
    pub fn quotient(num: &Rat, den: &Rat) -> Result<XRat> {
        if den.is_zero() {
            if num.is_positive() {
                Ok(XRat::PosInf)
            } else {
                Err(Error::Domain(format!("{num}/0 is not +inf")))
            }
        } else {
            Ok(XRat::Finite(num / den))
        }
    }

    /// `x < self` for a finite `x`.
    pub fn gt_rat(&self, x: &Rat) -> bool {
        match self {
            XRat::Finite(r) => r > x,
            XRat::PosInf => true,
        }
    }

    /// `x > self` for a finite `x`.
    pub fn lt_rat(&self, x: &Rat) -> bool {
        match self {
            XRat::Finite(r) => r < x,
            XRat::PosInf => false,
        }
    }
}

impl From<Rat> for XRat {
    fn from(r: Rat) -> XRat {
        XRat::Finite(r)
    }
}

impl PartialOrd for XRat {
    fn partial_cmp(&self, other: &XRat) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for XRat {
    fn cmp(&self, other: &XRat) -> Ordering {
        match (self, other) {
            (XRat::Finite(a), XRat::Finite(b)) => a.cmp(b),
            (XRat::Finite(_), XRat::PosInf) => Ordering::Less,
            (XRat::PosInf, XRat::Finite(_)) => Ordering::Greater,
            (XRat::PosInf, XRat::PosInf) => Ordering::Equal,
        }
    }
}

impl fmt::Display for XRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            XRat::Finite(r) => write!(f, "{r}"),
            XRat::PosInf => f.write_str("inf"),
        }
    }
}

impl fmt::Debug for XRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for XRat {
    type Err = Error;
    fn from_str(s: &str) -> Result<XRat> {
        match s.trim() {
            "inf" | "+inf" => Ok(XRat::PosInf),
            other => Ok(XRat::Finite(other.parse()?)),
        }
    }
}

impl Serialize for XRat {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for XRat {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<XRat, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Hölder conjugate `q = p / (p - 1)`.
pub fn conjugate(p: &Rat) -> Result<Rat> {
    if *p <= Rat::one() {
        return Err(Error::Domain(format!("conjugate needs p > 1, got {p}")));
    }
    Ok(p / (p - Rat::one()))
}

/// Poincaré dual of `(p, k)` in total dimension `dim`: `(p/(p-1), dim - k)`.
pub fn dual_pair(p: &Rat, k: usize, dim: usize) -> Result<(Rat, usize)> {
    if k > dim {
        return Err(Error::Domain(format!("degree {k} exceeds dimension {dim}")));
    }
    Ok((conjugate(p)?, dim - k))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(s: &str) -> Rat {
        s.parse().unwrap()
    }

    #[test]
    fn parse_and_normalize() {
        assert_eq!(r("6/4"), Rat::new(3, 2));
        assert_eq!(r("-2/-4"), Rat::new(1, 2));
        assert_eq!(r("3/-6").to_string(), "-1/2");
        assert_eq!(r("7").to_string(), "7");
        assert!(" 1/0".parse::<Rat>().is_err());
        assert!("x".parse::<Rat>().is_err());
    }

    #[test]
    fn serde_roundtrip_as_strings() {
        let v = vec![Rat::new(-4, 3), Rat::int(0)];
        let s = serde_json::to_string(&v).unwrap();
        assert_eq!(s, r#"["-4/3","0"]"#);
        let back: Vec<Rat> = serde_json::from_str(&s).unwrap();
        assert_eq!(back, v);
        let inf: XRat = serde_json::from_str("\"inf\"").unwrap();
        assert!(inf.is_infinite());
    }

    #[test]
    fn infinity_dominates() {
        let big = XRat::Finite(Rat::int(1_000_000));
        assert!(XRat::PosInf > big);
        assert_eq!(
            XRat::quotient(&Rat::int(4), &Rat::zero()).unwrap(),
            XRat::PosInf
        );
        assert!(XRat::quotient(&Rat::zero(), &Rat::zero()).is_err());
    }

    #[test]
    fn conjugate_examples() {
        assert_eq!(conjugate(&Rat::int(2)).unwrap(), Rat::int(2));
        assert_eq!(conjugate(&Rat::new(4, 3)).unwrap(), Rat::int(4));
        assert_eq!(conjugate(&Rat::new(3, 2)).unwrap(), Rat::int(3));
        assert!(conjugate(&Rat::one()).is_err());
        assert!(conjugate(&Rat::new(1, 2)).is_err());
    }

    #[test]
    fn dual_pair_examples() {
        assert_eq!(dual_pair(&Rat::int(3), 2, 4).unwrap(), (Rat::new(3, 2), 2));
        assert_eq!(dual_pair(&Rat::int(2), 3, 6).unwrap(), (Rat::int(2), 3));
        assert_eq!(dual_pair(&Rat::int(4), 1, 4).unwrap(), (Rat::new(4, 3), 3));
        assert!(dual_pair(&Rat::int(4), 5, 4).is_err());
    }
}
