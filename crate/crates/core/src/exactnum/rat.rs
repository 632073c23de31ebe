use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::scalar::{forward_binops, Field, Scalar};
use crate::error::{Error, Result};

/// Arbitrary-precision rational, always in lowest terms with positive denominator.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Rat(BigRational);

impl Rat {
    pub fn new(numer: impl Into<BigInt>, denom: impl Into<BigInt>) -> Result<Rat> {
        let d = denom.into();
        if d.is_zero() {
            return Err(Error::Domain("zero denominator".into()));
        }
        Ok(Rat(BigRational::new(numer.into(), d)))
    }

    pub fn from_big(r: BigRational) -> Rat {
        Rat(r)
    }

    pub fn zero() -> Rat {
        Rat(BigRational::zero())
    }

    pub fn one() -> Rat {
        Rat(BigRational::one())
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

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn abs(&self) -> Rat {
        Rat(self.0.abs())
    }

    pub fn inner(&self) -> &BigRational {
        &self.0
    }

    pub fn inv(&self) -> Result<Rat> {
        if self.is_zero() {
            return Err(Error::NotInvertible("0".into()));
        }
        Ok(Rat(self.0.recip()))
    }

    pub fn div(&self, other: &Rat) -> Result<Rat> {
        Ok(self * &other.inv()?)
    }

    pub fn powi(&self, e: i32) -> Result<Rat> {
        if e < 0 {
            Ok(Rat(self.inv()?.0.pow(e.abs())))
        } else {
            Ok(Rat(self.0.pow(e)))
        }
    }

    pub fn to_i64(&self) -> Option<i64> {
        if self.is_integer() {
            self.0.numer().to_i64()
        } else {
            None
        }
    }

    /// Exact m-th root when one exists in Q. Odd roots of negatives are negative,
    /// even roots of positives are taken positive.
    pub fn nth_root_exact(&self, m: u32) -> Option<Rat> {
        if m == 0 {
            return None;
        }
        if self.is_zero() || m == 1 {
            return Some(self.clone());
        }
        if self.is_negative() && m % 2 == 0 {
            return None;
        }
        let root_int = |x: &BigInt| -> Option<BigInt> {
            let r = x.abs().nth_root(m);
            if num_traits::pow(r.clone(), m as usize) == x.abs() {
                Some(r)
            } else {
                None
            }
        };
        let n = root_int(self.numer())?;
        let d = root_int(self.denom())?;
        let n = if self.is_negative() { -n } else { n };
        Some(Rat(BigRational::new(n, d)))
    }

    fn add_ref(&self, o: &Rat) -> Rat {
        Rat(&self.0 + &o.0)
    }

    fn sub_ref(&self, o: &Rat) -> Rat {
        Rat(&self.0 - &o.0)
    }

    fn mul_ref(&self, o: &Rat) -> Rat {
        Rat(&self.0 * &o.0)
    }
}

forward_binops!(Rat, add_ref, sub_ref, mul_ref);

impl std::ops::Neg for Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-self.0)
    }
}

impl std::ops::Neg for &Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-&self.0)
    }
}

impl From<i64> for Rat {
    fn from(i: i64) -> Rat {
        Rat(BigRational::from_integer(BigInt::from(i)))
    }
}

impl From<i32> for Rat {
    fn from(i: i32) -> Rat {
        Rat::from(i as i64)
    }
}

impl From<BigInt> for Rat {
    fn from(i: BigInt) -> Rat {
        Rat(BigRational::from_integer(i))
    }
}

impl Default for Rat {
    fn default() -> Rat {
        Rat::zero()
    }
}

impl FromStr for Rat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Rat> {
        let t = s.trim();
        let bad = || Error::Parse(format!("malformed rational {s:?}"));
        let parse_int = |x: &str| -> Result<BigInt> {
            let x = x.trim();
            let digits = x.strip_prefix(['-', '+']).unwrap_or(x);
            if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
                return Err(bad());
            }
            BigInt::from_str(x).map_err(|_| bad())
        };
        match t.split_once('/') {
            Some((n, d)) => {
                let n = parse_int(n)?;
                let d = parse_int(d)?;
                if d.is_zero() {
                    return Err(Error::Parse(format!("zero denominator in {s:?}")));
                }
                Ok(Rat(BigRational::new(n, d)))
            }
            None => Ok(Rat::from(parse_int(t)?)),
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
        write!(f, "{self}")
    }
}

impl Serialize for Rat {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Rat {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Rat, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl Scalar for Rat {
    fn zero() -> Rat {
        Rat::zero()
    }
    fn one() -> Rat {
        Rat::one()
    }
    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
    fn from_rat(r: &Rat) -> Rat {
        r.clone()
    }
    fn try_inv(&self) -> Option<Rat> {
        self.inv().ok()
    }
}

impl Field for Rat {}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(s: &str) -> Rat {
        s.parse().unwrap()
    }

    #[test]
    fn parse_and_print() {
        assert_eq!(r("6/4").to_string(), "3/2");
        assert_eq!(r("-0/7").to_string(), "0");
        assert_eq!(r(" 5 ").to_string(), "5");
        assert_eq!(r("3/-6").to_string(), "-1/2");
        assert!("1.5".parse::<Rat>().is_err());
        assert!("1/0".parse::<Rat>().is_err());
        assert!("".parse::<Rat>().is_err());
        assert!("a/2".parse::<Rat>().is_err());
    }

    #[test]
    fn roots() {
        assert_eq!(r("9/4").nth_root_exact(2), Some(r("3/2")));
        assert_eq!(r("-8/27").nth_root_exact(3), Some(r("-2/3")));
        assert_eq!(r("-4").nth_root_exact(2), None);
        assert_eq!(r("2").nth_root_exact(2), None);
        assert_eq!(r("1").nth_root_exact(7), Some(r("1")));
    }

    #[test]
    fn powers() {
        assert_eq!(r("2/3").powi(-2).unwrap(), r("9/4"));
        assert!(r("0").powi(-1).is_err());
    }
}
