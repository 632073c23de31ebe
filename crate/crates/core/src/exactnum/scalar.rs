use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::Rat;

/// Ring of coefficients usable in structure constants.
///
/// `try_inv` returns `None` for elements without an inverse in the ring, so
/// the same generic code runs over fields and over Laurent polynomials.
pub trait Scalar:
    Clone
    + PartialEq
    + fmt::Debug
    + fmt::Display
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + for<'a> Add<&'a Self, Output = Self>
    + for<'a> Sub<&'a Self, Output = Self>
    + for<'a> Mul<&'a Self, Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn from_rat(r: &Rat) -> Self;
    fn try_inv(&self) -> Option<Self>;

    fn from_int(i: i64) -> Self {
        Self::from_rat(&Rat::from(i))
    }

    fn is_one(&self) -> bool {
        *self == Self::one()
    }

    fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = base.clone() * &base;
            }
        }
        acc
    }

    /// Integer power, negative exponents going through `try_inv`.
    fn powi(&self, e: i32) -> Option<Self> {
        if e >= 0 {
            Some(self.pow(e as u32))
        } else {
            self.try_inv().map(|inv| inv.pow(e.unsigned_abs()))
        }
    }
}

/// Marker for scalar domains where every nonzero element is invertible.
pub trait Field: Scalar {}

macro_rules! forward_binops {
    ($t:ty, $add:ident, $sub:ident, $mul:ident) => {
        impl std::ops::Add for $t {
            type Output = $t;
            fn add(self, rhs: $t) -> $t {
                <$t>::$add(&self, &rhs)
            }
        }
        impl<'a> std::ops::Add<&'a $t> for $t {
            type Output = $t;
            fn add(self, rhs: &'a $t) -> $t {
                <$t>::$add(&self, rhs)
            }
        }
        impl<'a, 'b> std::ops::Add<&'b $t> for &'a $t {
            type Output = $t;
            fn add(self, rhs: &'b $t) -> $t {
                <$t>::$add(self, rhs)
            }
        }
        impl std::ops::Sub for $t {
            type Output = $t;
            fn sub(self, rhs: $t) -> $t {
                <$t>::$sub(&self, &rhs)
            }
        }
        impl<'a> std::ops::Sub<&'a $t> for $t {
            type Output = $t;
            fn sub(self, rhs: &'a $t) -> $t {
                <$t>::$sub(&self, rhs)
            }
        }
        impl<'a, 'b> std::ops::Sub<&'b $t> for &'a $t {
            type Output = $t;
            fn sub(self, rhs: &'b $t) -> $t {
                <$t>::$sub(self, rhs)
            }
        }
        impl std::ops::Mul for $t {
            type Output = $t;
            fn mul(self, rhs: $t) -> $t {
                <$t>::$mul(&self, &rhs)
            }
        }
        impl<'a> std::ops::Mul<&'a $t> for $t {
            type Output = $t;
            fn mul(self, rhs: &'a $t) -> $t {
                <$t>::$mul(&self, rhs)
            }
        }
        impl<'a, 'b> std::ops::Mul<&'b $t> for &'a $t {
            type Output = $t;
            fn mul(self, rhs: &'b $t) -> $t {
                <$t>::$mul(self, rhs)
            }
        }
    };
}

pub(crate) use forward_binops;
