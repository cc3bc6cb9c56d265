use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use super::GaussRat;

/// Commutative ring with unit, as used for structure constants and polynomial
/// coefficients. Arithmetic is by value; implementors are cheap enough to clone
/// at the sizes this crate works with.
pub trait Ring:
    Clone
    + PartialEq
    + fmt::Debug
    + fmt::Display
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn from_gauss(q: &GaussRat) -> Self;

    fn from_i64(n: i64) -> Self {
        Self::from_gauss(&GaussRat::from_i64(n))
    }

    fn is_one(&self) -> bool {
        *self == Self::one()
    }

    fn pow(&self, mut e: u32) -> Self {
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

/// A field: every nonzero element is invertible.
pub trait Field: Ring + Div<Output = Self> {
    /// Multiplicative inverse; `None` for zero.
    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(Self::one() / self.clone())
        }
    }
}
