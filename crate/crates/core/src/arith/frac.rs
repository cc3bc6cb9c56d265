use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use super::{Field, GaussRat, MultiPoly, Ring};

/// A fraction of multivariate polynomials, kept with a monic denominator.
///
/// Only cheap cancellations are performed (exact division by the
/// denominator); equality is decided by cross-multiplication, so unreduced
/// representations compare correctly.
#[derive(Clone, Debug)]
pub struct Frac<C> {
    num: MultiPoly<C>,
    den: MultiPoly<C>,
}

impl<C: Field> Frac<C> {
    pub fn new(num: MultiPoly<C>, den: MultiPoly<C>) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return Self { num, den: MultiPoly::one() };
        }
        if den.is_constant() {
            let inv = den.constant_term().inv().expect("nonzero");
            return Self { num: num.scale(&inv), den: MultiPoly::one() };
        }
        if let Some(q) = num.div_exact(&den) {
            return Self { num: q, den: MultiPoly::one() };
        }
        let lc = den.leading().map(|(_, c)| c.clone()).expect("nonzero").inv().expect("nonzero");
        Self { num: num.scale(&lc), den: den.scale(&lc) }
    }

    pub fn from_poly(p: MultiPoly<C>) -> Self {
        Self { num: p, den: MultiPoly::one() }
    }

    pub fn var(i: usize) -> Self {
        Self::from_poly(MultiPoly::var(i))
    }

    pub fn numer(&self) -> &MultiPoly<C> {
        &self.num
    }

    pub fn denom(&self) -> &MultiPoly<C> {
        &self.den
    }

    /// The polynomial value, if the denominator is constant.
    pub fn as_poly(&self) -> Option<MultiPoly<C>> {
        self.den.is_constant().then(|| self.num.clone())
    }
}

impl<C: Field> PartialEq for Frac<C> {
    fn eq(&self, o: &Self) -> bool {
        self.num.clone() * o.den.clone() == o.num.clone() * self.den.clone()
    }
}

impl<C: Field> Ring for Frac<C> {
    fn zero() -> Self {
        Self::from_poly(MultiPoly::zero())
    }
    fn one() -> Self {
        Self::from_poly(MultiPoly::one())
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
    fn from_gauss(q: &GaussRat) -> Self {
        Self::from_poly(MultiPoly::constant(C::from_gauss(q)))
    }
}

impl<C: Field> Field for Frac<C> {}

impl<C: Field> Add for Frac<C> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        if self.den == o.den {
            return Self::new(self.num + o.num, self.den);
        }
        Self::new(self.num * o.den.clone() + o.num * self.den.clone(), self.den * o.den)
    }
}

impl<C: Field> Sub for Frac<C> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        self + (-o)
    }
}

impl<C: Field> Neg for Frac<C> {
    type Output = Self;
    fn neg(self) -> Self {
        Self { num: -self.num, den: self.den }
    }
}

impl<C: Field> Mul for Frac<C> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Self::new(self.num * o.num, self.den * o.den)
    }
}

impl<C: Field> Div for Frac<C> {
    type Output = Self;
    fn div(self, o: Self) -> Self {
        assert!(!o.is_zero(), "division by zero fraction");
        Self::new(self.num * o.den, self.den * o.num)
    }
}

impl<C: Field> fmt::Display for Frac<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type F = Frac<GaussRat>;

    #[test]
    fn arithmetic_and_equality() {
        let x = F::var(0);
        let y = F::var(1);
        let a = x.clone() / y.clone();
        let b = (x.clone() * x.clone()) / (x.clone() * y.clone());
        assert_eq!(a, b);
        assert_eq!(a.clone() * y.clone(), x.clone());
        assert!((a.clone() - b).is_zero());
        let s = F::one() / x.clone() + F::one() / y.clone();
        assert_eq!(s * x.clone() * y.clone(), x + y);
    }
}
