use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use super::{ArithError, Field, GaussRat, Ring, UniPoly};

/// Univariate rational function over ℚ(i) in a single distinguished
/// indeterminate (the deformation parameter `t`, or a family parameter such as
/// `γ`). The name of the indeterminate is contextual and not stored.
///
/// Always normalized: `gcd(num, den) = 1` and `den` is monic.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct RationalFunction {
    num: UniPoly,
    den: UniPoly,
}

impl RationalFunction {
    pub fn new(num: UniPoly, den: UniPoly) -> Result<Self, ArithError> {
        if den.is_zero() {
            return Err(ArithError::DivisionByZero);
        }
        Ok(Self::normalized(num, den))
    }

    fn normalized(num: UniPoly, den: UniPoly) -> Self {
        if num.is_zero() {
            return Self { num, den: UniPoly::constant(GaussRat::one()) };
        }
        let g = UniPoly::gcd(&num, &den);
        let (num, _) = num.div_rem(&g);
        let (den, _) = den.div_rem(&g);
        let lc = den.leading().cloned().expect("nonzero denominator");
        let inv = GaussRat::one() / lc;
        Self { num: num.scale(&inv), den: den.scale(&inv) }
    }

    pub fn from_poly(p: UniPoly) -> Self {
        Self { num: p, den: UniPoly::constant(GaussRat::one()) }
    }

    pub fn constant(c: GaussRat) -> Self {
        Self::from_poly(UniPoly::constant(c))
    }

    /// The indeterminate itself.
    pub fn var() -> Self {
        Self::from_poly(UniPoly::var())
    }

    pub fn numer(&self) -> &UniPoly {
        &self.num
    }

    pub fn denom(&self) -> &UniPoly {
        &self.den
    }

    pub fn is_constant(&self) -> bool {
        self.num.degree().unwrap_or(0) == 0 && self.den.degree() == Some(0)
    }

    pub fn as_constant(&self) -> Option<GaussRat> {
        self.is_constant().then(|| self.num.coeff(0))
    }

    /// val(num) − val(den); `None` for the zero function.
    pub fn order_at_zero(&self) -> Option<i64> {
        let vn = self.num.valuation()? as i64;
        let vd = self.den.valuation().expect("nonzero denominator") as i64;
        Some(vn - vd)
    }

    /// Value at `0`, or `PoleError` carrying the (negative) order.
    pub fn limit_at_zero(&self) -> Result<GaussRat, ArithError> {
        match self.order_at_zero() {
            None => Ok(GaussRat::zero()),
            Some(o) if o < 0 => Err(ArithError::Pole { order: o }),
            Some(o) if o > 0 => Ok(GaussRat::zero()),
            Some(_) => Ok(self.num.coeff(0) / self.den.coeff(0)),
        }
    }

    /// Value at `x`; `None` if `x` is a pole.
    pub fn eval(&self, x: &GaussRat) -> Option<GaussRat> {
        let d = self.den.eval(x);
        if d.is_zero() {
            None
        } else {
            Some(self.num.eval(x) / d)
        }
    }

    /// Substitutes `x ↦ p(x)` where `p` is itself a rational function.
    pub fn compose(&self, p: &RationalFunction) -> Result<Self, ArithError> {
        let eval_poly = |q: &UniPoly| {
            q.coeffs()
                .iter()
                .rev()
                .fold(Self::zero(), |acc, c| acc * p.clone() + Self::constant(c.clone()))
        };
        let d = eval_poly(&self.den);
        if d.is_zero() {
            return Err(ArithError::DivisionByZero);
        }
        Ok(eval_poly(&self.num) / d)
    }

    pub fn fmt_in(&self, var: &str) -> String {
        if self.den.degree() == Some(0) {
            return self.num.fmt_in(var);
        }
        format!("({})/({})", self.num.fmt_in(var), self.den.fmt_in(var))
    }
}

impl Ring for RationalFunction {
    fn zero() -> Self {
        Self::from_poly(UniPoly::default())
    }
    fn one() -> Self {
        Self::constant(GaussRat::one())
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
    fn from_gauss(q: &GaussRat) -> Self {
        Self::constant(q.clone())
    }
}

impl Field for RationalFunction {}

impl Add for RationalFunction {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        if self.den == o.den {
            return Self::normalized(self.num + o.num, self.den);
        }
        Self::normalized(self.num * o.den.clone() + o.num * self.den.clone(), self.den * o.den)
    }
}

impl Sub for RationalFunction {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        self + (-o)
    }
}

impl Neg for RationalFunction {
    type Output = Self;
    fn neg(self) -> Self {
        Self { num: -self.num, den: self.den }
    }
}

impl Mul for RationalFunction {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        Self::normalized(self.num * o.num, self.den * o.den)
    }
}

impl Div for RationalFunction {
    type Output = Self;
    fn div(self, o: Self) -> Self {
        assert!(!o.is_zero(), "division by zero rational function");
        Self::normalized(self.num * o.den, self.den * o.num)
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.fmt_in("x"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> UniPoly {
        UniPoly::new(c.iter().map(|&x| GaussRat::from_i64(x)).collect())
    }

    fn rf(n: &[i64], d: &[i64]) -> RationalFunction {
        RationalFunction::new(p(n), p(d)).unwrap()
    }

    #[test]
    fn limit_examples() {
        assert_eq!(rf(&[0, 0, 1], &[1]).limit_at_zero().unwrap(), GaussRat::zero());
        assert_eq!(rf(&[1, 0, 1], &[1, 1]).limit_at_zero().unwrap(), GaussRat::one());
        match rf(&[1], &[0, 1]).limit_at_zero() {
            Err(ArithError::Pole { order }) => assert_eq!(order, -1),
            other => panic!("expected pole, got {other:?}"),
        }
    }

    #[test]
    fn normalization_cancels_common_factors() {
        let f = rf(&[-1, 0, 1], &[-2, 2]);
        assert_eq!(f.numer(), &p(&[1, 1]).scale(&GaussRat::from_ratio(1, 2)));
        assert_eq!(f.denom(), &p(&[1]));
    }

    #[test]
    fn composition_with_reciprocal() {
        // f(x) = x / (x + 1), f(-1/x) = 1 / (1 - x)
        let f = rf(&[0, 1], &[1, 1]);
        let g = rf(&[-1], &[0, 1]);
        let h = f.compose(&g).unwrap();
        assert_eq!(h, rf(&[1], &[1, -1]));
    }
}
