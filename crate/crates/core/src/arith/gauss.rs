use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{Field, Ring};

/// A Gaussian rational `re + im·i` with exact rational parts.
///
/// `BigRational` keeps both parts reduced with positive denominators, so
/// structural equality is numeric equality.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct GaussRat {
    pub re: BigRational,
    pub im: BigRational,
}

impl GaussRat {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Self { re, im }
    }

    pub fn from_i64(n: i64) -> Self {
        Self::new(BigRational::from_integer(n.into()), BigRational::zero())
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Self::new(BigRational::new(num.into(), den.into()), BigRational::zero())
    }

    /// `re_num/re_den + (im_num/im_den)·i`.
    pub fn from_parts(re_num: i64, re_den: i64, im_num: i64, im_den: i64) -> Self {
        Self::new(
            BigRational::new(re_num.into(), re_den.into()),
            BigRational::new(im_num.into(), im_den.into()),
        )
    }

    pub fn i() -> Self {
        Self::new(BigRational::zero(), BigRational::one())
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Self::new(self.re.clone(), -self.im.clone())
    }

    /// `|z|²`, a nonnegative rational.
    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn as_integer(&self) -> Option<BigInt> {
        if self.im.is_zero() && self.re.is_integer() {
            Some(self.re.to_integer())
        } else {
            None
        }
    }

    /// Lexicographic (re, im) comparison, used only to pick canonical
    /// representatives deterministically.
    pub fn cmp_lex(&self, other: &Self) -> std::cmp::Ordering {
        self.re.cmp(&other.re).then_with(|| self.im.cmp(&other.im))
    }
}

impl Ring for GaussRat {
    fn zero() -> Self {
        Self::default()
    }
    fn one() -> Self {
        Self::from_i64(1)
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
    fn from_gauss(q: &GaussRat) -> Self {
        q.clone()
    }
}

impl Field for GaussRat {}

impl Add for GaussRat {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.re + o.re, self.im + o.im)
    }
}

impl Sub for GaussRat {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.re - o.re, self.im - o.im)
    }
}

impl Mul for GaussRat {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        if self.im.is_zero() && o.im.is_zero() {
            return Self::new(self.re * o.re, BigRational::zero());
        }
        let re = &self.re * &o.re - &self.im * &o.im;
        let im = &self.re * &o.im + &self.im * &o.re;
        Self::new(re, im)
    }
}

impl Neg for GaussRat {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.re, -self.im)
    }
}

impl Div for GaussRat {
    type Output = Self;
    fn div(self, o: Self) -> Self {
        assert!(!o.is_zero(), "division by zero Gaussian rational");
        let n = o.norm_sqr();
        let c = o.conj();
        let p = self * c;
        Self::new(p.re / &n, p.im / n)
    }
}

impl From<i64> for GaussRat {
    fn from(n: i64) -> Self {
        Self::from_i64(n)
    }
}

fn fmt_rat(r: &BigRational, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if r.is_integer() {
        write!(f, "{}", r.numer())
    } else {
        write!(f, "{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for GaussRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            return fmt_rat(&self.re, f);
        }
        let im_abs = self.im.abs();
        if !self.re.is_zero() {
            fmt_rat(&self.re, f)?;
            write!(f, "{}", if self.im.is_negative() { " - " } else { " + " })?;
        } else if self.im.is_negative() {
            write!(f, "-")?;
        }
        if im_abs.is_one() {
            write!(f, "i")
        } else {
            fmt_rat(&im_abs, f)?;
            write!(f, "*i")
        }
    }
}

#[derive(Debug, thiserror::Error)]
#[error("invalid Gaussian rational literal `{0}`")]
pub struct ParseGaussError(String);

impl FromStr for GaussRat {
    type Err = ParseGaussError;

    /// Accepts the output of `Display`, e.g. `3`, `-2/5`, `i`, `-1/2 + 3/4*i`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ParseGaussError(s.to_string());
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(err());
        }
        // Split at the sign introducing the imaginary part, if any.
        let bytes = compact.as_bytes();
        let mut split = None;
        for (idx, &b) in bytes.iter().enumerate().skip(1) {
            if (b == b'+' || b == b'-') && compact.ends_with('i') {
                split = Some(idx);
            }
        }
        let parse_rat = |t: &str| -> Result<BigRational, ParseGaussError> {
            let (neg, body) = match t.strip_prefix('-') {
                Some(rest) => (true, rest),
                None => (false, t.strip_prefix('+').unwrap_or(t)),
            };
            let v = match body.split_once('/') {
                Some((n, d)) => {
                    let n: BigInt = n.parse().map_err(|_| err())?;
                    let d: BigInt = d.parse().map_err(|_| err())?;
                    if d.is_zero() {
                        return Err(err());
                    }
                    BigRational::new(n, d)
                }
                None => BigRational::from_integer(body.parse().map_err(|_| err())?),
            };
            Ok(if neg { -v } else { v })
        };
        let parse_im = |t: &str| -> Result<BigRational, ParseGaussError> {
            let t = t.strip_suffix('i').ok_or_else(err)?;
            let t = t.strip_suffix('*').unwrap_or(t);
            match t {
                "" | "+" => Ok(BigRational::one()),
                "-" => Ok(-BigRational::one()),
                _ => parse_rat(t),
            }
        };
        match split {
            Some(idx) => Ok(Self::new(parse_rat(&compact[..idx])?, parse_im(&compact[idx..])?)),
            None if compact.ends_with('i') => Ok(Self::new(BigRational::zero(), parse_im(&compact)?)),
            None => Ok(Self::new(parse_rat(&compact)?, BigRational::zero())),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_laws_on_samples() {
        let a = GaussRat::from_parts(1, 2, -3, 4);
        let b = GaussRat::from_parts(-5, 3, 2, 7);
        assert_eq!((a.clone() / b.clone()) * b.clone(), a);
        assert_eq!(GaussRat::i() * GaussRat::i(), GaussRat::from_i64(-1));
        assert_eq!(a.clone() - a, GaussRat::zero());
    }

    #[test]
    fn display_parse_round_trip() {
        for s in ["0", "3", "-2/5", "i", "-i", "1/2 + 3/4*i", "-1 - i", "7/3*i"] {
            let v: GaussRat = s.parse().unwrap();
            assert_eq!(v.to_string(), s);
        }
    }

    #[test]
    #[should_panic]
    fn divide_by_zero_panics() {
        let _ = GaussRat::one() / GaussRat::zero();
    }
}
