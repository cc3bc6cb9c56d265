use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::{GaussRat, Ring};

/// Dense univariate polynomial over ℚ(i); `coeffs[k]` is the coefficient of `x^k`.
/// Trailing zeros are never stored, so the zero polynomial is the empty vector.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct UniPoly {
    coeffs: Vec<GaussRat>,
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<GaussRat>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn constant(c: GaussRat) -> Self {
        Self::new(vec![c])
    }

    /// The monomial `x`.
    pub fn var() -> Self {
        Self::new(vec![GaussRat::zero(), GaussRat::one()])
    }

    pub fn monomial(c: GaussRat, deg: usize) -> Self {
        let mut v = vec![GaussRat::zero(); deg + 1];
        v[deg] = c;
        Self::new(v)
    }

    pub fn coeffs(&self) -> &[GaussRat] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&GaussRat> {
        self.coeffs.last()
    }

    pub fn coeff(&self, k: usize) -> GaussRat {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    /// Multiplicity of the root `0`; `None` for the zero polynomial.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn eval(&self, x: &GaussRat) -> GaussRat {
        self.coeffs
            .iter()
            .rev()
            .fold(GaussRat::zero(), |acc, c| acc * x.clone() + c.clone())
    }

    pub fn scale(&self, c: &GaussRat) -> Self {
        Self::new(self.coeffs.iter().map(|a| a.clone() * c.clone()).collect())
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            Some(lc) => {
                let inv = GaussRat::one() / lc.clone();
                self.scale(&inv)
            }
            None => Self::default(),
        }
    }

    /// Euclidean division, `self = q·d + r` with `deg r < deg d`.
    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        let dd = d.degree().expect("division by zero polynomial");
        let lc_inv = GaussRat::one() / d.coeffs[dd].clone();
        let mut r = self.coeffs.clone();
        let mut q = vec![GaussRat::zero(); r.len().saturating_sub(dd)];
        while r.len() > dd && !r.is_empty() {
            let k = r.len() - 1;
            let c = r[k].clone() * lc_inv.clone();
            if !c.is_zero() {
                for (i, dc) in d.coeffs.iter().enumerate() {
                    let idx = k - dd + i;
                    r[idx] = r[idx].clone() - c.clone() * dc.clone();
                }
            }
            q[k - dd] = c;
            r.pop();
            while r.last().is_some_and(|c| c.is_zero()) {
                r.pop();
            }
        }
        (Self::new(q), Self::new(r))
    }

    /// Monic gcd (zero if both inputs are zero).
    pub fn gcd(a: &Self, b: &Self) -> Self {
        let (mut x, mut y) = (a.clone(), b.clone());
        while !y.is_zero() {
            let (_, r) = x.div_rem(&y);
            x = y;
            y = r;
        }
        x.monic()
    }

    /// `self(p(x))`.
    pub fn compose(&self, p: &Self) -> Self {
        self.coeffs
            .iter()
            .rev()
            .fold(Self::default(), |acc, c| acc * p.clone() + Self::constant(c.clone()))
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c.clone() * GaussRat::from_i64(k as i64))
                .collect(),
        )
    }

    pub fn fmt_in(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut parts: Vec<String> = Vec::new();
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mono = match k {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{k}"),
            };
            let cs = if c.is_real() || num_traits::Zero::is_zero(&c.re) {
                c.to_string()
            } else {
                format!("({c})")
            };
            parts.push(match (mono.is_empty(), cs.as_str()) {
                (true, _) => cs,
                (false, "1") => mono,
                (false, "-1") => format!("-{mono}"),
                _ => format!("{cs}*{mono}"),
            });
        }
        parts.join(" + ").replace("+ -", "- ")
    }
}

impl Add for UniPoly {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        Self::new((0..n).map(|k| self.coeff(k) + o.coeff(k)).collect())
    }
}

impl Sub for UniPoly {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        self + (-o)
    }
}

impl Neg for UniPoly {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(self.coeffs.into_iter().map(|c| -c).collect())
    }
}

impl Mul for UniPoly {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::default();
        }
        let mut out = vec![GaussRat::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Self::new(out)
    }
}

impl fmt::Display for UniPoly {
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

    #[test]
    fn div_rem_reconstructs() {
        let a = p(&[1, 0, 0, 2, 5]);
        let d = p(&[3, 1, 1]);
        let (q, r) = a.div_rem(&d);
        assert_eq!(q * d.clone() + r.clone(), a);
        assert!(r.degree().unwrap_or(0) < d.degree().unwrap());
    }

    #[test]
    fn gcd_of_products() {
        let common = p(&[-1, 1]);
        let a = common.clone() * p(&[2, 1]);
        let b = common.clone() * p(&[5, 0, 1]);
        assert_eq!(UniPoly::gcd(&a, &b), common);
    }

    #[test]
    fn valuation_and_eval() {
        let a = p(&[0, 0, 3, 1]);
        assert_eq!(a.valuation(), Some(2));
        assert_eq!(a.eval(&GaussRat::from_i64(2)), GaussRat::from_i64(20));
        assert_eq!(a.fmt_in("t"), "t^3 + 3*t^2");
    }
}
