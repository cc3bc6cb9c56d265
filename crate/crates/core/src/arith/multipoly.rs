use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::{Field, GaussRat, Ring};

/// Exponent vector with trailing zeros trimmed. Ordered by graded reverse
/// lexicographic order (variable 0 is the "largest" variable).
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Mono(Vec<u32>);

impl Mono {
    pub fn one() -> Self {
        Self(Vec::new())
    }

    pub fn var(i: usize) -> Self {
        Self::var_pow(i, 1)
    }

    pub fn var_pow(i: usize, e: u32) -> Self {
        let mut v = vec![0; i + 1];
        v[i] = e;
        Self::from_vec(v)
    }

    pub fn from_vec(mut v: Vec<u32>) -> Self {
        while v.last() == Some(&0) {
            v.pop();
        }
        Self(v)
    }

    pub fn exps(&self) -> &[u32] {
        &self.0
    }

    pub fn exp(&self, i: usize) -> u32 {
        self.0.get(i).copied().unwrap_or(0)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn mul(&self, o: &Self) -> Self {
        let n = self.0.len().max(o.0.len());
        Self((0..n).map(|i| self.exp(i) + o.exp(i)).collect())
    }

    pub fn divides(&self, o: &Self) -> bool {
        self.0.len() <= o.0.len() && self.0.iter().zip(&o.0).all(|(a, b)| a <= b)
    }

    /// `o / self`, assuming `self | o`.
    pub fn quotient_of(&self, o: &Self) -> Self {
        Self::from_vec((0..o.0.len()).map(|i| o.exp(i) - self.exp(i)).collect())
    }

    pub fn lcm(&self, o: &Self) -> Self {
        let n = self.0.len().max(o.0.len());
        Self((0..n).map(|i| self.exp(i).max(o.exp(i))).collect())
    }

    pub fn coprime(&self, o: &Self) -> bool {
        self.0.iter().zip(&o.0).all(|(a, b)| *a == 0 || *b == 0)
    }

    /// Copy with variable `i` removed from the exponent vector (set to zero).
    pub fn without(&self, i: usize) -> Self {
        let mut v = self.0.clone();
        if i < v.len() {
            v[i] = 0;
        }
        Self::from_vec(v)
    }
}

impl Ord for Mono {
    fn cmp(&self, o: &Self) -> Ordering {
        let d = self.degree().cmp(&o.degree());
        if d != Ordering::Equal {
            return d;
        }
        let n = self.0.len().max(o.0.len());
        for i in (0..n).rev() {
            let (a, b) = (self.exp(i), o.exp(i));
            if a != b {
                // Smaller exponent in the last differing variable wins.
                return b.cmp(&a);
            }
        }
        Ordering::Equal
    }
}

impl PartialOrd for Mono {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

/// Sparse multivariate polynomial. Variables are identified by index; names
/// live in the caller's context (see [`MultiPoly::fmt_with`]).
///
/// Zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct MultiPoly<C> {
    terms: BTreeMap<Mono, C>,
}

impl<C: Ring> Default for MultiPoly<C> {
    fn default() -> Self {
        Self { terms: BTreeMap::new() }
    }
}

impl<C: Ring> MultiPoly<C> {
    pub fn constant(c: C) -> Self {
        Self::term(c, Mono::one())
    }

    pub fn var(i: usize) -> Self {
        Self::term(C::one(), Mono::var(i))
    }

    pub fn term(c: C, m: Mono) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Self { terms }
    }

    pub fn from_terms(it: impl IntoIterator<Item = (Mono, C)>) -> Self {
        let mut p = Self::default();
        for (m, c) in it {
            p.add_term(m, c);
        }
        p
    }

    pub fn add_term(&mut self, m: Mono, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.remove(&m) {
            Some(old) => {
                let s = old + c;
                if !s.is_zero() {
                    self.terms.insert(m, s);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    /// Removes and returns the leading term.
    pub fn pop_leading(&mut self) -> Option<(Mono, C)> {
        self.terms.pop_last()
    }

    /// `self -= c · m · g`, in place.
    pub fn sub_scaled_shifted(&mut self, g: &Self, c: &C, m: &Mono) {
        for (k, a) in &g.terms {
            self.add_term(k.mul(m), -(a.clone() * c.clone()));
        }
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Mono, &C)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn leading(&self) -> Option<(&Mono, &C)> {
        self.terms.iter().next_back()
    }

    pub fn leading_mono(&self) -> Option<&Mono> {
        self.terms.keys().next_back()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Mono::degree).max().unwrap_or(0)
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Mono::is_one)
    }

    pub fn constant_term(&self) -> C {
        self.terms.get(&Mono::one()).cloned().unwrap_or_else(C::zero)
    }

    /// Number of variable slots touched by any term.
    pub fn var_span(&self) -> usize {
        self.terms.keys().map(|m| m.exps().len()).max().unwrap_or(0)
    }

    pub fn uses_var(&self, i: usize) -> bool {
        self.terms.keys().any(|m| m.exp(i) > 0)
    }

    pub fn degree_in(&self, i: usize) -> Option<u32> {
        self.terms.keys().map(|m| m.exp(i)).max()
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return Self::default();
        }
        Self { terms: self.terms.iter().map(|(m, a)| (m.clone(), a.clone() * c.clone())).collect() }
    }

    pub fn mul_term(&self, c: &C, m: &Mono) -> Self {
        if c.is_zero() {
            return Self::default();
        }
        Self { terms: self.terms.iter().map(|(k, a)| (k.mul(m), a.clone() * c.clone())).collect() }
    }

    pub fn map_coeffs<D: Ring>(&self, f: impl Fn(&C) -> D) -> MultiPoly<D> {
        MultiPoly::from_terms(self.terms.iter().map(|(m, c)| (m.clone(), f(c))))
    }

    /// Groups terms by the exponent of variable `i`: `self = Σ_k var_i^k · out[k]`,
    /// where no entry of `out` mentions variable `i`.
    pub fn coefficients_in(&self, i: usize) -> Vec<Self> {
        let d = self.degree_in(i).unwrap_or(0) as usize;
        let mut out = vec![Self::default(); if self.is_zero() { 0 } else { d + 1 }];
        for (m, c) in &self.terms {
            out[m.exp(i) as usize].add_term(m.without(i), c.clone());
        }
        out
    }

    /// Substitutes polynomials for variables. Variables with index
    /// `>= subs.len()` or mapped to `None` are kept.
    pub fn substitute(&self, subs: &[Option<Self>]) -> Self {
        let mut out = Self::default();
        let mut pow_cache: BTreeMap<(usize, u32), Self> = BTreeMap::new();
        for (m, c) in &self.terms {
            let mut kept = Vec::new();
            let mut acc = Self::constant(c.clone());
            for (i, &e) in m.exps().iter().enumerate() {
                if e == 0 {
                    kept.push(0);
                    continue;
                }
                match subs.get(i).and_then(|s| s.as_ref()) {
                    Some(s) => {
                        let p = pow_cache.entry((i, e)).or_insert_with(|| s.pow(e)).clone();
                        acc = acc * p;
                        kept.push(0);
                    }
                    None => kept.push(e),
                }
            }
            let keep = Mono::from_vec(kept);
            out = out + acc.mul_term(&C::one(), &keep);
        }
        out
    }

    /// Evaluates every variable at the given point (missing entries count as 0).
    pub fn eval(&self, point: &[C]) -> C {
        let mut acc = C::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.exps().iter().enumerate() {
                if e > 0 {
                    let x = point.get(i).cloned().unwrap_or_else(C::zero);
                    t = t * x.pow(e);
                }
            }
            acc = acc + t;
        }
        acc
    }

    /// Pseudo-remainder of `self` by `g` with respect to variable `v`:
    /// `lc_v(g)^k · self ≡ r (mod g)` with `deg_v r < deg_v g`.
    pub fn prem(&self, g: &Self, v: usize) -> Self {
        let dg = g.degree_in(v).unwrap_or(0);
        assert!(dg > 0, "pseudo-division by a polynomial free of the variable");
        let gc = g.coefficients_in(v);
        let lc = gc[dg as usize].clone();
        let mut r = self.clone();
        loop {
            let dr = match r.degree_in(v) {
                Some(d) if d >= dg && !r.is_zero() => d,
                _ => return r,
            };
            let lr = r.coefficients_in(v)[dr as usize].clone();
            let shift = Self::term(C::one(), Mono::var_pow(v, dr - dg));
            r = lc.clone() * r - lr * shift * g.clone();
        }
    }

    pub fn fmt_with(&self, names: &[String]) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (m, c) in self.terms.iter().rev() {
            let mut mono = Vec::new();
            for (i, &e) in m.exps().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let name = names.get(i).cloned().unwrap_or_else(|| format!("x{i}"));
                mono.push(if e == 1 { name } else { format!("{name}^{e}") });
            }
            let mono = mono.join("*");
            let cs = c.to_string();
            let simple = !cs.contains(['+', ' ']) || cs.starts_with('(');
            let cs = if simple { cs } else { format!("({cs})") };
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

impl<C: Field> MultiPoly<C> {
    /// `self / g` if `g` divides `self` exactly.
    pub fn div_exact(&self, g: &Self) -> Option<Self> {
        let (lm, lc) = g.leading()?;
        let lc_inv = lc.inv().expect("nonzero leading coefficient");
        let mut r = self.clone();
        let mut q = Self::default();
        while let Some((m, c)) = r.leading().map(|(m, c)| (m.clone(), c.clone())) {
            if !lm.divides(&m) {
                return None;
            }
            let shift = lm.quotient_of(&m);
            let f = c * lc_inv.clone();
            r.sub_scaled_shifted(g, &f, &shift);
            q.add_term(shift, f);
        }
        Some(q)
    }

    /// Scales so the leading coefficient is one.
    pub fn monic(&self) -> Self {
        match self.leading() {
            Some((_, c)) => {
                let inv = c.inv().expect("nonzero leading coefficient");
                self.scale(&inv)
            }
            None => Self::default(),
        }
    }
}

impl MultiPoly<GaussRat> {
    /// Lifts a ℚ(i)-polynomial to any coefficient ring containing ℚ(i).
    pub fn lift<D: Ring>(&self) -> MultiPoly<D> {
        self.map_coeffs(D::from_gauss)
    }
}

impl<C: Ring> Ring for MultiPoly<C> {
    fn zero() -> Self {
        Self::default()
    }
    fn one() -> Self {
        Self::constant(C::one())
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    fn from_gauss(q: &GaussRat) -> Self {
        Self::constant(C::from_gauss(q))
    }
}

impl<C: Ring> Add for MultiPoly<C> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        let (mut big, small) = if self.terms.len() >= o.terms.len() { (self, o) } else { (o, self) };
        for (m, c) in small.terms {
            big.add_term(m, c);
        }
        big
    }
}

impl<C: Ring> Sub for MultiPoly<C> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        let mut out = self;
        for (m, c) in o.terms {
            out.add_term(m, -c);
        }
        out
    }
}

impl<C: Ring> Neg for MultiPoly<C> {
    type Output = Self;
    fn neg(self) -> Self {
        Self { terms: self.terms.into_iter().map(|(m, c)| (m, -c)).collect() }
    }
}

impl<C: Ring> Mul for MultiPoly<C> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let mut out = Self::default();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &o.terms {
                out.add_term(ma.mul(mb), ca.clone() * cb.clone());
            }
        }
        out
    }
}

impl<C: Ring> fmt::Display for MultiPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.fmt_with(&[]))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type P = MultiPoly<GaussRat>;

    fn x() -> P {
        P::var(0)
    }
    fn y() -> P {
        P::var(1)
    }
    fn c(n: i64) -> P {
        P::constant(GaussRat::from_i64(n))
    }

    #[test]
    fn grevlex_order() {
        // x^2 > x*y > y^2 > x > y > 1 with x = var 0.
        let mut ms = [
            Mono::one(),
            Mono::var(1),
            Mono::var(0),
            Mono::var_pow(1, 2),
            Mono::from_vec(vec![1, 1]),
            Mono::var_pow(0, 2),
        ];
        let sorted = ms.clone();
        ms.reverse();
        ms.sort();
        assert_eq!(ms.to_vec(), sorted.to_vec());
        // x*z^0*... : x*y*z vs x^2*w? degree ties broken by last variable.
        assert!(Mono::from_vec(vec![2, 0, 0]) > Mono::from_vec(vec![1, 0, 1]));
    }

    #[test]
    fn arithmetic_identities() {
        let p = x() * x() - c(1);
        let q = (x() - c(1)) * (x() + c(1));
        assert_eq!(p, q);
        assert!((p.clone() - q).is_zero());
        assert_eq!(p.eval(&[GaussRat::from_i64(3)]), GaussRat::from_i64(8));
    }

    #[test]
    fn substitution_and_coefficients() {
        // (x + y)^2 with y -> x  gives 4x^2.
        let p = (x() + y()).pow(2);
        let s = p.substitute(&[None, Some(x())]);
        assert_eq!(s, c(4) * x() * x());
        let parts = p.coefficients_in(1);
        assert_eq!(parts, vec![x() * x(), c(2) * x(), c(1)]);
    }
}
