//! Symbolic scalar expressions as written in catalog files.
//!
//! Expressions are built through smart constructors that fold numeric
//! subterms and drop neutral elements, so printing and re-parsing an
//! expression reproduces it exactly.

use std::collections::BTreeSet;
use std::fmt;

use crate::arith::{Field, GaussRat, Ring};

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Expr {
    Num(GaussRat),
    Sym(String),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    Pow(Box<Expr>, i32),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExprError {
    #[error("unbound symbol `{0}`")]
    Unbound(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("`{0}` enters non-linearly")]
    NonLinear(String),
    #[error("expression has a term without a basis vector")]
    Affine,
}

impl Expr {
    pub fn num(c: GaussRat) -> Self {
        Self::Num(c)
    }

    pub fn int(n: i64) -> Self {
        Self::Num(GaussRat::from_i64(n))
    }

    pub fn sym(s: impl Into<String>) -> Self {
        Self::Sym(s.into())
    }

    /// Name used for the structure-constant variable `x_{i,j}^k` (1-based).
    pub fn coeff_name(i: usize, j: usize, k: usize) -> String {
        format!("x_{{{i},{j}}}^{k}")
    }

    pub fn as_num(&self) -> Option<&GaussRat> {
        match self {
            Self::Num(c) => Some(c),
            _ => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.as_num().is_some_and(Ring::is_zero)
    }

    fn is_one(&self) -> bool {
        self.as_num().is_some_and(Ring::is_one)
    }

    pub fn add(a: Self, b: Self) -> Self {
        match (a, b) {
            (Self::Num(x), Self::Num(y)) => Self::Num(x + y),
            (a, b) if b.is_zero() => a,
            (a, b) if a.is_zero() => b,
            (a, b) => Self::Add(Box::new(a), Box::new(b)),
        }
    }

    pub fn sub(a: Self, b: Self) -> Self {
        match (a, b) {
            (Self::Num(x), Self::Num(y)) => Self::Num(x - y),
            (a, b) if b.is_zero() => a,
            (a, b) if a.is_zero() => Self::neg(b),
            (a, b) => Self::Sub(Box::new(a), Box::new(b)),
        }
    }

    pub fn mul(a: Self, b: Self) -> Self {
        match (a, b) {
            (Self::Num(x), Self::Num(y)) => Self::Num(x * y),
            (a, b) if a.is_zero() || b.is_zero() => Self::int(0),
            (a, b) if a.is_one() => b,
            (a, b) if b.is_one() => a,
            (a, b) => Self::Mul(Box::new(a), Box::new(b)),
        }
    }

    pub fn div(a: Self, b: Self) -> Result<Self, ExprError> {
        if b.is_zero() {
            return Err(ExprError::DivisionByZero);
        }
        Ok(match (a, b) {
            (Self::Num(x), Self::Num(y)) => Self::Num(x / y),
            (a, _) if a.is_zero() => Self::int(0),
            (a, b) if b.is_one() => a,
            (a, b) => Self::Div(Box::new(a), Box::new(b)),
        })
    }

    pub fn neg(a: Self) -> Self {
        match a {
            Self::Num(x) => Self::Num(-x),
            a => Self::Neg(Box::new(a)),
        }
    }

    pub fn pow(a: Self, e: i32) -> Result<Self, ExprError> {
        Ok(match (a, e) {
            (_, 0) => Self::int(1),
            (a, 1) => a,
            (Self::Num(x), e) if e > 0 => Self::Num(x.pow(e as u32)),
            (Self::Num(x), e) => {
                if x.is_zero() {
                    return Err(ExprError::DivisionByZero);
                }
                Self::Num(GaussRat::one() / x.pow((-e) as u32))
            }
            (a, e) => Self::Pow(Box::new(a), e),
        })
    }

    pub fn symbols(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_symbols(&mut out);
        out
    }

    fn collect_symbols(&self, out: &mut BTreeSet<String>) {
        match self {
            Self::Num(_) => {}
            Self::Sym(s) => {
                out.insert(s.clone());
            }
            Self::Add(a, b) | Self::Sub(a, b) | Self::Mul(a, b) | Self::Div(a, b) => {
                a.collect_symbols(out);
                b.collect_symbols(out);
            }
            Self::Neg(a) | Self::Pow(a, _) => a.collect_symbols(out),
        }
    }

    pub fn mentions(&self, sym: &str) -> bool {
        match self {
            Self::Num(_) => false,
            Self::Sym(s) => s == sym,
            Self::Add(a, b) | Self::Sub(a, b) | Self::Mul(a, b) | Self::Div(a, b) => a.mentions(sym) || b.mentions(sym),
            Self::Neg(a) | Self::Pow(a, _) => a.mentions(sym),
        }
    }

    /// Replaces every occurrence of symbol `name` by `by` (re-folding constants).
    pub fn substitute(&self, name: &str, by: &Expr) -> Result<Self, ExprError> {
        self.rebuild(&|s| (s == name).then(|| by.clone()))
    }

    pub fn rename(&self, from: &str, to: &str) -> Self {
        self.rebuild(&|s| (s == from).then(|| Expr::sym(to))).expect("renaming cannot divide by zero")
    }

    fn rebuild(&self, f: &dyn Fn(&str) -> Option<Expr>) -> Result<Self, ExprError> {
        Ok(match self {
            Self::Num(c) => Self::Num(c.clone()),
            Self::Sym(s) => f(s).unwrap_or_else(|| Self::Sym(s.clone())),
            Self::Add(a, b) => Self::add(a.rebuild(f)?, b.rebuild(f)?),
            Self::Sub(a, b) => Self::sub(a.rebuild(f)?, b.rebuild(f)?),
            Self::Mul(a, b) => Self::mul(a.rebuild(f)?, b.rebuild(f)?),
            Self::Div(a, b) => Self::div(a.rebuild(f)?, b.rebuild(f)?)?,
            Self::Neg(a) => Self::neg(a.rebuild(f)?),
            Self::Pow(a, e) => Self::pow(a.rebuild(f)?, *e)?,
        })
    }

    /// Evaluates in any field, resolving symbols through `env`.
    pub fn eval<F: Field>(&self, env: &dyn Fn(&str) -> Option<F>) -> Result<F, ExprError> {
        Ok(match self {
            Self::Num(c) => F::from_gauss(c),
            Self::Sym(s) => env(s).ok_or_else(|| ExprError::Unbound(s.clone()))?,
            Self::Add(a, b) => a.eval(env)? + b.eval(env)?,
            Self::Sub(a, b) => a.eval(env)? - b.eval(env)?,
            Self::Mul(a, b) => a.eval(env)? * b.eval(env)?,
            Self::Div(a, b) => {
                let d = b.eval(env)?;
                if d.is_zero() {
                    return Err(ExprError::DivisionByZero);
                }
                a.eval(env)? / d
            }
            Self::Neg(a) => -a.eval(env)?,
            Self::Pow(a, e) => {
                let x = a.eval(env)?;
                if *e >= 0 {
                    x.pow(*e as u32)
                } else {
                    x.inv().ok_or(ExprError::DivisionByZero)?.pow((-e) as u32)
                }
            }
        })
    }

    /// Numeric value when the expression is free of symbols.
    pub fn constant_value(&self) -> Option<GaussRat> {
        self.eval::<GaussRat>(&|_| None).ok()
    }

    /// Splits an expression that is linear in the basis symbols (those for
    /// which `basis` returns an index `< n`) into its coefficient vector.
    pub fn split_linear(&self, n: usize, basis: &dyn Fn(&str) -> Option<usize>) -> Result<Vec<Expr>, ExprError> {
        let parts = self.linear_parts(n, basis)?.ok_or(ExprError::Affine)?;
        Ok(parts.into_iter().map(|c| c.unwrap_or_else(|| Expr::int(0))).collect())
    }

    /// `None` when basis-free; otherwise per-basis coefficients (`None` = 0).
    fn linear_parts(&self, n: usize, basis: &dyn Fn(&str) -> Option<usize>) -> Result<Option<Vec<Option<Expr>>>, ExprError> {
        let free = |e: &Expr| !e.symbols().iter().any(|s| basis(s).is_some());
        let scale = |v: Vec<Option<Expr>>, f: &dyn Fn(Expr) -> Result<Expr, ExprError>| -> Result<Vec<Option<Expr>>, ExprError> {
            v.into_iter().map(|c| c.map(f).transpose()).collect()
        };
        Ok(match self {
            Self::Num(_) => None,
            Self::Sym(s) => match basis(s) {
                Some(k) => {
                    let mut v = vec![None; n];
                    v[k] = Some(Expr::int(1));
                    Some(v)
                }
                None => None,
            },
            Self::Add(a, b) | Self::Sub(a, b) => {
                let minus = matches!(self, Self::Sub(..));
                let (pa, pb) = (a.linear_parts(n, basis)?, b.linear_parts(n, basis)?);
                match (pa, pb) {
                    (None, None) => None,
                    (Some(_), None) | (None, Some(_)) => return Err(ExprError::Affine),
                    (Some(x), Some(y)) => Some(
                        x.into_iter()
                            .zip(y)
                            .map(|(p, q)| match (p, q) {
                                (None, None) => None,
                                (Some(p), None) => Some(p),
                                (None, Some(q)) => Some(if minus { Expr::neg(q) } else { q }),
                                (Some(p), Some(q)) => Some(if minus { Expr::sub(p, q) } else { Expr::add(p, q) }),
                            })
                            .collect(),
                    ),
                }
            }
            Self::Mul(a, b) => match (free(a), free(b)) {
                (true, true) => None,
                (true, false) => {
                    let v = b.linear_parts(n, basis)?.ok_or(ExprError::Affine)?;
                    Some(scale(v, &|c| Ok(Expr::mul((**a).clone(), c)))?)
                }
                (false, true) => {
                    let v = a.linear_parts(n, basis)?.ok_or(ExprError::Affine)?;
                    Some(scale(v, &|c| Ok(Expr::mul(c, (**b).clone())))?)
                }
                (false, false) => return Err(ExprError::NonLinear(self.to_string())),
            },
            Self::Div(a, b) => {
                if !free(b) {
                    return Err(ExprError::NonLinear(self.to_string()));
                }
                match a.linear_parts(n, basis)? {
                    None => None,
                    Some(v) => Some(scale(v, &|c| Expr::div(c, (**b).clone()))?),
                }
            }
            Self::Neg(a) => a.linear_parts(n, basis)?.map(|v| v.into_iter().map(|c| c.map(Expr::neg)).collect()),
            Self::Pow(a, _) => {
                if !free(a) {
                    return Err(ExprError::NonLinear(self.to_string()));
                }
                None
            }
        })
    }

    /// Binding strength used for printing: 1 additive, 2 multiplicative,
    /// 3 unary minus, 4 power, 5 atom.
    fn level(&self) -> u8 {
        match self {
            Self::Num(c) => num_level(c),
            Self::Sym(_) => 5,
            Self::Add(..) | Self::Sub(..) => 1,
            Self::Mul(..) | Self::Div(..) => 2,
            Self::Neg(_) => 3,
            Self::Pow(..) => 4,
        }
    }

    fn write_at(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        if self.level() < min {
            write!(f, "(")?;
            self.write_at(f, 0)?;
            return write!(f, ")");
        }
        match self {
            Self::Num(c) => write!(f, "{c}"),
            Self::Sym(s) => write!(f, "{s}"),
            Self::Add(a, b) => {
                a.write_at(f, 1)?;
                write!(f, " + ")?;
                b.write_at(f, 2)
            }
            Self::Sub(a, b) => {
                a.write_at(f, 1)?;
                write!(f, " - ")?;
                b.write_at(f, 2)
            }
            Self::Mul(a, b) => {
                a.write_at(f, 2)?;
                write!(f, "*")?;
                b.write_at(f, 3)
            }
            Self::Div(a, b) => {
                a.write_at(f, 2)?;
                write!(f, "/")?;
                b.write_at(f, 3)
            }
            Self::Neg(a) => {
                write!(f, "-")?;
                a.write_at(f, 3)
            }
            Self::Pow(a, e) => {
                a.write_at(f, 5)?;
                write!(f, "^{e}")
            }
        }
    }
}

fn num_level(c: &GaussRat) -> u8 {
    let s = c.to_string();
    if s.contains(' ') {
        1
    } else if s.contains(['/', '*']) {
        2
    } else if s.starts_with('-') {
        3
    } else {
        5
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_at(f, 0)
    }
}

/// Writes `Σ c_k e_{k+1}` so that it re-parses to the same coefficients.
pub fn fmt_linear(coeffs: &[Expr]) -> String {
    let mut out = String::new();
    for (k, c) in coeffs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let (negative, mag) = match c {
            Expr::Num(x) if x.re < num_rational::BigRational::from_integer(0.into()) && x.im == num_rational::BigRational::from_integer(0.into()) => {
                (true, Expr::Num(-x.clone()))
            }
            Expr::Neg(inner) => (true, (**inner).clone()),
            _ => (false, c.clone()),
        };
        let body = if mag.is_one() {
            format!("e{}", k + 1)
        } else {
            let mut s = String::new();
            if mag.level() < 2 {
                s = format!("({mag})");
            } else {
                s.push_str(&mag.to_string());
            }
            format!("{s}*e{}", k + 1)
        };
        if out.is_empty() {
            out = if negative { format!("-{body}") } else { body };
        } else {
            out.push_str(if negative { " - " } else { " + " });
            out.push_str(&body);
        }
    }
    if out.is_empty() {
        "0".into()
    } else {
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn folding_and_printing() {
        let e = Expr::div(Expr::int(1), Expr::int(2)).unwrap();
        assert_eq!(e.to_string(), "1/2");
        let t = Expr::sym("t");
        let p = Expr::mul(Expr::int(-2), Expr::pow(t.clone(), -1).unwrap());
        assert_eq!(p.to_string(), "-2*t^-1");
        let s = Expr::sub(t.clone(), Expr::sub(t.clone(), Expr::int(1)));
        assert_eq!(s.to_string(), "t - (t - 1)");
    }

    #[test]
    fn evaluation() {
        let a = Expr::sym("a");
        let e = Expr::div(Expr::neg(a.clone()), Expr::pow(Expr::sub(Expr::int(1), a), 2).unwrap()).unwrap();
        let v: GaussRat = e.eval(&|s| (s == "a").then(|| GaussRat::from_i64(3))).unwrap();
        assert_eq!(v, GaussRat::from_ratio(-3, 4));
        assert!(matches!(e.eval::<GaussRat>(&|_| None), Err(ExprError::Unbound(_))));
    }
}
