//! Exact verification of parametrized bases.
//!
//! The transported constants `λ(t) = N(t)/D(t)` are computed with polynomial
//! numerators and a common denominator. Both are expanded in powers of `t`
//! with coefficients in ℚ(i)[symbols], reduced modulo the helper relations;
//! `λ` has no pole iff the lowest surviving `t`-order of `N` is at least that
//! of `D`, and the limit is the ratio of the coefficients at `D`'s order.

use std::collections::BTreeSet;

use serde::Serialize;

use super::Verdict;
use crate::arith::{Frac, GaussRat, Matrix, MultiPoly, Ring};
use crate::catalog::{Binding, CatalogEntry, CatalogError, NodeRef, WitnessDef};
use crate::expr::{Expr, ExprError};

type Poly = MultiPoly<GaussRat>;
type Q = Frac<GaussRat>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum WitnessError {
    #[error("unknown algebra `{0}`")]
    UnknownAlgebra(String),
    #[error("basis matrix is singular")]
    Singular,
    #[error("a family source needs a parametrized index")]
    MissingIndex,
    #[error("the target must be a single algebra, not a family")]
    TargetFamily,
    #[error("dimension mismatch between source and target")]
    DimensionMismatch,
    #[error("invalid helper relation `{0}`: {1}")]
    BadRelation(String, String),
    #[error(transparent)]
    Catalog(#[from] CatalogError),
    #[error(transparent)]
    Expr(#[from] ExprError),
}

/// Why one structure constant fails; indices are 1-based.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WitnessFailure {
    /// `λ_{ij}^k` behaves like `t^order` with `order < 0`.
    Pole { i: usize, j: usize, k: usize, order: i64 },
    /// The limit exists but differs from the target's constant.
    Mismatch { i: usize, j: usize, k: usize, expected: String, found: String },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WitnessReport {
    pub id: String,
    pub verdict: Verdict,
    pub failures: Vec<WitnessFailure>,
}

struct Relation {
    poly: Poly,
    var: usize,
}

struct Ctx {
    names: Vec<String>,
    relations: Vec<Relation>,
}

impl Ctx {
    fn var_of(&self, s: &str) -> Option<usize> {
        self.names.iter().position(|n| n == s)
    }

    fn env(&self) -> impl Fn(&str) -> Option<Q> + '_ {
        move |s: &str| self.var_of(s).map(Q::var)
    }

    fn eval(&self, e: &Expr) -> Result<Q, ExprError> {
        e.eval(&self.env())
    }

    fn reduce(&self, p: &Poly) -> Poly {
        let mut r = p.clone();
        for rel in &self.relations {
            if r.is_zero() {
                break;
            }
            if r.uses_var(rel.var) {
                r = r.prem(&rel.poly, rel.var);
            }
        }
        r
    }

    fn is_zero_mod(&self, p: &Poly) -> bool {
        self.reduce(p).is_zero()
    }

    /// Lowest power of `t` whose coefficient survives the reduction.
    fn t_order(&self, p: &Poly) -> Option<usize> {
        p.coefficients_in(0).iter().position(|c| !self.is_zero_mod(c))
    }

    fn show(&self, p: &Poly) -> String {
        p.fmt_with(&self.names)
    }
}

/// Common polynomial denominator of several fractions, and the numerators
/// over it.
fn clear(entries: &[Q]) -> (Vec<Poly>, Poly) {
    let mut s = Poly::one();
    for q in entries {
        if s.div_exact(q.denom()).is_none() {
            s = s * q.denom().clone();
        }
    }
    let nums = entries.iter().map(|q| q.numer().clone() * s.div_exact(q.denom()).expect("denominator divides s")).collect();
    (nums, s)
}

fn binding_value(ctx: &Ctx, r: &NodeRef, index: Option<&Expr>) -> Result<Option<Q>, WitnessError> {
    Ok(match &r.binding {
        Binding::None => None,
        Binding::Family => Some(ctx.eval(index.ok_or(WitnessError::MissingIndex)?)?),
        Binding::Symbol { sym, .. } => Some(Q::var(ctx.var_of(sym).expect("bound symbol registered"))),
        Binding::Value(e) => Some(ctx.eval(e)?),
    })
}

fn structure(entry: &CatalogEntry, value: Option<Q>) -> Result<Vec<Q>, WitnessError> {
    let p = entry.params().first().cloned();
    let a = entry.structure_over::<Q>(&|s| (Some(s) == p.as_deref()).then(|| value.clone()).flatten())?;
    Ok(a.constants().to_vec())
}

fn build_ctx(w: &WitnessDef) -> Result<Ctx, WitnessError> {
    let mut syms: BTreeSet<String> = BTreeSet::new();
    for row in &w.rows {
        for c in row {
            syms.extend(c.symbols());
        }
    }
    for (l, r) in &w.relations {
        syms.extend(l.symbols());
        syms.extend(r.symbols());
    }
    if let Some(e) = &w.index {
        syms.extend(e.symbols());
    }
    let bound: Vec<String> = [&w.source, &w.target].iter().filter_map(|r| r.bound_symbol().map(str::to_string)).collect();
    for r in [&w.source, &w.target] {
        if let Binding::Value(e) = &r.binding {
            syms.extend(e.symbols());
        }
    }
    syms.extend(bound.iter().cloned());
    syms.remove("t");
    let mut names = vec!["t".to_string()];
    names.extend(syms);
    let mut ctx = Ctx { names, relations: vec![] };
    let mut helpers_seen = BTreeSet::new();
    for (l, r) in &w.relations {
        let text = format!("{l} = {r}");
        let bad = |why: &str| WitnessError::BadRelation(text.clone(), why.to_string());
        let mut hs: BTreeSet<String> = l.symbols();
        hs.extend(r.symbols());
        hs.retain(|s| s != "t" && !bound.contains(s));
        if hs.len() != 1 {
            return Err(bad("each relation must involve exactly one helper symbol"));
        }
        let h = hs.into_iter().next().unwrap();
        if !helpers_seen.insert(h.clone()) {
            return Err(bad("helper symbol defined twice"));
        }
        let var = ctx.var_of(&h).expect("helper registered");
        let poly = ctx.eval(&Expr::sub(l.clone(), r.clone()))?.numer().clone();
        if poly.uses_var(0) {
            return Err(bad("relations may not involve t"));
        }
        let coeffs = poly.coefficients_in(var);
        let deg = coeffs.len().saturating_sub(1);
        if !(1..=2).contains(&deg) {
            return Err(bad("the helper must occur with degree 1 or 2"));
        }
        if !coeffs.iter().any(|c| c.is_constant() && !c.is_zero()) {
            return Err(bad("relation must have a nonzero constant coefficient (primitivity)"));
        }
        if deg == 2 {
            let disc = coeffs[1].clone() * coeffs[1].clone() - Poly::from_i64(4) * coeffs[2].clone() * coeffs[0].clone();
            if disc.is_zero() {
                return Err(bad("relation has a repeated root"));
            }
        }
        ctx.relations.push(Relation { poly, var });
    }
    Ok(ctx)
}

/// Verifies a witness against catalog entries resolved by `lookup`.
pub fn verify_witness(w: &WitnessDef, lookup: &dyn Fn(&str) -> Option<CatalogEntry>) -> Result<WitnessReport, WitnessError> {
    let src = lookup(&w.source.name).ok_or_else(|| WitnessError::UnknownAlgebra(w.source.name.clone()))?;
    let dst = lookup(&w.target.name).ok_or_else(|| WitnessError::UnknownAlgebra(w.target.name.clone()))?;
    if matches!(w.target.binding, Binding::Family) {
        return Err(WitnessError::TargetFamily);
    }
    if matches!(w.source.binding, Binding::Family) && w.index.is_none() {
        return Err(WitnessError::MissingIndex);
    }
    let n = src.dim();
    if dst.dim() != n || w.rows.len() != n || w.rows.iter().any(|r| r.len() != n) {
        return Err(WitnessError::DimensionMismatch);
    }
    let ctx = build_ctx(w)?;
    let c = structure(&src, binding_value(&ctx, &w.source, w.index.as_ref())?)?;
    let tgt = structure(&dst, binding_value(&ctx, &w.target, None)?)?;

    let entries: Vec<Q> = w.rows.iter().flatten().map(|e| ctx.eval(e)).collect::<Result<_, _>>()?;
    let (m, s) = clear(&entries);
    let m = Matrix::from_fn(n, n, |i, j| m[i * n + j].clone());
    let (cn, cw) = clear(&c);
    let det = m.det_ring();
    if ctx.t_order(&det).is_none() {
        return Err(WitnessError::Singular);
    }
    let adj = m.adjugate();
    let d = det * s * cw;
    let b = ctx.t_order(&d).expect("nonzero denominator");
    let d_b = d.coefficients_in(0)[b].clone();

    let idx = |i: usize, j: usize, k: usize| (i * n + j) * n + k;
    let mut failures = Vec::new();
    for i in 0..n {
        for j in 0..n {
            // P'_{ij}^r = Σ_{p,q} M'_{ip} M'_{jq} C'_{pq}^r
            let mut pr = vec![Poly::zero(); n];
            for p in 0..n {
                if m[(i, p)].is_zero() {
                    continue;
                }
                for q in 0..n {
                    if m[(j, q)].is_zero() {
                        continue;
                    }
                    let f = m[(i, p)].clone() * m[(j, q)].clone();
                    for (r, slot) in pr.iter_mut().enumerate() {
                        let cc = &cn[idx(p, q, r)];
                        if !cc.is_zero() {
                            *slot = slot.clone() + f.clone() * cc.clone();
                        }
                    }
                }
            }
            for k in 0..n {
                let mut num = Poly::zero();
                for (r, p) in pr.iter().enumerate() {
                    if !p.is_zero() && !adj[(r, k)].is_zero() {
                        num = num + p.clone() * adj[(r, k)].clone();
                    }
                }
                let order = ctx.t_order(&num);
                if let Some(a) = order {
                    if a < b {
                        failures.push(WitnessFailure::Pole { i: i + 1, j: j + 1, k: k + 1, order: a as i64 - b as i64 });
                        continue;
                    }
                }
                let n_b = num.coefficients_in(0).get(b).cloned().unwrap_or_default();
                let t = &tgt[idx(i, j, k)];
                let diff = n_b.clone() * t.denom().clone() - t.numer().clone() * d_b.clone();
                if !ctx.is_zero_mod(&diff) {
                    let found = ctx.reduce(&n_b);
                    let found = if found.is_zero() {
                        "0".to_string()
                    } else {
                        format!("({}) / ({})", ctx.show(&found), ctx.show(&ctx.reduce(&d_b)))
                    };
                    let expected = if t.denom().is_one() {
                        ctx.show(t.numer())
                    } else {
                        format!("({}) / ({})", ctx.show(t.numer()), ctx.show(t.denom()))
                    };
                    failures.push(WitnessFailure::Mismatch { i: i + 1, j: j + 1, k: k + 1, expected, found });
                }
            }
        }
    }
    let verdict = if failures.is_empty() { Verdict::Verified } else { Verdict::Failure };
    Ok(WitnessReport { id: w.id(), verdict, failures })
}
