//! Exact checks for Borel-stable non-degeneration certificates.
//!
//! Variables `0..n³` are the structure constants `x_{i,j}^k` (index
//! `(i·n+j)·n+k`); a parametric source contributes its symbol as the next
//! variable, so every statement is proved for all admissible parameter values
//! at once. Rational parameter terms in equations are cleared, and the
//! cleared denominators must vanish only at excluded values.

use rayon::prelude::*;
use serde::Serialize;

use super::Verdict;
use crate::arith::{groebner_basis, ideal_is_trivial, Budget, Frac, GaussRat, Matrix, MultiPoly, Ring};
use crate::algebra::{AlgebraStructure, IdentityKind};
use crate::catalog::{Binding, CatalogEntry, Variety, CatalogError, CertificateDef, Flag, FlagTerm, NodeRef};
use crate::expr::{Expr, ExprError};

type Poly = MultiPoly<GaussRat>;
type Q = Frac<GaussRat>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CertificateError {
    #[error("unknown algebra `{0}`")]
    UnknownAlgebra(String),
    #[error("dimension mismatch between source and target")]
    DimensionMismatch,
    #[error("`{0}`: a certificate needs concrete members, not `(*)`")]
    FamilyBinding(String),
    #[error("`{0}` is not polynomial in the structure constants")]
    NotPolynomial(String),
    #[error("the basis `g` is singular")]
    SingularBasis,
    #[error(transparent)]
    Catalog(#[from] CatalogError),
    #[error(transparent)]
    Expr(#[from] ExprError),
}

/// Outcome of one part of a certificate, with readable reasons on failure.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckReport {
    pub verdict: Verdict,
    pub failures: Vec<String>,
}

impl CheckReport {
    fn from_failures(failures: Vec<String>) -> Self {
        let verdict = if failures.is_empty() { Verdict::Verified } else { Verdict::Failure };
        Self { verdict, failures }
    }

    fn inconclusive(why: impl Into<String>) -> Self {
        Self { verdict: Verdict::Inconclusive, failures: vec![why.into()] }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TargetReport {
    pub target: String,
    pub verdict: Verdict,
    pub failures: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CertificateReport {
    pub name: String,
    pub source: String,
    pub denominators: CheckReport,
    pub stability: CheckReport,
    pub membership: CheckReport,
    pub targets: Vec<TargetReport>,
    pub verdict: Verdict,
}

/// Combines verdicts: any failure fails, else any inconclusive is inconclusive.
pub fn combine(vs: impl IntoIterator<Item = Verdict>) -> Verdict {
    let mut out = Verdict::Verified;
    for v in vs {
        match v {
            Verdict::Failure => return Verdict::Failure,
            Verdict::Inconclusive => out = Verdict::Inconclusive,
            Verdict::Verified => {}
        }
    }
    out
}

/// Variable names and the generators of the closed set.
pub struct RelationSet {
    pub n: usize,
    pub names: Vec<String>,
    /// Index of the source parameter, when it varies.
    pub param: Option<usize>,
    pub generators: Vec<Poly>,
    /// Cleared parameter denominators of the equations.
    pub denominators: Vec<Poly>,
    /// Factors that are nonzero on the admissible source parameters.
    pub source_nonzero: Vec<Poly>,
    /// Identities of the variety the closed set lives in; stability may use
    /// them (as a radical-membership test) when plain membership fails.
    pub ambient: Option<IdentityKind>,
}

/// The smallest of the three varieties containing every entry.
pub fn ambient_variety<'a>(entries: impl IntoIterator<Item = &'a CatalogEntry> + Clone) -> Option<IdentityKind> {
    let all = |v: Variety| entries.clone().into_iter().all(|e| e.has_tag(v) || e.has_tag(Variety::N));
    if entries.clone().into_iter().all(|e| e.has_tag(Variety::N)) {
        Some(IdentityKind::ThreeStepNilpotent)
    } else if all(Variety::Z) {
        Some(IdentityKind::Zinbiel)
    } else if all(Variety::L) {
        Some(IdentityKind::Leibniz)
    } else {
        None
    }
}

fn xi(n: usize, i: usize, j: usize, k: usize) -> usize {
    (i * n + j) * n + k
}

fn push_unique(v: &mut Vec<Poly>, p: Poly) {
    if !p.is_zero() && !v.contains(&p) {
        v.push(p);
    }
}

/// Linear generators of one flag condition (flag indices are 1-based).
pub fn flag_polys(flag: &Flag, n: usize) -> Vec<Poly> {
    let x = |i, j, k| Poly::var(xi(n, i, j, k));
    let mut out = Vec::new();
    match flag {
        Flag::InCenter(j) => {
            let j = j - 1;
            for l in 0..n {
                for k in 0..n {
                    push_unique(&mut out, x(j, l, k) - x(l, j, k));
                }
            }
        }
        Flag::Within { terms, within } => {
            let kmax = within.map(|c| c - 1).unwrap_or(n);
            for t in terms {
                let (a, b, circ) = match *t {
                    FlagTerm::Prod(a, b) => (a, b, false),
                    FlagTerm::Circ(a, b) => (a, b, true),
                };
                for i in a - 1..n {
                    for j in b - 1..n {
                        for k in 0..kmax {
                            // U∘W = UW + WU constrains both products.
                            push_unique(&mut out, x(i, j, k));
                            if circ {
                                push_unique(&mut out, x(j, i, k));
                            }
                        }
                    }
                }
            }
        }
    }
    out
}

fn eval_env<'a>(names: &'a [String], extra: &'a [(String, Q)]) -> impl Fn(&str) -> Option<Q> + 'a {
    move |s: &str| {
        extra.iter().find(|(n, _)| n == s).map(|(_, q)| q.clone()).or_else(|| names.iter().position(|n| n == s).map(Q::var))
    }
}

/// Zero-set conditions of a binding: polynomials that must not vanish.
fn binding_nonzero(b: &Binding, eval: &dyn Fn(&Expr) -> Result<Q, ExprError>, var: Option<usize>) -> Result<Vec<Poly>, CertificateError> {
    let mut out = Vec::new();
    if let (Binding::Symbol { excluded, nonzero, .. }, Some(v)) = (b, var) {
        for e in excluded {
            let q = Q::var(v) - eval(e)?;
            out.push(q.numer().clone());
        }
        if let Some(e) = nonzero {
            let q = eval(e)?;
            out.push(q.numer().clone());
            if !q.denom().is_constant() {
                out.push(q.denom().clone());
            }
        }
    }
    Ok(out)
}

fn x_names(n: usize) -> Vec<String> {
    let mut names = Vec::with_capacity(n * n * n);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                names.push(Expr::coeff_name(i + 1, j + 1, k + 1));
            }
        }
    }
    names
}

/// Translates flags and equations into polynomial generators.
pub fn relation_set(cert: &CertificateDef, source: &CatalogEntry) -> Result<RelationSet, CertificateError> {
    let n = source.dim();
    let mut names = x_names(n);
    let nx = names.len();
    let mut extra = Vec::new();
    let param = match &cert.source.binding {
        Binding::Family => return Err(CertificateError::FamilyBinding(cert.source.to_string())),
        Binding::Symbol { sym, .. } => {
            names.push(sym.clone());
            if let Some(p) = source.params().first() {
                extra.push((p.clone(), Q::var(nx)));
            }
            Some(nx)
        }
        Binding::Value(e) => {
            if let Some(p) = source.params().first() {
                extra.push((p.clone(), e.eval::<Q>(&|_| None)?));
            }
            None
        }
        Binding::None => None,
    };
    let env = eval_env(&names, &extra);
    let eval = |e: &Expr| e.eval(&env);
    let mut generators = Vec::new();
    for f in &cert.flags {
        for p in flag_polys(f, n) {
            push_unique(&mut generators, p);
        }
    }
    let mut denominators = Vec::new();
    for e in &cert.equations {
        let q = eval(e)?;
        if (0..nx).any(|v| q.denom().uses_var(v)) {
            return Err(CertificateError::NotPolynomial(e.to_string()));
        }
        if !q.denom().is_constant() {
            push_unique(&mut denominators, q.denom().clone());
        }
        push_unique(&mut generators, q.numer().clone());
    }
    let source_nonzero = binding_nonzero(&cert.source.binding, &eval, param)?;
    drop(env);
    Ok(RelationSet { n, names, param, generators, denominators, source_nonzero, ambient: None })
}

/// `z·Π f − 1`: forces every `f` to be nonzero.
fn rabinowitsch(fs: &[Poly], z: usize) -> Option<Poly> {
    if fs.is_empty() {
        return None;
    }
    let prod = fs.iter().fold(Poly::one(), |acc, f| acc * f.clone());
    Some(Poly::var(z) * prod - Poly::one())
}

/// The cleared denominators vanish only at excluded parameter values.
pub fn check_denominators(rs: &RelationSet, budget: &Budget) -> CheckReport {
    let z = rs.names.len();
    let mut failures = Vec::new();
    for d in &rs.denominators {
        let mut gens = vec![d.clone()];
        gens.extend(rabinowitsch(&rs.source_nonzero, z));
        match groebner_basis(&gens, budget) {
            Ok(gb) if gb.is_trivial() => {}
            Ok(_) => failures.push(format!("denominator {} vanishes at an admissible parameter", d.fmt_with(&rs.names))),
            Err(e) => return CheckReport::inconclusive(e.to_string()),
        }
    }
    CheckReport::from_failures(failures)
}

/// Weight of `x_{i,j}^k` under `f_i = a_i e_i` is `ε_i + ε_j − ε_k`.
fn weight_components(p: &Poly, n: usize) -> Vec<Poly> {
    let nx = n * n * n;
    let mut by: std::collections::BTreeMap<Vec<i64>, Poly> = Default::default();
    for (m, c) in p.terms() {
        let mut w = vec![0i64; n];
        for (v, &e) in m.exps().iter().enumerate().take(nx) {
            if e > 0 {
                let (i, j, k) = (v / (n * n), (v / n) % n, v % n);
                w[i] += e as i64;
                w[j] += e as i64;
                w[k] -= e as i64;
            }
        }
        by.entry(w).or_default().add_term(m.clone(), c.clone());
    }
    by.into_values().collect()
}

/// Constants in the basis `f_u = e_u + a e_v` (others unchanged), as
/// substitutions for the `x` variables; `a` is variable `a`.
pub fn transvection(n: usize, u: usize, v: usize, a: usize) -> Vec<Option<Poly>> {
    let x = |i, j, k| Poly::var(xi(n, i, j, k));
    let coords = |i: usize| -> Vec<(usize, Poly)> {
        let mut c = vec![(i, Poly::one())];
        if i == u {
            c.push((v, Poly::var(a)));
        }
        c
    };
    let mut subs = vec![None; n * n * n];
    for i in 0..n {
        for j in 0..n {
            let w: Vec<Poly> = (0..n)
                .map(|r| {
                    let mut s = Poly::zero();
                    for (p, fp) in coords(i) {
                        for (q, fq) in coords(j) {
                            s = s + fp.clone() * fq.clone() * x(p, q, r);
                        }
                    }
                    s
                })
                .collect();
            for k in 0..n {
                // e_u = f_u − a f_v.
                let c = if k == v { w[v].clone() - Poly::var(a) * w[u].clone() } else { w[k].clone() };
                subs[xi(n, i, j, k)] = Some(c);
            }
        }
    }
    subs
}

/// Every generator stays in the ideal under diagonal and elementary
/// lower-unitriangular changes of basis; together these generate the Borel
/// group acting on the flag `S_i = ⟨e_i, …, e_n⟩`.
pub fn check_stability(rs: &RelationSet, budget: &Budget) -> CheckReport {
    let gb = match groebner_basis(&rs.generators, budget) {
        Ok(gb) => gb,
        Err(e) => return CheckReport::inconclusive(e.to_string()),
    };
    let mut names = rs.names.clone();
    names.push("a".into());
    let a = rs.names.len();
    let n = rs.n;
    let variety = rs.ambient.map(|k| variety_ideal(rs, k));
    let mut inconclusive = false;
    // Remainders outside the ideal may still vanish on R ∩ variety.
    let on_variety = |r: &Poly| -> Option<bool> {
        let gens = variety.as_ref()?;
        let mut out = Some(true);
        for c in r.coefficients_in(a) {
            if c.is_zero() {
                continue;
            }
            let mut sys = gens.clone();
            sys.push(Poly::var(a + 1) * simplify(&c, &zeros(&rs.generators)) - Poly::one());
            match ideal_is_trivial(&sys, budget) {
                crate::arith::Triviality::Yes => {}
                crate::arith::Triviality::No => return Some(false),
                crate::arith::Triviality::Inconclusive => out = None,
            }
        }
        out
    };
    let mut failures = Vec::new();
    for g in &rs.generators {
        for c in weight_components(g, n) {
            let r = gb.reduce(&c);
            if !r.is_zero() {
                match on_variety(&r) {
                    Some(true) => {}
                    None if variety.is_some() => inconclusive = true,
                    _ => failures.push(format!("diagonal: component {} of {} not in the ideal", c.fmt_with(&names), g.fmt_with(&names))),
                }
            }
        }
    }
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    let more: Vec<String> = pairs
        .par_iter()
        .flat_map_iter(|&(u, v)| {
            let subs = transvection(n, u, v, a);
            let mut out = Vec::new();
            for g in &rs.generators {
                let r = gb.reduce(&g.substitute(&subs));
                if !r.is_zero() && on_variety(&r) != Some(true) {
                    out.push(format!("f{u1} = e{u1} + a e{v1}: {} leaves the ideal (remainder {})", g.fmt_with(&names), r.fmt_with(&names), u1 = u + 1, v1 = v + 1));
                }
            }
            out
        })
        .collect();
    failures.extend(more);
    if failures.is_empty() && inconclusive {
        return CheckReport::inconclusive("radical membership exceeded the budget");
    }
    CheckReport::from_failures(failures)
}

/// Variables forced to zero by single-variable generators.
fn zeros(gens: &[Poly]) -> Vec<Option<Poly>> {
    let mut subs = Vec::new();
    for g in gens {
        if g.num_terms() == 1 && g.total_degree() == 1 {
            let v = g.leading_mono().expect("nonzero").exps().iter().position(|&e| e == 1).expect("linear monomial");
            if subs.len() <= v {
                subs.resize(v + 1, None);
            }
            subs[v] = Some(Poly::zero());
        }
    }
    subs
}

fn simplify(p: &Poly, zeros: &[Option<Poly>]) -> Poly {
    p.substitute(zeros)
}

/// Generators of the closed set plus the variety's identities, with the
/// variables forced to zero eliminated.
fn variety_ideal(rs: &RelationSet, kind: IdentityKind) -> Vec<Poly> {
    let n = rs.n;
    let z = zeros(&rs.generators);
    let generic = AlgebraStructure::from_fn(n, |i, j, k| Poly::var(xi(n, i, j, k)));
    let mut out = Vec::new();
    for p in rs.generators.iter().chain(generic.identity_defects(kind).iter()) {
        push_unique(&mut out, simplify(p, &z));
    }
    out
}

/// Structure constants of an entry under a binding, as polynomials in the
/// variables of `names` (plus `extra` values for named parameters).
fn constants_over(entry: &CatalogEntry, value: Option<Q>) -> Result<Vec<Q>, CertificateError> {
    let p = entry.params().first().cloned();
    let a = entry.structure_over::<Q>(&|s| (Some(s) == p.as_deref()).then(|| value.clone()).flatten())?;
    Ok(a.constants().to_vec())
}

fn source_value(rs: &RelationSet, cert: &CertificateDef) -> Result<Option<Q>, CertificateError> {
    Ok(match (&cert.source.binding, rs.param) {
        (Binding::Symbol { .. }, Some(v)) => Some(Q::var(v)),
        (Binding::Value(e), _) => Some(e.eval::<Q>(&|_| None)?),
        _ => None,
    })
}

/// `g*μ` satisfies every generator identically in the source parameter.
pub fn check_membership(rs: &RelationSet, cert: &CertificateDef, source: &CatalogEntry) -> Result<CheckReport, CertificateError> {
    let n = rs.n;
    let c = constants_over(source, source_value(rs, cert)?)?;
    let mut a = AlgebraStructure::from_fn(n, |i, j, k| c[xi(n, i, j, k)].clone());
    if let Some(rows) = &cert.basis {
        let env = eval_env(&rs.names, &[]);
        let mut g = Matrix::from_fn(n, n, |_, _| Q::zero());
        for (i, row) in rows.iter().enumerate() {
            for (j, e) in row.iter().enumerate() {
                g[(j, i)] = e.eval(&env)?;
            }
        }
        a = a.change_basis(&g).map_err(|_| CertificateError::SingularBasis)?;
    }
    let mut point: Vec<Q> = a.constants().to_vec();
    if let Some(v) = rs.param {
        point.push(Q::var(v));
    }
    let mut failures = Vec::new();
    for g in &rs.generators {
        let val = g.map_coeffs(Q::from_gauss).eval(&point);
        if !val.is_zero() {
            failures.push(format!("{} evaluates to {}", g.fmt_with(&rs.names), val.numer().fmt_with(&rs.names)));
        }
    }
    Ok(CheckReport::from_failures(failures))
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out.sort();
    out
}

/// Bruhat chart for pivots `p`: row `i` has a 1 in column `p_i`, zeros
/// before it and in the pivot columns of later rows, free entries elsewhere.
/// Every basis is brought into exactly one chart by the Borel group.
pub fn chart(p: &[usize], first_var: usize) -> (Matrix<Poly>, usize) {
    let n = p.len();
    let mut m = Matrix::from_fn(n, n, |_, _| Poly::zero());
    let mut next = first_var;
    for i in 0..n {
        m[(i, p[i])] = Poly::one();
        for c in p[i] + 1..n {
            if !p[i + 1..].contains(&c) {
                m[(i, c)] = Poly::var(next);
                next += 1;
            }
        }
    }
    (m, next - first_var)
}

impl RelationSet {
    /// No structure isomorphic to the target lies in the set: the structures
    /// of each Bruhat chart satisfying all generators form an empty variety.
    pub fn check_target(&self, target: &NodeRef, entry: &CatalogEntry, budget: &Budget) -> Result<TargetReport, CertificateError> {
        let n = self.n;
        if entry.dim() != n {
            return Err(CertificateError::DimensionMismatch);
        }
        let mut names = self.names.clone();
        let value = match &target.binding {
            Binding::Family => return Err(CertificateError::FamilyBinding(target.to_string())),
            Binding::None => None,
            Binding::Symbol { sym, .. } => {
                let v = names.iter().position(|s| s == sym).unwrap_or_else(|| {
                    names.push(sym.clone());
                    names.len() - 1
                });
                Some((v, Q::var(v)))
            }
            Binding::Value(e) => Some((usize::MAX, e.eval(&eval_env(&names, &[]))?)),
        };
        let env = eval_env(&names, &[]);
        let tv = value.as_ref().map(|(v, _)| *v).filter(|&v| v != usize::MAX);
        let mut nonzero = self.source_nonzero.clone();
        nonzero.extend(self.denominators.iter().cloned());
        nonzero.extend(binding_nonzero(&identified_binding(&target.binding, entry)?, &|e| e.eval(&env), tv)?);
        let lam = constants_over(entry, value.map(|(_, q)| q))?;
        let lam: Vec<Poly> = lam.iter().map(|q| q.as_poly().ok_or_else(|| CertificateError::NotPolynomial(target.to_string()))).collect::<Result<_, _>>()?;
        let lam = AlgebraStructure::from_fn(n, |i, j, k| lam[xi(n, i, j, k)].clone());
        let base = names.len();
        let cells: Vec<Result<(), String>> = permutations(n)
            .par_iter()
            .map(|p| {
                let (h, k) = chart(p, base);
                let det = h.det_ring().constant_term();
                let inv = h.adjugate().map(|e| e.scale(&(GaussRat::one() / det.clone())));
                let moved = lam.in_basis_with_inverse(&h, &inv);
                let subs: Vec<Option<Poly>> = moved.constants().iter().cloned().map(Some).collect();
                let mut gens: Vec<Poly> = Vec::new();
                for g in &self.generators {
                    push_unique(&mut gens, g.substitute(&subs));
                }
                gens.extend(rabinowitsch(&nonzero, base + k));
                let cell = p.iter().map(|c| (c + 1).to_string()).collect::<Vec<_>>().join("");
                match groebner_basis(&gens, budget) {
                    Ok(gb) if gb.is_trivial() => Ok(()),
                    Ok(_) => Err(format!("chart {cell}: a basis satisfies every relation")),
                    Err(e) => Err(format!("chart {cell}: inconclusive ({e})")),
                }
            })
            .collect();
        let failures: Vec<String> = cells.into_iter().filter_map(Result::err).collect();
        let verdict = if failures.is_empty() {
            Verdict::Verified
        } else if failures.iter().all(|f| f.contains("inconclusive")) {
            Verdict::Inconclusive
        } else {
            Verdict::Failure
        };
        Ok(TargetReport { target: target.to_string(), verdict, failures })
    }
}

/// Excluded values together with their images under the entry's
/// identifications (`α ≠ v` also excludes every member isomorphic to `v`).
fn identified_binding(b: &Binding, entry: &CatalogEntry) -> Result<Binding, CertificateError> {
    let Binding::Symbol { sym, excluded, nonzero } = b else { return Ok(b.clone()) };
    let mut all = excluded.clone();
    for e in excluded {
        for (p, img) in &entry.def.identify {
            let v = img.substitute(p, e)?;
            if !all.contains(&v) {
                all.push(v);
            }
        }
    }
    Ok(Binding::Symbol { sym: sym.clone(), excluded: all, nonzero: nonzero.clone() })
}

/// Checks all parts of a certificate.
pub fn verify_certificate(cert: &CertificateDef, lookup: &dyn Fn(&str) -> Option<CatalogEntry>, budget: &Budget) -> Result<CertificateReport, CertificateError> {
    let source = lookup(&cert.source.name).ok_or_else(|| CertificateError::UnknownAlgebra(cert.source.name.clone()))?;
    let mut rs = relation_set(cert, &source)?;
    let mut entries = vec![source.clone()];
    for t in &cert.targets {
        entries.push(lookup(&t.name).ok_or_else(|| CertificateError::UnknownAlgebra(t.name.clone()))?);
    }
    rs.ambient = ambient_variety(entries.iter());
    let denominators = check_denominators(&rs, budget);
    let stability = check_stability(&rs, budget);
    let membership = check_membership(&rs, cert, &source)?;
    let mut targets = Vec::new();
    for t in &cert.targets {
        let e = lookup(&t.name).ok_or_else(|| CertificateError::UnknownAlgebra(t.name.clone()))?;
        targets.push(rs.check_target(t, &e, budget)?);
    }
    let verdict = combine([denominators.verdict, stability.verdict, membership.verdict].into_iter().chain(targets.iter().map(|t| t.verdict)));
    Ok(CertificateReport { name: cert.name.clone(), source: cert.source.to_string(), denominators, stability, membership, targets, verdict })
}
