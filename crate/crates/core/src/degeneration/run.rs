//! Batch verification of documents: witnesses, invariant claims and
//! certificates, with per-row reports and a soundness cross-check.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::certificate::{combine, verify_certificate};
use super::witness::{verify_witness, WitnessFailure};
use super::Verdict;
use crate::arith::{Budget, GaussRat, Ring};
use crate::catalog::{builtin_catalog, Binding, CatalogEntry, ClaimProof, Document, NodeRef, WitnessDef};
use crate::expr::Expr;
use crate::invariants::Invariant;

/// Random parameter values tried besides the generic point and the
/// special values.
pub const RANDOM_SAMPLES: usize = 5;

/// Name lookup over the builtin catalog plus the algebras of a document,
/// in catalog order.
#[derive(Clone, Debug)]
pub struct Resolver {
    entries: Vec<CatalogEntry>,
    index: HashMap<String, usize>,
}

impl Resolver {
    pub fn builtin() -> Self {
        Self::from_entries(builtin_catalog())
    }

    fn from_entries(entries: Vec<CatalogEntry>) -> Self {
        let index = entries.iter().enumerate().map(|(i, e)| (e.name().to_string(), i)).collect();
        Self { entries, index }
    }

    /// Builtin entries, overridden by the document's own definitions.
    pub fn with(doc: &Document) -> Self {
        let mut entries = builtin_catalog();
        for a in doc.algebras() {
            let e = CatalogEntry { def: a.clone() };
            match entries.iter().position(|x| x.name() == a.name) {
                Some(i) => entries[i] = e,
                None => entries.push(e),
            }
        }
        Self::from_entries(entries)
    }

    pub fn get(&self, name: &str) -> Option<CatalogEntry> {
        self.index.get(name).map(|&i| self.entries[i].clone())
    }

    pub fn entries(&self) -> &[CatalogEntry] {
        &self.entries
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct WitnessOutcome {
    pub id: String,
    pub source: String,
    pub target: String,
    pub verdict: Verdict,
    pub failures: Vec<WitnessFailure>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(skip)]
    pub source_ref: Option<NodeRef>,
    #[serde(skip)]
    pub target_ref: Option<NodeRef>,
}

#[derive(Clone, Debug, Serialize)]
pub struct NondegOutcome {
    pub id: String,
    pub source: String,
    pub target: String,
    pub proof: String,
    pub verdict: Verdict,
    pub detail: Vec<String>,
    /// The proof object does not depend on the source parameter, so it
    /// bounds the union of the covered orbits.
    pub uniform: bool,
    #[serde(skip)]
    pub source_ref: Option<NodeRef>,
    #[serde(skip)]
    pub target_ref: Option<NodeRef>,
}

/// Report ids `SRC->DST`, with `#2`, `#3`, … for repeated pairs.
pub fn witness_ids<'a>(ws: impl IntoIterator<Item = &'a WitnessDef>) -> Vec<String> {
    let mut seen: HashMap<String, usize> = HashMap::new();
    ws.into_iter()
        .map(|w| {
            let id = w.id();
            let k = seen.entry(id.clone()).or_insert(0);
            *k += 1;
            if *k == 1 {
                id
            } else {
                format!("{id}#{k}")
            }
        })
        .collect()
}

/// Verifies the witnesses of `doc` (only the one with id `only`, if given).
pub fn verify_witnesses(doc: &Document, resolver: &Resolver, only: Option<&str>) -> Vec<WitnessOutcome> {
    let ws: Vec<&WitnessDef> = doc.witnesses().collect();
    let ids = witness_ids(ws.iter().copied());
    let jobs: Vec<(String, &WitnessDef)> = ids.into_iter().zip(ws).filter(|(id, _)| only.is_none_or(|o| o == id)).collect();
    jobs.par_iter()
        .map(|(id, w)| {
            let base = WitnessOutcome {
                id: id.clone(),
                source: w.source.to_string(),
                target: w.target.to_string(),
                verdict: Verdict::Failure,
                failures: vec![],
                error: None,
                source_ref: Some(w.source.clone()),
                target_ref: Some(w.target.clone()),
            };
            match verify_witness(w, &|s| resolver.get(s)) {
                Ok(r) => WitnessOutcome { verdict: r.verdict, failures: r.failures, ..base },
                Err(e) => WitnessOutcome { error: Some(e.to_string()), ..base },
            }
        })
        .collect()
}

fn eval_at(e: &Expr, env: &[(String, GaussRat)]) -> Option<GaussRat> {
    e.eval::<GaussRat>(&|s| env.iter().find(|(n, _)| n == s).map(|(_, v)| v.clone())).ok()
}

/// Whether the member `v` of `entry` is covered by binding `b`; `env`
/// supplies values of symbols bound elsewhere.
pub fn admits(b: &Binding, entry: &CatalogEntry, v: &GaussRat, env: &[(String, GaussRat)]) -> bool {
    match b {
        Binding::None | Binding::Family => true,
        Binding::Value(e) => eval_at(e, env).is_some_and(|w| entry.identified(&w, v)),
        Binding::Symbol { sym, excluded, nonzero } => {
            let mut env = env.to_vec();
            env.push((sym.clone(), v.clone()));
            let excl = excluded.iter().any(|e| eval_at(e, &env).is_some_and(|w| entry.identified(&w, v)));
            // An unevaluable condition (division by zero) counts as excluded.
            let nz = nonzero.as_ref().is_none_or(|e| eval_at(e, &env).is_some_and(|w| !w.is_zero()));
            !excl && nz
        }
    }
}

fn random_value(rng: &mut ChaCha8Rng) -> GaussRat {
    let re = rng.gen_range(-12..=12);
    let im = if rng.gen_bool(0.5) { 0 } else { rng.gen_range(-12..=12) };
    GaussRat::from_parts(re, rng.gen_range(1..=5), im, rng.gen_range(1..=5))
}

/// Parameter values to test for a binding: special values of the entry,
/// constants named by the binding, and seeded random values; all admitted.
fn candidate_values(b: &Binding, entry: &CatalogEntry, env: &[(String, GaussRat)], rng: &mut ChaCha8Rng) -> Vec<GaussRat> {
    let mut vs = entry.special_values();
    if let Binding::Value(e) = b {
        vs.extend(eval_at(e, env));
    }
    for _ in 0..RANDOM_SAMPLES {
        vs.push(random_value(rng));
    }
    let mut out: Vec<GaussRat> = Vec::new();
    for v in vs {
        if admits(b, entry, &v, env) && !out.contains(&v) {
            out.push(v);
        }
    }
    out
}

/// Values of `inv` on the members named by `r`: generic and sampled for
/// symbolic bindings, exact for fixed members.
fn invariant_values(r: &NodeRef, e: &CatalogEntry, inv: Invariant, budget: &Budget, rng: &mut ChaCha8Rng) -> Result<Vec<(String, Option<usize>)>, String> {
    let err = |x: &dyn std::fmt::Display| x.to_string();
    let p = e.params().first().cloned().unwrap_or_default();
    Ok(match &r.binding {
        Binding::None => vec![(String::new(), inv.compute(&e.at(None).map_err(|x| err(&x))?, budget))],
        Binding::Value(x) => {
            let v = x.constant_value().ok_or_else(|| format!("`{x}` is not a constant"))?;
            vec![(format!("{p}={v}"), inv.compute(&e.at(Some(&v)).map_err(|x| err(&x))?, budget))]
        }
        Binding::Symbol { .. } | Binding::Family => {
            let mut out = vec![("generic".to_string(), inv.compute(&e.generic().map_err(|x| err(&x))?, budget))];
            for v in candidate_values(&r.binding, e, &[], rng) {
                out.push((format!("{p}={v}"), inv.compute(&e.at(Some(&v)).map_err(|x| err(&x))?, budget)));
            }
            out
        }
    })
}

fn show_values(name: &str, inv: Invariant, vs: &[(String, Option<usize>)]) -> String {
    let parts: Vec<String> = vs
        .iter()
        .map(|(l, v)| {
            let v = v.map_or("?".to_string(), |v| v.to_string());
            if l.is_empty() {
                v
            } else {
                format!("{v} ({l})")
            }
        })
        .collect();
    format!("{inv}({name}) = {}", parts.join(", "))
}

/// Checks `A ↛ B` by the strict inequality of a monotone invariant, on
/// every sampled pair of members.
pub fn verify_invariant_certificate(a: &NodeRef, b: &NodeRef, inv: Invariant, resolver: &Resolver, budget: &Budget, seed: u64) -> NondegOutcome {
    let mut out = NondegOutcome {
        id: format!("{} !-> {}", a.name, b.name),
        source: a.to_string(),
        target: b.to_string(),
        proof: format!("criterion {inv}"),
        verdict: Verdict::Failure,
        detail: vec![],
        uniform: true,
        source_ref: Some(a.clone()),
        target_ref: Some(b.clone()),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (Some(ea), Some(eb)) = (resolver.get(&a.name), resolver.get(&b.name)) else {
        out.detail.push("unknown algebra".into());
        return out;
    };
    let va = invariant_values(a, &ea, inv, budget, &mut rng);
    let vb = invariant_values(b, &eb, inv, budget, &mut rng);
    let (va, vb) = match (va, vb) {
        (Ok(x), Ok(y)) => (x, y),
        (Err(e), _) | (_, Err(e)) => {
            out.detail.push(e);
            return out;
        }
    };
    out.detail.push(show_values(&a.name, inv, &va));
    out.detail.push(show_values(&b.name, inv, &vb));
    let mut verdicts = Vec::new();
    for (_, x) in &va {
        for (_, y) in &vb {
            verdicts.push(match (x, y) {
                (Some(x), Some(y)) if inv.separates(*x, *y) => Verdict::Verified,
                (Some(_), Some(_)) => Verdict::Failure,
                _ => Verdict::Inconclusive,
            });
        }
    }
    out.verdict = combine(verdicts);
    out
}

/// Verifies every non-degeneration of `doc`: invariant claims, certificate
/// claims and certificates, one outcome per (source, target) pair.
pub fn verify_nondegenerations(doc: &Document, resolver: &Resolver, budget: &Budget, seed: u64) -> Vec<NondegOutcome> {
    let certs: Vec<_> = doc.certificates().collect();
    let mut by_cert: HashMap<String, Vec<NondegOutcome>> = HashMap::new();
    let cert_rows: Vec<(String, Vec<NondegOutcome>)> = certs
        .par_iter()
        .map(|c| {
            let uniform = c.source.bound_symbol().is_none_or(|sym| {
                let uses = |e: &crate::expr::Expr| e.symbols().contains(sym);
                !c.equations.iter().any(uses) && !c.basis.iter().flatten().flatten().any(uses)
            });
            let row = |t: &NodeRef, verdict, detail| NondegOutcome {
                id: format!("{} !-> {}", c.source.name, t.name),
                source: c.source.to_string(),
                target: t.to_string(),
                proof: format!("certificate {}", c.name),
                verdict,
                detail,
                uniform,
                source_ref: Some(c.source.clone()),
                target_ref: Some(t.clone()),
            };
            let rows = match verify_certificate(c, &|s| resolver.get(s), budget) {
                Ok(r) => {
                    let common = combine([r.denominators.verdict, r.stability.verdict, r.membership.verdict]);
                    let mut notes: Vec<String> = Vec::new();
                    for (what, part) in [("denominators", &r.denominators), ("stability", &r.stability), ("membership", &r.membership)] {
                        notes.push(format!("{what}: {}", part.verdict));
                        notes.extend(part.failures.iter().map(|f| format!("  {f}")));
                    }
                    r.targets
                        .iter()
                        .zip(&c.targets)
                        .map(|(tr, t)| {
                            let mut d = notes.clone();
                            d.push(format!("orbit avoidance: {}", tr.verdict));
                            d.extend(tr.failures.iter().map(|f| format!("  {f}")));
                            row(t, combine([common, tr.verdict]), d)
                        })
                        .collect()
                }
                Err(e) => c.targets.iter().map(|t| row(t, Verdict::Failure, vec![e.to_string()])).collect(),
            };
            (c.name.clone(), rows)
        })
        .collect();
    let mut out = Vec::new();
    for (name, rows) in cert_rows {
        out.extend(rows.iter().cloned());
        by_cert.insert(name, rows);
    }
    let claims: Vec<_> = doc.claims().filter(|c| !c.degenerates).flat_map(|c| c.targets.iter().map(move |t| (c, t))).collect();
    let claim_rows: Vec<NondegOutcome> = claims
        .par_iter()
        .enumerate()
        .map(|(k, (c, t))| match &c.proof {
            ClaimProof::Invariant(inv) => verify_invariant_certificate(&c.source, t, *inv, resolver, budget, seed.wrapping_add(k as u64)),
            ClaimProof::Certificate(name) => {
                let found = by_cert.get(name).and_then(|rows| rows.iter().find(|r| r.target_ref.as_ref().is_some_and(|x| x.name == t.name)));
                let mut r = found.cloned().unwrap_or_else(|| NondegOutcome {
                    id: format!("{} !-> {}", c.source.name, t.name),
                    source: c.source.to_string(),
                    target: t.to_string(),
                    proof: format!("certificate {name}"),
                    verdict: Verdict::Failure,
                    detail: vec![format!("certificate `{name}` does not cover {t}")],
                    uniform: false,
                    source_ref: Some(c.source.clone()),
                    target_ref: Some((*t).clone()),
                });
                r.source = c.source.to_string();
                r
            }
            ClaimProof::Witness(_) => unreachable!("filtered: degenerations carry witnesses"),
        })
        .collect();
    // Certificate claims repeat certificate rows; keep one copy.
    for r in claim_rows {
        if !(r.proof.starts_with("certificate") && out.iter().any(|o| o.id == r.id && o.proof == r.proof)) {
            out.push(r);
        }
    }
    out
}

/// Pairs where a verified witness and a verified non-degeneration speak
/// about a common source and target member. Family witnesses only assert a
/// limit of the whole family, so they never conflict with member claims.
pub fn soundness_conflicts(ws: &[WitnessOutcome], ns: &[NondegOutcome], resolver: &Resolver, seed: u64) -> Vec<String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for w in ws.iter().filter(|w| w.verdict == Verdict::Verified) {
        let (Some(wa), Some(wb)) = (&w.source_ref, &w.target_ref) else { continue };
        if matches!(wa.binding, Binding::Family) {
            continue;
        }
        for n in ns.iter().filter(|n| n.verdict == Verdict::Verified) {
            let (Some(na), Some(nb)) = (&n.source_ref, &n.target_ref) else { continue };
            if na.name != wa.name || nb.name != wb.name {
                continue;
            }
            let (Some(ea), Some(eb)) = (resolver.get(&wa.name), resolver.get(&wb.name)) else { continue };
            if let Some(at) = common_member(wa, wb, na, nb, &ea, &eb, &mut rng) {
                out.push(format!("witness {} and {} `{} !-> {}` both verify{at}", w.id, n.proof, n.source, n.target));
            }
        }
    }
    out
}

fn bind(env: &mut Vec<(String, GaussRat)>, r: &NodeRef, v: &GaussRat) {
    if let Some(s) = r.bound_symbol() {
        env.push((s.to_string(), v.clone()));
    }
}

/// A sampled member pair admitted by both statements, described for the report.
fn common_member(wa: &NodeRef, wb: &NodeRef, na: &NodeRef, nb: &NodeRef, ea: &CatalogEntry, eb: &CatalogEntry, rng: &mut ChaCha8Rng) -> Option<String> {
    let sources: Vec<Option<GaussRat>> = if ea.is_family() {
        let mut vs = candidate_values(&wa.binding, ea, &[], rng);
        vs.extend(candidate_values(&na.binding, ea, &[], rng));
        vs.into_iter().filter(|v| admits(&wa.binding, ea, v, &[]) && admits(&na.binding, ea, v, &[])).map(Some).collect()
    } else {
        vec![None]
    };
    for a in sources {
        let (mut wenv, mut nenv) = (Vec::new(), Vec::new());
        if let Some(a) = &a {
            bind(&mut wenv, wa, a);
            bind(&mut nenv, na, a);
        }
        let targets: Vec<Option<GaussRat>> = if eb.is_family() {
            let mut vs = candidate_values(&wb.binding, eb, &wenv, rng);
            vs.extend(candidate_values(&nb.binding, eb, &nenv, rng));
            vs.into_iter().filter(|v| admits(&wb.binding, eb, v, &wenv) && admits(&nb.binding, eb, v, &nenv)).map(Some).collect()
        } else {
            vec![None]
        };
        if let Some(b) = targets.into_iter().next() {
            let mut at = String::new();
            if let Some(a) = a {
                at.push_str(&format!(" at {}({a})", wa.name));
            }
            if let Some(b) = b {
                at.push_str(&format!(" -> {}({b})", wb.name));
            }
            return Some(at);
        }
    }
    None
}
