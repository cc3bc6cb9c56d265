//! The degeneration digraph on catalog members: closure, reduction,
//! derived non-degenerations, irreducible components and DOT output.
//!
//! Vertices are *members*: each non-parametric algebra; for each family its
//! generic member (every value outside the distinguished ones), each
//! distinguished value (up to identification), and a `(*)` vertex standing
//! for the closure of the union of all member orbits.

mod components;
mod dot;

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::Serialize;

use crate::algebra::IdentityKind;
use crate::arith::{Budget, GaussRat};
use crate::catalog::{Binding, CatalogEntry, NodeRef};
use crate::degeneration::{admits, NondegOutcome, Resolver, Verdict, WitnessOutcome};
use crate::expr::Expr;
use crate::invariants::{der_dim, Invariant};

pub use components::{components, Component, ComponentError, ComponentReport};
pub use dot::emit_dot;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Member {
    /// A non-parametric algebra, or the generic member of a family.
    Whole,
    /// A distinguished member; the string is the canonical value.
    At(String),
    /// The union of the family's orbits.
    Family,
}

#[derive(Clone, Debug, Serialize)]
pub struct Node {
    pub entry: String,
    pub member: Member,
    #[serde(skip)]
    pub value: Option<GaussRat>,
    pub label: String,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GraphError {
    #[error("`{0}` both degenerates and does not degenerate to `{1}` ({2})")]
    Conflict(String, String, String),
    #[error("degeneration cycle through `{0}` and `{1}`")]
    Cycle(String, String),
    #[error("unknown algebra `{0}`")]
    UnknownAlgebra(String),
}

#[derive(Clone, Debug)]
pub struct DegenerationGraph {
    pub nodes: Vec<Node>,
    index: HashMap<(String, Member), usize>,
    entries: Vec<CatalogEntry>,
    /// Direct degenerations with their justifications.
    pub edges: BTreeMap<(usize, usize), Vec<String>>,
    /// Verified non-degenerations between members, as stated.
    pub non_edges: BTreeMap<(usize, usize), Vec<String>>,
    /// Statements whose proof also covers the union of the source's
    /// generic orbits: `(family vertex, target) -> proof`.
    pub union_non_edges: BTreeMap<(usize, usize), Vec<String>>,
    /// Claims left out because they did not verify.
    pub excluded: Vec<String>,
    closure: Vec<BTreeSet<usize>>,
    der: Vec<Option<usize>>,
    known: Vec<Vec<Option<Why>>>,
    base: Vec<Vec<Option<String>>>,
    /// Cheap isomorphism invariants of member vertices.
    profile: Vec<Option<Vec<usize>>>,
}

/// Justification of a derived non-degeneration.
#[derive(Clone, Debug)]
enum Why {
    Base(String),
    /// `c ↛ d` with `c → a` and `b → d`.
    Via(usize, usize),
}

/// Compact value notation for labels: `i/2`, `-2`, `1/3 + 2i`.
pub fn fmt_value(v: &GaussRat) -> String {
    use num_traits::{One, Signed, Zero};
    let im = |x: &num_rational::BigRational| {
        let (n, d) = (x.numer(), x.denom());
        let sign = if x.is_negative() { "-" } else { "" };
        let n = n.abs();
        let head = if n.is_one() { "i".to_string() } else { format!("{n}i") };
        if d.is_one() {
            format!("{sign}{head}")
        } else {
            format!("{sign}{head}/{d}")
        }
    };
    match (v.re.is_zero(), v.im.is_zero()) {
        (_, true) => v.re.to_string(),
        (true, false) => im(&v.im),
        (false, false) => {
            let i = im(&v.im);
            match i.strip_prefix('-') {
                Some(rest) => format!("{} - {rest}", v.re),
                None => format!("{} + {i}", v.re),
            }
        }
    }
}

fn canonical(e: &CatalogEntry, v: &GaussRat) -> GaussRat {
    e.canonical_parameter(v)
}

fn eval_env(e: &Expr, env: &[(String, GaussRat)]) -> Option<GaussRat> {
    e.eval::<GaussRat>(&|s| env.iter().find(|(n, _)| n == s).map(|(_, v)| v.clone())).ok()
}

/// Distinguished values of every family: derivation special cases and all
/// constants named by bindings, closed under dependent target values.
fn distinguished(entries: &[CatalogEntry], refs: &[(NodeRef, NodeRef)]) -> HashMap<String, Vec<GaussRat>> {
    let mut out: HashMap<String, Vec<GaussRat>> = HashMap::new();
    let find = |n: &str| entries.iter().find(|e| e.name() == n);
    let add = |out: &mut HashMap<String, Vec<GaussRat>>, e: &CatalogEntry, v: GaussRat| -> bool {
        let v = canonical(e, &v);
        let vs = out.entry(e.name().to_string()).or_default();
        if vs.contains(&v) {
            false
        } else {
            vs.push(v);
            true
        }
    };
    for e in entries.iter().filter(|e| e.is_family()) {
        out.entry(e.name().to_string()).or_default();
        for v in e.special_values() {
            add(&mut out, e, v);
        }
    }
    for (a, b) in refs {
        for r in [a, b] {
            let Some(e) = find(&r.name).filter(|e| e.is_family()) else { continue };
            match &r.binding {
                Binding::Value(x) => {
                    if let Some(v) = x.constant_value() {
                        add(&mut out, e, v);
                    }
                }
                Binding::Symbol { excluded, .. } => {
                    for x in excluded {
                        if let Some(v) = x.constant_value() {
                            add(&mut out, e, v);
                        }
                    }
                }
                _ => {}
            }
        }
    }
    // Dependent targets `B(f(α))` at distinguished α.
    for _ in 0..3 {
        let mut changed = false;
        for (a, b) in refs {
            let (Some(ea), Some(eb)) = (find(&a.name), find(&b.name)) else { continue };
            let (Some(sym), Binding::Value(x)) = (a.bound_symbol(), &b.binding) else { continue };
            if !eb.is_family() || x.constant_value().is_some() {
                continue;
            }
            for v in out.get(ea.name()).cloned().unwrap_or_default() {
                if admits(&a.binding, ea, &v, &[]) {
                    if let Some(w) = eval_env(x, &[(sym.to_string(), v)]) {
                        changed |= add(&mut out, eb, w);
                    }
                }
            }
        }
        if !changed {
            break;
        }
    }
    for vs in out.values_mut() {
        vs.sort_by(|a, b| a.cmp_lex(b));
    }
    out
}

impl DegenerationGraph {
    /// Vertices for every entry, without edges beyond the structural ones.
    fn skeleton(resolver: &Resolver, refs: &[(NodeRef, NodeRef)]) -> Self {
        let entries = resolver.entries().to_vec();
        let special = distinguished(&entries, refs);
        let mut g = Self {
            nodes: vec![],
            index: HashMap::new(),
            entries: entries.clone(),
            edges: BTreeMap::new(),
            non_edges: BTreeMap::new(),
            union_non_edges: BTreeMap::new(),
            excluded: vec![],
            closure: vec![],
            der: vec![],
            known: vec![],
            base: vec![],
            profile: vec![],
        };
        for e in &entries {
            let name = e.name().to_string();
            match e.params().first() {
                None => g.push(Node { entry: name.clone(), member: Member::Whole, value: None, label: name }),
                Some(p) => {
                    g.push(Node { entry: name.clone(), member: Member::Family, value: None, label: format!("{name}(*)") });
                    g.push(Node { entry: name.clone(), member: Member::Whole, value: None, label: format!("{name}({p})") });
                    for v in special.get(&name).cloned().unwrap_or_default() {
                        let s = v.to_string();
                        let label = format!("{name}({})", fmt_value(&v));
                        g.push(Node { entry: name.clone(), member: Member::At(s), value: Some(v), label });
                    }
                }
            }
        }
        // Structural degenerations.
        let zero = g.find("C4", &Member::Whole);
        for i in 0..g.nodes.len() {
            if let Some(z) = zero {
                if i != z && g.nodes[i].member != Member::Family {
                    g.add_edge(i, z, "zero algebra");
                }
            }
            if g.nodes[i].member == Member::Family {
                for j in g.members_of(&g.nodes[i].entry.clone()) {
                    g.add_edge(i, j, "family member");
                }
            }
        }
        g
    }

    fn push(&mut self, n: Node) {
        self.index.insert((n.entry.clone(), n.member.clone()), self.nodes.len());
        self.nodes.push(n);
    }

    pub fn find(&self, entry: &str, m: &Member) -> Option<usize> {
        self.index.get(&(entry.to_string(), m.clone())).copied()
    }

    /// Index of the vertex with this label.
    pub fn by_label(&self, label: &str) -> Option<usize> {
        self.nodes.iter().position(|n| n.label == label)
    }

    pub fn entry(&self, name: &str) -> Option<&CatalogEntry> {
        self.entries.iter().find(|e| e.name() == name)
    }

    /// Member vertices (not `(*)`) of an entry.
    pub fn members_of(&self, entry: &str) -> Vec<usize> {
        (0..self.nodes.len()).filter(|&i| self.nodes[i].entry == entry && self.nodes[i].member != Member::Family).collect()
    }

    fn add_edge(&mut self, a: usize, b: usize, why: &str) {
        let v = self.edges.entry((a, b)).or_default();
        if !v.iter().any(|x| x == why) {
            v.push(why.to_string());
        }
    }

    fn add_non_edge(&mut self, a: usize, b: usize, why: &str) {
        let v = self.non_edges.entry((a, b)).or_default();
        if !v.iter().any(|x| x == why) {
            v.push(why.to_string());
        }
    }

    /// Vertices of `r`'s entry covered by its binding; `env` gives values of
    /// symbols bound on the other side. Generic members are covered by every
    /// symbolic binding (exceptions are finite).
    fn covered(&self, r: &NodeRef, env: &[(String, GaussRat)]) -> Result<Vec<usize>, GraphError> {
        let e = self.entry(&r.name).ok_or_else(|| GraphError::UnknownAlgebra(r.name.clone()))?;
        let members = self.members_of(&r.name);
        Ok(match &r.binding {
            Binding::None => members,
            Binding::Family => self.find(&r.name, &Member::Family).into_iter().collect(),
            Binding::Value(x) => match (x.constant_value(), eval_env(x, env)) {
                (Some(v), _) | (None, Some(v)) => {
                    let v = canonical(e, &v);
                    let at = self.find(&r.name, &Member::At(v.to_string()));
                    at.or_else(|| self.find(&r.name, &Member::Whole)).into_iter().collect()
                }
                // A value depending on a generic parameter is generic.
                (None, None) => self.find(&r.name, &Member::Whole).into_iter().collect(),
            },
            Binding::Symbol { .. } => members
                .into_iter()
                .filter(|&i| match &self.nodes[i].value {
                    Some(v) => admits(&r.binding, e, v, env),
                    None => true,
                })
                .collect(),
        })
    }

    /// Vertex pairs `(a, b)` named by a statement `A → B` or `A ↛ B`.
    fn pairs(&self, a: &NodeRef, b: &NodeRef) -> Result<Vec<(usize, usize)>, GraphError> {
        let mut out = Vec::new();
        for s in self.covered(a, &[])? {
            let mut env = Vec::new();
            if let (Some(sym), Some(v)) = (a.bound_symbol(), &self.nodes[s].value) {
                env.push((sym.to_string(), v.clone()));
            }
            for t in self.covered(b, &env)? {
                out.push((s, t));
            }
        }
        Ok(out)
    }


    /// Graph of the verified statements. Unverified ones are listed in
    /// `excluded`.
    pub fn build(resolver: &Resolver, ws: &[WitnessOutcome], ns: &[NondegOutcome]) -> Result<Self, GraphError> {
        let refs: Vec<(NodeRef, NodeRef)> = ws
            .iter()
            .filter_map(|w| Some((w.source_ref.clone()?, w.target_ref.clone()?)))
            .chain(ns.iter().filter_map(|n| Some((n.source_ref.clone()?, n.target_ref.clone()?))))
            .collect();
        let mut g = Self::skeleton(resolver, &refs);
        for w in ws {
            let (Some(a), Some(b)) = (&w.source_ref, &w.target_ref) else { continue };
            if w.verdict != Verdict::Verified {
                g.excluded.push(format!("witness {} ({})", w.id, w.verdict));
                continue;
            }
            for (s, t) in g.pairs(a, b)? {
                if s != t {
                    g.add_edge(s, t, &format!("witness {}", w.id));
                }
            }
            // Cofinitely many members give the closure of the whole family,
            // as the constants are polynomial in the parameter.
            if let (Binding::Symbol { .. }, Some(f)) = (&b.binding, g.find(&b.name, &Member::Family)) {
                for s in g.covered(a, &[])? {
                    g.add_edge(s, f, &format!("witness {}", w.id));
                }
            }
        }
        for n in ns {
            let (Some(a), Some(b)) = (&n.source_ref, &n.target_ref) else { continue };
            if n.verdict != Verdict::Verified {
                g.excluded.push(format!("{} via {} ({})", n.id, n.proof, n.verdict));
                continue;
            }
            // With a target range depending on a generic source, the generic
            // target is not covered.
            let dependent = a.bound_symbol().is_some_and(|sym| mentions(b, sym));
            for (s, t) in g.pairs(a, b)? {
                if !(dependent && g.nodes[s].member == Member::Whole && g.nodes[t].member == Member::Whole) {
                    g.add_non_edge(s, t, &n.proof);
                }
            }
            // The proof bounds a closed set containing every covered orbit,
            // hence their union, provided the target does not vary with the
            // source; exceptions must be finitely many and named.
            if let Binding::Symbol { sym, nonzero: None, .. } = &a.binding {
                if let (Some(f), false, true) = (g.find(&a.name, &Member::Family), mentions(b, sym), n.uniform) {
                    for t in g.covered(b, &[])? {
                        let v = g.union_non_edges.entry((f, t)).or_default();
                        if !v.contains(&n.proof) {
                            v.push(n.proof.clone());
                        }
                    }
                }
            }
        }
        g.complete_families()?;
        g.der = g.nodes.iter().map(|n| node_der(&g, n)).collect();
        let budget = Budget::default();
        let cheap = [Invariant::AnnL, Invariant::AnnR, Invariant::Ann, Invariant::Center, Invariant::Az, Invariant::Square, Invariant::Plus2];
        g.profile = (0..g.nodes.len()).map(|i| cheap.iter().map(|&inv| g.invariant(i, inv, &budget)).collect()).collect();
        g.derive_non_edges()?;
        Ok(g)
    }

    /// Adds `a → F(*)` whenever `a` reaches every member of `F`, then fixes
    /// the closure.
    fn complete_families(&mut self) -> Result<(), GraphError> {
        loop {
            self.compute_closure()?;
            let mut added = false;
            let fams: Vec<usize> = (0..self.nodes.len()).filter(|&f| self.nodes[f].member == Member::Family).collect();
            for f in fams {
                let entry = self.nodes[f].entry.clone();
                let ms = self.members_of(&entry);
                for a in 0..self.nodes.len() {
                    if self.nodes[a].entry != entry && !self.edges.contains_key(&(a, f)) && ms.iter().all(|m| self.closure[a].contains(m)) {
                        self.add_edge(a, f, "every member");
                        added = true;
                    }
                }
            }
            if !added {
                return Ok(());
            }
        }
    }

    fn compute_closure(&mut self) -> Result<(), GraphError> {
        let n = self.nodes.len();
        let mut adj = vec![Vec::new(); n];
        for &(a, b) in self.edges.keys() {
            adj[a].push(b);
        }
        self.closure = (0..n)
            .map(|s| {
                let mut seen = BTreeSet::from([s]);
                let mut stack = vec![s];
                while let Some(x) = stack.pop() {
                    for &y in &adj[x] {
                        if seen.insert(y) {
                            stack.push(y);
                        }
                    }
                }
                seen
            })
            .collect();
        for a in 0..n {
            for &b in &self.closure[a] {
                if a < b && self.closure[b].contains(&a) {
                    return Err(GraphError::Cycle(self.nodes[a].label.clone(), self.nodes[b].label.clone()));
                }
            }
        }
        Ok(())
    }

    /// Direct obstructions: stated proofs, the derivation criterion and
    /// closedness of the identity-defined varieties.
    fn base_non_edge(&self, a: usize, b: usize) -> Option<String> {
        if a == b {
            return None;
        }
        if let Some(why) = self.non_edges.get(&(a, b)) {
            return Some(why.join(", "));
        }
        let (na, nb) = (&self.nodes[a], &self.nodes[b]);
        if na.member == Member::Family {
            let w = self.find(&na.entry, &Member::Whole)?;
            if nb.entry != na.entry {
                if let (Some(x), Some(y)) = (self.der[w], self.der[b]) {
                    if y < x {
                        return Some(format!("der {y} of the target is below the generic der {x}"));
                    }
                }
            }
        } else if let (Some(x), Some(y)) = (self.der[a], self.der[b]) {
            // Equal der forces isomorphism, which a differing invariant excludes.
            if x > y || (x == y && self.profile[a].is_some() && self.profile[b].is_some() && self.profile[a] != self.profile[b]) {
                return Some(format!("der {x} >= {y}"));
            }
        }
        let (ea, eb) = (self.entry(&na.entry)?, self.entry(&nb.entry)?);
        for kind in IdentityKind::ALL {
            if satisfies(ea, na, kind) && !satisfies(eb, nb, kind) {
                return Some(format!("{kind} identity is closed"));
            }
        }
        None
    }

    fn derive_non_edges(&mut self) -> Result<(), GraphError> {
        let n = self.nodes.len();
        let mut base: Vec<Vec<Option<String>>> = (0..n).map(|a| (0..n).map(|b| self.base_non_edge(a, b)).collect()).collect();
        let preds: Vec<Vec<usize>> = (0..n).map(|a| (0..n).filter(|&c| self.closure[c].contains(&a)).collect()).collect();
        loop {
            // k1[c][b]: some d with b → d and c ↛ d.
            let k1: Vec<Vec<Option<usize>>> =
                (0..n).map(|c| (0..n).map(|b| self.closure[b].iter().copied().find(|&d| base[c][d].is_some())).collect()).collect();
            self.known = (0..n)
                .map(|a| (0..n).map(|b| preds[a].iter().find_map(|&c| k1[c][b].map(|d| Why::Via(c, d)))).collect())
                .collect();
            for a in 0..n {
                for b in 0..n {
                    if let Some(Why::Via(c, d)) = self.known[a][b] {
                        if (c, d) == (a, b) {
                            self.known[a][b] = base[a][b].clone().map(Why::Base);
                        }
                    }
                }
            }
            let mut changed = false;
            for (&(f, d), why) in &self.union_non_edges {
                if base[f][d].is_some() {
                    continue;
                }
                let rest = self.members_of(&self.nodes[f].entry);
                let rest: Vec<usize> = rest.into_iter().filter(|&m| self.nodes[m].member != Member::Whole).collect();
                if rest.iter().all(|&m| self.known[m][d].is_some()) {
                    base[f][d] = Some(format!("{} and each distinguished member", why.join(", ")));
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        self.base = base;
        for a in 0..n {
            for b in 0..n {
                if self.known[a][b].is_some() && self.reaches(a, b) {
                    let why = self.explain(a, b).unwrap_or_default();
                    let via = self.edges.get(&(a, b)).map(|w| w.join(", ")).unwrap_or_else(|| "closure".into());
                    return Err(GraphError::Conflict(self.nodes[a].label.clone(), self.nodes[b].label.clone(), format!("{via} vs {why}")));
                }
            }
        }
        Ok(())
    }

    fn explain(&self, a: usize, b: usize) -> Option<String> {
        match self.known[a][b].as_ref()? {
            Why::Base(s) => Some(s.clone()),
            Why::Via(c, d) => {
                let s = self.base[*c][*d].clone().unwrap_or_default();
                Some(format!("{} !-> {} ({s})", self.nodes[*c].label, self.nodes[*d].label))
            }
        }
    }

    /// Reflexive-transitive closure: everything `a` degenerates to.
    pub fn closure_of(&self, a: usize) -> &BTreeSet<usize> {
        &self.closure[a]
    }

    pub fn reaches(&self, a: usize, b: usize) -> bool {
        self.closure[a].contains(&b)
    }

    /// Why `a ↛ b` holds, if it is established by the verified statements,
    /// the derivation criterion, the identities, and closure propagation.
    pub fn known_non_edge(&self, a: usize, b: usize) -> Option<String> {
        self.explain(a, b)
    }

    /// Closure pairs without an intermediate vertex (primary
    /// degenerations). With `families = false`, `(*)` vertices are ignored
    /// both as endpoints and as intermediates.
    pub fn transitive_reduction(&self, families: bool) -> BTreeSet<(usize, usize)> {
        let n = self.nodes.len();
        let real = |i: usize| families || self.nodes[i].member != Member::Family;
        let mut out = BTreeSet::new();
        for a in (0..n).filter(|&a| real(a)) {
            for &b in self.closure[a].iter().filter(|&&b| b != a && real(b)) {
                let via = self.closure[a].iter().any(|&c| c != a && c != b && real(c) && self.closure[c].contains(&b));
                if !via {
                    out.insert((a, b));
                }
            }
        }
        out
    }

    /// Derivation dimension of a member vertex (generic for `Whole`).
    pub fn der_dim(&self, i: usize) -> Option<usize> {
        self.der[i]
    }

    /// Value of an invariant on a member vertex (generic for `Whole`).
    pub fn invariant(&self, i: usize, inv: Invariant, budget: &Budget) -> Option<usize> {
        let n = &self.nodes[i];
        let e = self.entry(&n.entry)?;
        match (&n.member, &n.value) {
            (Member::Family, _) => None,
            (Member::At(_), Some(v)) => inv.compute(&e.at(Some(v)).ok()?, budget),
            _ if e.is_family() => inv.compute(&e.generic().ok()?, budget),
            _ => inv.compute(&e.at(None).ok()?, budget),
        }
    }

    /// Violations of the semicontinuity directions along closure pairs of
    /// member vertices, and of strict growth of der along proper ones.
    pub fn monotonicity_violations(&self, budget: &Budget) -> Vec<String> {
        let n = self.nodes.len();
        let real: Vec<usize> = (0..n).filter(|&i| self.nodes[i].member != Member::Family).collect();
        let profiles: HashMap<usize, Vec<Option<usize>>> =
            real.iter().map(|&i| (i, Invariant::ALL.iter().map(|&inv| self.invariant(i, inv, budget)).collect())).collect();
        let mut out = Vec::new();
        for &a in &real {
            for &b in self.closure[a].iter().filter(|&&b| b != a && self.nodes[b].member != Member::Family) {
                let (pa, pb) = (&profiles[&a], &profiles[&b]);
                for (k, inv) in Invariant::ALL.iter().enumerate() {
                    let (Some(x), Some(y)) = (pa[k], pb[k]) else {
                        out.push(format!("{} -> {}: {inv} undetermined", self.nodes[a].label, self.nodes[b].label));
                        continue;
                    };
                    let bad = if *inv == Invariant::DerDim { x >= y } else { inv.separates(x, y) };
                    if bad {
                        out.push(format!("{} -> {}: {inv} {x} vs {y}", self.nodes[a].label, self.nodes[b].label));
                    }
                }
            }
        }
        out
    }
}

/// Whether a binding's conditions refer to `sym`.
fn mentions(r: &NodeRef, sym: &str) -> bool {
    match &r.binding {
        Binding::None | Binding::Family => false,
        Binding::Value(e) => e.symbols().contains(sym),
        Binding::Symbol { excluded, nonzero, .. } => {
            excluded.iter().chain(nonzero.iter()).any(|e| e.symbols().contains(sym))
        }
    }
}

fn satisfies(e: &CatalogEntry, n: &Node, kind: IdentityKind) -> bool {
    let ok = match (&n.member, &n.value) {
        (Member::At(_), Some(v)) => e.at(Some(v)).map(|a| a.check_identity(kind).holds()),
        _ if e.is_family() => e.generic().map(|a| a.check_identity(kind).holds()),
        _ => e.at(None).map(|a| a.check_identity(kind).holds()),
    };
    ok.unwrap_or(false)
}

fn node_der(g: &DegenerationGraph, n: &Node) -> Option<usize> {
    let e = g.entry(&n.entry)?;
    match (&n.member, &n.value) {
        (Member::Family, _) => None,
        (Member::At(_), Some(v)) => Some(der_dim(&e.at(Some(v)).ok()?)),
        _ if e.is_family() => Some(der_dim(&e.generic().ok()?)),
        _ => Some(der_dim(&e.at(None).ok()?)),
    }
}

#[cfg(test)]
mod tests;
