//! Irreducible components of a variety as maximal orbit closures.

use serde::Serialize;

use super::{DegenerationGraph, Member};
use crate::catalog::Variety;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Component {
    /// Label of the generating vertex, e.g. `N3(*)` or `L5`.
    pub generator: String,
    /// Labels of the vertices in the closure (member vertices only).
    pub members: Vec<String>,
    /// The same set with families named once when their generic member is
    /// included, e.g. `N9(alpha)` for every `N9` member.
    pub condensed: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ComponentReport {
    pub variety: Variety,
    pub components: Vec<Component>,
    pub rigid: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ComponentError {
    /// Pairs `(a, b)` with neither `a → b` nor `a ↛ b` established.
    #[error("undecided pairs: {}", .0.iter().map(|(a, b)| format!("{a} ? {b}")).collect::<Vec<_>>().join(", "))]
    Undecided(Vec<(String, String)>),
    #[error("vertices outside every component: {}", .0.join(", "))]
    Uncovered(Vec<String>),
}

fn in_variety(g: &DegenerationGraph, entry: &str, v: Variety) -> bool {
    g.entry(entry).is_some_and(|e| e.has_tag(v) || e.has_tag(Variety::N))
}

/// Components of the variety `v`: the closures of vertices not contained in
/// the closure of another candidate. Candidates are non-parametric algebras
/// and whole families `(*)`.
pub fn components(g: &DegenerationGraph, v: Variety) -> Result<ComponentReport, ComponentError> {
    let n = g.nodes.len();
    let inside: Vec<usize> = (0..n).filter(|&i| in_variety(g, &g.nodes[i].entry, v)).collect();
    let candidates: Vec<usize> = inside
        .iter()
        .copied()
        .filter(|&i| match g.nodes[i].member {
            Member::Family => true,
            Member::Whole => !g.entry(&g.nodes[i].entry).is_some_and(|e| e.is_family()),
            Member::At(_) => false,
        })
        .collect();
    // Only undominated candidates need every other candidate ruled out.
    let dominated = |x: usize| candidates.iter().any(|&y| y != x && g.reaches(y, x));
    let generators: Vec<usize> = candidates.iter().copied().filter(|&x| !dominated(x)).collect();
    let mut undecided = Vec::new();
    for &x in &generators {
        for &y in candidates.iter().filter(|&&y| y != x) {
            if g.known_non_edge(y, x).is_none() {
                undecided.push((g.nodes[y].label.clone(), g.nodes[x].label.clone()));
            }
        }
    }
    if !undecided.is_empty() {
        return Err(ComponentError::Undecided(undecided));
    }
    let uncovered: Vec<String> =
        inside.iter().filter(|&&i| !generators.iter().any(|&c| g.reaches(c, i))).map(|&i| g.nodes[i].label.clone()).collect();
    if !uncovered.is_empty() {
        return Err(ComponentError::Uncovered(uncovered));
    }
    let components = generators
        .iter()
        .map(|&c| Component {
            generator: g.nodes[c].label.clone(),
            members: g.closure_of(c).iter().filter(|&&i| g.nodes[i].member != Member::Family).map(|&i| g.nodes[i].label.clone()).collect(),
            condensed: condensed(g, c),
        })
        .collect();
    let rigid = generators.iter().filter(|&&c| g.nodes[c].member != Member::Family).map(|&c| g.nodes[c].label.clone()).collect();
    Ok(ComponentReport { variety: v, components, rigid })
}

fn condensed(g: &DegenerationGraph, c: usize) -> Vec<String> {
    let cl = g.closure_of(c);
    let generic = |entry: &str| cl.iter().any(|&i| g.nodes[i].entry == entry && g.nodes[i].member == Member::Whole);
    cl.iter()
        .filter(|&&i| match g.nodes[i].member {
            Member::Family => false,
            Member::Whole => true,
            Member::At(_) => !generic(&g.nodes[i].entry),
        })
        .map(|&i| g.nodes[i].label.clone())
        .collect()
}
