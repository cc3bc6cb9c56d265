//! Deterministic Graphviz output of the primary degenerations.

use std::collections::BTreeMap;
use std::fmt::Write;

use super::{DegenerationGraph, Member};
use crate::catalog::Variety;

/// DOT text of the transitive reduction, restricted to `variety` when
/// given. Vertices are ranked by derivation dimension; edges into or out of
/// a distinguished family member carry the parameter value.
pub fn emit_dot(g: &DegenerationGraph, variety: Option<Variety>) -> String {
    let keep = |i: usize| {
        let e = g.entry(&g.nodes[i].entry);
        variety.is_none_or(|v| e.is_some_and(|e| e.has_tag(v) || e.has_tag(Variety::N)))
    };
    let nodes: Vec<usize> = (0..g.nodes.len()).filter(|&i| keep(i)).collect();
    let mut out = String::from("digraph degenerations {\n  rankdir=TB;\n  node [shape=box];\n");
    let mut ranks: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for &i in &nodes {
        let n = &g.nodes[i];
        let style = if n.member == Member::Family { ", style=dashed" } else { "" };
        let _ = writeln!(out, "  n{i} [label=\"{}\"{style}];", n.label);
        if let Some(d) = g.der_dim(i) {
            ranks.entry(d).or_default().push(i);
        }
    }
    for (d, vs) in &ranks {
        let ids: Vec<String> = vs.iter().map(|i| format!("n{i}")).collect();
        let _ = writeln!(out, "  {{ rank=same; /* der {d} */ {}; }}", ids.join("; "));
    }
    for (a, b) in g.transitive_reduction(true) {
        if !keep(a) || !keep(b) {
            continue;
        }
        let mut labels = Vec::new();
        for i in [a, b] {
            if let (Some(v), Some(e)) = (&g.nodes[i].value, g.entry(&g.nodes[i].entry)) {
                if let Some(p) = e.params().first() {
                    labels.push(format!("{p} = {}", super::fmt_value(v)));
                }
            }
        }
        let style = if g.nodes[a].member == Member::Family { " style=dashed" } else { "" };
        if labels.is_empty() {
            let _ = writeln!(out, "  n{a} -> n{b} [{}];", style.trim());
        } else {
            let _ = writeln!(out, "  n{a} -> n{b} [label=\"{}\"{style}];", labels.join(", "));
        }
    }
    out.push_str("}\n");
    out
}
