use std::sync::OnceLock;

use super::*;
use crate::catalog::{builtin_degenerations, builtin_nondegenerations, Variety};
use crate::degeneration::{verify_nondegenerations, verify_witnesses};

fn full() -> &'static DegenerationGraph {
    static G: OnceLock<DegenerationGraph> = OnceLock::new();
    G.get_or_init(|| {
        let r = Resolver::builtin();
        let ws = verify_witnesses(builtin_degenerations(), &r, None);
        let ns = verify_nondegenerations(builtin_nondegenerations(), &r, &Budget::default(), 7);
        DegenerationGraph::build(&r, &ws, &ns).expect("consistent graph")
    })
}

#[test]
fn empty_claims_only_reach_zero() {
    let g = DegenerationGraph::build(&Resolver::builtin(), &[], &[]).unwrap();
    let z = g.by_label("C4").unwrap();
    for i in 0..g.nodes.len() {
        if g.nodes[i].member != Member::Family {
            assert!(g.reaches(i, z));
        }
    }
    assert!(!g.reaches(g.by_label("N1").unwrap(), g.by_label("N6").unwrap()));
}

#[test]
fn closure_composes_paths() {
    let g = full();
    let (z5, n6) = (g.by_label("Z5").unwrap(), g.by_label("N6").unwrap());
    assert!(g.reaches(z5, n6));
    assert!(!g.transitive_reduction(false).contains(&(z5, n6)));
}

fn expected(v: Variety) -> Vec<(&'static str, &'static str)> {
    let n2 = "C4 N1C2 N1sq N1C N2C(beta) N3C N1 N2(gamma) N6 N7 N8 N9(alpha)";
    let n3 = "C4 N1C2 N1C N2C(beta) N3C N3(alpha) N4 N5 N10";
    match v {
        Variety::N => vec![("N2(*)", n2), ("N3(*)", n3)],
        Variety::Z => vec![
            ("Z1", "C4 Z1C Z1 Z2 N1C2 N1C N2C(beta) N3C N2(1) N3(i/2) N8 N9(alpha)"),
            ("Z3", "C4 Z1C Z2 Z3 N1C2 N1sq N1C N2C(beta) N3C N2(0) N2(1) N3(i/3) N8 N9(alpha)"),
            ("Z5", "C4 Z4 Z5 N1C2 N1C N2C(beta) N3C N3(i) N6 N9(-1)"),
            ("N2(*)", n2),
            ("N3(*)", n3),
        ],
        Variety::L => vec![
            ("N3(*)", n3),
            ("L2", "C4 N1C2 N2C(0) N9(0) L1C L2 L4"),
            ("L5", "C4 N1C2 N1sq N1C N2C(beta) N3C N1 N2(gamma) N3(i) N6 N7 N8 N9(alpha) L1C L3 L4 L5 L6 L7 L8"),
            ("L11", "C4 N1C2 N1C N2C(beta) N3C N5 N6 N9(-1) N10 L1 L9 L10 L11 L12"),
        ],
    }
}

#[test]
fn expected_component_sets() {
    let g = full();
    for v in [Variety::N, Variety::Z, Variety::L] {
        let rep = components(g, v).unwrap();
        let got: Vec<(String, String)> = rep.components.iter().map(|c| (c.generator.clone(), c.condensed.join(" "))).collect();
        let want: Vec<(String, String)> = expected(v).into_iter().map(|(a, b)| (a.to_string(), b.to_string())).collect();
        assert_eq!(got, want, "{v}");
    }
    assert!(components(g, Variety::N).unwrap().rigid.is_empty());
    assert_eq!(components(g, Variety::Z).unwrap().rigid, ["Z1", "Z3", "Z5"]);
    assert_eq!(components(g, Variety::L).unwrap().rigid, ["L2", "L5", "L11"]);
}

#[test]
fn components_cover_and_are_downward_closed() {
    let g = full();
    for v in [Variety::N, Variety::Z, Variety::L] {
        for c in components(g, v).unwrap().components {
            for m in &c.members {
                let i = g.by_label(m).unwrap();
                for &j in g.closure_of(i) {
                    assert!(g.nodes[j].member == Member::Family || c.members.contains(&g.nodes[j].label));
                }
            }
        }
    }
}

#[test]
fn reduction_recovers_closure() {
    let g = full();
    let red = g.transitive_reduction(true);
    let n = g.nodes.len();
    for a in 0..n {
        let mut seen = BTreeSet::from([a]);
        let mut stack = vec![a];
        while let Some(x) = stack.pop() {
            for &(p, q) in &red {
                if p == x && seen.insert(q) {
                    stack.push(q);
                }
            }
        }
        assert_eq!(&seen, g.closure_of(a), "{}", g.nodes[a].label);
    }
}

#[test]
fn monotone_along_closure() {
    // The listed N2(1) is isomorphic to N8 (xy = l(x) phi(y) in both), so
    // their verified edge cannot raise der.
    let v = full().monotonicity_violations(&Budget::default());
    assert_eq!(v, ["N2(1) -> N8: der 7 vs 7"]);
}

#[test]
fn conflicting_claims_abort() {
    let r = Resolver::builtin();
    let ws = verify_witnesses(builtin_degenerations(), &r, Some("Z5->Z4"));
    let mut n = crate::degeneration::verify_invariant_certificate(
        &crate::catalog::NodeRef::plain("N1"),
        &crate::catalog::NodeRef::plain("N1"),
        Invariant::DerDim,
        &r,
        &Budget::default(),
        1,
    );
    n.source_ref = Some(crate::catalog::NodeRef::plain("Z5"));
    n.target_ref = Some(crate::catalog::NodeRef::plain("Z4"));
    n.verdict = Verdict::Verified;
    assert!(matches!(DegenerationGraph::build(&r, &ws, &[n]), Err(GraphError::Conflict(..))));
}

#[test]
fn dot_is_deterministic_and_labelled() {
    let a = emit_dot(full(), None);
    assert_eq!(a, emit_dot(full(), None));
    assert!(a.contains("alpha = i/2"), "{a}");
    assert!(a.contains("[label=\"N3(i/3)\"]"));
}

