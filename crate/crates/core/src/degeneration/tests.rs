use super::*;
use crate::catalog::{builtin_degenerations, entry, parse_against_builtin};

fn check(src: &str) -> WitnessReport {
    let d = parse_against_builtin(src).unwrap();
    let r = verify_witness(d.witnesses().next().unwrap(), &entry).unwrap();
    r
}

#[test]
fn spec_examples() {
    assert_eq!(check("witness Z5 -> Z4 { E1 = e1; E2 = t*e2; E3 = t*e3; E4 = t*e4 }").verdict, Verdict::Verified);
    assert_eq!(check("witness N6 -> N6 { E1 = e1; E2 = e2; E3 = e3; E4 = e4 }").verdict, Verdict::Verified);
    let r = check("witness Z5 -> Z4 { E1 = e1; E2 = e2; E3 = e3; E4 = e4 }");
    assert_eq!(r.verdict, Verdict::Failure);
    assert!(matches!(r.failures.as_slice(), [WitnessFailure::Mismatch { i: 2, j: 2, k: 4, .. }]), "{:?}", r.failures);
    let r = check("witness N2(*) -> N1 { E1 = t*e1; E2 = t*e2; E3 = t^2*e4; E4 = t*e3; index eps(t) = -1/t }");
    assert_eq!(r.verdict, Verdict::Verified);
}

#[test]
fn pole_is_reported() {
    let r = check("witness Z5 -> Z4 { E1 = t^-1*e1; E2 = e2; E3 = e3; E4 = e4 }");
    assert!(r.failures.iter().any(|f| matches!(f, WitnessFailure::Pole { .. })), "{:?}", r.failures);
}

#[test]
fn all_builtin_witnesses() {
    // The printed family witness for N3(*) -> N4 has a pole; its corrected
    // replacement is the `#2` row.
    let out = verify_witnesses(builtin_degenerations(), &Resolver::builtin(), None);
    let bad: Vec<String> = out.iter().filter(|o| o.verdict != Verdict::Verified).map(|o| format!("{}: {:?} {:?}", o.id, o.failures, o.error)).collect();
    assert_eq!(bad, vec!["N3->N4: [Pole { i: 3, j: 3, k: 4, order: -2 }] None".to_string()]);
    assert!(out.iter().any(|o| o.id == "N3->N4#2" && o.verdict == Verdict::Verified));
    let ids = witness_ids(builtin_degenerations().witnesses());
    let unique: std::collections::BTreeSet<_> = ids.iter().collect();
    assert_eq!(unique.len(), ids.len());
}

#[test]
fn invariant_certificate_examples() {
    let r = Resolver::builtin();
    let b = budget();
    let n = |s: &str| crate::catalog::NodeRef::plain(s);
    use crate::invariants::Invariant;
    assert_eq!(verify_invariant_certificate(&n("Z5"), &n("N8"), Invariant::Plus2, &r, &b, 1).verdict, Verdict::Verified);
    assert_eq!(verify_invariant_certificate(&n("L2"), &n("N8"), Invariant::AnnL, &r, &b, 1).verdict, Verdict::Verified);
    for inv in Invariant::ALL {
        assert_eq!(verify_invariant_certificate(&n("N6"), &n("N6"), inv, &r, &b, 1).verdict, Verdict::Failure, "{inv}");
    }
}

#[test]
fn builtin_nondegenerations_and_soundness() {
    let r = Resolver::builtin();
    let ns = verify_nondegenerations(crate::catalog::builtin_nondegenerations(), &r, &budget(), 7);
    let bad: Vec<String> = ns.iter().filter(|o| o.verdict != Verdict::Verified).map(|o| format!("{} via {}: {:?}", o.id, o.proof, o.detail)).collect();
    assert!(bad.is_empty(), "{}", bad.join("\n"));
    let ws = verify_witnesses(builtin_degenerations(), &r, None);
    let conflicts = soundness_conflicts(&ws, &ns, &r, 7);
    assert!(conflicts.is_empty(), "{conflicts:?}");
}

#[test]
fn corrected_n3_family_to_n4() {
    let r = check("witness N3(*) -> N4 { E1 = t^-1*(e1 + i*e3); E2 = e2; E3 = t/2*(e1 - i*e3); E4 = e4; index eps(t) = t }");
    assert_eq!(r.verdict, Verdict::Verified, "{:?}", r.failures);
}

fn cert(src: &str) -> crate::catalog::CertificateDef {
    parse_against_builtin(src).unwrap().certificates().next().unwrap().clone()
}

fn budget() -> crate::arith::Budget {
    crate::arith::Budget::default()
}

#[test]
fn certificate_spec_examples() {
    let c = cert("certificate R for L8 !-> N6 { flags: S1 o S2 in S4; }");
    let r = verify_certificate(&c, &entry, &budget()).unwrap();
    assert_eq!(r.stability.verdict, Verdict::Verified);
    assert_eq!(r.membership.verdict, Verdict::Verified);
    assert_eq!(r.verdict, Verdict::Verified);

    let c = cert("certificate R for N9(alpha) !-> N3C { flags: S1 S1 in S3, S2^2 = 0, S1 o S3 = 0, S1 o S2 in S4; equations: x_{1,2}^4 = alpha*x_{2,1}^4; }");
    let rs = relation_set(&c, &entry("N9").unwrap()).unwrap();
    assert_eq!(check_stability(&rs, &budget()).verdict, Verdict::Verified);
    // Without the swap the standard basis is not in R.
    assert_eq!(check_membership(&rs, &c, &entry("N9").unwrap()).unwrap().verdict, Verdict::Failure);

    let c = cert("certificate R for N6 !-> N7 { equations: x_{1,1}^1 - 1; }");
    let rs = relation_set(&c, &entry("N6").unwrap()).unwrap();
    let st = check_stability(&rs, &budget());
    assert_eq!(st.verdict, Verdict::Failure);
    assert!(st.failures.iter().any(|f| f.starts_with("diagonal")), "{:?}", st.failures);

    // The zero structure lies in every homogeneous R.
    let c = cert("certificate R for L8 !-> C4 { flags: S1 o S2 in S4; }");
    assert_eq!(verify_certificate(&c, &entry, &budget()).unwrap().targets[0].verdict, Verdict::Failure);

    // An empty R avoids everything.
    let c = cert("certificate R for L8 !-> N6, C4 { equations: 1; }");
    let rs = relation_set(&c, &entry("L8").unwrap()).unwrap();
    for t in &c.targets {
        assert_eq!(rs.check_target(t, &entry(&t.name).unwrap(), &budget()).unwrap().verdict, Verdict::Verified);
    }
}

#[test]
fn builtin_certificates_verify() {
    for c in crate::catalog::builtin_nondegenerations().certificates() {
        let r = verify_certificate(c, &entry, &budget()).unwrap();
        assert_eq!(r.verdict, Verdict::Verified, "{}: {:?}", c.name, r);
    }
}

#[test]
fn certificates_never_avoid_their_source() {
    // The source lies in R (checked), so its own orbit must meet R.
    for c in crate::catalog::builtin_nondegenerations().certificates() {
        let src = entry(&c.source.name).unwrap();
        let rs = relation_set(c, &src).unwrap();
        let r = rs.check_target(&c.source, &src, &budget()).unwrap();
        assert_eq!(r.verdict, Verdict::Failure, "{} avoids its own source", c.name);
    }
}

#[test]
fn transvection_matches_change_of_basis() {
    use crate::algebra::AlgebraStructure;
    use crate::arith::{GaussRat, Matrix, Ring};
    let a = entry("L8").unwrap().at(None).unwrap();
    let n = 4;
    let x: Vec<GaussRat> = a.constants().to_vec();
    let alpha = GaussRat::from_i64(3);
    for u in 0..n {
        for v in u + 1..n {
            let subs = transvection(n, u, v, n * n * n);
            let mut point = x.clone();
            point.push(alpha.clone());
            let m = Matrix::from_fn(n, n, |i, j| {
                if i == j {
                    GaussRat::one()
                } else if i == u && j == v {
                    alpha.clone()
                } else {
                    GaussRat::zero()
                }
            });
            let b: AlgebraStructure<GaussRat> = a.in_basis(&m).unwrap();
            for (idx, s) in subs.iter().enumerate() {
                assert_eq!(s.as_ref().unwrap().eval(&point), b.constants()[idx].clone(), "u={u} v={v} idx={idx}");
            }
        }
    }
}

#[test]
fn soundness_detects_overlaps() {
    use crate::catalog::NodeRef;
    let parse_ref = |s: &str| parse_against_builtin(&format!("claim {s} !-> C4 via criterion der;")).unwrap().claims().next().unwrap().source.clone();
    let w = |a: &str, b: &str| WitnessOutcome {
        id: "w".into(),
        source: a.into(),
        target: b.into(),
        verdict: Verdict::Verified,
        failures: vec![],
        error: None,
        source_ref: Some(parse_ref(a)),
        target_ref: Some(parse_ref(b)),
    };
    let n = |a: &str, b: &str| NondegOutcome {
        id: "n".into(),
        source: a.into(),
        target: b.into(),
        proof: "criterion der".into(),
        verdict: Verdict::Verified,
        detail: vec![],
        uniform: true,
        source_ref: Some(parse_ref(a)),
        target_ref: Some(parse_ref(b)),
    };
    let r = Resolver::builtin();
    let ws = [w("N9(alpha != 1)", "N2C(-alpha/(1 - alpha)^2)")];
    assert!(soundness_conflicts(&ws, &[n("N9(alpha)", "N2C(b where (1 - alpha)^2*b + alpha != 0)")], &r, 3).is_empty());
    assert_eq!(soundness_conflicts(&ws, &[n("N9(alpha)", "N2C(b)")], &r, 3).len(), 1);
    assert_eq!(soundness_conflicts(&[w("L5", "L8")], &[n("L5", "L8")], &r, 3).len(), 1);
    assert!(soundness_conflicts(&[w("N3(*)", "N4")], &[n("N3(alpha)", "N4")], &r, 3).is_empty());
    let _ = NodeRef::plain("C4");
}
