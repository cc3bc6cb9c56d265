use super::*;
use crate::algebra::IdentityKind;
use crate::invariants::der_dim;

fn q(n: i64) -> GaussRat {
    GaussRat::from_i64(n)
}

#[test]
fn builtin_entries() {
    let cat = builtin_catalog();
    assert_eq!(cat.len(), 35);
    let mut names: Vec<&str> = cat.iter().map(|e| e.name()).collect();
    names.sort();
    names.dedup();
    assert_eq!(names.len(), 35);
    assert!(entry("C4").unwrap().at(None).unwrap().is_zero());
    let n10 = entry("N10").unwrap().at(None).unwrap();
    assert_eq!(n10.get(0, 1, 3), &q(1));
    assert_eq!(n10.get(1, 0, 3), &q(-1));
    assert_eq!(n10.get(2, 2, 3), &q(1));
    assert_eq!(entry("N10").unwrap().expected_der(None), Some(8));
}

#[test]
fn instantiation_examples() {
    let n2 = entry("N2").unwrap().at(Some(&q(1))).unwrap();
    assert_eq!(n2.get(1, 0, 2), &q(-1));
    let n3 = entry("N3").unwrap().at(Some(&q(0))).unwrap();
    let nonzero: usize = n3.constants().iter().filter(|c| !c.is_zero()).count();
    assert_eq!(nonzero, 3);
    let n9 = entry("N9").unwrap().at(Some(&q(0))).unwrap();
    assert_eq!(n9.get(0, 1, 3), &q(1));
    assert_eq!(n9.get(1, 1, 2), &q(1));
    assert!(n9.get(1, 0, 3).is_zero());
    assert!(matches!(entry("N2").unwrap().at(None), Err(CatalogError::UnboundParameter(_))));
}

#[test]
fn identities_follow_tags() {
    for e in builtin_catalog() {
        let a = if e.is_family() { e.at(Some(&GaussRat::from_ratio(3, 7))).unwrap() } else { e.at(None).unwrap() };
        let holds = |k| a.check_identity(k).holds();
        if e.has_tag(Variety::N) {
            assert!(IdentityKind::ALL.iter().all(|&k| holds(k)), "{}", e.name());
        }
        if e.has_tag(Variety::Z) {
            assert!(holds(IdentityKind::Zinbiel) && !holds(IdentityKind::Leibniz), "{}", e.name());
        }
        if e.has_tag(Variety::L) {
            assert!(holds(IdentityKind::Leibniz) && !holds(IdentityKind::Zinbiel), "{}", e.name());
            assert!(a.is_nilpotent(), "{}", e.name());
        }
    }
}

#[test]
fn n3_normalization() {
    let n3 = entry("N3").unwrap();
    let a = GaussRat::from_parts(-1, 2, 1, 1);
    assert_eq!(n3.canonical_parameter(&a), GaussRat::from_parts(1, 2, -1, 1));
    assert_eq!(n3.canonical_parameter(&GaussRat::from_parts(0, 1, -1, 1)), GaussRat::i());
    assert!(n3.identified(&q(2), &q(-2)));
    assert!(!entry("N9").unwrap().identified(&q(2), &q(-2)));
}

#[test]
fn dsl_examples() {
    let d = parse("algebra N6 { dim 4; e1*e2 = e3; e2*e1 = e4 }").unwrap();
    let def = d.algebras().next().unwrap();
    let mine = CatalogEntry { def: def.clone() }.at(None).unwrap();
    assert_eq!(mine, entry("N6").unwrap().at(None).unwrap());
    let z = parse("algebra A { dim 4 }").unwrap();
    assert!(CatalogEntry { def: z.algebras().next().unwrap().clone() }.at(None).unwrap().is_zero());
    let w = parse_against_builtin("witness Z5 -> Z4 { E1 = e1; E2 = t*e2; E3 = t*e3; E4 = t*e4 }").unwrap();
    let w = w.witnesses().next().unwrap();
    assert_eq!(w.rows[1][1], Expr::sym("t"));
    assert_eq!(w.id(), "Z5->Z4");
}

#[test]
fn diagnostics() {
    let e = parse("algebra A {\n  dim 4;\n  e1*e5 = e2;\n}").unwrap_err();
    assert!(matches!(e, ParseError::UnknownBasis { .. }));
    assert_eq!((e.pos().line, e.pos().col), (3, 6));
    let e = parse("algebra A { dim 4; e1*e2 = e3; e1 e2 = e4 }").unwrap_err();
    assert!(matches!(e, ParseError::Duplicate { .. }), "{e}");
    let e = parse("algebra A { dim 4; e1*e2 = e5 }").unwrap_err();
    assert!(matches!(e, ParseError::UnknownBasis { .. }), "{e}");
    let e = parse("algebra A { dim 4; e1*e2 = a*e3 }").unwrap_err();
    assert!(matches!(e, ParseError::UnboundParameter { .. }), "{e}");
    let e = parse("algebra A { dim 4; e1*e2 == e3 }").unwrap_err();
    match e {
        ParseError::Syntax { pos, expected, .. } => {
            assert_eq!((pos.line, pos.col), (1, 27));
            assert!(!expected.is_empty());
        }
        other => panic!("{other}"),
    }
    let e = parse_against_builtin("witness Z5 -> Z4 { E1 = e1; E2 = t*e2; E3 = t*e3 }").unwrap_err();
    assert!(matches!(e, ParseError::DimensionMismatch { .. }), "{e}");
    let e = parse_against_builtin("witness Z5 -> Q4 { E1 = e1 }").unwrap_err();
    assert!(matches!(e, ParseError::UnknownAlgebra { .. }), "{e}");
    let e = parse_against_builtin("witness Z5 -> Z4 { E1 = u*e1; E2 = t*e2; E3 = t*e3; E4 = e4 }").unwrap_err();
    assert!(matches!(e, ParseError::UnboundParameter { .. }), "{e}");
}

#[test]
fn round_trip_builtin() {
    for doc in [catalog_document(), builtin_degenerations(), builtin_nondegenerations()] {
        let text = doc.to_string();
        let again = parse_with(&text, &builtin_signatures_excluding(doc)).unwrap_or_else(|e| panic!("{e}\n{text}"));
        assert_eq!(&again, doc);
    }
}

fn builtin_signatures_excluding(doc: &Document) -> HashMap<String, Signature> {
    let mut s = builtin_signatures();
    for a in doc.algebras() {
        s.remove(&a.name);
    }
    s
}

#[test]
fn der_dims_of_point_entries() {
    let known_mismatch = ["N10"];
    for e in builtin_catalog().into_iter().filter(|e| !e.is_family()) {
        let d = der_dim(&e.at(None).unwrap());
        if known_mismatch.contains(&e.name()) {
            assert_ne!(Some(d), e.expected_der(None));
        } else {
            assert_eq!(Some(d), e.expected_der(None), "{}", e.name());
        }
    }
}
