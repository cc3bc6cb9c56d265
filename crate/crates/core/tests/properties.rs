//! Property suites: action law, basis invariance of the invariants, DSL
//! round-trip, Gröbner bases against evaluation, witness reparametrization
//! and transport of parametric structures.

use std::sync::OnceLock;

use algvar_core::algebra::AlgebraStructure;
use algvar_core::arith::{groebner_basis, Budget, GaussRat, Matrix, MultiPoly, Ring};
use algvar_core::catalog::{builtin_catalog, builtin_degenerations, builtin_nondegenerations, catalog_document, parse, parse_against_builtin, CatalogEntry};
use algvar_core::degeneration::{verify_witness, Verdict};
use algvar_core::invariants::{invariant_profile, InvariantProfile};
use proptest::prelude::*;

type Poly = MultiPoly<GaussRat>;

fn gauss() -> impl Strategy<Value = GaussRat> + Clone {
    (-3i64..=3, 1i64..=2, -2i64..=2).prop_map(|(a, b, c)| GaussRat::from_parts(a, b, c, 1))
}

fn small_int() -> impl Strategy<Value = GaussRat> + Clone {
    (-2i64..=2).prop_map(GaussRat::from_i64)
}

/// Invertible 4×4 matrices with small entries.
fn invertible(entry: impl Strategy<Value = GaussRat> + Clone) -> impl Strategy<Value = Matrix<GaussRat>> {
    proptest::collection::vec(entry, 16)
        .prop_map(|v| Matrix::from_fn(4, 4, |i, j| v[i * 4 + j].clone()))
        .prop_filter("invertible", |m| !m.det().is_zero())
}

fn catalog() -> &'static Vec<CatalogEntry> {
    static C: OnceLock<Vec<CatalogEntry>> = OnceLock::new();
    C.get_or_init(builtin_catalog)
}

/// Catalog members as concrete structures; families at a fixed value.
fn members() -> &'static Vec<(String, AlgebraStructure<GaussRat>)> {
    static M: OnceLock<Vec<(String, AlgebraStructure<GaussRat>)>> = OnceLock::new();
    M.get_or_init(|| {
        let v = GaussRat::from_ratio(2, 3);
        catalog().iter().map(|e| (e.name().to_string(), e.at(e.is_family().then_some(&v)).unwrap())).collect()
    })
}

fn profiles() -> &'static Vec<InvariantProfile> {
    static P: OnceLock<Vec<InvariantProfile>> = OnceLock::new();
    P.get_or_init(|| members().iter().map(|(_, a)| invariant_profile(a, &Budget::default()).unwrap()).collect())
}

fn structure() -> impl Strategy<Value = AlgebraStructure<GaussRat>> {
    proptest::collection::vec(prop_oneof![3 => Just(GaussRat::zero()), 1 => small_int()], 64)
        .prop_map(|c| AlgebraStructure::from_fn(4, |i, j, k| c[(i * 4 + j) * 4 + k].clone()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// g·(h·μ) = (gh)·μ and the identity acts trivially.
    #[test]
    fn action_law(mu in structure(), g in invertible(small_int()), h in invertible(small_int())) {
        let lhs = mu.change_basis(&h).unwrap().change_basis(&g).unwrap();
        let rhs = mu.change_basis(&(&g * &h)).unwrap();
        prop_assert_eq!(lhs, rhs);
        prop_assert_eq!(mu.change_basis(&Matrix::identity(4)).unwrap(), mu);
    }

    /// Identities are preserved by the action.
    #[test]
    fn identities_invariant(k in 0usize..35, g in invertible(small_int())) {
        let (name, a) = &members()[k % members().len()];
        let b = a.change_basis(&g).unwrap();
        for kind in algvar_core::algebra::IdentityKind::ALL {
            prop_assert_eq!(a.check_identity(kind).holds(), b.check_identity(kind).holds(), "{} {}", name, kind);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    /// All nine invariants of every catalog member are unchanged under a
    /// random change of basis.
    #[test]
    fn invariants_basis_invariant(g in invertible(small_int())) {
        for ((name, a), p) in members().iter().zip(profiles()) {
            let b = a.change_basis(&g).unwrap();
            let q = invariant_profile(&b, &Budget::default()).unwrap();
            prop_assert_eq!(p.as_tuple(), q.as_tuple(), "{}", name);
        }
    }
}

#[test]
fn builtin_documents_round_trip() {
    let cat = catalog_document();
    assert_eq!(&parse(&cat.to_string()).unwrap(), cat);
    for doc in [builtin_degenerations(), builtin_nondegenerations()] {
        let printed = doc.to_string();
        let again = parse_against_builtin(&printed).unwrap();
        assert_eq!(&again, doc);
        assert_eq!(again.to_string(), printed);
    }
}

fn coeff_text() -> impl Strategy<Value = String> {
    prop_oneof![
        (-5i64..=5).prop_filter("nonzero", |n| *n != 0).prop_map(|n| n.to_string()),
        (1i64..=4, 2i64..=5).prop_map(|(a, b)| format!("{a}/{b}")),
        Just("i".to_string()),
        (-3i64..=3).prop_map(|n| format!("({n} + 2*i)")),
        Just("p".to_string()),
        Just("-p^2".to_string()),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    /// print ∘ parse is the identity on printed documents, and parsing the
    /// printed form gives back the same document.
    #[test]
    fn dsl_round_trip(terms in proptest::collection::vec((1usize..=4, 1usize..=4, 1usize..=4, coeff_text()), 0..8), der in 0usize..17) {
        let mut seen = std::collections::BTreeSet::new();
        let mut body = String::from("dim 4; ");
        let mut products: std::collections::BTreeMap<(usize, usize), Vec<String>> = Default::default();
        for (i, j, k, c) in terms {
            if seen.insert((i, j, k)) {
                products.entry((i, j)).or_default().push(format!("{c}*e{k}"));
            }
        }
        for ((i, j), rhs) in &products {
            body.push_str(&format!("e{i}*e{j} = {}; ", rhs.join(" + ")));
        }
        body.push_str(&format!("tags L; der {der}; der(p = 1) 3; identify p ~ -p;"));
        let src = format!("algebra A(p) {{ {body} }}\nalgebra B {{ dim 4; e1*e1 = e2 }}\nclaim A(p != 0) !-> B via criterion der;\n");
        let doc = parse(&src).unwrap();
        let printed = doc.to_string();
        let again = parse(&printed).unwrap();
        prop_assert_eq!(&again, &doc);
        prop_assert_eq!(again.to_string(), printed);
    }
}

fn poly_strategy(nvars: usize) -> impl Strategy<Value = Poly> {
    proptest::collection::vec((small_int(), proptest::collection::vec(0u32..=1, nvars)), 1..3).prop_map(move |terms| {
        let mut p = Poly::zero();
        for (c, exps) in terms {
            let mut m = Poly::constant(c);
            for (v, e) in exps.into_iter().enumerate() {
                for _ in 0..e {
                    m = m * Poly::var(v);
                }
            }
            p = p + m;
        }
        p
    })
}

fn shifted(v: usize, a: &GaussRat) -> Poly {
    Poly::var(v) - Poly::constant(a.clone())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    /// Ideals with a prescribed common zero `p`: the Gröbner basis is
    /// nontrivial, contains every generator, and reduction preserves the
    /// value at `p`.
    #[test]
    fn groebner_agrees_with_evaluation(
        point in proptest::collection::vec(small_int(), 3),
        cofactors in proptest::collection::vec(poly_strategy(3), 6),
        probe in poly_strategy(3),
    ) {
        let gens: Vec<Poly> = (0..3)
            .map(|k| cofactors[2 * k].clone() * shifted(k, &point[k]) + cofactors[2 * k + 1].clone() * shifted((k + 1) % 3, &point[(k + 1) % 3]))
            .filter(|g| !g.is_zero())
            .collect();
        let gb = groebner_basis(&gens, &Budget::default()).unwrap();
        prop_assert!(!gb.is_trivial());
        for g in &gens {
            prop_assert!(gb.reduce(g).is_zero());
        }
        let r = gb.reduce(&probe);
        prop_assert_eq!(r.eval(&point), probe.eval(&point));
        prop_assert!(gb.reduce(&(probe.clone() * gens.first().cloned().unwrap_or_else(Poly::zero))).is_zero());
        // Forcing a different value of the first variable empties the variety
        // whenever the generators pin it down.
        let other = point[0].clone() + GaussRat::one();
        let mut more = gens.clone();
        more.push(shifted(0, &point[0]));
        more.push(shifted(0, &other));
        prop_assert!(groebner_basis(&more, &Budget::default()).unwrap().is_trivial());
    }
}

/// Substituting `t → c·t` keeps every verified witness verified: the limit
/// at `t = 0` is unchanged.
#[test]
fn witness_reparametrization() {
    let doc = builtin_degenerations();
    let re = |s: &str, by: &str| {
        let mut out = String::new();
        let b = s.as_bytes();
        for (k, ch) in s.char_indices() {
            let word = |i: usize| b.get(i).is_some_and(|c| c.is_ascii_alphanumeric() || *c == b'_');
            if ch == 't' && !word(k + 1) && (k == 0 || !word(k - 1)) {
                out.push_str(by);
            } else {
                out.push(ch);
            }
        }
        out
    };
    let lookup = |s: &str| builtin_catalog().into_iter().find(|e| e.name() == s);
    let mut checked = 0;
    for w in doc.witnesses() {
        let base = verify_witness(w, &lookup).unwrap().verdict;
        if base != Verdict::Verified {
            continue;
        }
        for by in ["(2*t)", "(-t/3)", "(i*t)"] {
            // The bound variable of `index f(t) = ...` lines stays as is.
            let text: String = w
                .to_string()
                .lines()
                .map(|l| match l.trim_start().starts_with("index").then(|| l.split_once('=')).flatten() {
                    Some((head, rhs)) => format!("{head}={}\n", re(rhs, by)),
                    None => format!("{}\n", re(l, by)),
                })
                .collect();
            let d = parse_against_builtin(&text).unwrap_or_else(|e| panic!("{text}: {e}"));
            let w2 = d.witnesses().next().unwrap();
            assert_eq!(verify_witness(w2, &lookup).unwrap().verdict, Verdict::Verified, "{text}");
        }
        checked += 1;
    }
    assert!(checked >= 60);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    /// Evaluating the generic family and then changing basis agrees with
    /// changing basis over the rational function field and evaluating.
    #[test]
    fn transport_commutes_with_evaluation(k in 0usize..4, g in invertible(small_int()), v in gauss()) {
        let fams: Vec<&CatalogEntry> = catalog().iter().filter(|e| e.is_family()).collect();
        let e = fams[k % fams.len()];
        let generic = e.generic().unwrap();
        let gg = g.map(|x| algvar_core::arith::RationalFunction::constant(x.clone()));
        let moved = generic.change_basis(&gg).unwrap();
        let direct = e.at(Some(&v)).unwrap().change_basis(&g).unwrap();
        let evaluated: Vec<Option<GaussRat>> = moved.constants().iter().map(|c| c.eval(&v)).collect();
        if evaluated.iter().all(Option::is_some) {
            let ev = AlgebraStructure::from_fn(4, |i, j, k| evaluated[(i * 4 + j) * 4 + k].clone().unwrap());
            prop_assert_eq!(ev, direct);
        }
    }
}
