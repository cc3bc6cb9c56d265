//! Checks of catalog entries against their declared tags and derivation
//! dimensions.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{CatalogEntry, Variety};
use crate::algebra::{IdentityCheck, IdentityKind};
use crate::arith::GaussRat;
use crate::degeneration::Verdict;
use crate::invariants::der_dim;

/// Random parameter values compared against the generic derivation
/// dimension.
pub const DER_SAMPLES: usize = 5;

#[derive(Clone, Debug, Serialize)]
pub struct DerCase {
    /// `generic`, `p = v` for a listed case, or `p = v (random)`.
    pub case: String,
    pub expected: Option<usize>,
    pub computed: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct EntryCheck {
    pub name: String,
    /// Violated identities with a counterexample triple (1-based).
    pub identity_failures: Vec<String>,
    pub nilpotent: bool,
    pub der: Vec<DerCase>,
    pub verdict: Verdict,
}

/// Identities an entry must satisfy given its tags.
pub fn required_identities(e: &CatalogEntry) -> Vec<IdentityKind> {
    if e.has_tag(Variety::N) {
        IdentityKind::ALL.to_vec()
    } else {
        let mut v = Vec::new();
        if e.has_tag(Variety::Z) {
            v.push(IdentityKind::Zinbiel);
        }
        if e.has_tag(Variety::L) {
            v.push(IdentityKind::Leibniz);
        }
        v
    }
}

fn random_value(rng: &mut ChaCha8Rng) -> GaussRat {
    GaussRat::from_parts(rng.gen_range(-20..=20), rng.gen_range(1..=7), rng.gen_range(-20..=20), rng.gen_range(1..=7))
}

/// Identities, nilpotency and derivation dimensions of one entry: generic,
/// each listed case, and `DER_SAMPLES` random non-special values.
pub fn check_entry(e: &CatalogEntry, seed: u64) -> EntryCheck {
    let mut failures = Vec::new();
    let mut der = Vec::new();
    let mut nilpotent = true;
    let record = |failures: &mut Vec<String>, kind: IdentityKind, c: IdentityCheck, at: &str| {
        if let IdentityCheck::Counterexample(x, y, z) = c {
            failures.push(format!("{kind} fails on (e{}, e{}, e{}){at}", x + 1, y + 1, z + 1));
        }
    };
    let kinds = required_identities(e);
    let p = e.params().first().cloned().unwrap_or_default();
    if e.is_family() {
        let Ok(g) = e.generic() else {
            failures.push("cannot build the generic member".into());
            return EntryCheck { name: e.name().into(), identity_failures: failures, nilpotent: false, der, verdict: Verdict::Failure };
        };
        for &k in &kinds {
            record(&mut failures, k, g.check_identity(k), " generically");
        }
        nilpotent &= g.is_nilpotent();
        der.push(DerCase { case: "generic".into(), expected: e.expected_der(None), computed: der_dim(&g) });
        let specials = e.special_values();
        for v in &specials {
            if let Ok(a) = e.at(Some(v)) {
                der.push(DerCase { case: format!("{p} = {v}"), expected: e.expected_der(Some(v)), computed: der_dim(&a) });
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut taken = 0;
        while taken < DER_SAMPLES {
            let v = random_value(&mut rng);
            if specials.iter().any(|s| e.identified(s, &v)) {
                continue;
            }
            taken += 1;
            if let Ok(a) = e.at(Some(&v)) {
                for &k in &kinds {
                    record(&mut failures, k, a.check_identity(k), &format!(" at {p} = {v}"));
                }
                der.push(DerCase { case: format!("{p} = {v} (random)"), expected: e.expected_der(None), computed: der_dim(&a) });
            }
        }
    } else {
        match e.at(None) {
            Ok(a) => {
                for &k in &kinds {
                    record(&mut failures, k, a.check_identity(k), "");
                }
                nilpotent &= a.is_nilpotent();
                der.push(DerCase { case: "generic".into(), expected: e.expected_der(None), computed: der_dim(&a) });
            }
            Err(err) => failures.push(err.to_string()),
        }
    }
    let der_ok = der.iter().all(|d| d.expected.is_none_or(|x| x == d.computed));
    let ok = failures.is_empty() && (nilpotent || !e.has_tag(Variety::L)) && der_ok;
    EntryCheck {
        name: e.name().into(),
        identity_failures: failures,
        nilpotent,
        der,
        verdict: if ok { Verdict::Verified } else { Verdict::Failure },
    }
}
