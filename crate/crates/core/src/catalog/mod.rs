//! The builtin classification and the text language used to describe
//! algebras, degeneration witnesses, non-degeneration certificates and claims.
//!
//! Grammar summary (`#` starts a comment, `;` separates statements):
//!
//! ```text
//! algebra NAME[(p, ...)] { dim N; ei*ej = <lin>; tags N, Z; der 5; der(p = 0) 7;
//!                          identify p ~ -p; aka "..."; }
//! witness SRC[(b)] -> DST[(b)] { E1 = <lin over t>; ...; index eps(t) = <expr>;
//!                                where u^2 = <expr>; }
//! certificate NAME for SRC[(b)] !-> DST[(b)], ... {
//!     flags: S1 S1 in S2, S1 o S2 = 0, e3 in Z;
//!     equations: x_{1,2}^3 = 0, ...;
//!     basis g: e3 -> e4, e4 -> e3; }
//! claim SRC !-> DST, ... via criterion der;
//! claim SRC !-> DST via certificate NAME;
//! claim SRC -> DST via witness SRC->DST;
//! ```
//!
//! Bindings `b`: `(*)` whole family along a curve, `(sym)` every member,
//! `(sym != v, ...)`, `(sym where <expr> != 0)`, or `(<expr>)` a single member.
//! Products may use juxtaposition (`2t e1`); the printer always writes `*`.

mod check;
mod lexer;
mod model;
mod parser;
mod print;

use std::collections::{BTreeMap, HashMap};
use std::sync::OnceLock;

pub use check::{check_entry, required_identities, DerCase as DerCheck, EntryCheck, DER_SAMPLES};
pub use lexer::Pos;
pub use model::*;
pub use parser::{parse, parse_with, ParseError, Signature};

use crate::algebra::AlgebraStructure;
use crate::arith::{Field, GaussRat, RationalFunction, Ring};
use crate::expr::{Expr, ExprError};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CatalogError {
    #[error("unbound parameter `{0}`")]
    UnboundParameter(String),
    #[error("unknown algebra `{0}`")]
    UnknownAlgebra(String),
    #[error("`{0}` is not a one-parameter family")]
    NotAFamily(String),
    #[error(transparent)]
    Expr(#[from] ExprError),
    #[error(transparent)]
    Parse(#[from] ParseError),
}

/// A catalog algebra: its definition plus evaluation helpers.
#[derive(Clone, Debug, PartialEq)]
pub struct CatalogEntry {
    pub def: AlgebraDef,
}

impl CatalogEntry {
    pub fn name(&self) -> &str {
        &self.def.name
    }

    pub fn dim(&self) -> usize {
        self.def.dim
    }

    pub fn params(&self) -> &[String] {
        &self.def.params
    }

    pub fn is_family(&self) -> bool {
        !self.def.params.is_empty()
    }

    pub fn has_tag(&self, v: Variety) -> bool {
        self.def.tags.contains(&v)
    }

    /// Evaluates the structure constants over any field, given values for
    /// the parameters.
    pub fn structure_over<F: Field>(&self, env: &dyn Fn(&str) -> Option<F>) -> Result<AlgebraStructure<F>, CatalogError> {
        let n = self.def.dim;
        let mut a = AlgebraStructure::zero(n);
        for (i, j, coeffs) in &self.def.products {
            for (k, c) in coeffs.iter().enumerate() {
                let v = c.eval(env).map_err(|e| match e {
                    ExprError::Unbound(s) => CatalogError::UnboundParameter(s),
                    other => CatalogError::Expr(other),
                })?;
                a.set(*i, *j, k, v);
            }
        }
        Ok(a)
    }

    /// Substitutes exact values for all parameters.
    pub fn instantiate(&self, bindings: &BTreeMap<String, GaussRat>) -> Result<AlgebraStructure<GaussRat>, CatalogError> {
        self.structure_over(&|s| bindings.get(s).cloned())
    }

    /// The structure at the only parameter value `v` (or the entry itself
    /// when it has no parameters).
    pub fn at(&self, v: Option<&GaussRat>) -> Result<AlgebraStructure<GaussRat>, CatalogError> {
        let mut b = BTreeMap::new();
        if let (Some(p), Some(v)) = (self.def.params.first(), v) {
            b.insert(p.clone(), v.clone());
        }
        self.instantiate(&b)
    }

    /// The family over the field of rational functions in its parameter.
    pub fn generic(&self) -> Result<AlgebraStructure<RationalFunction>, CatalogError> {
        let [p] = self.def.params.as_slice() else {
            return Err(CatalogError::NotAFamily(self.def.name.clone()));
        };
        self.structure_over(&|s| (s == p).then(RationalFunction::var))
    }

    /// Expected derivation dimension: the case for `v` if listed, else generic.
    pub fn expected_der(&self, v: Option<&GaussRat>) -> Option<usize> {
        if let Some(v) = v {
            for d in &self.def.der {
                if let Some((_, e)) = &d.at {
                    if e.constant_value().as_ref() == Some(v) {
                        return Some(d.value);
                    }
                }
            }
        }
        self.def.der.iter().find(|d| d.at.is_none()).map(|d| d.value)
    }

    /// Parameter values with their own derivation-dimension case.
    pub fn special_values(&self) -> Vec<GaussRat> {
        self.def.der.iter().filter_map(|d| d.at.as_ref().and_then(|(_, e)| e.constant_value())).collect()
    }

    /// Representative of `v` under the identification rules: among the
    /// images, the first with `Re > 0`, or `Re = 0` and `Im >= 0`.
    pub fn canonical_parameter(&self, v: &GaussRat) -> GaussRat {
        let good = |x: &GaussRat| {
            let z = GaussRat::zero();
            x.re > z.re || (x.re == z.re && x.im >= z.im)
        };
        if good(v) {
            return v.clone();
        }
        for (p, e) in &self.def.identify {
            if let Ok(w) = e.eval::<GaussRat>(&|s| (s == p).then(|| v.clone())) {
                if good(&w) {
                    return w;
                }
            }
        }
        v.clone()
    }

    /// Whether parameter values `a` and `b` name isomorphic members
    /// according to the catalog's identification rules.
    pub fn identified(&self, a: &GaussRat, b: &GaussRat) -> bool {
        a == b || self.canonical_parameter(a) == self.canonical_parameter(b)
    }
}

/// Evaluates a parameter-free expression.
pub fn constant(e: &Expr) -> Option<GaussRat> {
    e.constant_value()
}

const CATALOG_SRC: &str = include_str!("../../data/catalog.alg");
const DEGENERATIONS_SRC: &str = include_str!("../../data/degenerations.alg");
const NONDEGENERATIONS_SRC: &str = include_str!("../../data/nondegenerations.alg");

/// The classification as a parsed document.
pub fn catalog_document() -> &'static Document {
    static DOC: OnceLock<Document> = OnceLock::new();
    DOC.get_or_init(|| parse(CATALOG_SRC).expect("builtin catalog parses"))
}

/// All builtin algebras, including the zero algebra `C4`.
pub fn builtin_catalog() -> Vec<CatalogEntry> {
    catalog_document().algebras().map(|d| CatalogEntry { def: d.clone() }).collect()
}

/// Looks up a builtin entry by name.
pub fn entry(name: &str) -> Option<CatalogEntry> {
    catalog_document().algebras().find(|d| d.name == name).map(|d| CatalogEntry { def: d.clone() })
}

/// Signatures of the builtin algebras, for parsing documents that refer to them.
pub fn builtin_signatures() -> HashMap<String, Signature> {
    catalog_document().algebras().map(|d| (d.name.clone(), Signature { dim: d.dim, params: d.params.len() })).collect()
}

/// Parses a document that may refer to builtin algebras.
pub fn parse_against_builtin(src: &str) -> Result<Document, ParseError> {
    parse_with(src, &builtin_signatures())
}

/// Witnesses of the degenerations claimed in the classification.
pub fn builtin_degenerations() -> &'static Document {
    static DOC: OnceLock<Document> = OnceLock::new();
    DOC.get_or_init(|| parse_against_builtin(DEGENERATIONS_SRC).expect("builtin degenerations parse"))
}

/// Non-degeneration claims and certificates of the classification.
pub fn builtin_nondegenerations() -> &'static Document {
    static DOC: OnceLock<Document> = OnceLock::new();
    DOC.get_or_init(|| parse_against_builtin(NONDEGENERATIONS_SRC).expect("builtin non-degenerations parse"))
}

/// Free-function form of [`CatalogEntry::instantiate`].
pub fn instantiate(entry: &CatalogEntry, bindings: &BTreeMap<String, GaussRat>) -> Result<AlgebraStructure<GaussRat>, CatalogError> {
    entry.instantiate(bindings)
}

#[cfg(test)]
mod tests;
