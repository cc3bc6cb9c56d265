//! Syntax-level objects of the catalog language.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::expr::Expr;
use crate::invariants::Invariant;

/// The three varieties of the classification.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Variety {
    /// Three-step nilpotent associative (contained in both others).
    N,
    /// Zinbiel.
    Z,
    /// Nilpotent Leibniz.
    L,
}

impl Variety {
    pub fn from_name(s: &str) -> Option<Self> {
        match s {
            "N" => Some(Self::N),
            "Z" => Some(Self::Z),
            "L" => Some(Self::L),
            _ => None,
        }
    }
}

impl fmt::Display for Variety {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::N => "N",
            Self::Z => "Z",
            Self::L => "L",
        })
    }
}

/// One derivation-dimension expectation: generic (`at = None`) or at a
/// parameter value.
#[derive(Clone, PartialEq, Debug)]
pub struct DerCase {
    pub at: Option<(String, Expr)>,
    pub value: usize,
}

#[derive(Clone, PartialEq, Debug)]
pub struct AlgebraDef {
    pub name: String,
    pub params: Vec<String>,
    pub dim: usize,
    /// `(i, j, coefficients of e_i e_j)`, 0-based, in source order.
    pub products: Vec<(usize, usize, Vec<Expr>)>,
    pub tags: Vec<Variety>,
    pub der: Vec<DerCase>,
    /// Parameter identifications `p ~ expr(p)`, e.g. `alpha ~ -alpha`.
    pub identify: Vec<(String, Expr)>,
    /// Alternative names from the literature; informational only.
    pub aka: Option<String>,
}

/// How a reference pins down the parameters of a (possibly parametric) entry.
#[derive(Clone, PartialEq, Debug)]
pub enum Binding {
    /// The entry has no parameters.
    None,
    /// `(*)`: the family as a whole, varying with `t` through a parametrized index.
    Family,
    /// `(sym)`, `(sym != v, ...)` or `(sym where e != 0)`: every member, up to
    /// the listed exceptions, with `sym` usable in expressions.
    Symbol { sym: String, excluded: Vec<Expr>, nonzero: Option<Expr> },
    /// `(expr)`: a single member; `expr` may mention symbols bound on the
    /// other side of a witness.
    Value(Expr),
}

#[derive(Clone, PartialEq, Debug)]
pub struct NodeRef {
    pub name: String,
    pub binding: Binding,
}

impl NodeRef {
    pub fn plain(name: impl Into<String>) -> Self {
        Self { name: name.into(), binding: Binding::None }
    }

    pub fn value(name: impl Into<String>, v: Expr) -> Self {
        Self { name: name.into(), binding: Binding::Value(v) }
    }

    pub fn symbol(name: impl Into<String>, sym: impl Into<String>) -> Self {
        Self { name: name.into(), binding: Binding::Symbol { sym: sym.into(), excluded: vec![], nonzero: None } }
    }

    /// The symbol bound by this reference, if any.
    pub fn bound_symbol(&self) -> Option<&str> {
        match &self.binding {
            Binding::Symbol { sym, .. } => Some(sym),
            _ => None,
        }
    }
}

#[derive(Clone, PartialEq, Debug)]
pub struct WitnessDef {
    pub source: NodeRef,
    pub target: NodeRef,
    /// `rows[i][j]`: coefficient of `e_j` in `E_i`.
    pub rows: Vec<Vec<Expr>>,
    /// Parametrized index `ε(t)` substituted for the source family parameter.
    pub index: Option<Expr>,
    /// Helper-symbol relations `lhs = rhs`.
    pub relations: Vec<(Expr, Expr)>,
}

impl WitnessDef {
    /// Identifier used in reports and `--only` filters.
    pub fn id(&self) -> String {
        format!("{}->{}", self.source.name, self.target.name)
    }
}

/// One summand of a flag condition; indices are 1-based `S_a`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum FlagTerm {
    /// `S_a S_b`
    Prod(usize, usize),
    /// `S_a o S_b = S_a S_b + S_b S_a`
    Circ(usize, usize),
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Flag {
    /// `Σ terms ⊆ S_c`; `within = None` means `= 0`.
    Within { terms: Vec<FlagTerm>, within: Option<usize> },
    /// `e_j ∈ Z(μ)` (commutant), 1-based.
    InCenter(usize),
}

#[derive(Clone, PartialEq, Debug)]
pub struct CertificateDef {
    pub name: String,
    pub source: NodeRef,
    pub targets: Vec<NodeRef>,
    pub flags: Vec<Flag>,
    /// Polynomials in `x_{i,j}^k` (and the source symbol) that vanish on R.
    pub equations: Vec<Expr>,
    /// Images `g(e_i)` as coefficient rows.
    pub basis: Option<Vec<Vec<Expr>>>,
}

#[derive(Clone, PartialEq, Debug)]
pub enum ClaimProof {
    Invariant(Invariant),
    Certificate(String),
    Witness(String),
}

#[derive(Clone, PartialEq, Debug)]
pub struct ClaimDef {
    pub source: NodeRef,
    pub targets: Vec<NodeRef>,
    pub degenerates: bool,
    pub proof: ClaimProof,
}

#[derive(Clone, PartialEq, Debug)]
pub enum Item {
    Algebra(AlgebraDef),
    Witness(WitnessDef),
    Certificate(CertificateDef),
    Claim(ClaimDef),
}

#[derive(Clone, PartialEq, Debug, Default)]
pub struct Document {
    pub items: Vec<Item>,
}

impl Document {
    pub fn algebras(&self) -> impl Iterator<Item = &AlgebraDef> {
        self.items.iter().filter_map(|i| match i {
            Item::Algebra(a) => Some(a),
            _ => None,
        })
    }

    pub fn witnesses(&self) -> impl Iterator<Item = &WitnessDef> {
        self.items.iter().filter_map(|i| match i {
            Item::Witness(w) => Some(w),
            _ => None,
        })
    }

    pub fn certificates(&self) -> impl Iterator<Item = &CertificateDef> {
        self.items.iter().filter_map(|i| match i {
            Item::Certificate(c) => Some(c),
            _ => None,
        })
    }

    pub fn claims(&self) -> impl Iterator<Item = &ClaimDef> {
        self.items.iter().filter_map(|i| match i {
            Item::Claim(c) => Some(c),
            _ => None,
        })
    }

    pub fn extend(&mut self, other: Document) {
        self.items.extend(other.items);
    }
}
