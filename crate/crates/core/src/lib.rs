//! Exact verification of degenerations in varieties of four-dimensional
//! nilpotent algebras.

pub mod arith;
pub mod algebra;
pub mod invariants;
pub mod expr;
pub mod catalog;
pub mod degeneration;
pub mod graph;
