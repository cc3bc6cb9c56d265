//! Exact arithmetic: Gaussian rationals, univariate polynomials and rational
//! functions, sparse multivariate polynomials, Gröbner bases and dense linear
//! algebra over any of these fields.

mod field;
mod frac;
mod gauss;
pub mod groebner;
pub mod linalg;
mod multipoly;
mod ratfun;
mod unipoly;

pub use field::{Field, Ring};
pub use frac::Frac;
pub use gauss::{GaussRat, ParseGaussError};
pub use groebner::{groebner_basis, ideal_is_trivial, Budget, GroebnerBasis, PolyIdeal, Triviality};
pub use linalg::{linear_solve, Matrix, Subspace};
pub use multipoly::{Mono, MultiPoly};
pub use ratfun::RationalFunction;
pub use unipoly::UniPoly;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ArithError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("pole of order {order} at t = 0")]
    Pole { order: i64 },
    #[error("singular matrix")]
    Singular,
    #[error("computation budget of {steps} steps exceeded")]
    BudgetExceeded { steps: u64 },
    #[error("computation cancelled")]
    Cancelled,
}
