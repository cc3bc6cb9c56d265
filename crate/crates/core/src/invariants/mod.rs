//! Semicontinuous invariants used to separate orbits.

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::AlgebraStructure;
use crate::arith::{ideal_is_trivial, Budget, Field, Matrix, MultiPoly, Ring, Subspace, Triviality};

/// Dimension of the derivation algebra.
pub fn der_dim<S: Field>(a: &AlgebraStructure<S>) -> usize {
    let n = a.dim();
    // Unknown d_{p,q} (column q of D is D(e_q)) sits at column p·n + q.
    let mut m: Matrix<S> = Matrix::zeros(n * n * n, n * n);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let row = (i * n + j) * n + k;
                for r in 0..n {
                    let c = a.get(i, j, r);
                    if !c.is_zero() {
                        m[(row, k * n + r)] = m[(row, k * n + r)].clone() + c.clone();
                    }
                }
                for p in 0..n {
                    let c1 = a.get(p, j, k);
                    if !c1.is_zero() {
                        m[(row, p * n + i)] = m[(row, p * n + i)].clone() - c1.clone();
                    }
                    let c2 = a.get(i, p, k);
                    if !c2.is_zero() {
                        m[(row, p * n + j)] = m[(row, p * n + j)].clone() - c2.clone();
                    }
                }
            }
        }
    }
    n * n - m.rank()
}

/// Kernel of `a ↦ (Σ_j a_j f(i, j, k))_{i,k}`.
fn kernel<S: Field>(a: &AlgebraStructure<S>, f: impl Fn(usize, usize, usize) -> S) -> Subspace<S> {
    let n = a.dim();
    let m = Matrix::from_fn(n * n, n, |row, j| f(row / n, j, row % n));
    Subspace::span(n, m.nullspace())
}

/// `{a | xa = 0 ∀x}`.
pub fn ann_l<S: Field>(a: &AlgebraStructure<S>) -> Subspace<S> {
    kernel(a, |i, j, k| a.get(i, j, k).clone())
}

/// `{a | ax = 0 ∀x}`.
pub fn ann_r<S: Field>(a: &AlgebraStructure<S>) -> Subspace<S> {
    kernel(a, |i, j, k| a.get(j, i, k).clone())
}

pub fn ann<S: Field>(a: &AlgebraStructure<S>) -> Subspace<S> {
    ann_l(a).intersection(&ann_r(a))
}

/// The commutant `{a | ax = xa ∀x}`.
pub fn center<S: Field>(a: &AlgebraStructure<S>) -> Subspace<S> {
    kernel(a, |i, j, k| a.get(i, j, k).clone() - a.get(j, i, k).clone())
}

/// The anticommutative center `{a | ax + xa = 0 ∀x}`.
pub fn az<S: Field>(a: &AlgebraStructure<S>) -> Subspace<S> {
    kernel(a, |i, j, k| a.get(i, j, k).clone() + a.get(j, i, k).clone())
}

pub fn square<S: Field>(a: &AlgebraStructure<S>) -> Subspace<S> {
    let full = Subspace::full(a.dim());
    a.subspace_product(&full, &full)
}

pub fn square_dim<S: Field>(a: &AlgebraStructure<S>) -> usize {
    square(a).dim()
}

/// `dim span{xy + yx}`.
pub fn plus2_dim<S: Field>(a: &AlgebraStructure<S>) -> usize {
    let n = a.dim();
    let mut vs = Vec::new();
    for i in 0..n {
        for j in i..n {
            vs.push((0..n).map(|k| a.get(i, j, k).clone() + a.get(j, i, k).clone()).collect());
        }
    }
    Subspace::span(n, vs).dim()
}

/// Maximal dimension of a subspace `U` with `UU = 0`.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub enum Msub0 {
    Value(usize),
    /// Every undecided chart ran out of budget at this dimension.
    Inconclusive { dim: usize },
}

/// Decides `msub0` by descending `k` over the echelon charts of `Gr(k, n)`.
pub fn msub0_dim<S: Field>(a: &AlgebraStructure<S>, budget: &Budget) -> Msub0 {
    let n = a.dim();
    for k in (1..=n).rev() {
        let charts = subsets(n, k);
        let outcomes: Vec<Triviality> = charts.par_iter().map(|p| chart_outcome(a, p, budget)).collect();
        if outcomes.contains(&Triviality::No) {
            return Msub0::Value(k);
        }
        if outcomes.contains(&Triviality::Inconclusive) {
            return Msub0::Inconclusive { dim: k };
        }
    }
    Msub0::Value(0)
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for x in start..n {
            cur.push(x);
            rec(x + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Emptiness of `{U in the chart with pivots p : UU = 0}`.
fn chart_outcome<S: Field>(a: &AlgebraStructure<S>, pivots: &[usize], budget: &Budget) -> Triviality {
    let n = a.dim();
    let mut nvars = 0;
    let rows: Vec<Vec<MultiPoly<S>>> = pivots
        .iter()
        .map(|&p| {
            (0..n)
                .map(|c| {
                    if c == p {
                        MultiPoly::one()
                    } else if c < p || pivots.contains(&c) {
                        MultiPoly::zero()
                    } else {
                        nvars += 1;
                        MultiPoly::var(nvars - 1)
                    }
                })
                .collect()
        })
        .collect();
    let lifted = a.map(|c| MultiPoly::constant(c.clone()));
    let mut eqs = Vec::new();
    for u in &rows {
        for v in &rows {
            let w = lifted.multiply(u, v).expect("chart vectors have length n");
            eqs.extend(w.into_iter().filter(|p| !p.is_zero()));
        }
    }
    ideal_is_trivial(&eqs, budget)
}

/// The nine invariants, in the order used by [`InvariantProfile`].
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Invariant {
    DerDim,
    AnnL,
    AnnR,
    Ann,
    Center,
    Az,
    Square,
    Plus2,
    Msub0,
}

impl Invariant {
    pub const ALL: [Invariant; 9] = [
        Self::DerDim,
        Self::AnnL,
        Self::AnnR,
        Self::Ann,
        Self::Center,
        Self::Az,
        Self::Square,
        Self::Plus2,
        Self::Msub0,
    ];

    /// True if the invariant can only grow along a degeneration `A → B`
    /// (annihilator-type dimensions, der, msub0); false for `square` and
    /// `plus2`, which can only shrink.
    pub fn grows(self) -> bool {
        !matches!(self, Self::Square | Self::Plus2)
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::DerDim => "der",
            Self::AnnL => "ann_l",
            Self::AnnR => "ann_r",
            Self::Ann => "ann",
            Self::Center => "center",
            Self::Az => "az",
            Self::Square => "square",
            Self::Plus2 => "plus2",
            Self::Msub0 => "msub0",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|i| i.name() == s)
    }

    /// Computes this single invariant (`None` only for an inconclusive msub0).
    pub fn compute<S: Field>(self, a: &AlgebraStructure<S>, budget: &Budget) -> Option<usize> {
        Some(match self {
            Self::DerDim => der_dim(a),
            Self::AnnL => ann_l(a).dim(),
            Self::AnnR => ann_r(a).dim(),
            Self::Ann => ann(a).dim(),
            Self::Center => center(a).dim(),
            Self::Az => az(a).dim(),
            Self::Square => square_dim(a),
            Self::Plus2 => plus2_dim(a),
            Self::Msub0 => match msub0_dim(a, budget) {
                Msub0::Value(v) => v,
                Msub0::Inconclusive { .. } => return None,
            },
        })
    }

    /// Whether `value(A)` versus `value(B)` rules out `A → B`: a strict
    /// inequality against the monotone direction.
    pub fn separates(self, a: usize, b: usize) -> bool {
        if self.grows() {
            a > b
        } else {
            a < b
        }
    }
}

impl fmt::Display for Invariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub struct InvariantProfile {
    pub der_dim: usize,
    pub ann_l_dim: usize,
    pub ann_r_dim: usize,
    pub ann_dim: usize,
    pub center_dim: usize,
    pub az_dim: usize,
    pub square_dim: usize,
    pub plus2_dim: usize,
    pub msub0_dim: usize,
}

impl InvariantProfile {
    pub fn get(&self, inv: Invariant) -> usize {
        match inv {
            Invariant::DerDim => self.der_dim,
            Invariant::AnnL => self.ann_l_dim,
            Invariant::AnnR => self.ann_r_dim,
            Invariant::Ann => self.ann_dim,
            Invariant::Center => self.center_dim,
            Invariant::Az => self.az_dim,
            Invariant::Square => self.square_dim,
            Invariant::Plus2 => self.plus2_dim,
            Invariant::Msub0 => self.msub0_dim,
        }
    }

    pub fn as_tuple(&self) -> [usize; 9] {
        Invariant::ALL.map(|i| self.get(i))
    }
}

/// All nine invariants; `Err` carries the inconclusive msub0 outcome.
pub fn invariant_profile<S: Field>(a: &AlgebraStructure<S>, budget: &Budget) -> Result<InvariantProfile, Msub0> {
    let msub0_dim = match msub0_dim(a, budget) {
        Msub0::Value(v) => v,
        other => return Err(other),
    };
    Ok(InvariantProfile {
        der_dim: der_dim(a),
        ann_l_dim: ann_l(a).dim(),
        ann_r_dim: ann_r(a).dim(),
        ann_dim: ann(a).dim(),
        center_dim: center(a).dim(),
        az_dim: az(a).dim(),
        square_dim: square_dim(a),
        plus2_dim: plus2_dim(a),
        msub0_dim,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::GaussRat;

    type Q = GaussRat;

    fn alg(prods: &[(usize, usize, usize, i64)]) -> AlgebraStructure<Q> {
        let mut a = AlgebraStructure::zero(4);
        for &(i, j, k, v) in prods {
            a.set(i - 1, j - 1, k - 1, Q::from_i64(v));
        }
        a
    }

    #[test]
    fn zero_profile() {
        let p = invariant_profile(&AlgebraStructure::<Q>::zero(4), &Budget::default()).unwrap();
        assert_eq!(p.as_tuple(), [16, 4, 4, 4, 4, 4, 0, 0, 4]);
    }

    #[test]
    fn n10_values() {
        let n10 = alg(&[(1, 2, 4, 1), (2, 1, 4, -1), (3, 3, 4, 1)]);
        assert_eq!(der_dim(&n10), 7);
        assert_eq!(az(&n10).dim(), 3);
        assert_eq!(msub0_dim(&n10, &Budget::default()), Msub0::Value(2));
    }

    #[test]
    fn l2_values() {
        let l2 = alg(&[(1, 1, 2, 1), (2, 1, 3, 1), (3, 1, 4, 1)]);
        assert_eq!(der_dim(&l2), 4);
        assert_eq!(ann_l(&l2).dim(), 3);
        assert_eq!(msub0_dim(&l2, &Budget::default()), Msub0::Value(3));
    }

    #[test]
    fn n6_n1c_values() {
        let n6 = alg(&[(1, 2, 3, 1), (2, 1, 4, 1)]);
        assert_eq!(ann(&n6).dim(), 2);
        let n1c = alg(&[(1, 2, 3, 1), (2, 1, 3, -1)]);
        assert_eq!((square_dim(&n1c), plus2_dim(&n1c)), (1, 0));
        let n1sq = alg(&[(1, 1, 2, 1), (3, 3, 4, 1)]);
        assert_eq!(center(&n1sq).dim(), 4);
    }
}
