//! Buchberger's algorithm over an arbitrary coefficient field, graded reverse
//! lexicographic order, with a step budget.

use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;

use super::{ArithError, Field, Mono, MultiPoly, Ring};

/// Default number of elementary reduction steps before a computation gives up.
pub const DEFAULT_BUDGET: u64 = 200_000;

/// Step budget plus an optional cooperative cancellation flag.
#[derive(Clone, Debug)]
pub struct Budget {
    pub max_steps: u64,
    pub cancel: Option<Arc<AtomicBool>>,
}

impl Default for Budget {
    fn default() -> Self {
        Self::steps(DEFAULT_BUDGET)
    }
}

impl Budget {
    pub fn steps(max_steps: u64) -> Self {
        Self { max_steps, cancel: None }
    }

    pub fn with_cancel(mut self, flag: Arc<AtomicBool>) -> Self {
        self.cancel = Some(flag);
        self
    }
}

/// Running step counter for one computation.
#[derive(Debug)]
pub struct Meter<'a> {
    budget: &'a Budget,
    pub used: u64,
}

impl<'a> Meter<'a> {
    pub fn new(budget: &'a Budget) -> Self {
        Self { budget, used: 0 }
    }

    pub fn tick(&mut self) -> Result<(), ArithError> {
        self.used += 1;
        if self.used > self.budget.max_steps {
            return Err(ArithError::BudgetExceeded { steps: self.budget.max_steps });
        }
        if self.used % 1024 == 0 {
            if let Some(c) = &self.budget.cancel {
                if c.load(Ordering::Relaxed) {
                    return Err(ArithError::Cancelled);
                }
            }
        }
        Ok(())
    }
}

/// An ideal presented by generators.
#[derive(Clone, Debug, PartialEq)]
pub struct PolyIdeal<C> {
    pub generators: Vec<MultiPoly<C>>,
}

impl<C: Field> PolyIdeal<C> {
    pub fn new(generators: Vec<MultiPoly<C>>) -> Self {
        Self { generators }
    }

    pub fn groebner_basis(&self, budget: &Budget) -> Result<GroebnerBasis<C>, ArithError> {
        groebner_basis(&self.generators, budget)
    }
}

/// A reduced Gröbner basis (monic, sorted by leading monomial).
#[derive(Clone, Debug, PartialEq)]
pub struct GroebnerBasis<C> {
    pub polys: Vec<MultiPoly<C>>,
    pub steps: u64,
}

impl<C: Field> GroebnerBasis<C> {
    pub fn is_trivial(&self) -> bool {
        self.polys.len() == 1 && self.polys[0].is_constant() && !self.polys[0].is_zero()
    }

    /// Normal form of `p` modulo the basis.
    pub fn reduce(&self, p: &MultiPoly<C>) -> MultiPoly<C> {
        let unlimited = Budget::steps(u64::MAX);
        let mut meter = Meter::new(&unlimited);
        normal_form(p, &self.polys, &mut meter).expect("unlimited budget")
    }

    pub fn contains(&self, p: &MultiPoly<C>) -> bool {
        self.reduce(p).is_zero()
    }
}

/// Full reduction of `p` by `g` (every term, not only the leading one).
pub fn normal_form<C: Field>(
    p: &MultiPoly<C>,
    g: &[MultiPoly<C>],
    meter: &mut Meter<'_>,
) -> Result<MultiPoly<C>, ArithError> {
    let mut p = p.clone();
    let mut rem = MultiPoly::default();
    while let Some((m, c)) = p.pop_leading() {
        let divisor = g.iter().find(|q| q.leading_mono().is_some_and(|lm| lm.divides(&m)));
        match divisor {
            Some(q) => {
                meter.tick()?;
                let (lm, lc) = q.leading().expect("nonzero divisor");
                let shift = lm.quotient_of(&m);
                let factor = c / lc.clone();
                // The leading term cancels exactly; subtract the rest.
                let mut tail = q.clone();
                tail.pop_leading();
                p.sub_scaled_shifted(&tail, &factor, &shift);
            }
            None => rem.add_term(m, c),
        }
    }
    Ok(rem)
}

struct Pair {
    i: usize,
    j: usize,
    lcm: Mono,
}

fn s_poly<C: Field>(f: &MultiPoly<C>, g: &MultiPoly<C>, lcm: &Mono) -> MultiPoly<C> {
    let (mf, cf) = f.leading().expect("nonzero");
    let (mg, cg) = g.leading().expect("nonzero");
    let a = f.mul_term(&cf.inv().expect("nonzero"), &mf.quotient_of(lcm));
    let b = g.mul_term(&cg.inv().expect("nonzero"), &mg.quotient_of(lcm));
    a - b
}

/// Reduced Gröbner basis of the ideal generated by `gens`.
///
/// Returns `BudgetExceeded` when more than `budget.max_steps` elementary
/// reduction steps would be needed; that outcome carries no information about
/// the ideal.
pub fn groebner_basis<C: Field>(
    gens: &[MultiPoly<C>],
    budget: &Budget,
) -> Result<GroebnerBasis<C>, ArithError> {
    let mut meter = Meter::new(budget);
    let mut basis: Vec<MultiPoly<C>> = Vec::new();
    let mut active: Vec<bool> = Vec::new();
    let mut pairs: Vec<Pair> = Vec::new();

    let one = || GroebnerBasis { polys: vec![MultiPoly::constant(C::one())], steps: 0 };

    let mut pending: Vec<MultiPoly<C>> = gens.iter().filter(|p| !p.is_zero()).map(|p| p.monic()).collect();
    pending.sort_by(|a, b| a.leading_mono().cmp(&b.leading_mono()));
    for p in pending {
        let r = normal_form(&p, &basis, &mut meter)?;
        if r.is_zero() {
            continue;
        }
        if r.is_constant() {
            return Ok(GroebnerBasis { steps: meter.used, ..one() });
        }
        add_to_basis(r.monic(), &mut basis, &mut active, &mut pairs);
    }

    while !pairs.is_empty() {
        // Normal selection strategy: smallest lcm first.
        let idx = pairs
            .iter()
            .enumerate()
            .min_by(|(_, a), (_, b)| a.lcm.cmp(&b.lcm))
            .map(|(k, _)| k)
            .expect("nonempty");
        let Pair { i, j, lcm } = pairs.swap_remove(idx);
        let s = s_poly(&basis[i], &basis[j], &lcm);
        let reducers: Vec<MultiPoly<C>> =
            basis.iter().zip(&active).filter(|(_, a)| **a).map(|(p, _)| p.clone()).collect();
        let r = normal_form(&s, &reducers, &mut meter)?;
        if r.is_zero() {
            continue;
        }
        if r.is_constant() {
            return Ok(GroebnerBasis { steps: meter.used, ..one() });
        }
        add_to_basis(r.monic(), &mut basis, &mut active, &mut pairs);
    }

    let kept: Vec<MultiPoly<C>> = basis.into_iter().zip(active).filter(|(_, a)| *a).map(|(p, _)| p).collect();
    let polys = interreduce(kept, &mut meter)?;
    Ok(GroebnerBasis { polys, steps: meter.used })
}

fn add_to_basis<C: Field>(
    p: MultiPoly<C>,
    basis: &mut Vec<MultiPoly<C>>,
    active: &mut Vec<bool>,
    pairs: &mut Vec<Pair>,
) {
    let lm_new = p.leading_mono().expect("nonzero").clone();
    let k = basis.len();

    // Gebauer–Möller style update: candidate pairs (i, k).
    let mut cands: Vec<Pair> = Vec::new();
    for (i, q) in basis.iter().enumerate() {
        if !active[i] {
            continue;
        }
        let lm = q.leading_mono().expect("nonzero");
        cands.push(Pair { i, j: k, lcm: lm.lcm(&lm_new) });
    }
    // Drop candidates whose lcm is a proper multiple of another candidate's lcm,
    // and keep one representative for equal lcms.
    let mut keep = vec![true; cands.len()];
    for a in 0..cands.len() {
        for b in 0..cands.len() {
            if a == b || !keep[b] || !keep[a] {
                continue;
            }
            let (la, lb) = (&cands[a].lcm, &cands[b].lcm);
            if lb.divides(la) && (lb != la || b < a) {
                keep[a] = false;
            }
        }
    }
    let mut fresh: Vec<Pair> = Vec::new();
    for (c, ok) in cands.into_iter().zip(keep) {
        if !ok {
            continue;
        }
        let lm_i = basis[c.i].leading_mono().expect("nonzero");
        if lm_i.coprime(&lm_new) {
            continue; // Buchberger's first criterion.
        }
        fresh.push(c);
    }
    // Old pairs (i, j) made redundant by the new element.
    pairs.retain(|pr| {
        let lm_i = basis[pr.i].leading_mono().expect("nonzero");
        let lm_j = basis[pr.j].leading_mono().expect("nonzero");
        !(lm_new.divides(&pr.lcm) && lm_i.lcm(&lm_new) != pr.lcm && lm_j.lcm(&lm_new) != pr.lcm)
    });
    pairs.extend(fresh);

    // Elements whose leading monomial is divisible by the new one become
    // inactive as reducers; their pairs have been accounted for above.
    for (i, q) in basis.iter().enumerate() {
        if active[i] && lm_new.divides(q.leading_mono().expect("nonzero")) {
            active[i] = false;
        }
    }
    basis.push(p);
    active.push(true);
}

fn interreduce<C: Field>(
    mut polys: Vec<MultiPoly<C>>,
    meter: &mut Meter<'_>,
) -> Result<Vec<MultiPoly<C>>, ArithError> {
    polys.sort_by(|a, b| a.leading_mono().cmp(&b.leading_mono()));
    // Minimal basis: drop elements whose leading monomial is divisible by another's.
    let mut minimal: Vec<MultiPoly<C>> = Vec::new();
    for (idx, p) in polys.iter().enumerate() {
        let lm = p.leading_mono().expect("nonzero");
        let redundant = polys.iter().enumerate().any(|(j, q)| {
            let lq = q.leading_mono().expect("nonzero");
            j != idx && lq.divides(lm) && (lq != lm || j < idx)
        });
        if !redundant {
            minimal.push(p.clone());
        }
    }
    let mut out = Vec::with_capacity(minimal.len());
    for k in 0..minimal.len() {
        let others: Vec<MultiPoly<C>> =
            minimal.iter().enumerate().filter(|(j, _)| *j != k).map(|(_, p)| p.clone()).collect();
        let mut p = minimal[k].clone();
        let (lm, lc) = p.pop_leading().expect("nonzero");
        let tail = normal_form(&p, &others, meter)?;
        let mut full = MultiPoly::term(lc, lm);
        full = full + tail;
        out.push(full.monic());
    }
    out.sort_by(|a, b| a.leading_mono().cmp(&b.leading_mono()));
    Ok(out)
}

/// Outcome of an emptiness test for the affine variety of an ideal over the
/// algebraic closure of the coefficient field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub enum Triviality {
    /// `1 ∈ I`: the variety is empty.
    Yes,
    /// A completed reduced basis without constants: the variety is nonempty
    /// (weak Nullstellensatz).
    No,
    /// The budget ran out first.
    Inconclusive,
}

pub fn ideal_is_trivial<C: Field>(gens: &[MultiPoly<C>], budget: &Budget) -> Triviality {
    match groebner_basis(gens, budget) {
        Ok(gb) if gb.is_trivial() => Triviality::Yes,
        Ok(_) => Triviality::No,
        Err(_) => Triviality::Inconclusive,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::GaussRat;

    type P = MultiPoly<GaussRat>;

    fn x() -> P {
        P::var(0)
    }
    fn y() -> P {
        P::var(1)
    }
    fn c(n: i64) -> P {
        P::constant(GaussRat::from_i64(n))
    }

    #[test]
    fn coordinate_ideal_is_its_own_basis() {
        let gb = groebner_basis(&[x(), y()], &Budget::default()).unwrap();
        assert_eq!(gb.polys, vec![y(), x()]);
    }

    #[test]
    fn common_root_collapses() {
        let gb = groebner_basis(&[x() * x() - c(1), x() - c(1)], &Budget::default()).unwrap();
        assert_eq!(gb.polys, vec![x() - c(1)]);
    }

    #[test]
    fn unit_ideal_detected() {
        let gens = [x() * x(), x() * y() + c(1)];
        let gb = groebner_basis(&gens, &Budget::default()).unwrap();
        assert!(gb.is_trivial());
        assert_eq!(ideal_is_trivial(&gens, &Budget::default()), Triviality::Yes);
        assert_eq!(ideal_is_trivial(&[c(1)], &Budget::default()), Triviality::Yes);
        assert_eq!(ideal_is_trivial(&[x()], &Budget::default()), Triviality::No);
    }

    #[test]
    fn budget_exhaustion_is_inconclusive() {
        // Cyclic-4 needs far more than two steps.
        let z = P::var(2);
        let w = P::var(3);
        let gens = [
            x() + y() + z.clone() + w.clone(),
            x() * y() + y() * z.clone() + z.clone() * w.clone() + w.clone() * x(),
            x() * y() * z.clone() + y() * z.clone() * w.clone() + z.clone() * w.clone() * x() + w.clone() * x() * y(),
            x() * y() * z * w - c(1),
        ];
        assert!(matches!(
            groebner_basis(&gens, &Budget::steps(2)),
            Err(ArithError::BudgetExceeded { .. })
        ));
        assert_eq!(ideal_is_trivial(&gens, &Budget::steps(2)), Triviality::Inconclusive);
        let gb = groebner_basis(&gens, &Budget::default()).unwrap();
        for g in &gens {
            assert!(gb.contains(g));
        }
    }
}
