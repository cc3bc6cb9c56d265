//! Structure-constant algebras, the `GL(V)` action, identity checks and
//! subspace arithmetic.

use std::fmt;

use crate::arith::linalg::unit;
use crate::arith::{ArithError, Field, Matrix, Ring, Subspace};

/// A bilinear product on `F^n`: `e_i e_j = Σ_k c[i][j][k] e_k` (0-based).
#[derive(Clone, PartialEq, Debug)]
pub struct AlgebraStructure<S> {
    n: usize,
    c: Vec<S>,
}

/// Polynomial identities a structure may satisfy.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash, serde::Serialize, serde::Deserialize)]
pub enum IdentityKind {
    /// `(xy)z = (xz)y + x(yz)`
    Leibniz,
    /// `(xy)z = x(yz + zy)`
    Zinbiel,
    /// `(xy)z = x(yz)`
    Associative,
    /// `(xy)z = 0` and `x(yz) = 0`
    ThreeStepNilpotent,
}

impl IdentityKind {
    pub const ALL: [IdentityKind; 4] =
        [Self::Leibniz, Self::Zinbiel, Self::Associative, Self::ThreeStepNilpotent];
}

impl fmt::Display for IdentityKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Leibniz => "Leibniz",
            Self::Zinbiel => "Zinbiel",
            Self::Associative => "associative",
            Self::ThreeStepNilpotent => "three-step nilpotent",
        })
    }
}

/// Result of [`AlgebraStructure::check_identity`]; the triple is 0-based.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum IdentityCheck {
    Holds,
    Counterexample(usize, usize, usize),
}

impl IdentityCheck {
    pub fn holds(&self) -> bool {
        matches!(self, Self::Holds)
    }
}

impl<S: Ring> AlgebraStructure<S> {
    pub fn zero(n: usize) -> Self {
        Self { n, c: vec![S::zero(); n * n * n] }
    }

    pub fn from_fn(n: usize, f: impl Fn(usize, usize, usize) -> S) -> Self {
        let mut a = Self::zero(n);
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    a.c[(i * n + j) * n + k] = f(i, j, k);
                }
            }
        }
        a
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    fn idx(&self, i: usize, j: usize, k: usize) -> usize {
        (i * self.n + j) * self.n + k
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> &S {
        &self.c[self.idx(i, j, k)]
    }

    pub fn set(&mut self, i: usize, j: usize, k: usize, v: S) {
        let x = self.idx(i, j, k);
        self.c[x] = v;
    }

    /// Flat constants in `(i·n + j)·n + k` order.
    pub fn constants(&self) -> &[S] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(Ring::is_zero)
    }

    /// The product `e_i e_j` as a coordinate vector.
    pub fn basis_product(&self, i: usize, j: usize) -> Vec<S> {
        (0..self.n).map(|k| self.get(i, j, k).clone()).collect()
    }

    pub fn map<T: Ring>(&self, f: impl Fn(&S) -> T) -> AlgebraStructure<T> {
        AlgebraStructure { n: self.n, c: self.c.iter().map(f).collect() }
    }

    pub fn multiply(&self, x: &[S], y: &[S]) -> Result<Vec<S>, DimensionMismatch> {
        if x.len() != self.n || y.len() != self.n {
            return Err(DimensionMismatch { expected: self.n, got: x.len().max(y.len()) });
        }
        let mut out = vec![S::zero(); self.n];
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if yj.is_zero() {
                    continue;
                }
                let s = xi.clone() * yj.clone();
                for (k, o) in out.iter_mut().enumerate() {
                    let c = self.get(i, j, k);
                    if !c.is_zero() {
                        *o = o.clone() + s.clone() * c.clone();
                    }
                }
            }
        }
        Ok(out)
    }

    fn mul_vec(&self, x: &[S], y: &[S]) -> Vec<S> {
        self.multiply(x, y).expect("internal dimensions agree")
    }

    /// Coordinates of `lhs − rhs` of `kind` on every basis triple; over a
    /// polynomial ring in the structure constants these generate the
    /// identity's ideal.
    pub fn identity_defects(&self, kind: IdentityKind) -> Vec<S> {
        let n = self.n;
        let prods: Vec<Vec<S>> = (0..n * n).map(|ij| self.basis_product(ij / n, ij % n)).collect();
        let p = |i: usize, j: usize| &prods[i * n + j];
        let e = |i: usize| unit::<S>(n, i);
        let mut out = Vec::new();
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    let xy_z = self.mul_vec(p(x, y), &e(z));
                    let x_yz = self.mul_vec(&e(x), p(y, z));
                    let sub = |a: &[S], b: &[S]| a.iter().zip(b).map(|(u, v)| u.clone() - v.clone()).collect::<Vec<S>>();
                    match kind {
                        IdentityKind::Leibniz => out.extend(sub(&xy_z, &add(&self.mul_vec(p(x, z), &e(y)), &x_yz))),
                        IdentityKind::Zinbiel => out.extend(sub(&xy_z, &add(&x_yz, &self.mul_vec(&e(x), p(z, y))))),
                        IdentityKind::Associative => out.extend(sub(&xy_z, &x_yz)),
                        IdentityKind::ThreeStepNilpotent => {
                            out.extend(xy_z);
                            out.extend(x_yz);
                        }
                    }
                }
            }
        }
        out.retain(|c| !c.is_zero());
        out
    }

    /// Checks `kind` on every basis triple (sufficient by multilinearity).
    pub fn check_identity(&self, kind: IdentityKind) -> IdentityCheck {
        let n = self.n;
        let prods: Vec<Vec<S>> = (0..n * n).map(|ij| self.basis_product(ij / n, ij % n)).collect();
        let p = |i: usize, j: usize| &prods[i * n + j];
        let e = |i: usize| unit::<S>(n, i);
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    let xy_z = self.mul_vec(p(x, y), &e(z));
                    let x_yz = self.mul_vec(&e(x), p(y, z));
                    let ok = match kind {
                        IdentityKind::Leibniz => {
                            let xz_y = self.mul_vec(p(x, z), &e(y));
                            vec_eq(&xy_z, &add(&xz_y, &x_yz))
                        }
                        IdentityKind::Zinbiel => {
                            let x_zy = self.mul_vec(&e(x), p(z, y));
                            vec_eq(&xy_z, &add(&x_yz, &x_zy))
                        }
                        IdentityKind::Associative => vec_eq(&xy_z, &x_yz),
                        IdentityKind::ThreeStepNilpotent => {
                            xy_z.iter().all(Ring::is_zero) && x_yz.iter().all(Ring::is_zero)
                        }
                    };
                    if !ok {
                        return IdentityCheck::Counterexample(x, y, z);
                    }
                }
            }
        }
        IdentityCheck::Holds
    }

    /// Constants of the same product written in the basis `f_i = Σ_j M[i][j] e_j`,
    /// given `M⁻¹` already (ring version, no division needed).
    pub fn in_basis_with_inverse(&self, m: &Matrix<S>, m_inv: &Matrix<S>) -> Self {
        let n = self.n;
        let rows: Vec<Vec<S>> = (0..n).map(|i| m.row(i).to_vec()).collect();
        // Coordinates w.r.t. f: v = Σ a_k f_k = Mᵀ a, so a = (M⁻¹)ᵀ v.
        let mt_inv = m_inv.transpose();
        let mut out = Self::zero(n);
        for i in 0..n {
            for j in 0..n {
                let v = self.mul_vec(&rows[i], &rows[j]);
                let a = mt_inv.apply(&v);
                for (k, ak) in a.into_iter().enumerate() {
                    out.set(i, j, k, ak);
                }
            }
        }
        out
    }
}

impl<S: Field> AlgebraStructure<S> {
    /// `(g * μ)(x, y) = g μ(g⁻¹x, g⁻¹y)`; the columns of `g` are the images `g(e_j)`.
    pub fn change_basis(&self, g: &Matrix<S>) -> Result<Self, ArithError> {
        let h = g.inverse()?;
        // g*μ in the standard basis equals μ in the basis f_i = g⁻¹ e_i, whose
        // coordinates are the columns of g⁻¹, i.e. the rows of (g⁻¹)ᵀ.
        Ok(self.in_basis_with_inverse(&h.transpose(), &g.transpose()))
    }

    /// Constants in the basis `f_i = Σ_j M[i][j] e_j`.
    pub fn in_basis(&self, m: &Matrix<S>) -> Result<Self, ArithError> {
        let inv = m.inverse()?;
        Ok(self.in_basis_with_inverse(m, &inv))
    }

    pub fn subspace_product(&self, u: &Subspace<S>, w: &Subspace<S>) -> Subspace<S> {
        let mut vs = Vec::new();
        for a in u.basis() {
            for b in w.basis() {
                vs.push(self.mul_vec(a, b));
            }
        }
        Subspace::span(self.n, vs)
    }

    /// `U ∘ W = UW + WU`.
    pub fn circ_product(&self, u: &Subspace<S>, w: &Subspace<S>) -> Subspace<S> {
        self.subspace_product(u, w).sum(&self.subspace_product(w, u))
    }

    /// `A¹ ⊇ A² ⊇ …` with `Aᵏ = Σ_{i+j=k} Aⁱ Aʲ`, stopping at `0` or when the
    /// chain stabilizes.
    pub fn power_spaces(&self) -> Vec<Subspace<S>> {
        let mut pw = vec![Subspace::full(self.n)];
        loop {
            let k = pw.len() + 1;
            let mut next = Subspace::zero(self.n);
            for i in 1..k {
                next = next.sum(&self.subspace_product(&pw[i - 1], &pw[k - i - 1]));
            }
            let stable = next == *pw.last().expect("nonempty");
            let zero = next.dim() == 0;
            if stable {
                break;
            }
            pw.push(next);
            if zero {
                break;
            }
        }
        pw
    }

    pub fn is_nilpotent(&self) -> bool {
        self.power_spaces().last().is_some_and(|s| s.dim() == 0)
    }
}

fn add<S: Ring>(a: &[S], b: &[S]) -> Vec<S> {
    a.iter().zip(b).map(|(x, y)| x.clone() + y.clone()).collect()
}

fn vec_eq<S: Ring>(a: &[S], b: &[S]) -> bool {
    a.iter().zip(b).all(|(x, y)| (x.clone() - y.clone()).is_zero())
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("dimension mismatch: expected vectors of length {expected}, got {got}")]
pub struct DimensionMismatch {
    pub expected: usize,
    pub got: usize,
}

impl<S: Ring> fmt::Display for AlgebraStructure<S> {
    /// Nonzero products in the form `e1e2 = e3 - 2 e4`, 1-based, `;`-separated.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for i in 0..self.n {
            for j in 0..self.n {
                let v = self.basis_product(i, j);
                if v.iter().all(Ring::is_zero) {
                    continue;
                }
                parts.push(format!("e{}e{} = {}", i + 1, j + 1, fmt_lin(&v)));
            }
        }
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join("; "))
        }
    }
}

/// Renders `Σ v_k e_{k+1}` with simple coefficient formatting.
pub fn fmt_lin<S: Ring>(v: &[S]) -> String {
    let mut out = String::new();
    for (k, c) in v.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let s = c.to_string();
        let term = if c.is_one() {
            format!("e{}", k + 1)
        } else if (-c.clone()).is_one() {
            format!("-e{}", k + 1)
        } else if s.contains([' ', '+']) || s[1..].contains('-') {
            format!("({s})*e{}", k + 1)
        } else {
            format!("{s}*e{}", k + 1)
        };
        if out.is_empty() {
            out = term;
        } else if let Some(rest) = term.strip_prefix('-') {
            out = format!("{out} - {rest}");
        } else {
            out = format!("{out} + {term}");
        }
    }
    if out.is_empty() {
        "0".into()
    } else {
        out
    }
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

    fn e(i: usize) -> Vec<Q> {
        unit(4, i - 1)
    }

    fn l2() -> AlgebraStructure<Q> {
        alg(&[(1, 1, 2, 1), (2, 1, 3, 1), (3, 1, 4, 1)])
    }

    #[test]
    fn multiply_examples() {
        assert_eq!(l2().multiply(&e(1), &e(1)).unwrap(), e(2));
        let n6 = alg(&[(1, 2, 3, 1), (2, 1, 4, 1)]);
        assert_eq!(n6.multiply(&e(2), &e(1)).unwrap(), e(4));
        assert!(n6.multiply(&e(1), &[Q::one()]).is_err());
    }

    #[test]
    fn identities() {
        let l = l2();
        assert!(l.check_identity(IdentityKind::Leibniz).holds());
        assert_eq!(l.check_identity(IdentityKind::Zinbiel), IdentityCheck::Counterexample(0, 0, 0));
        for k in IdentityKind::ALL {
            assert!(AlgebraStructure::<Q>::zero(4).check_identity(k).holds());
        }
    }

    #[test]
    fn change_basis_swap_n9() {
        let alpha = Q::from_i64(5);
        let mut n9 = alg(&[(1, 2, 4, 1), (2, 2, 3, 1)]);
        n9.set(1, 0, 3, alpha.clone());
        let g = Matrix::from_fn(4, 4, |r, c| {
            let p = [1, 0, 2, 3];
            if p[c] == r { Q::one() } else { Q::zero() }
        });
        let b = n9.change_basis(&g).unwrap();
        let mut exp = alg(&[(1, 1, 3, 1), (2, 1, 4, 1)]);
        exp.set(0, 1, 3, alpha);
        assert_eq!(b, exp);
    }

    #[test]
    fn products_and_powers() {
        let n6 = alg(&[(1, 2, 3, 1), (2, 1, 4, 1)]);
        let u = Subspace::span(4, vec![e(1)]);
        let w = Subspace::span(4, vec![e(2)]);
        assert_eq!(n6.circ_product(&u, &w), Subspace::span(4, vec![e(3), e(4)]));
        let full = Subspace::full(4);
        assert_eq!(l2().subspace_product(&full, &full), Subspace::span(4, vec![e(2), e(3), e(4)]));
        let dims: Vec<usize> = l2().power_spaces().iter().map(Subspace::dim).collect();
        assert_eq!(dims, vec![4, 3, 2, 1, 0]);
        let z: Vec<usize> = AlgebraStructure::<Q>::zero(4).power_spaces().iter().map(Subspace::dim).collect();
        assert_eq!(z, vec![4, 0]);
        assert_eq!(l2().to_string(), "e1e1 = e2; e2e1 = e3; e3e1 = e4");
    }
}
