//! Dense matrices over a field: row reduction, determinants, inverses, linear
//! systems and canonical subspaces.

use std::fmt;
use std::ops::{Index, IndexMut, Mul};

use super::{ArithError, Field, Ring};

#[derive(Clone, PartialEq, Debug)]
pub struct Matrix<F> {
    rows: usize,
    cols: usize,
    data: Vec<F>,
}

impl<F: Ring> Matrix<F> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![F::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = F::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<F>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged matrix");
        Self { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> F) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[F] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<F> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn apply(&self, v: &[F]) -> Vec<F> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(F::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
            })
            .collect()
    }

    pub fn map<G: Ring>(&self, f: impl Fn(&F) -> G) -> Matrix<G> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Ring::is_zero)
    }

    /// Determinant by cofactor-free fraction-free elimination is not needed at
    /// our sizes; Laplace expansion works over any ring.
    pub fn det_ring(&self) -> F {
        assert_eq!(self.rows, self.cols);
        let cols: Vec<usize> = (0..self.cols).collect();
        laplace(self, 0, &cols)
    }

    /// Adjugate over a ring: `adj(M)·M = det(M)·I`.
    pub fn adjugate(&self) -> Self {
        let n = self.rows;
        assert_eq!(n, self.cols);
        if n == 1 {
            return Self::identity(1);
        }
        Self::from_fn(n, n, |i, j| {
            // adj[i][j] = (-1)^{i+j} · minor(j, i)
            let minor = Self::from_fn(n - 1, n - 1, |r, c| {
                let rr = if r < j { r } else { r + 1 };
                let cc = if c < i { c } else { c + 1 };
                self[(rr, cc)].clone()
            });
            let d = minor.det_ring();
            if (i + j) % 2 == 0 {
                d
            } else {
                -d
            }
        })
    }
}

fn laplace<F: Ring>(m: &Matrix<F>, row: usize, cols: &[usize]) -> F {
    if cols.is_empty() {
        return F::one();
    }
    let mut acc = F::zero();
    for (k, &c) in cols.iter().enumerate() {
        let a = &m[(row, c)];
        if a.is_zero() {
            continue;
        }
        let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
        let term = a.clone() * laplace(m, row + 1, &rest);
        acc = if k % 2 == 0 { acc + term } else { acc - term };
    }
    acc
}

impl<F: Field> Matrix<F> {
    /// In-place reduced row echelon form; returns the pivot columns.
    pub fn rref_in_place(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !self[(i, c)].is_zero()) else {
                continue;
            };
            if p != r {
                for j in 0..self.cols {
                    self.data.swap(p * self.cols + j, r * self.cols + j);
                }
            }
            let inv = self[(r, c)].inv().expect("nonzero pivot");
            for j in c..self.cols {
                self[(r, j)] = self[(r, j)].clone() * inv.clone();
            }
            for i in 0..self.rows {
                if i == r || self[(i, c)].is_zero() {
                    continue;
                }
                let f = self[(i, c)].clone();
                for j in c..self.cols {
                    let v = self[(i, j)].clone() - f.clone() * self[(r, j)].clone();
                    self[(i, j)] = v;
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let p = m.rref_in_place();
        (m, p)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    pub fn det(&self) -> F {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut m = self.clone();
        let mut det = F::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m[(i, c)].is_zero()) else {
                return F::zero();
            };
            if p != c {
                for j in 0..n {
                    m.data.swap(p * n + j, c * n + j);
                }
                det = -det;
            }
            let piv = m[(c, c)].clone();
            det = det * piv.clone();
            let inv = piv.inv().expect("nonzero pivot");
            for i in c + 1..n {
                if m[(i, c)].is_zero() {
                    continue;
                }
                let f = m[(i, c)].clone() * inv.clone();
                for j in c..n {
                    let v = m[(i, j)].clone() - f.clone() * m[(c, j)].clone();
                    m[(i, j)] = v;
                }
            }
        }
        det
    }

    pub fn inverse(&self) -> Result<Self, ArithError> {
        let n = self.rows;
        assert_eq!(n, self.cols);
        let mut aug = Self::from_fn(n, 2 * n, |i, j| {
            if j < n {
                self[(i, j)].clone()
            } else if j - n == i {
                F::one()
            } else {
                F::zero()
            }
        });
        let piv = aug.rref_in_place();
        if piv.len() < n || piv[n - 1] >= n {
            return Err(ArithError::Singular);
        }
        Ok(Self::from_fn(n, n, |i, j| aug[(i, j + n)].clone()))
    }

    /// Basis of `{x : M x = 0}`.
    pub fn nullspace(&self) -> Vec<Vec<F>> {
        let (r, piv) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !piv.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![F::zero(); self.cols];
                v[f] = F::one();
                for (row, &p) in piv.iter().enumerate() {
                    v[p] = -r[(row, f)].clone();
                }
                v
            })
            .collect()
    }
}

/// Solution set of `A x = b`: a particular solution plus a nullspace basis, or
/// `None` if inconsistent.
pub fn linear_solve<F: Field>(a: &Matrix<F>, b: &[F]) -> Option<(Vec<F>, Vec<Vec<F>>)> {
    assert_eq!(a.rows, b.len());
    let n = a.cols;
    let aug = Matrix::from_fn(a.rows, n + 1, |i, j| if j < n { a[(i, j)].clone() } else { b[i].clone() });
    let (r, piv) = aug.rref();
    if piv.last() == Some(&n) {
        return None;
    }
    let mut x = vec![F::zero(); n];
    for (row, &p) in piv.iter().enumerate() {
        x[p] = r[(row, n)].clone();
    }
    Some((x, a.nullspace()))
}

impl<F> Index<(usize, usize)> for Matrix<F> {
    type Output = F;
    fn index(&self, (i, j): (usize, usize)) -> &F {
        &self.data[i * self.cols + j]
    }
}

impl<F> IndexMut<(usize, usize)> for Matrix<F> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut F {
        &mut self.data[i * self.cols + j]
    }
}

impl<F: Ring> Mul for &Matrix<F> {
    type Output = Matrix<F>;
    fn mul(self, o: &Matrix<F>) -> Matrix<F> {
        assert_eq!(self.cols, o.rows);
        Matrix::from_fn(self.rows, o.cols, |i, j| {
            (0..self.cols).fold(F::zero(), |acc, k| acc + self[(i, k)].clone() * o[(k, j)].clone())
        })
    }
}

impl<F: Ring> fmt::Display for Matrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// A subspace of `F^n`, stored as the nonzero rows of its RREF basis so that
/// equal subspaces have equal representations.
#[derive(Clone, PartialEq, Debug)]
pub struct Subspace<F> {
    ambient: usize,
    basis: Vec<Vec<F>>,
}

impl<F: Field> Subspace<F> {
    pub fn zero(n: usize) -> Self {
        Self { ambient: n, basis: Vec::new() }
    }

    pub fn full(n: usize) -> Self {
        Self::span(n, (0..n).map(|i| unit(n, i)).collect())
    }

    pub fn span(n: usize, vectors: Vec<Vec<F>>) -> Self {
        if vectors.is_empty() {
            return Self::zero(n);
        }
        let (r, piv) = Matrix::from_rows(vectors).rref();
        Self { ambient: n, basis: (0..piv.len()).map(|i| r.row(i).to_vec()).collect() }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<F>] {
        &self.basis
    }

    pub fn sum(&self, o: &Self) -> Self {
        Self::span(self.ambient, self.basis.iter().chain(&o.basis).cloned().collect())
    }

    pub fn contains(&self, v: &[F]) -> bool {
        let mut vs = self.basis.clone();
        vs.push(v.to_vec());
        Self::span(self.ambient, vs).dim() == self.dim()
    }

    pub fn contains_space(&self, o: &Self) -> bool {
        self.sum(o).dim() == self.dim()
    }

    /// Vectors `x` with `⟨a, x⟩ = 0` for all `a` in `self` (standard bilinear
    /// pairing, no conjugation).
    pub fn annihilator(&self) -> Self {
        if self.basis.is_empty() {
            return Self::full(self.ambient);
        }
        Self::span(self.ambient, Matrix::from_rows(self.basis.clone()).nullspace())
    }

    pub fn intersection(&self, o: &Self) -> Self {
        self.annihilator().sum(&o.annihilator()).annihilator()
    }
}

pub fn unit<F: Ring>(n: usize, i: usize) -> Vec<F> {
    (0..n).map(|k| if k == i { F::one() } else { F::zero() }).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::GaussRat;

    fn m(rows: &[&[i64]]) -> Matrix<GaussRat> {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| GaussRat::from_i64(x)).collect()).collect())
    }

    #[test]
    fn det_and_inverse() {
        let a = m(&[&[2, 1, 0], &[1, 3, 1], &[0, 1, 4]]);
        assert_eq!(a.det(), GaussRat::from_i64(18));
        assert_eq!(a.det_ring(), GaussRat::from_i64(18));
        let inv = a.inverse().unwrap();
        assert_eq!(&a * &inv, Matrix::identity(3));
        let adj = a.adjugate();
        assert_eq!(&adj * &a, Matrix::<GaussRat>::identity(3).map(|x| x.clone() * GaussRat::from_i64(18)));
        assert!(m(&[&[1, 2], &[2, 4]]).inverse().is_err());
    }

    #[test]
    fn solve_and_nullspace() {
        let a = m(&[&[1, 1, 0], &[0, 1, 1]]);
        let b = [GaussRat::from_i64(2), GaussRat::from_i64(3)];
        let (x, ns) = linear_solve(&a, &b).unwrap();
        assert_eq!(a.apply(&x), b.to_vec());
        assert_eq!(ns.len(), 1);
        assert!(a.apply(&ns[0]).iter().all(Ring::is_zero));
        let bad = m(&[&[1, 1], &[1, 1]]);
        assert!(linear_solve(&bad, &[GaussRat::from_i64(1), GaussRat::from_i64(2)]).is_none());
    }

    #[test]
    fn subspace_lattice() {
        let u = Subspace::span(3, vec![unit(3, 0), unit(3, 1)]);
        let w = Subspace::span(3, vec![unit(3, 1), unit(3, 2)]);
        assert_eq!(u.intersection(&w), Subspace::span(3, vec![unit::<GaussRat>(3, 1)]));
        assert_eq!(u.sum(&w).dim(), 3);
        assert!(u.contains(&unit(3, 0)));
        assert!(!u.contains(&unit(3, 2)));
    }
}
