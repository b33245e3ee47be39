//! Sparse exact linear algebra: rank, kernel and image bases, solves,
//! quotient dimensions and symmetric inversion.
//!
//! Matrices are stored as sparse rows over an exact [`Scalar`] field, and all
//! eliminations are plain fraction-exact Gauss–Jordan: with rational entries
//! the gcd-reduction inside the scalar type keeps intermediate growth in
//! check, and reduced row echelon form gives every subspace one canonical
//! basis, so subspace equality is structural equality.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Sparse matrix with exact entries.  Stored entries are always nonzero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<BTreeMap<usize, T>>,
}

impl<T: Scalar> Matrix<T> {
    pub fn zero(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![BTreeMap::new(); rows] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zero(n, n);
        for i in 0..n {
            m.set(i, i, T::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut m = Matrix::zero(r, c);
        for (i, row) in rows.into_iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (j, v) in row.into_iter().enumerate() {
                m.set(i, j, v);
            }
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut m = Matrix::zero(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        self.data[i].get(&j).cloned().unwrap_or_else(T::zero)
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        assert!(i < self.rows && j < self.cols, "index out of range");
        if v.is_zero() {
            self.data[i].remove(&j);
        } else {
            self.data[i].insert(j, v);
        }
    }

    pub fn add_to(&mut self, i: usize, j: usize, v: T) {
        if v.is_zero() {
            return;
        }
        let cur = self.get(i, j);
        self.set(i, j, cur + v);
    }

    pub fn row(&self, i: usize) -> &BTreeMap<usize, T> {
        &self.data[i]
    }

    pub fn row_to_vec(&self, i: usize) -> Vec<T> {
        let mut v = vec![T::zero(); self.cols];
        for (&j, x) in &self.data[i] {
            v[j] = x.clone();
        }
        v
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(BTreeMap::is_empty)
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(BTreeMap::len).sum()
    }

    pub fn transpose(&self) -> Self {
        let mut m = Matrix::zero(self.cols, self.rows);
        for (i, row) in self.data.iter().enumerate() {
            for (&j, v) in row {
                m.data[j].insert(i, v.clone());
            }
        }
        m
    }

    pub fn scale(&self, c: &T) -> Self {
        if c.is_zero() {
            return Matrix::zero(self.rows, self.cols);
        }
        let mut m = self.clone();
        for row in &mut m.data {
            for v in row.values_mut() {
                *v *= c.clone();
            }
        }
        m
    }

    pub fn neg(&self) -> Self {
        self.scale(&(-T::one()))
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch in add");
        let mut m = self.clone();
        for (i, row) in other.data.iter().enumerate() {
            for (&j, v) in row {
                m.add_to(i, j, v.clone());
            }
        }
        m
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "shape mismatch in mul");
        let mut m = Matrix::zero(self.rows, other.cols);
        for (i, row) in self.data.iter().enumerate() {
            for (&k, a) in row {
                for (&j, b) in &other.data[k] {
                    m.add_to(i, j, a.clone() * b.clone());
                }
            }
        }
        m
    }

    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(self.cols, v.len(), "shape mismatch in mul_vec");
        let mut out = vec![T::zero(); self.rows];
        for (i, row) in self.data.iter().enumerate() {
            let mut acc = T::zero();
            for (&j, a) in row {
                if !v[j].is_zero() {
                    acc += a.clone() * v[j].clone();
                }
            }
            out[i] = acc;
        }
        out
    }

    /// Reduced row echelon form together with the pivot columns.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut rows: Vec<BTreeMap<usize, T>> =
            self.data.iter().filter(|r| !r.is_empty()).cloned().collect();
        let mut pivots = Vec::new();
        let mut done: Vec<BTreeMap<usize, T>> = Vec::new();
        while !rows.is_empty() {
            // pivot on the smallest leading column; among candidates take the
            // sparsest row to limit fill-in
            let lead = rows.iter().map(|r| *r.keys().next().unwrap()).min().unwrap();
            let (idx, _) = rows
                .iter()
                .enumerate()
                .filter(|(_, r)| *r.keys().next().unwrap() == lead)
                .min_by_key(|(_, r)| r.len())
                .unwrap();
            let mut piv = rows.swap_remove(idx);
            let inv = piv[&lead].inv();
            if !inv.is_one() {
                for v in piv.values_mut() {
                    *v *= inv.clone();
                }
            }
            for r in rows.iter_mut().chain(done.iter_mut()) {
                if let Some(c) = r.get(&lead).cloned() {
                    sub_scaled(r, &piv, &c);
                }
            }
            rows.retain(|r| !r.is_empty());
            pivots.push(lead);
            done.push(piv);
        }
        // rows sorted by pivot column
        let mut order: Vec<usize> = (0..pivots.len()).collect();
        order.sort_by_key(|&i| pivots[i]);
        let data: Vec<_> = order.iter().map(|&i| done[i].clone()).collect();
        pivots.sort_unstable();
        let rank = data.len();
        (Matrix { rows: rank, cols: self.cols, data }, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Canonical basis of `ker(self)` acting on column vectors.
    pub fn kernel_basis(&self) -> Subspace<T> {
        let (r, pivots) = self.rref();
        let mut basis = Vec::new();
        let pivot_set: std::collections::BTreeSet<usize> = pivots.iter().copied().collect();
        for free in 0..self.cols {
            if pivot_set.contains(&free) {
                continue;
            }
            let mut v = vec![T::zero(); self.cols];
            v[free] = T::one();
            for (i, &p) in pivots.iter().enumerate() {
                let c = r.get(i, free);
                if !c.is_zero() {
                    v[p] = -c;
                }
            }
            basis.push(v);
        }
        Subspace::from_rows(self.cols, basis)
    }

    /// Canonical basis of the column space.
    pub fn image_basis(&self) -> Subspace<T> {
        let t = self.transpose();
        let rows: Vec<Vec<T>> = (0..t.rows).map(|i| t.row_to_vec(i)).collect();
        Subspace::from_rows(self.rows, rows)
    }

    /// One solution of `self * x = b`, if any (free variables set to zero).
    pub fn solve(&self, b: &[T]) -> Option<Vec<T>> {
        assert_eq!(b.len(), self.rows, "rhs length mismatch");
        // eliminate the augmented system [self | b]
        let mut aug = Matrix::zero(self.rows, self.cols + 1);
        for (i, row) in self.data.iter().enumerate() {
            for (&j, v) in row {
                aug.data[i].insert(j, v.clone());
            }
            if !b[i].is_zero() {
                aug.data[i].insert(self.cols, b[i].clone());
            }
        }
        let (r, pivots) = aug.rref();
        if pivots.contains(&self.cols) {
            return None; // inconsistent
        }
        let mut x = vec![T::zero(); self.cols];
        for (i, &p) in pivots.iter().enumerate() {
            x[p] = r.get(i, self.cols);
        }
        Some(x)
    }

    /// Exact inverse of a symmetric matrix, used for Laplacian contractions.
    pub fn invert_spd(&self) -> Result<Self> {
        if self.rows != self.cols {
            return Err(Error::DimMismatch { reason: "invert_spd needs a square matrix".into() });
        }
        for (i, row) in self.data.iter().enumerate() {
            for (&j, v) in row {
                if self.get(j, i) != *v {
                    return Err(Error::NotSymmetric { row: i, col: j });
                }
            }
        }
        self.invert()
    }

    /// Exact inverse via Gauss–Jordan on `[self | I]`.
    pub fn invert(&self) -> Result<Self> {
        assert_eq!(self.rows, self.cols, "invert needs a square matrix");
        let n = self.rows;
        let mut aug = Matrix::zero(n, 2 * n);
        for (i, row) in self.data.iter().enumerate() {
            for (&j, v) in row {
                aug.data[i].insert(j, v.clone());
            }
            aug.data[i].insert(n + i, T::one());
        }
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots.iter().take(n).enumerate().any(|(i, &p)| p != i) {
            return Err(Error::Singular);
        }
        let mut inv = Matrix::zero(n, n);
        for i in 0..n {
            for (&j, v) in &r.data[i] {
                if j >= n {
                    inv.data[i].insert(j - n, v.clone());
                }
            }
        }
        Ok(inv)
    }

    /// Stacks `self` on top of `other`.
    pub fn vstack(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.cols, "vstack column mismatch");
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Matrix { rows: self.rows + other.rows, cols: self.cols, data }
    }
}

fn sub_scaled<T: Scalar>(row: &mut BTreeMap<usize, T>, piv: &BTreeMap<usize, T>, c: &T) {
    for (&j, v) in piv {
        let delta = c.clone() * v.clone();
        match row.get_mut(&j) {
            Some(cur) => {
                *cur -= delta;
                if cur.is_zero() {
                    row.remove(&j);
                }
            }
            None => {
                if !delta.is_zero() {
                    row.insert(j, -delta);
                }
            }
        }
    }
}

/// A linear subspace of a coordinate space, stored as a reduced-echelon basis.
///
/// Construction canonicalizes, so two `Subspace` values are equal exactly when
/// they span the same subspace.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace<T> {
    ambient: usize,
    basis: Matrix<T>,
    pivots: Vec<usize>,
}

impl<T: Scalar> Subspace<T> {
    pub fn from_rows(ambient: usize, rows: Vec<Vec<T>>) -> Self {
        for r in &rows {
            assert_eq!(r.len(), ambient, "vector length must equal ambient dimension");
        }
        let m = Matrix::from_rows_padded(rows, ambient);
        let (basis, pivots) = m.rref();
        Subspace { ambient, basis, pivots }
    }

    pub fn zero(ambient: usize) -> Self {
        Subspace::from_rows(ambient, Vec::new())
    }

    pub fn full(ambient: usize) -> Self {
        Subspace { ambient, basis: Matrix::identity(ambient), pivots: (0..ambient).collect() }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.pivots.len()
    }

    pub fn basis_vectors(&self) -> Vec<Vec<T>> {
        (0..self.dim()).map(|i| self.basis.row_to_vec(i)).collect()
    }

    pub fn basis_matrix(&self) -> &Matrix<T> {
        &self.basis
    }

    /// Reduces `v` against the basis; returns the residual.
    fn reduce(&self, v: &[T]) -> Vec<T> {
        let mut w = v.to_vec();
        for (i, &p) in self.pivots.iter().enumerate() {
            if !w[p].is_zero() {
                let c = w[p].clone();
                for (&j, b) in self.basis.row(i) {
                    w[j] = w[j].clone() - c.clone() * b.clone();
                }
            }
        }
        w
    }

    pub fn contains(&self, v: &[T]) -> bool {
        assert_eq!(v.len(), self.ambient);
        self.reduce(v).iter().all(T::is_zero)
    }

    /// Coordinates of `v` in the echelon basis, if `v` lies in the subspace.
    pub fn coords(&self, v: &[T]) -> Option<Vec<T>> {
        if !self.contains(v) {
            return None;
        }
        Some(self.pivots.iter().map(|&p| v[p].clone()).collect())
    }

    pub fn contains_subspace(&self, other: &Self) -> bool {
        other.basis_vectors().iter().all(|v| self.contains(v))
    }

    /// Span of the union.
    pub fn sum(&self, other: &Self) -> Self {
        assert_eq!(self.ambient, other.ambient);
        let mut rows = self.basis_vectors();
        rows.extend(other.basis_vectors());
        Subspace::from_rows(self.ambient, rows)
    }

    /// `dim self - dim sub`, after checking `sub` really sits inside `self`.
    pub fn quotient_dim(&self, sub: &Self) -> Result<usize> {
        if !self.contains_subspace(sub) {
            return Err(Error::NotContained);
        }
        Ok(self.dim() - sub.dim())
    }

    /// Basis vectors of `self` extending `sub` to a basis of `self`: the
    /// returned vectors represent a basis of `self / sub`.
    pub fn complement_of(&self, sub: &Self) -> Result<Vec<Vec<T>>> {
        if !self.contains_subspace(sub) {
            return Err(Error::NotContained);
        }
        let mut acc = sub.clone();
        let mut reps = Vec::new();
        for v in self.basis_vectors() {
            if !acc.contains(&v) {
                reps.push(v.clone());
                acc = acc.sum(&Subspace::from_rows(self.ambient, vec![v]));
            }
        }
        debug_assert_eq!(reps.len() + sub.dim(), self.dim());
        Ok(reps)
    }

    /// Image of the subspace under a matrix (applied to column vectors).
    pub fn image_under(&self, m: &Matrix<T>) -> Self {
        let rows: Vec<Vec<T>> = self.basis_vectors().iter().map(|v| m.mul_vec(v)).collect();
        Subspace::from_rows(m.rows(), rows)
    }
}

impl<T: Scalar> Matrix<T> {
    fn from_rows_padded(rows: Vec<Vec<T>>, cols: usize) -> Self {
        let r = rows.len();
        let mut m = Matrix::zero(r, cols);
        for (i, row) in rows.into_iter().enumerate() {
            for (j, v) in row.into_iter().enumerate() {
                m.set(i, j, v);
            }
        }
        m
    }
}

/// Expresses vectors as combinations of a fixed generating set.
///
/// Used to write spectral-page classes in a chosen representative basis: the
/// generators need not be independent, the solver returns one combination.
pub struct SpanSolver<T> {
    gens: Matrix<T>, // generators as columns
}

impl<T: Scalar> SpanSolver<T> {
    pub fn new(ambient: usize, generators: &[Vec<T>]) -> Self {
        let mut m = Matrix::zero(ambient, generators.len());
        for (j, g) in generators.iter().enumerate() {
            assert_eq!(g.len(), ambient);
            for (i, v) in g.iter().enumerate() {
                if !v.is_zero() {
                    m.set(i, j, v.clone());
                }
            }
        }
        SpanSolver { gens: m }
    }

    /// Coefficients `c` with `sum_j c_j * gen_j = v`, if `v` is in the span.
    pub fn express(&self, v: &[T]) -> Option<Vec<T>> {
        self.gens.solve(v)
    }
}
