//! Exact rational linear algebra.
//!
//! Everything here works over [`Scalar`] with pivoted Gauss-Jordan
//! elimination. Rows are dense, but row operations skip zero entries of
//! the pivot row, which keeps the sparse systems produced by the
//! prolongation and cohomology code cheap.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::{zeros, Scalar};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Vec<Scalar>>,
}

impl Matrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![zeros(cols); rows] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m.data[i][i] = Scalar::one();
        }
        m
    }

    /// Builds a matrix from rows; `cols` is needed so that a matrix with
    /// no rows still knows its width.
    pub fn from_rows(cols: usize, data: Vec<Vec<Scalar>>) -> Result<Self> {
        if let Some(bad) = data.iter().find(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch { expected: cols, got: bad.len() });
        }
        Ok(Matrix { rows: data.len(), cols, data })
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let data = rows.iter().map(|r| r.iter().map(|&x| crate::scalar::int(x)).collect()).collect();
        Self::from_rows(cols, data).expect("ragged literal matrix")
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i][j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.data[i][j] = v;
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i]
    }

    pub fn rows(&self) -> &[Vec<Scalar>] {
        &self.data
    }

    pub fn into_rows(self) -> Vec<Vec<Scalar>> {
        self.data
    }

    pub fn column(&self, j: usize) -> Vec<Scalar> {
        self.data.iter().map(|r| r[j].clone()).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zero(self.cols, self.rows);
        for (i, row) in self.data.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                if !x.is_zero() {
                    t.data[j][i] = x.clone();
                }
            }
        }
        t
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Result<Vec<Scalar>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch { expected: self.cols, got: v.len() });
        }
        Ok(self.data.iter().map(|row| dot(row, v)).collect())
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        if other.rows != self.cols {
            return Err(Error::DimensionMismatch { expected: self.cols, got: other.rows });
        }
        let mut out = Matrix::zero(self.rows, other.cols);
        for (i, row) in self.data.iter().enumerate() {
            for (k, a) in row.iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                for (j, b) in other.data[k].iter().enumerate() {
                    if !b.is_zero() {
                        out.data[i][j] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        let mut out = self.clone();
        for (r, o) in out.data.iter_mut().zip(&other.data) {
            for (x, y) in r.iter_mut().zip(o) {
                *x -= y;
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|r| r.iter().all(Zero::is_zero))
    }

    pub fn flatten(&self) -> Vec<Scalar> {
        self.data.iter().flatten().cloned().collect()
    }

    pub fn unflatten(rows: usize, cols: usize, v: &[Scalar]) -> Matrix {
        let data = v.chunks(cols.max(1)).take(rows).map(|c| c.to_vec()).collect();
        if cols == 0 {
            return Matrix::zero(rows, 0);
        }
        Matrix { rows, cols, data }
    }
}

pub fn dot(a: &[Scalar], b: &[Scalar]) -> Scalar {
    let mut acc = Scalar::zero();
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            acc += x * y;
        }
    }
    acc
}

/// `target += factor * src`, touching only the nonzero entries of `src`.
pub fn axpy(target: &mut [Scalar], factor: &Scalar, src: &[Scalar]) {
    if factor.is_zero() {
        return;
    }
    for (t, s) in target.iter_mut().zip(src) {
        if !s.is_zero() {
            *t += factor * s;
        }
    }
}

/// In-place reduced row echelon form. Pivots are searched only among the
/// first `pivot_limit` columns; the remaining columns ride along (used for
/// augmented systems). Zero rows are dropped. Returns the pivot columns.
fn rref_in_place(rows: &mut Vec<Vec<Scalar>>, pivot_limit: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..pivot_limit {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].recip();
        let support: Vec<usize> = (0..rows[r].len()).filter(|&j| !rows[r][j].is_zero()).collect();
        for &j in &support {
            rows[r][j] *= &inv;
        }
        let pivot_row = std::mem::take(&mut rows[r]);
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for &j in &support {
                row[j] -= &f * &pivot_row[j];
            }
        }
        rows[r] = pivot_row;
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    pivots
}

/// Reduced row echelon form of `rows` (each of length `ncols`), zero rows removed.
pub fn rref(mut rows: Vec<Vec<Scalar>>, ncols: usize) -> (Vec<Vec<Scalar>>, Vec<usize>) {
    let piv = rref_in_place(&mut rows, ncols);
    (rows, piv)
}

pub fn rank(m: &Matrix) -> usize {
    rref(m.data.clone(), m.cols).1.len()
}

/// A linear subspace of `Q^n`, stored as the reduced row echelon basis.
/// Equal subspaces have identical representations.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subspace {
    ambient_dim: usize,
    basis: Vec<Vec<Scalar>>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(n: usize) -> Self {
        Subspace { ambient_dim: n, basis: Vec::new(), pivots: Vec::new() }
    }

    pub fn full(n: usize) -> Self {
        Self::span(n, Matrix::identity(n).into_rows()).expect("identity rows")
    }

    pub fn span(n: usize, vectors: Vec<Vec<Scalar>>) -> Result<Self> {
        if let Some(bad) = vectors.iter().find(|v| v.len() != n) {
            return Err(Error::DimensionMismatch { expected: n, got: bad.len() });
        }
        let (basis, pivots) = rref(vectors, n);
        Ok(Subspace { ambient_dim: n, basis, pivots })
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<Scalar>] {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    /// Reduces `v` against the echelon basis; the remainder vanishes on
    /// every pivot column and is zero iff `v` lies in the subspace.
    pub fn reduce(&self, v: &[Scalar]) -> Vec<Scalar> {
        let mut r = v.to_vec();
        for (row, &p) in self.basis.iter().zip(&self.pivots) {
            if !r[p].is_zero() {
                let f = -r[p].clone();
                axpy(&mut r, &f, row);
            }
        }
        r
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        v.len() == self.ambient_dim && self.reduce(v).iter().all(Zero::is_zero)
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        other.basis.iter().all(|v| self.contains(v))
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        self.check_same(other)?;
        let mut vs = self.basis.clone();
        vs.extend(other.basis.iter().cloned());
        Subspace::span(self.ambient_dim, vs)
    }

    fn check_same(&self, other: &Subspace) -> Result<()> {
        if self.ambient_dim != other.ambient_dim {
            return Err(Error::DimensionMismatch { expected: self.ambient_dim, got: other.ambient_dim });
        }
        Ok(())
    }

    /// Vectors orthogonal (standard pairing) to every element.
    pub fn annihilator(&self) -> Subspace {
        let m = Matrix { rows: self.basis.len(), cols: self.ambient_dim, data: self.basis.clone() };
        kernel_basis(&m)
    }

    /// Canonical complement of `self` inside `outer` (which must contain
    /// it): the elements of `outer` vanishing on the pivot columns of
    /// `self`. Its dimension is `outer.dim() - self.dim()`.
    pub fn complement_in(&self, outer: &Subspace) -> Result<Subspace> {
        self.check_same(outer)?;
        let residues: Vec<Vec<Scalar>> = outer.basis.iter().map(|v| self.reduce(v)).collect();
        Subspace::span(self.ambient_dim, residues)
    }
}

/// Canonical basis of `{v : m v = 0}`.
pub fn kernel_basis(m: &Matrix) -> Subspace {
    let n = m.cols;
    let (r, pivots) = rref(m.data.clone(), n);
    let mut is_pivot = vec![false; n];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let mut vs = Vec::new();
    for f in (0..n).filter(|&c| !is_pivot[c]) {
        let mut v = zeros(n);
        v[f] = Scalar::one();
        for (row, &p) in r.iter().zip(&pivots) {
            if !row[f].is_zero() {
                v[p] = -row[f].clone();
            }
        }
        vs.push(v);
    }
    Subspace::span(n, vs).expect("kernel vectors have ambient length")
}

/// Kernel of a linear map given by its rows, without materializing a [`Matrix`].
pub fn kernel_of_rows(cols: usize, rows: Vec<Vec<Scalar>>) -> Result<Subspace> {
    Ok(kernel_basis(&Matrix::from_rows(cols, rows)?))
}

pub fn intersect(a: &Subspace, b: &Subspace) -> Result<Subspace> {
    a.check_same(b)?;
    let n = a.ambient_dim;
    if a.dim() == n {
        return Ok(b.clone());
    }
    if b.dim() == n {
        return Ok(a.clone());
    }
    // v lies in a ∩ b iff v ∈ a and v is annihilated by b's annihilator.
    let ann = b.annihilator();
    let ka = a.dim();
    let rows: Vec<Vec<Scalar>> = ann.basis.iter().map(|w| a.basis.iter().map(|v| dot(w, v)).collect()).collect();
    let coeffs = kernel_of_rows(ka, rows)?;
    let vs = coeffs
        .basis
        .iter()
        .map(|c| {
            let mut v = zeros(n);
            for (ci, bi) in c.iter().zip(&a.basis) {
                axpy(&mut v, ci, bi);
            }
            v
        })
        .collect();
    Subspace::span(n, vs)
}

/// `{v : m v ∈ target}`.
pub fn preimage_membership(m: &Matrix, target: &Subspace) -> Result<Subspace> {
    if target.ambient_dim != m.rows {
        return Err(Error::DimensionMismatch { expected: m.rows, got: target.ambient_dim });
    }
    let ann = target.annihilator();
    let rows: Vec<Vec<Scalar>> = ann
        .basis
        .iter()
        .map(|w| {
            (0..m.cols)
                .map(|j| {
                    let mut acc = Scalar::zero();
                    for (i, wi) in w.iter().enumerate() {
                        if !wi.is_zero() && !m.data[i][j].is_zero() {
                            acc += wi * &m.data[i][j];
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect();
    kernel_of_rows(m.cols, rows)
}

/// Coordinates with respect to a fixed, linearly independent basis.
#[derive(Clone, Debug)]
pub struct CoordinateSystem {
    len: usize,
    dim: usize,
    /// Echelon rows of the basis, augmented by the transform taking the
    /// original basis to them.
    reduced: Vec<Vec<Scalar>>,
    pivots: Vec<usize>,
}

impl CoordinateSystem {
    pub fn new(len: usize, basis: &[Vec<Scalar>]) -> Result<Self> {
        let dim = basis.len();
        let mut rows = Vec::with_capacity(dim);
        for (i, b) in basis.iter().enumerate() {
            if b.len() != len {
                return Err(Error::DimensionMismatch { expected: len, got: b.len() });
            }
            let mut r = b.clone();
            r.extend(crate::scalar::unit(dim, i));
            rows.push(r);
        }
        let pivots = rref_in_place(&mut rows, len);
        if pivots.len() != dim {
            return Err(Error::Invariant("coordinate basis is linearly dependent".into()));
        }
        Ok(CoordinateSystem { len, dim, reduced: rows, pivots })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Coordinates of `v`, or `None` when `v` is outside the span.
    pub fn coords(&self, v: &[Scalar]) -> Option<Vec<Scalar>> {
        if v.len() != self.len {
            return None;
        }
        let mut rest = v.to_vec();
        let mut out = zeros(self.dim);
        for (row, &p) in self.reduced.iter().zip(&self.pivots) {
            if rest[p].is_zero() {
                continue;
            }
            let f = rest[p].clone();
            let (head, tail) = row.split_at(self.len);
            for (r, h) in rest.iter_mut().zip(head) {
                if !h.is_zero() {
                    *r -= &f * h;
                }
            }
            axpy(&mut out, &f, tail);
        }
        rest.iter().all(Zero::is_zero).then_some(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{frac, int, unit};

    fn span(n: usize, vs: &[&[i64]]) -> Subspace {
        Subspace::span(n, vs.iter().map(|v| v.iter().map(|&x| int(x)).collect()).collect()).unwrap()
    }

    #[test]
    fn rank_examples() {
        assert_eq!(rank(&Matrix::identity(3)), 3);
        assert_eq!(rank(&Matrix::zero(2, 5)), 0);
        assert_eq!(rank(&Matrix::from_i64(&[&[1, 2], &[2, 4]])), 1);
    }

    #[test]
    fn kernel_examples() {
        assert!(kernel_basis(&Matrix::identity(3)).is_zero());
        let k = kernel_basis(&Matrix::from_i64(&[&[1, 1]]));
        assert_eq!(k, span(2, &[&[1, -1]]));
        let k = kernel_basis(&Matrix::zero(0, 4));
        assert_eq!(k, Subspace::full(4));
    }

    #[test]
    fn intersect_examples() {
        let b = span(3, &[&[1, 2, 3], &[0, 1, 1]]);
        assert_eq!(intersect(&Subspace::full(3), &b).unwrap(), b);
        assert!(intersect(&span(2, &[&[1, 0]]), &span(2, &[&[0, 1]])).unwrap().is_zero());
        let got = intersect(&span(3, &[&[1, 0, 0], &[0, 1, 0]]), &span(3, &[&[0, 1, 0], &[0, 0, 1]])).unwrap();
        assert_eq!(got, span(3, &[&[0, 1, 0]]));
        assert!(intersect(&Subspace::zero(2), &Subspace::zero(3)).is_err());
    }

    #[test]
    fn preimage_examples() {
        let m = Matrix::from_i64(&[&[1, 2, 0], &[0, 1, 1]]);
        assert_eq!(preimage_membership(&m, &Subspace::full(2)).unwrap(), Subspace::full(3));
        assert_eq!(preimage_membership(&m, &Subspace::zero(2)).unwrap(), kernel_basis(&m));
        let id = Matrix::identity(3);
        let e1 = span(3, &[&[1, 0, 0]]);
        assert_eq!(preimage_membership(&id, &e1).unwrap(), e1);
        assert!(preimage_membership(&m, &Subspace::full(3)).is_err());
    }

    #[test]
    fn canonical_form_is_basis_independent() {
        let a = span(3, &[&[1, 1, 0], &[0, 1, 1]]);
        let b = span(3, &[&[1, 2, 1], &[2, 1, -1]]);
        assert_eq!(a, b);
    }

    #[test]
    fn coordinates_roundtrip() {
        let basis = vec![vec![int(1), int(1), int(0)], vec![int(0), int(2), int(1)]];
        let cs = CoordinateSystem::new(3, &basis).unwrap();
        let v = vec![int(3), int(1), frac(-1, 1)];
        assert_eq!(cs.coords(&v).unwrap(), vec![int(3), int(-1)]);
        assert!(cs.coords(&unit(3, 2)).is_none());
    }

    #[test]
    fn complement_has_expected_dimension() {
        let outer = Subspace::full(3);
        let inner = span(3, &[&[1, 1, 1]]);
        let c = inner.complement_in(&outer).unwrap();
        assert_eq!(c.dim(), 2);
        assert!(intersect(&c, &inner).unwrap().is_zero());
    }
}
