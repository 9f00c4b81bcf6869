//! Dense vectors and matrices over a [`FieldCtx`], with Gaussian elimination.
//!
//! Echelon forms are fully reduced with pivots chosen by leftmost column and
//! then least row index, so bases returned by [`kernel_basis`] and
//! [`span_basis`] are identical across runs.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf::{Felt, Field, FieldCtx};

/// A coordinate vector; the field is supplied by the caller.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Vector(pub Vec<Felt>);

impl Vector {
    pub fn zeros(n: usize) -> Self {
        Vector(vec![Felt::ZERO; n])
    }

    /// The standard basis vector `e_i` (0-based `i`).
    pub fn unit(n: usize, i: usize) -> Self {
        let mut v = Self::zeros(n);
        v.0[i] = Felt::ONE;
        v
    }

    pub fn from_values(values: &[u32]) -> Self {
        Vector(values.iter().map(|&v| Felt(v)).collect())
    }

    /// Maps signed integers into the prime subfield.
    pub fn from_ints(field: &FieldCtx, values: &[i64]) -> Self {
        Vector(values.iter().map(|&v| field.from_int(v)).collect())
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.0.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|c| c.is_zero())
    }

    pub fn values(&self) -> Vec<u32> {
        self.0.iter().map(|c| c.0).collect()
    }

    pub fn add(&self, field: &FieldCtx, other: &Vector) -> Vector {
        Vector(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(&a, &b)| field.add(a, b))
                .collect(),
        )
    }

    pub fn sub(&self, field: &FieldCtx, other: &Vector) -> Vector {
        Vector(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(&a, &b)| field.sub(a, b))
                .collect(),
        )
    }

    pub fn scale(&self, field: &FieldCtx, s: Felt) -> Vector {
        Vector(self.0.iter().map(|&a| field.mul(a, s)).collect())
    }

    /// Plain coordinate dot product.
    pub fn dot(&self, field: &FieldCtx, other: &Vector) -> Felt {
        self.0
            .iter()
            .zip(&other.0)
            .fold(Felt::ZERO, |acc, (&a, &b)| field.add(acc, field.mul(a, b)))
    }

    /// Big-endian base-q index: the first coordinate is most significant.
    pub fn index(&self, q: u32) -> u64 {
        self.0
            .iter()
            .fold(0u64, |acc, c| acc * q as u64 + c.0 as u64)
    }

    pub fn from_index(mut idx: u64, q: u32, n: usize) -> Vector {
        let mut out = vec![Felt::ZERO; n];
        for slot in out.iter_mut().rev() {
            *slot = Felt((idx % q as u64) as u32);
            idx /= q as u64;
        }
        Vector(out)
    }
}

impl fmt::Display for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// Every nonzero vector of `F_q^n`, in increasing index order.
pub fn nonzero_vectors(q: u32, n: usize) -> impl Iterator<Item = Vector> {
    let total = (q as u64).pow(n as u32);
    (1..total).map(move |i| Vector::from_index(i, q, n))
}

/// A dense row-major matrix over a shared field.
#[derive(Clone)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<Felt>,
}

impl PartialEq for Matrix {
    fn eq(&self, other: &Self) -> bool {
        *self.field == *other.field
            && self.rows == other.rows
            && self.cols == other.cols
            && self.data == other.data
    }
}

impl Eq for Matrix {}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix(q={}) {:?}", self.field.q(), self.to_rows())
    }
}

impl Matrix {
    pub fn zeros(field: &Field, rows: usize, cols: usize) -> Self {
        Matrix {
            field: field.clone(),
            rows,
            cols,
            data: vec![Felt::ZERO; rows * cols],
        }
    }

    pub fn identity(field: &Field, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, Felt::ONE);
        }
        m
    }

    pub fn diagonal(field: &Field, entries: &[Felt]) -> Self {
        let mut m = Self::zeros(field, entries.len(), entries.len());
        for (i, &d) in entries.iter().enumerate() {
            m.set(i, i, d);
        }
        m
    }

    /// Builds a matrix from rows of encoded elements, validating ranges and shape.
    pub fn from_rows(field: &Field, rows: &[Vec<u32>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(rows.len() * cols);
        for row in rows {
            if row.len() != cols {
                return Err(Error::ShapeMismatch("ragged rows".into()));
            }
            for &v in row {
                data.push(field.element(v as u64)?);
            }
        }
        Ok(Matrix {
            field: field.clone(),
            rows: rows.len(),
            cols,
            data,
        })
    }

    /// Rows of signed integers mapped into the prime subfield.
    pub fn from_ints(field: &Field, rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let data = rows
            .iter()
            .flat_map(|r| {
                assert_eq!(r.len(), cols, "ragged rows");
                r.iter().map(|&v| field.from_int(v))
            })
            .collect();
        Matrix {
            field: field.clone(),
            rows: rows.len(),
            cols,
            data,
        }
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(field: &Field, n: usize, cols: &[Vector]) -> Self {
        let mut m = Self::zeros(field, n, cols.len());
        for (j, c) in cols.iter().enumerate() {
            for i in 0..n {
                m.set(i, j, c.0[i]);
            }
        }
        m
    }

    pub fn from_row_vectors(field: &Field, cols: usize, rows: &[Vector]) -> Self {
        let mut m = Self::zeros(field, rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            m.data[i * cols..(i + 1) * cols].copy_from_slice(&r.0);
        }
        m
    }

    #[inline]
    pub fn field(&self) -> &Field {
        &self.field
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Felt {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Felt) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> Vector {
        Vector(self.data[i * self.cols..(i + 1) * self.cols].to_vec())
    }

    pub fn column(&self, j: usize) -> Vector {
        Vector((0..self.rows).map(|i| self.get(i, j)).collect())
    }

    pub fn to_rows(&self) -> Vec<Vec<u32>> {
        (0..self.rows).map(|i| self.row(i).values()).collect()
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn is_diagonal(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self.get(i, j).is_zero()))
    }

    pub fn diagonal_entries(&self) -> Vec<Felt> {
        (0..self.rows.min(self.cols))
            .map(|i| self.get(i, i))
            .collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(&self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        FieldCtx::same_field(&self.field, &other.field)?;
        if self.cols != other.rows {
            return Err(Error::ShapeMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let f = &*self.field;
        let mut out = Matrix::zeros(&self.field, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let cur = out.get(i, j);
                    out.set(i, j, f.add(cur, f.mul(a, other.get(k, j))));
                }
            }
        }
        Ok(out)
    }

    pub fn mat_vec(&self, v: &Vector) -> Result<Vector> {
        if v.len() != self.cols {
            return Err(Error::ShapeMismatch(format!(
                "{}x{} times vector of length {}",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        let f = &*self.field;
        Ok(Vector(
            (0..self.rows)
                .map(|i| {
                    (0..self.cols).fold(Felt::ZERO, |acc, j| {
                        f.add(acc, f.mul(self.get(i, j), v.0[j]))
                    })
                })
                .collect(),
        ))
    }

    /// `M^T A M`, the congruence transform used throughout.
    pub fn congruence(&self, m: &Matrix) -> Result<Matrix> {
        m.transpose().mul(self)?.mul(m)
    }

    /// Block-diagonal matrix `self ⊕ other`.
    pub fn direct_sum(&self, other: &Matrix) -> Result<Matrix> {
        FieldCtx::same_field(&self.field, &other.field)?;
        let mut out = Matrix::zeros(&self.field, self.rows + other.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j));
            }
        }
        for i in 0..other.rows {
            for j in 0..other.cols {
                out.set(self.rows + i, self.cols + j, other.get(i, j));
            }
        }
        Ok(out)
    }

    /// Reduced row echelon form and the pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let f = &*self.field;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(pr) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            m.swap_rows(r, pr);
            let inv = f.inv(m.get(r, c)).expect("pivot is nonzero");
            for j in 0..m.cols {
                let v = m.get(r, j);
                m.set(r, j, f.mul(v, inv));
            }
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let factor = m.get(i, c);
                if factor.is_zero() {
                    continue;
                }
                for j in 0..m.cols {
                    let v = f.sub(m.get(i, j), f.mul(factor, m.get(r, j)));
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    pub fn det(&self) -> Result<Felt> {
        if !self.is_square() {
            return Err(Error::ShapeMismatch(
                "determinant of a non-square matrix".into(),
            ));
        }
        let f = &*self.field;
        let n = self.rows;
        let mut m = self.clone();
        let mut det = Felt::ONE;
        for c in 0..n {
            let Some(pr) = (c..n).find(|&i| !m.get(i, c).is_zero()) else {
                return Ok(Felt::ZERO);
            };
            if pr != c {
                m.swap_rows(pr, c);
                det = f.neg(det);
            }
            let pivot = m.get(c, c);
            det = f.mul(det, pivot);
            let inv = f.inv(pivot)?;
            for i in c + 1..n {
                let factor = f.mul(m.get(i, c), inv);
                if factor.is_zero() {
                    continue;
                }
                for j in c..n {
                    let v = f.sub(m.get(i, j), f.mul(factor, m.get(c, j)));
                    m.set(i, j, v);
                }
            }
        }
        Ok(det)
    }

    /// Gauss-Jordan inverse; `Degenerate` when singular.
    pub fn inverse(&self) -> Result<Matrix> {
        if !self.is_square() {
            return Err(Error::ShapeMismatch(
                "inverse of a non-square matrix".into(),
            ));
        }
        let n = self.rows;
        let mut aug = Matrix::zeros(&self.field, n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j));
            }
            aug.set(i, n + i, Felt::ONE);
        }
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Err(Error::Degenerate);
        }
        let mut inv = Matrix::zeros(&self.field, n, n);
        for i in 0..n {
            for j in 0..n {
                inv.set(i, j, r.get(i, n + j));
            }
        }
        Ok(inv)
    }

    /// Sub-matrix on the given row and column indices.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Matrix {
        let mut out = Matrix::zeros(&self.field, rows.len(), cols.len());
        for (a, &i) in rows.iter().enumerate() {
            for (b, &j) in cols.iter().enumerate() {
                out.set(a, b, self.get(i, j));
            }
        }
        out
    }
}

/// Echelonized basis of `{x : Mx = 0}`.
pub fn kernel_basis(m: &Matrix) -> Vec<Vector> {
    let f = &*m.field;
    let (r, pivots) = m.rref();
    let free: Vec<usize> = (0..m.cols).filter(|c| !pivots.contains(c)).collect();
    let raw: Vec<Vector> = free
        .iter()
        .map(|&fc| {
            let mut v = Vector::zeros(m.cols);
            v.0[fc] = Felt::ONE;
            for (row, &pc) in pivots.iter().enumerate() {
                v.0[pc] = f.neg(r.get(row, fc));
            }
            v
        })
        .collect();
    echelon(m.field(), m.cols, &raw)
}

fn echelon(field: &Field, n: usize, vectors: &[Vector]) -> Vec<Vector> {
    if vectors.is_empty() {
        return Vec::new();
    }
    let (r, pivots) = Matrix::from_row_vectors(field, n, vectors).rref();
    (0..pivots.len()).map(|i| r.row(i)).collect()
}

/// Echelonized basis of the span of `vectors` (all of length `n`).
pub fn span_basis(field: &Field, n: usize, vectors: &[Vector]) -> Result<Vec<Vector>> {
    if let Some(v) = vectors.iter().find(|v| v.len() != n) {
        return Err(Error::ShapeMismatch(format!(
            "vector of length {} in dimension {n}",
            v.len()
        )));
    }
    if let Some(v) = vectors.iter().flat_map(|v| &v.0).find(|c| c.0 >= field.q()) {
        return Err(Error::ElementOutOfRange {
            value: v.0 as u64,
            q: field.q(),
        });
    }
    Ok(echelon(field, n, vectors))
}

/// Whether `v` lies in the span of an echelonized basis.
pub fn in_span(field: &Field, basis: &[Vector], v: &Vector) -> bool {
    let mut all = basis.to_vec();
    all.push(v.clone());
    echelon(field, v.len(), &all).len() == basis.len()
}

/// All `q^d` elements of the subspace spanned by `basis`.
pub fn enumerate_span(field: &FieldCtx, n: usize, basis: &[Vector]) -> Vec<Vector> {
    let q = field.q();
    let count = (q as u64).pow(basis.len() as u32);
    (0..count)
        .map(|idx| {
            let coeffs = Vector::from_index(idx, q, basis.len());
            basis
                .iter()
                .zip(&coeffs.0)
                .fold(Vector::zeros(n), |acc, (b, &c)| {
                    if c.is_zero() {
                        acc
                    } else {
                        acc.add(field, &b.scale(field, c))
                    }
                })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_matrix(field: &Field, n: usize, rng: &mut ChaCha8Rng) -> Matrix {
        let rows: Vec<Vec<u32>> = (0..n)
            .map(|_| (0..n).map(|_| rng.gen_range(0..field.q())).collect())
            .collect();
        Matrix::from_rows(field, &rows).unwrap()
    }

    #[test]
    fn hyperbolic_det_and_direct_sum() {
        let f = FieldCtx::new(3, 1).unwrap();
        let h = Matrix::from_ints(&f, &[&[0, 1], &[1, 0]]);
        assert_eq!(h.det().unwrap(), Felt(2));
        let hh = h.direct_sum(&h).unwrap();
        let expected = Matrix::from_ints(
            &f,
            &[&[0, 1, 0, 0], &[1, 0, 0, 0], &[0, 0, 0, 1], &[0, 0, 1, 0]],
        );
        assert_eq!(hh, expected);
        assert_eq!(Matrix::identity(&f, 5).rank(), 5);
    }

    #[test]
    fn kernel_examples() {
        let f3 = FieldCtx::new(3, 1).unwrap();
        assert!(kernel_basis(&Matrix::identity(&f3, 3)).is_empty());
        assert_eq!(kernel_basis(&Matrix::zeros(&f3, 2, 2)).len(), 2);
        let f2 = FieldCtx::new(2, 1).unwrap();
        let k = kernel_basis(&Matrix::from_ints(&f2, &[&[1, 1], &[1, 1]]));
        assert_eq!(k, vec![Vector::from_values(&[1, 1])]);
    }

    #[test]
    fn span_examples() {
        let f = FieldCtx::new(3, 1).unwrap();
        let e1 = Vector::unit(2, 0);
        let e12 = Vector::from_values(&[1, 1]);
        assert_eq!(span_basis(&f, 2, &[e1, e12]).unwrap().len(), 2);
        assert!(span_basis(&f, 3, &[]).unwrap().is_empty());
        let b = span_basis(
            &f,
            3,
            &[
                Vector::from_values(&[1, 1, 0]),
                Vector::from_values(&[2, 2, 0]),
            ],
        )
        .unwrap();
        assert_eq!(b, vec![Vector::from_values(&[1, 1, 0])]);
        assert!(matches!(
            span_basis(&f, 3, &[Vector::from_values(&[1, 1])]),
            Err(Error::ShapeMismatch(_))
        ));
    }

    #[test]
    fn mixed_fields_and_shapes() {
        let f3 = FieldCtx::new(3, 1).unwrap();
        let f5 = FieldCtx::new(5, 1).unwrap();
        let a = Matrix::identity(&f3, 2);
        let b = Matrix::identity(&f5, 2);
        assert_eq!(a.mul(&b), Err(Error::MixedFields));
        assert_eq!(a.direct_sum(&b), Err(Error::MixedFields));
        let c = Matrix::identity(&f3, 3);
        assert!(matches!(a.mul(&c), Err(Error::ShapeMismatch(_))));
        assert!(matches!(
            a.mat_vec(&Vector::zeros(3)),
            Err(Error::ShapeMismatch(_))
        ));
    }

    #[test]
    fn rank_nullity_and_det_rank_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for q in [2u64, 3, 4, 5, 7, 9] {
            let f = FieldCtx::from_order(q).unwrap();
            for _ in 0..1000 {
                let n = rng.gen_range(1..=5);
                let m = random_matrix(&f, n, &mut rng);
                let rank = m.rank();
                let ker = kernel_basis(&m);
                assert_eq!(rank + ker.len(), n);
                assert_eq!(!m.det().unwrap().is_zero(), rank == n);
                for v in &ker {
                    assert!(m.mat_vec(v).unwrap().is_zero());
                }
                if rank == n {
                    let inv = m.inverse().unwrap();
                    assert_eq!(m.mul(&inv).unwrap(), Matrix::identity(&f, n));
                } else {
                    assert_eq!(m.inverse(), Err(Error::Degenerate));
                }
            }
        }
    }

    #[test]
    fn span_is_idempotent() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let f = FieldCtx::new(5, 1).unwrap();
        for _ in 0..200 {
            let vs: Vec<Vector> = (0..rng.gen_range(0..5))
                .map(|_| Vector((0..4).map(|_| Felt(rng.gen_range(0..5))).collect()))
                .collect();
            let b = span_basis(&f, 4, &vs).unwrap();
            assert_eq!(span_basis(&f, 4, &b).unwrap(), b);
            for v in &vs {
                assert!(in_span(&f, &b, v));
            }
        }
    }

    #[test]
    fn vector_index_roundtrip() {
        for idx in 0..125 {
            let v = Vector::from_index(idx, 5, 3);
            assert_eq!(v.index(5), idx);
        }
        assert_eq!(Vector::from_index(1, 3, 3), Vector::from_values(&[0, 0, 1]));
        assert_eq!(nonzero_vectors(3, 2).count(), 8);
    }
}
