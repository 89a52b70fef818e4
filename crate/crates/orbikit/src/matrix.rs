//! Sparse row-major matrices over an exact scalar.

use std::fmt;

use crate::scalar::Scalar;

/// A sparse matrix stored as sorted `(column, value)` lists per row, with no explicit zeros.
#[derive(Clone, PartialEq)]
pub struct Matrix<S> {
    rows: usize,
    cols: usize,
    data: Vec<Vec<(usize, S)>>,
}

/// A sparse vector: sorted `(index, value)` pairs without zeros.
pub type SparseVec<S> = Vec<(usize, S)>;

impl<S: Scalar> Matrix<S> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![Vec::new(); rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        Matrix {
            rows: n,
            cols: n,
            data: (0..n).map(|i| vec![(i, S::one())]).collect(),
        }
    }

    /// Builds from dense rows; every row must have `cols` entries.
    pub fn from_dense(rows: usize, cols: usize, dense: &[Vec<S>]) -> Self {
        assert_eq!(dense.len(), rows);
        let data = dense
            .iter()
            .map(|r| {
                assert_eq!(r.len(), cols);
                r.iter()
                    .enumerate()
                    .filter(|(_, v)| !v.is_zero())
                    .map(|(j, v)| (j, v.clone()))
                    .collect()
            })
            .collect();
        Matrix { rows, cols, data }
    }

    pub fn from_i64(rows: usize, cols: usize, dense: &[&[i64]]) -> Self {
        let d: Vec<Vec<S>> = dense
            .iter()
            .map(|r| r.iter().map(|&v| S::from_i64(v)).collect())
            .collect();
        Self::from_dense(rows, cols, &d)
    }

    /// Builds from unsorted triplets; duplicate positions are summed.
    pub fn from_triplets(rows: usize, cols: usize, triplets: impl IntoIterator<Item = (usize, usize, S)>) -> Self {
        let mut data: Vec<Vec<(usize, S)>> = vec![Vec::new(); rows];
        for (i, j, v) in triplets {
            assert!(i < rows && j < cols, "triplet out of range");
            data[i].push((j, v));
        }
        for row in &mut data {
            *row = normalize(std::mem::take(row));
        }
        Matrix { rows, cols, data }
    }

    /// Builds from sparse rows; each row must already be sorted and zero-free.
    pub fn from_rows(cols: usize, rows: Vec<SparseVec<S>>) -> Self {
        debug_assert!(rows.iter().all(|r| r.windows(2).all(|w| w[0].0 < w[1].0)));
        debug_assert!(rows.iter().flatten().all(|(j, v)| *j < cols && !v.is_zero()));
        Matrix {
            rows: rows.len(),
            cols,
            data: rows,
        }
    }

    /// Builds from sparse columns.
    pub fn from_columns(rows: usize, columns: &[SparseVec<S>]) -> Self {
        let mut data: Vec<Vec<(usize, S)>> = vec![Vec::new(); rows];
        for (j, col) in columns.iter().enumerate() {
            for (i, v) in col {
                data[*i].push((j, v.clone()));
            }
        }
        Matrix {
            rows,
            cols: columns.len(),
            data,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn row(&self, i: usize) -> &[(usize, S)] {
        &self.data[i]
    }

    pub fn row_vecs(&self) -> &[SparseVec<S>] {
        &self.data
    }

    pub fn into_row_vecs(self) -> Vec<SparseVec<S>> {
        self.data
    }

    pub fn get(&self, i: usize, j: usize) -> S {
        match self.data[i].binary_search_by_key(&j, |e| e.0) {
            Ok(k) => self.data[i][k].1.clone(),
            Err(_) => S::zero(),
        }
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(Vec::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Vec::is_empty)
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && self
                .data
                .iter()
                .enumerate()
                .all(|(i, r)| r.len() == 1 && r[0].0 == i && r[0].1.is_one())
    }

    /// Iterates over nonzero entries as `(row, col, value)`.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &S)> {
        self.data
            .iter()
            .enumerate()
            .flat_map(|(i, r)| r.iter().map(move |(j, v)| (i, *j, v)))
    }

    pub fn to_dense(&self) -> Vec<Vec<S>> {
        let mut out = vec![vec![S::zero(); self.cols]; self.rows];
        for (i, j, v) in self.entries() {
            out[i][j] = v.clone();
        }
        out
    }

    pub fn transpose(&self) -> Self {
        let mut data: Vec<Vec<(usize, S)>> = vec![Vec::new(); self.cols];
        for (i, j, v) in self.entries() {
            data[j].push((i, v.clone()));
        }
        Matrix {
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }

    /// Column `j` as a sparse vector.
    pub fn column(&self, j: usize) -> SparseVec<S> {
        self.data
            .iter()
            .enumerate()
            .filter_map(|(i, r)| {
                r.binary_search_by_key(&j, |e| e.0)
                    .ok()
                    .map(|k| (i, r[k].1.clone()))
            })
            .collect()
    }

    pub fn columns(&self) -> Vec<SparseVec<S>> {
        self.transpose().data
    }

    pub fn mul(&self, other: &Matrix<S>) -> Matrix<S> {
        assert_eq!(self.cols, other.rows, "matrix product shape mismatch");
        let mut acc: Vec<Option<S>> = vec![None; other.cols];
        let mut touched: Vec<usize> = Vec::new();
        let data = self
            .data
            .iter()
            .map(|row| {
                for (k, a) in row {
                    for (j, b) in &other.data[*k] {
                        let p = a.clone() * b.clone();
                        match &mut acc[*j] {
                            Some(s) => *s += p,
                            slot @ None => {
                                *slot = Some(p);
                                touched.push(*j);
                            }
                        }
                    }
                }
                touched.sort_unstable();
                let out: Vec<(usize, S)> = touched
                    .drain(..)
                    .filter_map(|j| acc[j].take().filter(|v| !v.is_zero()).map(|v| (j, v)))
                    .collect();
                out
            })
            .collect();
        Matrix {
            rows: self.rows,
            cols: other.cols,
            data,
        }
    }

    /// Matrix times a sparse column vector.
    pub fn mul_vec(&self, v: &SparseVec<S>) -> SparseVec<S> {
        let mut dense: Vec<S> = vec![S::zero(); self.cols];
        for (j, x) in v {
            dense[*j] = x.clone();
        }
        self.data
            .iter()
            .enumerate()
            .filter_map(|(i, r)| {
                let mut s = S::zero();
                for (j, a) in r {
                    if !dense[*j].is_zero() {
                        s += a.clone() * dense[*j].clone();
                    }
                }
                (!s.is_zero()).then_some((i, s))
            })
            .collect()
    }

    pub fn add(&self, other: &Matrix<S>) -> Matrix<S> {
        assert_eq!(self.shape(), other.shape(), "matrix sum shape mismatch");
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| add_sparse(a, b))
            .collect();
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn sub(&self, other: &Matrix<S>) -> Matrix<S> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Matrix<S> {
        self.scale(&-S::one())
    }

    pub fn scale(&self, c: &S) -> Matrix<S> {
        if c.is_zero() {
            return Matrix::zeros(self.rows, self.cols);
        }
        let data = self
            .data
            .iter()
            .map(|r| {
                r.iter()
                    .filter_map(|(j, v)| {
                        let p = v.clone() * c.clone();
                        (!p.is_zero()).then_some((*j, p))
                    })
                    .collect()
            })
            .collect();
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    /// Places `self` to the left of `other`.
    pub fn hstack(&self, other: &Matrix<S>) -> Matrix<S> {
        assert_eq!(self.rows, other.rows, "hstack row mismatch");
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| {
                let mut r = a.clone();
                r.extend(b.iter().map(|(j, v)| (j + self.cols, v.clone())));
                r
            })
            .collect();
        Matrix {
            rows: self.rows,
            cols: self.cols + other.cols,
            data,
        }
    }

    /// Places `self` above `other`.
    pub fn vstack(&self, other: &Matrix<S>) -> Matrix<S> {
        assert_eq!(self.cols, other.cols, "vstack column mismatch");
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Matrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn hstack_all(rows: usize, parts: &[Matrix<S>]) -> Matrix<S> {
        parts
            .iter()
            .fold(Matrix::zeros(rows, 0), |acc, m| acc.hstack(m))
    }

    pub fn vstack_all(cols: usize, parts: &[Matrix<S>]) -> Matrix<S> {
        parts
            .iter()
            .fold(Matrix::zeros(0, cols), |acc, m| acc.vstack(m))
    }

    /// Block diagonal sum.
    pub fn direct_sum(&self, other: &Matrix<S>) -> Matrix<S> {
        let mut data = self.data.clone();
        data.extend(
            other
                .data
                .iter()
                .map(|r| r.iter().map(|(j, v)| (j + self.cols, v.clone())).collect()),
        );
        Matrix {
            rows: self.rows + other.rows,
            cols: self.cols + other.cols,
            data,
        }
    }

    pub fn block_diag(parts: &[Matrix<S>]) -> Matrix<S> {
        parts
            .iter()
            .fold(Matrix::zeros(0, 0), |acc, m| acc.direct_sum(m))
    }

    /// Assembles a block matrix; `blocks[i][j]` must have `row_dims[i] x col_dims[j]` shape.
    pub fn from_blocks(row_dims: &[usize], col_dims: &[usize], blocks: &[Vec<Option<Matrix<S>>>]) -> Matrix<S> {
        let rows: usize = row_dims.iter().sum();
        let cols: usize = col_dims.iter().sum();
        let mut data: Vec<Vec<(usize, S)>> = vec![Vec::new(); rows];
        let mut r0 = 0;
        for (bi, brow) in blocks.iter().enumerate() {
            let mut c0 = 0;
            for (bj, b) in brow.iter().enumerate() {
                if let Some(b) = b {
                    assert_eq!(b.shape(), (row_dims[bi], col_dims[bj]), "block shape mismatch");
                    for (i, r) in b.data.iter().enumerate() {
                        data[r0 + i].extend(r.iter().map(|(j, v)| (j + c0, v.clone())));
                    }
                }
                c0 += col_dims[bj];
            }
            r0 += row_dims[bi];
        }
        Matrix { rows, cols, data }
    }

    /// Kronecker product.
    pub fn kron(&self, other: &Matrix<S>) -> Matrix<S> {
        let rows = self.rows * other.rows;
        let cols = self.cols * other.cols;
        let mut data = Vec::with_capacity(rows);
        for ra in &self.data {
            for rb in &other.data {
                let mut r = Vec::with_capacity(ra.len() * rb.len());
                for (ja, a) in ra {
                    for (jb, b) in rb {
                        let p = a.clone() * b.clone();
                        if !p.is_zero() {
                            r.push((ja * other.cols + jb, p));
                        }
                    }
                }
                data.push(r);
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn select_rows(&self, idx: &[usize]) -> Matrix<S> {
        Matrix {
            rows: idx.len(),
            cols: self.cols,
            data: idx.iter().map(|&i| self.data[i].clone()).collect(),
        }
    }

    pub fn select_cols(&self, idx: &[usize]) -> Matrix<S> {
        let mut map = vec![usize::MAX; self.cols];
        for (new, &old) in idx.iter().enumerate() {
            map[old] = new;
        }
        let data = self
            .data
            .iter()
            .map(|r| {
                let mut out: Vec<(usize, S)> = r
                    .iter()
                    .filter(|(j, _)| map[*j] != usize::MAX)
                    .map(|(j, v)| (map[*j], v.clone()))
                    .collect();
                out.sort_by_key(|e| e.0);
                out
            })
            .collect();
        Matrix {
            rows: self.rows,
            cols: idx.len(),
            data,
        }
    }

    /// Contiguous sub-block `[r0, r0+nr) x [c0, c0+nc)`.
    pub fn block(&self, r0: usize, nr: usize, c0: usize, nc: usize) -> Matrix<S> {
        let data = self.data[r0..r0 + nr]
            .iter()
            .map(|r| {
                r.iter()
                    .filter(|(j, _)| *j >= c0 && *j < c0 + nc)
                    .map(|(j, v)| (j - c0, v.clone()))
                    .collect()
            })
            .collect();
        Matrix {
            rows: nr,
            cols: nc,
            data,
        }
    }

    /// Maps entries into another scalar type.
    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Matrix<T> {
        let data = self
            .data
            .iter()
            .map(|r| {
                r.iter()
                    .filter_map(|(j, v)| {
                        let w = f(v);
                        (!w.is_zero()).then_some((*j, w))
                    })
                    .collect()
            })
            .collect();
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    /// A permutation-style matrix: column `j` has a single entry `signs[j]` in row `targets[j]`.
    pub fn monomial(rows: usize, targets: &[usize], signs: &[S]) -> Matrix<S> {
        let triplets = targets
            .iter()
            .zip(signs)
            .enumerate()
            .map(|(j, (&i, s))| (i, j, s.clone()));
        Matrix::from_triplets(rows, targets.len(), triplets)
    }
}

impl<S: Scalar> fmt::Debug for Matrix<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        if self.rows * self.cols <= 400 {
            for r in self.to_dense() {
                let s: Vec<String> = r.iter().map(|v| v.to_string()).collect();
                writeln!(f, "  {}", s.join(" "))?;
            }
        } else {
            writeln!(f, "  ({} nonzeros)", self.nnz())?;
        }
        write!(f, "]")
    }
}

/// Sorts by index, sums duplicates and drops zeros.
pub fn normalize<S: Scalar>(mut v: Vec<(usize, S)>) -> SparseVec<S> {
    v.sort_by_key(|e| e.0);
    let mut out: Vec<(usize, S)> = Vec::with_capacity(v.len());
    for (j, x) in v {
        match out.last_mut() {
            Some((k, y)) if *k == j => *y += x,
            _ => out.push((j, x)),
        }
    }
    out.retain(|(_, x)| !x.is_zero());
    out
}

pub fn add_sparse<S: Scalar>(a: &[(usize, S)], b: &[(usize, S)]) -> SparseVec<S> {
    axpy_sparse(a, &S::one(), b)
}

/// Returns `a + c * b`.
pub fn axpy_sparse<S: Scalar>(a: &[(usize, S)], c: &S, b: &[(usize, S)]) -> SparseVec<S> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut k) = (0, 0);
    while i < a.len() || k < b.len() {
        if k == b.len() || (i < a.len() && a[i].0 < b[k].0) {
            out.push(a[i].clone());
            i += 1;
        } else if i == a.len() || b[k].0 < a[i].0 {
            let v = c.clone() * b[k].1.clone();
            if !v.is_zero() {
                out.push((b[k].0, v));
            }
            k += 1;
        } else {
            let v = a[i].1.clone() + c.clone() * b[k].1.clone();
            if !v.is_zero() {
                out.push((a[i].0, v));
            }
            i += 1;
            k += 1;
        }
    }
    out
}

pub fn scale_sparse<S: Scalar>(a: &[(usize, S)], c: &S) -> SparseVec<S> {
    a.iter()
        .filter_map(|(j, v)| {
            let w = v.clone() * c.clone();
            (!w.is_zero()).then_some((*j, w))
        })
        .collect()
}
