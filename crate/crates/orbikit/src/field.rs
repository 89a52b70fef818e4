//! Sparse Gaussian elimination over a field.

use crate::matrix::{axpy_sparse, scale_sparse, Matrix, SparseVec};
use crate::scalar::Field;

/// A semi-echelon basis: each stored vector has leading entry 1 at a distinct pivot column.
///
/// With tracking enabled every stored vector remembers its expression in the inserted vectors.
#[derive(Clone, Debug)]
pub struct Echelon<F> {
    dim: usize,
    rows: Vec<SparseVec<F>>,
    tags: Option<Vec<SparseVec<F>>>,
    pivot_row: Vec<Option<usize>>,
    inserted: usize,
}

impl<F: Field> Echelon<F> {
    pub fn new(dim: usize) -> Self {
        Echelon {
            dim,
            rows: Vec::new(),
            tags: None,
            pivot_row: vec![None; dim],
            inserted: 0,
        }
    }

    pub fn tracking(dim: usize) -> Self {
        Echelon {
            tags: Some(Vec::new()),
            ..Self::new(dim)
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn basis(&self) -> &[SparseVec<F>] {
        &self.rows
    }

    pub fn pivots(&self) -> Vec<usize> {
        self.rows.iter().map(|r| r[0].0).collect()
    }

    pub fn is_pivot(&self, col: usize) -> bool {
        self.pivot_row[col].is_some()
    }

    /// Reduces `v` modulo the span; also returns the combination of stored rows removed.
    fn reduce_with(&self, mut v: SparseVec<F>, want_coeffs: bool) -> (SparseVec<F>, Vec<(usize, F)>) {
        let mut coeffs = Vec::new();
        let mut pos = 0;
        while pos < v.len() {
            let (c, x) = (v[pos].0, v[pos].1.clone());
            match self.pivot_row[c] {
                Some(r) => {
                    v = axpy_sparse(&v, &-x.clone(), &self.rows[r]);
                    if want_coeffs {
                        coeffs.push((r, x));
                    }
                }
                None => pos += 1,
            }
        }
        (v, coeffs)
    }

    /// The canonical representative of `v` modulo the span (zero at all pivots).
    pub fn reduce(&self, v: SparseVec<F>) -> SparseVec<F> {
        self.reduce_with(v, false).0
    }

    pub fn contains(&self, v: &SparseVec<F>) -> bool {
        self.reduce(v.clone()).is_empty()
    }

    /// Inserts `v`; returns `true` if it enlarged the span.
    pub fn insert(&mut self, v: SparseVec<F>) -> bool {
        let idx = self.inserted;
        self.inserted += 1;
        let want = self.tags.is_some();
        let (r, coeffs) = self.reduce_with(v, want);
        if r.is_empty() {
            return false;
        }
        let lead = r[0].1.inv();
        let row = scale_sparse(&r, &lead);
        if let Some(tags) = &mut self.tags {
            let mut tag: SparseVec<F> = vec![(idx, F::one())];
            for (k, c) in coeffs {
                tag = axpy_sparse(&tag, &-c, &tags[k]);
            }
            tags.push(scale_sparse(&tag, &lead));
        }
        self.pivot_row[row[0].0] = Some(self.rows.len());
        self.rows.push(row);
        true
    }

    /// Expresses `v` in the inserted vectors (requires tracking), if `v` lies in the span.
    pub fn express(&self, v: SparseVec<F>) -> Option<SparseVec<F>> {
        let tags = self.tags.as_ref().expect("echelon built without tracking");
        let (r, coeffs) = self.reduce_with(v, true);
        if !r.is_empty() {
            return None;
        }
        let mut out: SparseVec<F> = Vec::new();
        for (k, c) in coeffs {
            out = axpy_sparse(&out, &c, &tags[k]);
        }
        Some(out)
    }

    /// Rewrites the stored rows so each pivot column is zero outside its own row.
    pub fn fully_reduce(&mut self) {
        let mut order: Vec<usize> = (0..self.rows.len()).collect();
        order.sort_by_key(|&r| std::cmp::Reverse(self.rows[r][0].0));
        for &r in &order {
            let row = std::mem::take(&mut self.rows[r]);
            let lead = row[0].clone();
            let rest = row[1..].to_vec();
            let mut v = rest;
            let mut tag_adj: Vec<(usize, F)> = Vec::new();
            let mut pos = 0;
            while pos < v.len() {
                let (c, x) = (v[pos].0, v[pos].1.clone());
                match self.pivot_row[c] {
                    Some(k) if k != r => {
                        v = axpy_sparse(&v, &-x.clone(), &self.rows[k]);
                        tag_adj.push((k, x));
                    }
                    _ => pos += 1,
                }
            }
            let mut full = vec![lead];
            full.extend(v);
            self.rows[r] = full;
            if let Some(tags) = &mut self.tags {
                let mut t = tags[r].clone();
                for (k, x) in tag_adj {
                    t = axpy_sparse(&t, &-x, &tags[k]);
                }
                tags[r] = t;
            }
        }
    }

    /// Coordinates of `v` in the quotient by the span, indexed by the non-pivot columns.
    pub fn quotient_coords(&self, v: SparseVec<F>) -> SparseVec<F> {
        let map = self.non_pivot_index();
        self.reduce(v)
            .into_iter()
            .map(|(j, x)| (map[j], x))
            .collect()
    }

    /// Maps each non-pivot column to its position among the non-pivot columns.
    pub fn non_pivot_index(&self) -> Vec<usize> {
        let mut k = 0;
        (0..self.dim)
            .map(|j| {
                if self.pivot_row[j].is_some() {
                    usize::MAX
                } else {
                    k += 1;
                    k - 1
                }
            })
            .collect()
    }

    pub fn non_pivots(&self) -> Vec<usize> {
        (0..self.dim).filter(|&j| self.pivot_row[j].is_none()).collect()
    }
}

pub fn rank<F: Field>(m: &Matrix<F>) -> usize {
    let a = if m.rows() > m.cols() { m.transpose() } else { m.clone() };
    let mut e = Echelon::new(a.cols());
    for r in a.into_row_vecs() {
        e.insert(r);
    }
    e.rank()
}

/// Kernel basis as the columns of the returned matrix.
pub fn kernel<F: Field>(m: &Matrix<F>) -> Matrix<F> {
    let mut e = Echelon::new(m.cols());
    for r in m.row_vecs() {
        e.insert(r.clone());
    }
    e.fully_reduce();
    let free = e.non_pivots();
    let mut cols: Vec<SparseVec<F>> = free.iter().map(|&f| vec![(f, F::one())]).collect();
    let fidx = e.non_pivot_index();
    for row in e.basis() {
        let p = row[0].0;
        for (j, a) in &row[1..] {
            cols[fidx[*j]].push((p, -a.clone()));
        }
    }
    for c in &mut cols {
        c.sort_by_key(|e| e.0);
    }
    Matrix::from_columns(m.cols(), &cols)
}

/// Column space basis, as columns.
pub fn image<F: Field>(m: &Matrix<F>) -> Matrix<F> {
    let mut e = Echelon::new(m.rows());
    for c in m.columns() {
        e.insert(c);
    }
    Matrix::from_columns(m.rows(), e.basis())
}

/// Indices of a maximal independent set of columns, chosen greedily left to right.
pub fn independent_columns<F: Field>(m: &Matrix<F>) -> Vec<usize> {
    let mut e = Echelon::new(m.rows());
    m.columns()
        .into_iter()
        .enumerate()
        .filter_map(|(j, c)| e.insert(c).then_some(j))
        .collect()
}

/// Some solution of `a x = b`, if the system is consistent.
pub fn solve<F: Field>(a: &Matrix<F>, b: &Matrix<F>) -> Option<Matrix<F>> {
    assert_eq!(a.rows(), b.rows(), "solve shape mismatch");
    let mut e = Echelon::tracking(a.rows());
    for c in a.columns() {
        e.insert(c);
    }
    let cols: Option<Vec<SparseVec<F>>> = b.columns().into_iter().map(|c| e.express(c)).collect();
    Some(Matrix::from_columns(a.cols(), &cols?))
}

pub fn inverse<F: Field>(m: &Matrix<F>) -> Option<Matrix<F>> {
    if m.rows() != m.cols() || rank(m) != m.rows() {
        return None;
    }
    solve(m, &Matrix::identity(m.rows()))
}
