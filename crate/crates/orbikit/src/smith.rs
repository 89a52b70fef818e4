//! Smith normal form over the integers.

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::LinalgError;
use crate::matrix::Matrix;

/// Largest dense block accepted by the Smith normal form after sparse unit elimination.
pub const MAX_DENSE_SNF: usize = 2000;

/// `p * a * q = diag(invariants)` with `p`, `q` unimodular.
#[derive(Clone, Debug)]
pub struct SmithNormalForm {
    pub invariants: Vec<BigInt>,
    pub p: Vec<Vec<BigInt>>,
    pub q: Vec<Vec<BigInt>>,
    pub rank: usize,
}

type Dense = Vec<Vec<BigInt>>;

fn identity(n: usize) -> Dense {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect()
}

fn to_dense(m: &Matrix<i64>) -> Dense {
    m.to_dense()
        .into_iter()
        .map(|r| r.into_iter().map(BigInt::from).collect())
        .collect()
}

/// Row op: `row_i += c * row_j`.
fn add_row(a: &mut Dense, i: usize, j: usize, c: &BigInt) {
    if c.is_zero() {
        return;
    }
    let src = a[j].clone();
    for (x, y) in a[i].iter_mut().zip(src) {
        if !y.is_zero() {
            *x += c * y;
        }
    }
}

/// Column op: `col_i += c * col_j`.
fn add_col(a: &mut Dense, i: usize, j: usize, c: &BigInt) {
    if c.is_zero() {
        return;
    }
    for r in a.iter_mut() {
        if !r[j].is_zero() {
            let v = c * &r[j];
            r[i] += v;
        }
    }
}

fn swap_cols(a: &mut Dense, i: usize, j: usize) {
    for r in a.iter_mut() {
        r.swap(i, j);
    }
}

/// Dense Smith normal form with optional transforms.
fn dense_snf(mut a: Dense, rows: usize, cols: usize, transforms: bool) -> SmithNormalForm {
    let mut p = if transforms { identity(rows) } else { Vec::new() };
    let mut q = if transforms { identity(cols) } else { Vec::new() };
    let mut t = 0;
    while t < rows.min(cols) {
        // smallest nonzero entry in the trailing block
        let mut best: Option<(usize, usize)> = None;
        for (i, row) in a.iter().enumerate().skip(t) {
            for (j, v) in row.iter().enumerate().skip(t) {
                if !v.is_zero() && best.map_or(true, |(bi, bj)| v.abs() < a[bi][bj].abs()) {
                    best = Some((i, j));
                    if v.abs().is_one() {
                        break;
                    }
                }
            }
        }
        let Some((bi, bj)) = best else { break };
        a.swap(t, bi);
        if transforms {
            p.swap(t, bi);
        }
        swap_cols(&mut a, t, bj);
        if transforms {
            swap_cols(&mut q, t, bj);
        }
        loop {
            let mut dirty = false;
            for i in t + 1..rows {
                if a[i][t].is_zero() {
                    continue;
                }
                let (quo, rem) = a[i][t].div_mod_floor(&a[t][t]);
                add_row(&mut a, i, t, &-&quo);
                if transforms {
                    add_row(&mut p, i, t, &-&quo);
                }
                if !rem.is_zero() {
                    a.swap(t, i);
                    if transforms {
                        p.swap(t, i);
                    }
                    dirty = true;
                }
            }
            for j in t + 1..cols {
                if a[t][j].is_zero() {
                    continue;
                }
                let (quo, rem) = a[t][j].div_mod_floor(&a[t][t]);
                add_col(&mut a, j, t, &-&quo);
                if transforms {
                    add_col(&mut q, j, t, &-&quo);
                }
                if !rem.is_zero() {
                    swap_cols(&mut a, t, j);
                    if transforms {
                        swap_cols(&mut q, t, j);
                    }
                    dirty = true;
                }
            }
            if dirty {
                continue;
            }
            // divisibility of the trailing block
            let pivot = a[t][t].clone();
            let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !(&a[i][j] % &pivot).is_zero()));
            match bad {
                Some(i) => {
                    add_row(&mut a, t, i, &BigInt::one());
                    if transforms {
                        add_row(&mut p, t, i, &BigInt::one());
                    }
                }
                None => break,
            }
        }
        if a[t][t].is_negative() {
            for v in a[t].iter_mut() {
                *v = -v.clone();
            }
            if transforms {
                for v in p[t].iter_mut() {
                    *v = -v.clone();
                }
            }
        }
        t += 1;
    }
    let invariants: Vec<BigInt> = (0..t).map(|i| a[i][i].clone()).collect();
    SmithNormalForm {
        rank: invariants.len(),
        invariants,
        p,
        q,
    }
}

/// Full Smith normal form with transforms; rejects inputs past the dense cap.
pub fn smith_normal_form(m: &Matrix<i64>) -> Result<SmithNormalForm, LinalgError> {
    if m.rows().max(m.cols()) > MAX_DENSE_SNF {
        return Err(LinalgError::TooLarge {
            rows: m.rows(),
            cols: m.cols(),
            cap: MAX_DENSE_SNF,
        });
    }
    Ok(dense_snf(to_dense(m), m.rows(), m.cols(), true))
}

type BigCol = Vec<(usize, BigInt)>;

fn axpy_big(a: &BigCol, c: &BigInt, b: &BigCol) -> BigCol {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut k) = (0, 0);
    while i < a.len() || k < b.len() {
        if k == b.len() || (i < a.len() && a[i].0 < b[k].0) {
            out.push(a[i].clone());
            i += 1;
        } else if i == a.len() || b[k].0 < a[i].0 {
            out.push((b[k].0, c * &b[k].1));
            k += 1;
        } else {
            let v = &a[i].1 + c * &b[k].1;
            if !v.is_zero() {
                out.push((a[i].0, v));
            }
            i += 1;
            k += 1;
        }
    }
    out
}

/// Nonzero invariant factors in ascending order.
///
/// Columns are first reduced against unit pivots, which is unimodular and leaves a
/// (usually tiny) residual block for the dense algorithm.
pub fn invariant_factors(m: &Matrix<i64>) -> Result<Vec<BigInt>, LinalgError> {
    let mut pivot_col: Vec<Option<usize>> = vec![None; m.rows()];
    let mut pivots: Vec<(usize, BigCol)> = Vec::new();
    let mut residual: Vec<BigCol> = Vec::new();
    for col in m.columns() {
        let mut v: BigCol = col.into_iter().map(|(i, x)| (i, BigInt::from(x))).collect();
        let mut pos = 0;
        while pos < v.len() {
            let r = v[pos].0;
            match pivot_col[r] {
                Some(k) => {
                    let (pr, pc) = &pivots[k];
                    let unit = pc.iter().find(|e| e.0 == *pr).expect("pivot entry").1.clone();
                    let c = -(&v[pos].1 * &unit);
                    v = axpy_big(&v, &c, pc);
                }
                None => pos += 1,
            }
        }
        if v.is_empty() {
            continue;
        }
        match v.iter().find(|(_, x)| x.abs().is_one()) {
            Some(&(r, _)) => {
                pivot_col[r] = Some(pivots.len());
                pivots.push((r, v));
            }
            None => residual.push(v),
        }
    }
    let mut out = vec![BigInt::one(); pivots.len()];
    if !residual.is_empty() {
        let keep: Vec<usize> = (0..m.rows()).filter(|&r| pivot_col[r].is_none()).collect();
        let mut index = vec![usize::MAX; m.rows()];
        for (k, &r) in keep.iter().enumerate() {
            index[r] = k;
        }
        let live: Vec<usize> = {
            let mut used = vec![false; keep.len()];
            for c in &residual {
                for (r, _) in c {
                    used[index[*r]] = true;
                }
            }
            (0..keep.len()).filter(|&k| used[k]).collect()
        };
        let rows = live.len();
        let cols = residual.len();
        if rows.max(cols) > MAX_DENSE_SNF {
            return Err(LinalgError::TooLarge {
                rows,
                cols,
                cap: MAX_DENSE_SNF,
            });
        }
        let mut compact = vec![usize::MAX; keep.len()];
        for (k, &l) in live.iter().enumerate() {
            compact[l] = k;
        }
        let mut dense: Dense = vec![vec![BigInt::zero(); cols]; rows];
        for (j, c) in residual.into_iter().enumerate() {
            for (r, x) in c {
                dense[compact[index[r]]][j] = x;
            }
        }
        out.extend(dense_snf(dense, rows, cols, false).invariants);
    }
    out.sort();
    Ok(out)
}

pub fn integer_rank(m: &Matrix<i64>) -> usize {
    invariant_factors(m).expect("integer rank within size cap").len()
}

fn big_to_i64(v: &BigInt) -> i64 {
    v.to_i64().expect("integer entry exceeds i64")
}

/// Lattice basis of the integer kernel, as columns.
pub fn integer_kernel(m: &Matrix<i64>) -> Matrix<i64> {
    let snf = smith_normal_form(m).expect("integer kernel within size cap");
    let cols: Vec<usize> = (snf.rank..m.cols()).collect();
    let dense: Vec<Vec<i64>> = snf
        .q
        .iter()
        .map(|r| cols.iter().map(|&j| big_to_i64(&r[j])).collect())
        .collect();
    Matrix::from_dense(m.cols(), cols.len(), &dense)
}

/// Integral solution of `a x = b`, if one exists.
pub fn integer_solve(a: &Matrix<i64>, b: &Matrix<i64>) -> Option<Matrix<i64>> {
    let snf = smith_normal_form(a).expect("integer solve within size cap");
    let bd = to_dense(b);
    let n = a.cols();
    let mut x = vec![vec![0i64; b.cols()]; n];
    for k in 0..b.cols() {
        // c = p * b_k
        let c: Vec<BigInt> = snf
            .p
            .iter()
            .map(|row| row.iter().zip(&bd).map(|(pv, br)| pv * &br[k]).sum())
            .collect();
        let mut y = vec![BigInt::zero(); n];
        for (i, ci) in c.iter().enumerate() {
            if i < snf.rank {
                let (quo, rem) = ci.div_rem(&snf.invariants[i]);
                if !rem.is_zero() {
                    return None;
                }
                y[i] = quo;
            } else if !ci.is_zero() {
                return None;
            }
        }
        for (i, row) in snf.q.iter().enumerate() {
            let v: BigInt = row.iter().zip(&y).map(|(qv, yv)| qv * yv).sum();
            x[i][k] = big_to_i64(&v);
        }
    }
    Some(Matrix::from_dense(n, b.cols(), &x))
}
