//! Independent oracles shared by the integration tests: dense elimination, a naive integer
//! Smith form, brute-force coset arithmetic and hom spaces solved from scratch.
#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use orbikit::complex::ChainComplex;
use orbikit::{Field, Matrix, ModuleHom, ObjectId, OrbitCat, Perm, PermGroup, RGammaModule, Subgroup};

pub fn perm(n: usize, cycles: &[&[usize]]) -> Perm {
    let c: Vec<Vec<usize>> = cycles.iter().map(|c| c.to_vec()).collect();
    Perm::from_cycles(n, &c).expect("valid cycles")
}

pub fn subgroup(g: &PermGroup, gens: &[&[&[usize]]]) -> Subgroup {
    let perms: Vec<Perm> = gens.iter().map(|c| perm(g.degree(), c)).collect();
    g.subgroup(&perms).expect("subgroup")
}

pub fn symmetric(n: usize) -> Arc<PermGroup> {
    Arc::new(PermGroup::symmetric(n))
}

/// Orbit category of `S_n` on its `p`-subgroups for the listed primes.
pub fn p_cat(n: usize, primes: &[usize]) -> Arc<OrbitCat> {
    let g = symmetric(n);
    Arc::new(OrbitCat::new(g.clone(), orbikit::Family::p_subgroups(&g, primes)))
}

/// Orbit category on every subgroup.
pub fn full_cat(g: Arc<PermGroup>) -> Arc<OrbitCat> {
    let fam = orbikit::Family::from_predicate(&g, |_| true);
    Arc::new(OrbitCat::new(g, fam))
}

// ---------------------------------------------------------------- linear algebra

/// Rank by dense Gaussian elimination.
pub fn dense_rank<F: Field>(m: &Matrix<F>) -> usize {
    let mut a = m.to_dense();
    let (rows, cols) = (m.rows(), m.cols());
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| a[i][c] != F::zero()) else { continue };
        a.swap(r, p);
        let inv = a[r][c].inv();
        for i in 0..rows {
            if i != r && a[i][c] != F::zero() {
                let f = a[i][c].clone() * inv.clone();
                for j in c..cols {
                    let v = a[r][j].clone() * f.clone();
                    a[i][j] = a[i][j].clone() - v;
                }
            }
        }
        r += 1;
        if r == rows {
            break;
        }
    }
    r
}

/// Dense kernel basis (as columns) by elimination.
pub fn dense_kernel<F: Field>(m: &Matrix<F>) -> Vec<Vec<F>> {
    let mut a = m.to_dense();
    let (rows, cols) = (m.rows(), m.cols());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| a[i][c] != F::zero()) else { continue };
        a.swap(r, p);
        let inv = a[r][c].inv();
        for j in 0..cols {
            a[r][j] = a[r][j].clone() * inv.clone();
        }
        for i in 0..rows {
            if i != r && a[i][c] != F::zero() {
                let f = a[i][c].clone();
                for j in 0..cols {
                    let v = a[r][j].clone() * f.clone();
                    a[i][j] = a[i][j].clone() - v;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    (0..cols)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = vec![F::zero(); cols];
            v[free] = F::one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -a[row][free].clone();
            }
            v
        })
        .collect()
}

/// Nonzero invariant factors of an integer matrix by naive Smith reduction.
pub fn invariant_factors(mut a: Vec<Vec<i128>>) -> Vec<i128> {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut out = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        let Some((pi, pj)) = (t..rows)
            .flat_map(|i| (t..cols).map(move |j| (i, j)))
            .filter(|&(i, j)| a[i][j] != 0)
            .min_by_key(|&(i, j)| a[i][j].abs())
        else {
            break;
        };
        a.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let mut clean = true;
            for i in t + 1..rows {
                let q = a[i][t] / a[t][t];
                if q != 0 {
                    for j in t..cols {
                        a[i][j] -= q * a[t][j];
                    }
                }
                if a[i][t] != 0 {
                    clean = false;
                }
            }
            for j in t + 1..cols {
                let q = a[t][j] / a[t][t];
                if q != 0 {
                    for row in a.iter_mut().skip(t) {
                        row[j] -= q * row[t];
                    }
                }
                if a[t][j] != 0 {
                    clean = false;
                }
            }
            if clean {
                // the pivot must divide the rest of the block
                let bad = (t + 1..rows).flat_map(|i| (t + 1..cols).map(move |j| (i, j))).find(|&(i, j)| a[i][j] % a[t][t] != 0);
                match bad {
                    None => break,
                    Some((i, _)) => {
                        for j in t..cols {
                            let v = a[i][j];
                            a[t][j] += v;
                        }
                        continue;
                    }
                }
            }
            // move the smallest remaining entry of row/column t into the pivot
            let best = (t..rows)
                .map(|i| (i, t))
                .chain((t..cols).map(|j| (t, j)))
                .filter(|&(i, j)| a[i][j] != 0)
                .min_by_key(|&(i, j)| a[i][j].abs())
                .expect("pivot is nonzero");
            if best.0 != t {
                a.swap(t, best.0);
            } else if best.1 != t {
                for row in a.iter_mut() {
                    row.swap(t, best.1);
                }
            }
        }
        out.push(a[t][t].abs());
        t += 1;
    }
    out
}

/// Betti numbers per object and degree, by dense ranks of the boundary matrices.
pub fn betti<F: Field>(c: &ChainComplex<F>) -> Vec<Vec<usize>> {
    let n = c.top_degree() + 1;
    c.cat()
        .object_ids()
        .map(|x| {
            let ranks: Vec<usize> = (0..=n).map(|i| dense_rank(&c.boundary_at(i, x))).collect();
            (0..n).map(|i| c.module(i).dim(x) - ranks[i] - ranks[i + 1]).collect()
        })
        .collect()
}

/// Betti numbers with trailing zeros removed, so complexes of different lengths compare.
pub fn trimmed(b: Vec<Vec<usize>>) -> Vec<Vec<usize>> {
    b.into_iter()
        .map(|mut v| {
            while v.last() == Some(&0) {
                v.pop();
            }
            v
        })
        .collect()
}

// ---------------------------------------------------------------- cosets

/// Left cosets `gK` as sorted element lists, with the coset of every element.
pub struct Cosets {
    pub sets: Vec<Vec<usize>>,
    pub of: Vec<usize>,
}

pub fn cosets(g: &PermGroup, k: &Subgroup) -> Cosets {
    let mut index: HashMap<Vec<usize>, usize> = HashMap::new();
    let mut sets = Vec::new();
    let mut of = vec![0; g.order()];
    for x in 0..g.order() {
        let mut s: Vec<usize> = k.elements().iter().map(|&y| g.mul(x, y)).collect();
        s.sort_unstable();
        let next = sets.len();
        let i = *index.entry(s.clone()).or_insert(next);
        if i == next {
            sets.push(s);
        }
        of[x] = i;
    }
    Cosets { sets, of }
}

/// Cosets fixed by every element of `h` acting on the left.
pub fn fixed_cosets(g: &PermGroup, h: &[usize], c: &Cosets) -> Vec<usize> {
    (0..c.sets.len())
        .filter(|&i| {
            let rep = c.sets[i][0];
            h.iter().all(|&e| c.of[g.mul(e, rep)] == i)
        })
        .collect()
}

/// `|(G/K)^H|`.
pub fn mark(g: &PermGroup, h: &Subgroup, k: &Subgroup) -> usize {
    fixed_cosets(g, h.elements(), &cosets(g, k)).len()
}

fn conj_set(g: &PermGroup, x: usize, s: &[usize]) -> BTreeSet<usize> {
    s.iter().map(|&e| g.mul(g.mul(x, e), g.inv(x))).collect()
}

/// `N_G(H)` by testing every element.
pub fn normalizer(g: &PermGroup, h: &[usize]) -> Vec<usize> {
    let hs: BTreeSet<usize> = h.iter().copied().collect();
    (0..g.order()).filter(|&x| conj_set(g, x, h) == hs).collect()
}

pub fn conjugate(g: &PermGroup, a: &[usize], b: &[usize]) -> bool {
    let bs: BTreeSet<usize> = b.iter().copied().collect();
    a.len() == b.len() && (0..g.order()).any(|x| conj_set(g, x, a) == bs)
}

/// The object of `cat` whose subgroup is conjugate to `s`.
pub fn object_of(cat: &OrbitCat, s: &[usize]) -> Option<ObjectId> {
    cat.object_ids().find(|&x| conjugate(cat.group(), s, cat.subgroup(x).elements()))
}

/// `marks[y][x] = |(G/H_x)^{H_y}|`.
pub fn mark_table(cat: &OrbitCat) -> Vec<Vec<usize>> {
    let g = cat.group();
    let cs: Vec<Cosets> = cat.object_ids().map(|x| cosets(g, cat.subgroup(x))).collect();
    cat.object_ids()
        .map(|y| cs.iter().map(|c| fixed_cosets(g, cat.subgroup(y).elements(), c).len()).collect())
        .collect()
}

/// Coefficients `c_x` with `dims = Σ c_x · marks[-][x]`, if integral.
pub fn free_class(marks: &[Vec<usize>], dims: &[usize]) -> Option<Vec<i64>> {
    let n = dims.len();
    let mut c = vec![0i64; n];
    // objects are sorted by order, and marks[y][x] = 0 unless H_y is subconjugate to H_x
    for y in (0..n).rev() {
        let rest: i64 = (y + 1..n).map(|x| c[x] * marks[y][x] as i64).sum();
        let left = dims[y] as i64 - rest;
        let m = marks[y][y] as i64;
        if left % m != 0 {
            return None;
        }
        c[y] = left / m;
    }
    Some(c)
}

/// `[G/H_x] · [G/H_y]` in the Burnside ring, from the orbits on `G/H_x × G/H_y`.
pub fn burnside_product(cat: &OrbitCat, x: ObjectId, y: ObjectId) -> Vec<i64> {
    let g = cat.group();
    let cx = cosets(g, cat.subgroup(x));
    let cy = cosets(g, cat.subgroup(y));
    let mut seen = vec![vec![false; cy.sets.len()]; cx.sets.len()];
    let mut out = vec![0i64; cat.num_objects()];
    for a in 0..cx.sets.len() {
        for b in 0..cy.sets.len() {
            if seen[a][b] {
                continue;
            }
            for e in 0..g.order() {
                seen[cx.of[g.mul(e, cx.sets[a][0])]][cy.of[g.mul(e, cy.sets[b][0])]] = true;
            }
            let stab: Vec<usize> = (0..g.order())
                .filter(|&e| cx.of[g.mul(e, cx.sets[a][0])] == a && cy.of[g.mul(e, cy.sets[b][0])] == b)
                .collect();
            let o = object_of(cat, &stab).expect("family is closed under intersection");
            out[o.0] += 1;
        }
    }
    out
}

// ---------------------------------------------------------------- modules

/// `dim Hom(M, N)` from the naturality equations over every morphism.
pub fn hom_dim<F: Field>(m: &RGammaModule<F>, n: &RGammaModule<F>) -> usize {
    let cat = m.cat();
    let mut offset = Vec::new();
    let mut unknowns = 0;
    for x in cat.object_ids() {
        offset.push(unknowns);
        unknowns += n.dim(x) * m.dim(x);
    }
    // φ_x is n.dim(x) × m.dim(x), entry (r, c) at offset[x] + r * m.dim(x) + c
    let mut trip = Vec::new();
    let mut row = 0;
    for f in cat.morphism_ids() {
        let mf = cat.morphism(f);
        let (y, x) = (mf.src, mf.tgt);
        let (am, an) = (m.action(f).to_dense(), n.action(f).to_dense());
        // φ_y · M(f) - N(f) · φ_x = 0, an n.dim(y) × m.dim(x) system
        for r in 0..n.dim(y) {
            for c in 0..m.dim(x) {
                for k in 0..m.dim(y) {
                    if am[k][c] != F::zero() {
                        trip.push((row, offset[y.0] + r * m.dim(y) + k, am[k][c].clone()));
                    }
                }
                for k in 0..n.dim(x) {
                    if an[r][k] != F::zero() {
                        trip.push((row, offset[x.0] + k * m.dim(x) + c, -an[r][k].clone()));
                    }
                }
                row += 1;
            }
        }
    }
    let sys = Matrix::from_triplets(row, unknowns, trip);
    unknowns - dense_rank(&sys)
}

/// Natural with invertible components.
pub fn is_iso_witness<F: Field>(phi: &ModuleHom<F>, m: &RGammaModule<F>, n: &RGammaModule<F>) -> bool {
    let cat = m.cat();
    let natural = cat.morphism_ids().all(|f| {
        let mf = cat.morphism(f);
        phi.component(mf.src).mul(m.action(f)) == n.action(f).mul(phi.component(mf.tgt))
    });
    natural
        && cat.object_ids().all(|x| {
            let c = phi.component(x);
            c.rows() == c.cols() && c.rows() == m.dim(x) && c.rows() == n.dim(x) && dense_rank(c) == c.rows()
        })
}

/// An isomorphism found by the library's search, checked here.
pub fn isomorphic<F: Field>(m: &RGammaModule<F>, n: &RGammaModule<F>, seed: u64) -> bool {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    m.dims() == n.dims() && m.find_isomorphism(n, &mut rng, 64).is_some_and(|phi| is_iso_witness(&phi, m, n))
}
