//! Resolutions and coresolutions over a field: E-resolutions, free resolutions and Ext,
//! the `D_Q` functors and the coresolution built from them.

use std::sync::Arc;

use serde::Serialize;

use crate::category::{AutCategory, MorphismId, ObjectId, OrbitCat};
use crate::complex::{ChainComplex, Summand};
use crate::error::{ComplexError, ModuleError};
use crate::field;
use crate::functors::{extension_counit, restriction_functor};
use crate::matrix::{Matrix, SparseVec};
use crate::module::{ModuleHom, RGammaModule};
use crate::projective::{is_projective, FreeCover};
use crate::scalar::Field;

/// An exact sequence `… → T_1 → T_0 → M → 0`; `maps[0]: T_0 → M`, `maps[s]: T_s → T_{s-1}`.
#[derive(Clone)]
pub struct Resolution<F> {
    pub module: RGammaModule<F>,
    pub terms: Vec<RGammaModule<F>>,
    pub maps: Vec<ModuleHom<F>>,
    /// Kernel of the last map, zero when the resolution is finite.
    pub kernel: RGammaModule<F>,
}

impl<F: Field> Resolution<F> {
    /// Index of the last nonzero term, `-1` when `M = 0`.
    pub fn length(&self) -> i64 {
        self.terms.iter().rposition(|t| !t.is_zero()).map_or(-1, |i| i as i64)
    }

    pub fn is_finite(&self) -> bool {
        self.kernel.is_zero()
    }

    /// Exactness of `T_s → T_{s-1} → …` at every object and position, including `T_0 → M → 0`.
    pub fn check_exact(&self) -> Result<(), ComplexError> {
        let cat = self.module.cat();
        for x in cat.object_ids() {
            let rk: Vec<usize> = self.maps.iter().map(|f| field::rank(f.component(x))).collect();
            if rk.first().copied().unwrap_or(0) != self.module.dim(x) {
                return Err(ComplexError::Construction(format!("augmentation not onto at object {}", x.0)));
            }
            for s in 0..self.terms.len() {
                let out = rk[s];
                let inc = rk.get(s + 1).copied().unwrap_or(0);
                let kernel_dim = self.terms[s].dim(x) - out;
                let expected = if s + 1 == self.terms.len() { self.kernel.dim(x) } else { 0 };
                if kernel_dim != inc + expected {
                    return Err(ComplexError::Construction(format!(
                        "not exact at term {s}, object {}",
                        x.0
                    )));
                }
                if s + 1 < self.maps.len() && !self.maps[s].compose(&self.maps[s + 1]).component(x).is_zero() {
                    return Err(ComplexError::NotAComplex { degree: s + 1, object: x.0 });
                }
            }
        }
        Ok(())
    }

    /// The terms as a chain complex `T_0 ← T_1 ← …`.
    pub fn complex(&self) -> ChainComplex<F> {
        let cat = self.module.cat().clone();
        if self.terms.is_empty() {
            return ChainComplex::zero(cat);
        }
        ChainComplex::from_parts(cat, self.terms.clone(), self.maps[1..].to_vec())
    }
}

/// `EM = ⊕_x E_x Res_x M` with the sum of the counits.
pub fn e_cover<F: Field>(m: &RGammaModule<F>) -> (RGammaModule<F>, ModuleHom<F>) {
    let cat = m.cat();
    let mut parts = Vec::new();
    let mut map = ModuleHom::new(cat.object_ids().map(|y| Matrix::zeros(m.dim(y), 0)).collect());
    for x in m.support() {
        let aut = cat.aut_category(x);
        let (e, eps) = extension_counit(m, &aut);
        map = map.hstack(&eps);
        parts.push(e);
    }
    (RGammaModule::direct_sum_all(cat, &parts), map)
}

/// `0 → EK^t M → … → EKM → EM → M → 0`, iterating `E` on kernels until they vanish.
pub fn e_resolution<F: Field>(m: &RGammaModule<F>) -> Resolution<F> {
    let cap = m.cat().num_objects() + 2;
    let mut terms = Vec::new();
    let mut maps = Vec::new();
    let mut current = m.clone();
    let mut into_prev: Option<ModuleHom<F>> = None;
    while !current.is_zero() && terms.len() < cap {
        let (e, eps) = e_cover(&current);
        let map = match &into_prev {
            None => eps.clone(),
            Some(inc) => inc.compose(&eps),
        };
        let (k, inc) = e.kernel_of(&eps);
        terms.push(e);
        maps.push(map);
        current = k;
        into_prev = Some(inc);
    }
    Resolution {
        module: m.clone(),
        terms,
        maps,
        kernel: current,
    }
}

/// A free resolution built from greedy covers, with `length + 1` terms (fewer if a kernel vanishes).
pub fn minimal_free_resolution<F: Field>(m: &RGammaModule<F>, length: usize) -> (Resolution<F>, Vec<Vec<ObjectId>>) {
    let mut terms = Vec::new();
    let mut maps = Vec::new();
    let mut gens = Vec::new();
    let mut current = m.clone();
    let mut into_prev: Option<ModuleHom<F>> = None;
    for _ in 0..=length {
        if current.is_zero() {
            break;
        }
        let cover = FreeCover::greedy(&current);
        let map = match &into_prev {
            None => cover.map.clone(),
            Some(inc) => inc.compose(&cover.map),
        };
        let (k, inc) = cover.free.kernel_of(&cover.map);
        gens.push(cover.objects());
        terms.push(cover.free);
        maps.push(map);
        current = k;
        into_prev = Some(inc);
    }
    let res = Resolution {
        module: m.clone(),
        terms,
        maps,
        kernel: current,
    };
    (res, gens)
}

/// Free chain complex of a resolution, with its decomposition recorded.
pub fn free_resolution_complex<F: Field>(res: &Resolution<F>, gens: &[Vec<ObjectId>]) -> ChainComplex<F> {
    let dec = gens.iter().map(|g| g.iter().map(|&x| Summand::Free(x)).collect()).collect();
    res.complex().with_decomposition(dec)
}

/// Matrix of `Hom(P_i, N) → Hom(P_{i+1}, N)`, `φ ↦ φ ∘ d`, in the Yoneda coordinates
/// `Hom(⊕ R[G/H_g], N) = ⊕ N(g)`.
fn hom_coboundary<F: Field>(
    cat: &OrbitCat,
    n: &RGammaModule<F>,
    src_gens: &[ObjectId],
    tgt_gens: &[ObjectId],
    d: &ModuleHom<F>,
) -> Matrix<F> {
    let col_off: Vec<usize> = src_gens
        .iter()
        .scan(0, |acc, &x| {
            let o = *acc;
            *acc += n.dim(x);
            Some(o)
        })
        .collect();
    let cols = src_gens.iter().map(|&x| n.dim(x)).sum();
    let rows = tgt_gens.iter().map(|&x| n.dim(x)).sum();
    let mut trip = Vec::new();
    let mut row_off = 0;
    let mut tgt_pos = Vec::new();
    for (k, &h) in tgt_gens.iter().enumerate() {
        // position of generator k inside P_{i+1}(h): sum over earlier generators of |Mor(h, x_j)|
        let pos: usize = tgt_gens[..k].iter().map(|&x| cat.hom_count(h, x)).sum::<usize>()
            + cat.local_index(cat.identity(h));
        tgt_pos.push(pos);
    }
    for (k, &h) in tgt_gens.iter().enumerate() {
        let img = d.component(h).column(tgt_pos[k]);
        // split the image into blocks hom(h, x_g) of P_i(h)
        let mut block = 0usize;
        let mut start = 0usize;
        for (r, c) in img {
            while r >= start + cat.hom_count(h, src_gens[block]) {
                start += cat.hom_count(h, src_gens[block]);
                block += 1;
            }
            let xg = src_gens[block];
            let u = MorphismId(cat.hom(h, xg).start + (r - start));
            let nu = n.action(u);
            for (i, j, v) in nu.entries() {
                trip.push((row_off + i, col_off[block] + j, v.clone() * c.clone()));
            }
        }
        row_off += n.dim(h);
    }
    Matrix::from_triplets(rows, cols, trip)
}

/// `dim Ext^i(M, N)` for `i = 0..=max_degree`, from a free resolution of `M`.
pub fn ext_groups<F: Field>(m: &RGammaModule<F>, n: &RGammaModule<F>, max_degree: usize) -> Vec<usize> {
    let (res, gens) = minimal_free_resolution(m, max_degree + 1);
    let cat = m.cat();
    let hom_dim = |g: &[ObjectId]| -> usize { g.iter().map(|&x| n.dim(x)).sum() };
    let delta: Vec<Matrix<F>> = (0..gens.len().saturating_sub(1))
        .map(|i| hom_coboundary(cat, n, &gens[i], &gens[i + 1], &res.maps[i + 1]))
        .collect();
    (0..=max_degree)
        .map(|i| {
            let Some(g) = gens.get(i) else { return 0 };
            let cocycles = hom_dim(g) - delta.get(i).map_or(0, field::rank);
            let cobound = if i == 0 { 0 } else { field::rank(&delta[i - 1]) };
            cocycles - cobound
        })
        .collect()
}

/// `Mor(Q, K)` split into orbits of `Aut(Q)` acting by precomposition.
struct PrecompositionOrbits {
    /// Per orbit: representative and its stabilizer (as automorphisms of `Q`).
    orbits: Vec<(MorphismId, Vec<MorphismId>)>,
    /// Per morphism in hom order: orbit and an automorphism `a` with `u = rep ∘ a`.
    slot: Vec<(usize, MorphismId)>,
}

fn precomposition_orbits(cat: &OrbitCat, q: ObjectId, k: ObjectId) -> PrecompositionOrbits {
    let start = cat.hom(q, k).start;
    let mut slot: Vec<Option<(usize, MorphismId)>> = vec![None; cat.hom_count(q, k)];
    let mut orbits = Vec::new();
    for u in cat.hom_ids(q, k) {
        if slot[u.0 - start].is_some() {
            continue;
        }
        let o = orbits.len();
        let mut stab = Vec::new();
        for a in cat.hom_ids(q, q) {
            let w = cat.compose(u, a);
            if w == u {
                stab.push(a);
            }
            slot[w.0 - start].get_or_insert((o, a));
        }
        orbits.push((u, stab));
    }
    PrecompositionOrbits {
        orbits,
        slot: slot.into_iter().map(|s| s.expect("orbit covers")).collect(),
    }
}

/// `D_Q(V)(K) = Hom_{R[W]}(R[Mor(Q, K)], V)`, the equivariant functions `f` with
/// `f(u ∘ a) = V(a) f(u)`.
///
/// Coordinates: per precomposition orbit with representative `u`, the value `f(u)` in a
/// basis of the fixed points `V^{Stab(u)}`.
pub struct DqFunctor<F> {
    pub module: RGammaModule<F>,
    /// Per object: fixed-point basis (columns) for each orbit.
    bases: Vec<Vec<Matrix<F>>>,
    orbits: Vec<PrecompositionOrbits>,
    q: ObjectId,
}

/// Builds `D_Q(V)` for a module `V` over the automorphisms of `Q`.
pub fn dq_functor<F: Field>(cat: &Arc<OrbitCat>, aut: &AutCategory, v: &RGammaModule<F>) -> Result<DqFunctor<F>, ModuleError> {
    if !Arc::ptr_eq(v.cat(), &aut.cat) {
        return Err(ModuleError::WrongAutGroup(aut.object.0));
    }
    let q = aut.object;
    let qstart = cat.hom(q, q).start;
    let d = v.dim(ObjectId(0));
    let vact = |a: MorphismId| -> &Matrix<F> { v.action(aut.to_weyl[a.0 - qstart]) };
    let orbits: Vec<PrecompositionOrbits> = cat.object_ids().map(|k| precomposition_orbits(cat, q, k)).collect();
    let bases: Vec<Vec<Matrix<F>>> = orbits
        .iter()
        .map(|po| {
            po.orbits
                .iter()
                .map(|(_, stab)| {
                    let parts: Vec<Matrix<F>> = stab.iter().map(|&a| vact(a).sub(&Matrix::identity(d))).collect();
                    field::kernel(&Matrix::vstack_all(d, &parts))
                })
                .collect()
        })
        .collect();
    let dims: Vec<usize> = bases.iter().map(|b| b.iter().map(Matrix::cols).sum()).collect();
    let module = RGammaModule::from_fn(cat.clone(), dims.clone(), |phi| {
        // D(φ): D(K) → D(K') for φ: K' → K, f ↦ f(φ ∘ -)
        let mphi = cat.morphism(phi);
        let (kp, k) = (mphi.src, mphi.tgt);
        let mut cols: Vec<SparseVec<F>> = Vec::with_capacity(dims[k.0]);
        for (o, basis) in bases[k.0].iter().enumerate() {
            for fv in basis.columns() {
                // f supported on orbit o of Mor(Q, K) with f(rep_o) = fv
                let mut col: SparseVec<F> = Vec::new();
                let mut off = 0;
                for (o2, (u2, _)) in orbits[kp.0].orbits.iter().enumerate() {
                    let w = cat.compose(phi, *u2);
                    let (ow, a) = orbits[k.0].slot[w.0 - cat.hom(q, k).start];
                    let b2 = &bases[kp.0][o2];
                    if ow == o {
                        let val = vact(a).mul_vec(&fv);
                        let coords = field::solve(b2, &Matrix::from_columns(d, &[val]))
                            .expect("value lies in the fixed points")
                            .column(0);
                        col.extend(coords.into_iter().map(|(i, c)| (off + i, c)));
                    }
                    off += b2.cols();
                }
                cols.push(col);
            }
        }
        Matrix::from_columns(dims[kp.0], &cols)
    });
    Ok(DqFunctor { module, bases, orbits, q })
}

impl<F: Field> DqFunctor<F> {
    pub fn object(&self) -> ObjectId {
        self.q
    }

    /// Coordinates at `K` of the equivariant function with the given values on orbit representatives.
    fn coordinates(&self, k: ObjectId, values: &[SparseVec<F>], d: usize) -> SparseVec<F> {
        let mut out = Vec::new();
        let mut off = 0;
        for (o, b) in self.bases[k.0].iter().enumerate() {
            let c = field::solve(b, &Matrix::from_columns(d, &[values[o].clone()]))
                .expect("equivariant value")
                .column(0);
            out.extend(c.into_iter().map(|(i, x)| (off + i, x)));
            off += b.cols();
        }
        out
    }
}

/// The unit `N → D_Q(Res_Q N)`, `n ↦ (u ↦ N(u) n)`.
pub fn dq_unit<F: Field>(n: &RGammaModule<F>, dq: &DqFunctor<F>) -> ModuleHom<F> {
    let cat = n.cat();
    let d = n.dim(dq.q);
    ModuleHom::new(
        cat.object_ids()
            .map(|k| {
                let cols: Vec<SparseVec<F>> = (0..n.dim(k))
                    .map(|j| {
                        let e: SparseVec<F> = vec![(j, F::one())];
                        let values: Vec<SparseVec<F>> = dq.orbits[k.0]
                            .orbits
                            .iter()
                            .map(|(u, _)| n.action(*u).mul_vec(&e))
                            .collect();
                        dq.coordinates(k, &values, d)
                    })
                    .collect();
                Matrix::from_columns(dq.module.dim(k), &cols)
            })
            .collect(),
    )
}

/// `DN = ⊕_Q D_Q(N(Q))` with `j: N → DN` the sum of the units.
pub fn d_envelope<F: Field>(n: &RGammaModule<F>) -> (RGammaModule<F>, ModuleHom<F>) {
    let cat = n.cat();
    let mut parts = Vec::new();
    let mut j = ModuleHom::new(cat.object_ids().map(|k| Matrix::zeros(0, n.dim(k))).collect());
    for q in n.support() {
        let aut = cat.aut_category(q);
        let res = restriction_functor(n, &aut);
        let dq = dq_functor(cat, &aut, &res).expect("restriction lives over the automorphisms");
        j = j.vstack(&dq_unit(n, &dq));
        parts.push(dq.module);
    }
    (RGammaModule::direct_sum_all(cat, &parts), j)
}

/// `0 → N → DN → DCN → … → DC^m N → 0`; `maps[0] = j: N → DN`, `maps[s]: D C^{s-1} N → D C^s N`.
#[derive(Clone)]
pub struct Coresolution<F> {
    pub module: RGammaModule<F>,
    pub terms: Vec<RGammaModule<F>>,
    pub maps: Vec<ModuleHom<F>>,
    /// The cokernels `C^s N`, with `C^0 N = N`.
    pub cokernels: Vec<RGammaModule<F>>,
}

impl<F: Field> Coresolution<F> {
    pub fn length(&self) -> usize {
        self.terms.len()
    }

    pub fn check_exact(&self) -> Result<(), ComplexError> {
        let cat = self.module.cat();
        for x in cat.object_ids() {
            let rk: Vec<usize> = self.maps.iter().map(|f| field::rank(f.component(x))).collect();
            if rk.first().is_some_and(|&r| r != self.module.dim(x)) {
                return Err(ComplexError::Construction(format!("j is not injective at object {}", x.0)));
            }
            for s in 0..self.terms.len() {
                let inc = rk[s];
                let out = rk.get(s + 1).copied().unwrap_or(0);
                if self.terms[s].dim(x) != inc + out {
                    return Err(ComplexError::Construction(format!("not exact at term {s}, object {}", x.0)));
                }
            }
        }
        Ok(())
    }

    /// Alternating sum of the dimension vectors of `N, DN, DCN, …`.
    pub fn euler_dims(&self) -> Vec<i64> {
        let n = self.module.cat().num_objects();
        let mut out: Vec<i64> = self.module.dims().iter().map(|&d| -(d as i64)).collect();
        for (s, t) in self.terms.iter().enumerate() {
            let sign = if s % 2 == 0 { 1 } else { -1 };
            for x in 0..n {
                out[x] += sign * t.dims()[x] as i64;
            }
        }
        out
    }
}

pub fn coresolution<F: Field>(n: &RGammaModule<F>) -> Coresolution<F> {
    let cap = n.cat().num_objects() + 2;
    let mut terms = Vec::new();
    let mut maps = Vec::new();
    let mut cokernels = vec![n.clone()];
    let mut current = n.clone();
    let mut from_prev: Option<ModuleHom<F>> = None;
    while !current.is_zero() && terms.len() < cap {
        let (dn, j) = d_envelope(&current);
        maps.push(match &from_prev {
            None => j.clone(),
            Some(p) => j.compose(p),
        });
        let (c, proj) = dn.cokernel_of(&j);
        terms.push(dn);
        cokernels.push(c.clone());
        current = c;
        from_prev = Some(proj);
    }
    Coresolution {
        module: n.clone(),
        terms,
        maps,
        cokernels,
    }
}

/// Outcome of the maximal-object test for finite projective dimension.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum ProjdimVerdict {
    /// `M(x)` is not projective over `R[Aut x]` for a maximal object `x`.
    ObstructedAt { object: ObjectId },
    /// The resolution reached a projective kernel at this step.
    Projective { length: usize },
    /// No obstruction at maximal objects and no projective kernel found up to the bound.
    UnobstructedUpTo { bound: usize },
}

/// Checks `M(x)` projective over `Aut(x)` at maximal objects, then resolves up to
/// `l(Γ) + extra` looking for a projective kernel.
pub fn finite_projdim_obstruction<F: Field>(m: &RGammaModule<F>, extra: usize) -> ProjdimVerdict {
    let cat = m.cat();
    for x in cat.maximal_objects() {
        let aut = cat.aut_category(x);
        let res = restriction_functor(m, &aut);
        if is_projective(&res).is_none() {
            return ProjdimVerdict::ObstructedAt { object: x };
        }
    }
    if is_projective(m).is_some() {
        return ProjdimVerdict::Projective { length: 0 };
    }
    let bound = cat.category_length() + extra;
    let (res, _) = minimal_free_resolution(m, bound);
    for s in 0..res.terms.len() {
        let k = if s + 1 < res.terms.len() {
            res.terms[s].kernel_of(&res.maps[s]).0
        } else {
            res.kernel.clone()
        };
        if is_projective(&k).is_some() {
            return ProjdimVerdict::Projective { length: s + 1 };
        }
    }
    ProjdimVerdict::UnobstructedUpTo { bound }
}
