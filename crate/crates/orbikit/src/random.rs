//! Seeded random modules for property tests and verification suites.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::category::{ObjectId, OrbitCat};
use crate::complex::{ChainComplex, Summand};
use crate::functors::extension_functor;
use crate::matrix::SparseVec;
use crate::module::{ModuleHom, RGammaModule};
use crate::scalar::{Field, Scalar};

/// A random object, biased towards larger subgroups (smaller values).
pub fn random_object<R: Rng>(cat: &OrbitCat, rng: &mut R) -> ObjectId {
    let n = cat.num_objects();
    let weights: Vec<usize> = (0..n).map(|i| i + 1).collect();
    let total: usize = weights.iter().sum();
    let mut t = rng.gen_range(0..total);
    for (i, w) in weights.iter().enumerate() {
        if t < *w {
            return ObjectId(i);
        }
        t -= w;
    }
    ObjectId(n - 1)
}

/// A random vector with small entries; never zero when `dim > 0`.
pub fn random_vector<S: Scalar, R: Rng>(dim: usize, rng: &mut R) -> SparseVec<S> {
    if dim == 0 {
        return Vec::new();
    }
    loop {
        let mut v: Vec<(usize, S)> = Vec::new();
        for i in 0..dim {
            if rng.gen_bool(0.5) {
                v.push((i, S::from_i64(rng.gen_range(-2i64..=2))));
            }
        }
        let v = crate::matrix::normalize(v);
        if !v.is_empty() {
            return v;
        }
    }
}

/// A direct sum of one or two free modules at random objects.
pub fn random_free<S: Scalar, R: Rng>(cat: &Arc<OrbitCat>, rng: &mut R, max_summands: usize) -> (RGammaModule<S>, Vec<ObjectId>) {
    let k = rng.gen_range(1..=max_summands.max(1));
    let objs: Vec<ObjectId> = (0..k).map(|_| random_object(cat, rng)).collect();
    let parts: Vec<RGammaModule<S>> = objs.iter().map(|&x| RGammaModule::free_module(cat.clone(), x)).collect();
    (RGammaModule::direct_sum_all(cat, &parts), objs)
}

/// A random finitely generated module: a quotient or submodule of a small free module,
/// a permutation module, or the constant module.
pub fn random_module<F: Field, R: Rng>(cat: &Arc<OrbitCat>, rng: &mut R) -> RGammaModule<F> {
    match rng.gen_range(0..6) {
        0 => RGammaModule::constant(cat.clone()),
        1 => {
            let subs = cat.group().subgroups_of(&cat.group().whole());
            let k = subs.choose(rng).expect("nonempty").clone();
            RGammaModule::permutation_module(cat.clone(), &k)
        }
        2 => {
            let (p, _) = random_free::<F, _>(cat, rng, 2);
            let gens = random_elements(&p, rng, 2);
            p.generated_by(&gens).0
        }
        _ => {
            let (p, _) = random_free::<F, _>(cat, rng, 2);
            let gens = random_elements(&p, rng, 2);
            let (_, inc) = p.generated_by(&gens);
            p.quotient(inc.components()).0
        }
    }
}

/// Up to `max` random nonzero elements at random objects of the support.
pub fn random_elements<S: Scalar, R: Rng>(m: &RGammaModule<S>, rng: &mut R, max: usize) -> Vec<(ObjectId, SparseVec<S>)> {
    let support = m.support();
    if support.is_empty() {
        return Vec::new();
    }
    let k = rng.gen_range(1..=max.max(1));
    (0..k)
        .map(|_| {
            let x = *support.choose(rng).expect("nonempty support");
            (x, random_vector(m.dim(x), rng))
        })
        .collect()
}

/// A random projective: `⊕ E_x R[W_x/Q]` with `Q` of order invertible in the field,
/// followed by a random change of basis.
pub fn random_projective<F: Field, R: Rng>(cat: &Arc<OrbitCat>, rng: &mut R) -> RGammaModule<F> {
    let p = F::ring().characteristic() as usize;
    let k = rng.gen_range(1..=2);
    let mut parts = Vec::new();
    for _ in 0..k {
        let x = random_object(cat, rng);
        let aut = cat.aut_category(x);
        let w = aut.cat.group();
        let subs: Vec<_> = w
            .subgroups_of(&w.whole())
            .into_iter()
            .filter(|q| p == 0 || q.order() % p != 0)
            .collect();
        let q = subs.choose(rng).expect("trivial subgroup qualifies");
        let v = RGammaModule::<F>::permutation_module(aut.cat.clone(), q);
        parts.push(extension_functor(cat, &aut, &v).expect("module over the automorphisms"));
    }
    RGammaModule::direct_sum_all(cat, &parts).random_twist(rng)
}

/// A random augmented complex of free modules with `1..=max_len` terms of one to three
/// summands each. Each generator maps to a random element of the kernel of the previous
/// map, starting from the augmentation.
pub fn random_free_complex<F: Field, R: Rng>(cat: &Arc<OrbitCat>, rng: &mut R, max_len: usize) -> ChainComplex<F> {
    let len = rng.gen_range(1..=max_len.max(1));
    let mut modules: Vec<RGammaModule<F>> = Vec::new();
    let mut maps: Vec<ModuleHom<F>> = Vec::new();
    let mut dec = Vec::new();
    let unit = RGammaModule::<F>::constant(cat.clone());
    for i in 0..len {
        let objs: Vec<ObjectId> = (0..rng.gen_range(1..=3)).map(|_| random_object(cat, rng)).collect();
        let (kernel, inc) = match maps.last() {
            None => (unit.clone(), ModuleHom::identity(&unit)),
            Some(d) => modules[i - 1].kernel_of(d),
        };
        let parts: Vec<RGammaModule<F>> = objs.iter().map(|&x| RGammaModule::free_module(cat.clone(), x)).collect();
        let src = RGammaModule::direct_sum_all(cat, &parts);
        let mut d: Option<ModuleHom<F>> = None;
        for &x in &objs {
            let v = if i == 0 {
                vec![(0, F::one())]
            } else if kernel.dim(x) > 0 && rng.gen_bool(0.8) {
                random_vector(kernel.dim(x), rng)
            } else {
                Vec::new()
            };
            let y = inc.compose(&kernel.yoneda_map(x, &v));
            d = Some(match d {
                None => y,
                Some(prev) => prev.hstack(&y),
            });
        }
        maps.push(d.expect("at least one summand"));
        dec.push(objs.into_iter().map(Summand::Free).collect::<Vec<_>>());
        modules.push(src);
    }
    let eps = maps.remove(0);
    ChainComplex::new(modules, maps)
        .and_then(|c| c.with_augmentation(eps))
        .expect("differentials land in kernels")
        .with_decomposition(dec)
}
