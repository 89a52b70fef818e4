//! Functors between module categories: the four functors attached to an object,
//! and restriction and induction along a subgroup.

use std::collections::HashMap;
use std::sync::Arc;

use crate::category::{AutCategory, MorphismId, ObjectId, OrbitCat};
use crate::error::ModuleError;
use crate::group::{Family, PermGroup, Subgroup};
use crate::matrix::Matrix;
use crate::module::{ModuleHom, RGammaModule};
use crate::scalar::{Field, Scalar};

fn check_aut<S: Scalar>(v: &RGammaModule<S>, aut: &AutCategory) -> Result<(), ModuleError> {
    if Arc::ptr_eq(v.cat(), &aut.cat) {
        Ok(())
    } else {
        Err(ModuleError::WrongAutGroup(aut.object.0))
    }
}

/// `Mor(y, x)` as a free `Aut(x)`-set under post-composition.
///
/// Returns orbit representatives and, for every morphism in hom order, its orbit and the
/// automorphism (local index) `a` with `u = a ∘ rep`.
pub fn aut_orbits(cat: &OrbitCat, y: ObjectId, x: ObjectId) -> (Vec<MorphismId>, Vec<(usize, usize)>) {
    let start = cat.hom(y, x).start;
    let mut slot: Vec<Option<(usize, usize)>> = vec![None; cat.hom_count(y, x)];
    let mut reps = Vec::new();
    for u in cat.hom_ids(y, x) {
        if slot[u.0 - start].is_some() {
            continue;
        }
        let o = reps.len();
        reps.push(u);
        for (k, a) in cat.hom_ids(x, x).enumerate() {
            slot[cat.compose(a, u).0 - start] = Some((o, k));
        }
    }
    (reps, slot.into_iter().map(|s| s.expect("free action")).collect())
}

/// `Res_x M`: the value at `x` as a module over `Aut(x)`.
pub fn restriction_functor<S: Scalar>(m: &RGammaModule<S>, aut: &AutCategory) -> RGammaModule<S> {
    let x = aut.object;
    RGammaModule::from_fn(aut.cat.clone(), vec![m.dim(x)], |w| m.action(aut.from_weyl[w.0]).clone())
}

/// `I_x V`: `V` at the class of `x`, zero elsewhere.
pub fn inclusion_functor<S: Scalar>(cat: &Arc<OrbitCat>, aut: &AutCategory, v: &RGammaModule<S>) -> Result<RGammaModule<S>, ModuleError> {
    check_aut(v, aut)?;
    let x = aut.object;
    let start = cat.hom(x, x).start;
    let dims: Vec<usize> = cat.object_ids().map(|y| if y == x { v.dim(ObjectId(0)) } else { 0 }).collect();
    Ok(RGammaModule::from_fn(cat.clone(), dims.clone(), |f| {
        let m = cat.morphism(f);
        if m.src == x && m.tgt == x {
            v.action(aut.to_weyl[f.0 - start]).clone()
        } else {
            Matrix::zeros(dims[m.src.0], dims[m.tgt.0])
        }
    }))
}

/// `E_x V = V ⊗_{R[Aut x]} R Mor(-, x)`.
///
/// The value at `y` has one copy of `V` per `Aut(x)`-orbit of `Mor(y, x)`.
pub fn extension_functor<S: Scalar>(cat: &Arc<OrbitCat>, aut: &AutCategory, v: &RGammaModule<S>) -> Result<RGammaModule<S>, ModuleError> {
    check_aut(v, aut)?;
    let x = aut.object;
    let d = v.dim(ObjectId(0));
    let orbits: Vec<(Vec<MorphismId>, Vec<(usize, usize)>)> = cat.object_ids().map(|y| aut_orbits(cat, y, x)).collect();
    let dims: Vec<usize> = orbits.iter().map(|(r, _)| r.len() * d).collect();
    Ok(RGammaModule::from_fn(cat.clone(), dims.clone(), |g| {
        let mg = cat.morphism(g);
        let (z, y) = (mg.src, mg.tgt);
        let start = cat.hom(z, x).start;
        let nz = orbits[z.0].0.len();
        let ny = orbits[y.0].0.len();
        let mut blocks: Vec<Vec<Option<Matrix<S>>>> = vec![vec![None; ny]; nz];
        for (o, &u) in orbits[y.0].0.iter().enumerate() {
            let ug = cat.compose(u, g);
            let (o2, a) = orbits[z.0].1[ug.0 - start];
            blocks[o2][o] = Some(v.action(aut.to_weyl[a]).clone());
        }
        Matrix::from_blocks(&vec![d; nz], &vec![d; ny], &blocks)
    }))
}

/// The counit `E_x Res_x M → M`, `v ⊗ u ↦ M(u) v`.
pub fn extension_counit<S: Scalar>(m: &RGammaModule<S>, aut: &AutCategory) -> (RGammaModule<S>, ModuleHom<S>) {
    let cat = m.cat();
    let x = aut.object;
    let res = restriction_functor(m, aut);
    let e = extension_functor(cat, aut, &res).expect("same automorphism category");
    let comps = cat
        .object_ids()
        .map(|y| {
            let (reps, _) = aut_orbits(cat, y, x);
            let parts: Vec<Matrix<S>> = reps.iter().map(|&u| m.action(u).clone()).collect();
            Matrix::hstack_all(m.dim(y), &parts)
        })
        .collect();
    (e, ModuleHom::new(comps))
}

/// Relations spanning `M(x)_s`: images of `M(f)` for `f: x → z` with `z` strictly larger.
pub fn splitting_relations<S: Scalar>(m: &RGammaModule<S>, x: ObjectId) -> Matrix<S> {
    let cat = m.cat();
    let parts: Vec<Matrix<S>> = cat
        .object_ids()
        .filter(|&z| cat.lt(x, z))
        .flat_map(|z| cat.hom_ids(x, z).map(|f| m.action(f).clone()).collect::<Vec<_>>())
        .collect();
    Matrix::hstack_all(m.dim(x), &parts)
}

/// `S_x M = M(x) / M(x)_s` over `Aut(x)`, with the projection from `Res_x M`.
pub fn splitting_functor<F: Field>(m: &RGammaModule<F>, aut: &AutCategory) -> (RGammaModule<F>, ModuleHom<F>) {
    let res = restriction_functor(m, aut);
    let rel = splitting_relations(m, aut.object);
    res.quotient(&[rel])
}

/// `dim S_x M` at every object.
pub fn splitting_dims<F: Field>(m: &RGammaModule<F>) -> Vec<usize> {
    m.cat()
        .object_ids()
        .map(|x| m.dim(x) - crate::field::rank(&splitting_relations(m, x)))
        .collect()
}

/// A subgroup `H ≤ G` with the orbit categories `Γ_G` and `Γ_H` on `F_H = {K ≤ H : K ∈ F}`.
pub struct SubgroupPair {
    big: Arc<OrbitCat>,
    small: Arc<OrbitCat>,
    h: Subgroup,
    to_big: Vec<usize>,
    from_big: HashMap<usize, usize>,
    /// Per object of `Γ_H`: the object of `Γ_G` and `w` with `w⁻¹ K w` its representative.
    obj_image: Vec<(ObjectId, usize)>,
    coset_nf: Vec<usize>,
}

impl SubgroupPair {
    pub fn new(big: Arc<OrbitCat>, h: &Subgroup) -> Result<Self, ModuleError> {
        let g = big.group_arc().clone();
        let hg = Arc::new(g.subgroup_as_group(h));
        let to_big: Vec<usize> = hg
            .elements()
            .iter()
            .map(|p| g.index_of(p).expect("subgroup element"))
            .collect();
        let from_big: HashMap<usize, usize> = to_big.iter().enumerate().map(|(i, &x)| (x, i)).collect();
        let lift = |k: &Subgroup| -> Subgroup {
            let mut e: Vec<usize> = k.elements().iter().map(|&x| to_big[x]).collect();
            e.sort_unstable();
            g.subgroup_from_elements(e)
        };
        let fam = big.family();
        let family_h = Family::from_predicate(&hg, |k| fam.contains(&g, &lift(k)));
        let small = Arc::new(OrbitCat::new(hg, family_h));
        let obj_image = small
            .object_ids()
            .map(|k| {
                let kk = lift(small.subgroup(k));
                big.object_of(&kk).ok_or(ModuleError::NotInFamily)
            })
            .collect::<Result<Vec<_>, _>>()?;
        let coset_nf = g.left_coset_normal_forms(h);
        Ok(SubgroupPair {
            big,
            small,
            h: h.clone(),
            to_big,
            from_big,
            obj_image,
            coset_nf,
        })
    }

    pub fn big(&self) -> &Arc<OrbitCat> {
        &self.big
    }

    pub fn small(&self) -> &Arc<OrbitCat> {
        &self.small
    }

    /// The subgroup `H` inside `G`.
    pub fn subgroup(&self) -> &Subgroup {
        &self.h
    }

    /// Image in `G` of an element of `H`.
    pub fn to_big(&self, x: usize) -> usize {
        self.to_big[x]
    }

    /// A subgroup of `G` contained in `H`, as a subgroup of the group `H`.
    pub fn lower(&self, k: &Subgroup) -> Subgroup {
        let hg = self.small.group();
        let mut e: Vec<usize> = k.elements().iter().map(|x| self.from_big[x]).collect();
        e.sort_unstable();
        hg.subgroup_from_elements(e)
    }

    pub fn lift(&self, k: &Subgroup) -> Subgroup {
        let mut e: Vec<usize> = k.elements().iter().map(|&x| self.to_big[x]).collect();
        e.sort_unstable();
        self.big.group().subgroup_from_elements(e)
    }

    /// Object of `Γ_G` receiving the object `k` of `Γ_H`.
    pub fn object_image(&self, k: ObjectId) -> ObjectId {
        self.obj_image[k.0].0
    }

    /// The inclusion functor `Γ_H → Γ_G` on morphisms.
    pub fn image_morphism(&self, f: MorphismId) -> MorphismId {
        let g = self.big.group();
        let m = self.small.morphism(f);
        let (a, wa) = self.obj_image[m.src.0];
        let (b, wb) = self.obj_image[m.tgt.0];
        let rep = g.mul(g.mul(g.inv(wa), self.to_big[m.rep]), wb);
        self.big.morphism_for(a, b, rep).expect("inclusion functor is defined")
    }

    /// Skeletal morphism for the `H`-map `H/A → H/B`, `A ↦ cB` between arbitrary members.
    fn small_morphism(&self, a: &(ObjectId, usize), b: &(ObjectId, usize), c: usize) -> MorphismId {
        let hg = self.small.group();
        let rep = hg.mul(hg.mul(hg.inv(a.1), c), b.1);
        self.small.morphism_for(a.0, b.0, rep).expect("subconjugation witness")
    }

    pub fn restrict<S: Scalar>(&self, m: &RGammaModule<S>) -> RGammaModule<S> {
        let dims = self.small.object_ids().map(|k| m.dim(self.object_image(k))).collect();
        RGammaModule::from_fn(self.small.clone(), dims, |f| m.action(self.image_morphism(f)).clone())
    }

    pub fn restrict_hom<S: Scalar>(&self, phi: &ModuleHom<S>) -> ModuleHom<S> {
        ModuleHom::new(
            self.small
                .object_ids()
                .map(|k| phi.component(self.object_image(k)).clone())
                .collect(),
        )
    }

    /// For each object `L` of `Γ_G`: cosets `gH` (least reps) with `L^g ≤ H`, and the
    /// class of `L^g` in `Γ_H` with its witness.
    fn induction_summands(&self) -> Vec<Vec<(usize, (ObjectId, usize))>> {
        let g = self.big.group();
        let mut reps: Vec<usize> = self.coset_nf.clone();
        reps.sort_unstable();
        reps.dedup();
        self.big
            .object_ids()
            .map(|l| {
                let sub = self.big.subgroup(l);
                reps.iter()
                    .copied()
                    .filter(|&c| sub.generators().iter().all(|&s| self.h.contains(g.conj(s, c))))
                    .map(|c| {
                        let lower = self.lower(&g.conjugate(sub, c));
                        let cls = self.small.object_of(&lower).expect("F_H contains L^g");
                        (c, cls)
                    })
                    .collect()
            })
            .collect()
    }

    /// `(ind N)(L) = ⊕_{gH, L^g ≤ H} N(L^g)`.
    pub fn induce<S: Scalar>(&self, n: &RGammaModule<S>) -> RGammaModule<S> {
        let g = self.big.group();
        let summands = self.induction_summands();
        let dims: Vec<usize> = summands
            .iter()
            .map(|s| s.iter().map(|(_, (k, _))| n.dim(*k)).sum())
            .collect();
        RGammaModule::from_fn(self.big.clone(), dims, |f| {
            let m = self.big.morphism(f);
            let (lp, l) = (m.src.0, m.tgt.0);
            let rows: Vec<usize> = summands[lp].iter().map(|(_, (k, _))| n.dim(*k)).collect();
            let cols: Vec<usize> = summands[l].iter().map(|(_, (k, _))| n.dim(*k)).collect();
            let mut blocks: Vec<Vec<Option<Matrix<S>>>> = vec![vec![None; cols.len()]; rows.len()];
            for (j, (c, cls)) in summands[l].iter().enumerate() {
                let c2 = self.coset_nf[g.mul(m.rep, *c)];
                let i = summands[lp]
                    .iter()
                    .position(|(d, _)| *d == c2)
                    .expect("coset fixed by the source");
                let h0 = g.mul(g.mul(g.inv(c2), m.rep), *c);
                let phi = self.small_morphism(&summands[lp][i].1, cls, self.from_big[&h0]);
                blocks[i][j] = Some(n.action(phi).clone());
            }
            Matrix::from_blocks(&rows, &cols, &blocks)
        })
    }

    pub fn induce_hom<S: Scalar>(&self, phi: &ModuleHom<S>) -> ModuleHom<S> {
        let summands = self.induction_summands();
        ModuleHom::new(
            summands
                .iter()
                .map(|s| Matrix::block_diag(&s.iter().map(|(_, (k, _))| phi.component(*k).clone()).collect::<Vec<_>>()))
                .collect(),
        )
    }
}

/// One transitive summand `R[N_G(H)/Stab]` of `R[G/K](G/H)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixedPointSummand {
    /// `g` with `H^g ≤ K`; the summand is the orbit of `gK`.
    pub witness: usize,
    /// `N_G(H) ∩ gKg⁻¹`.
    pub stabilizer: Subgroup,
    /// Index of the stabilizer in `N_G(H)`.
    pub size: usize,
}

/// `R[G/K](G/H)` as a permutation module over `N_G(H)`: one summand per `K`-conjugacy
/// class of subgroups `H^g ≤ K`, with stabilizer `N_{gKg⁻¹}(H)`.
pub fn fixed_point_decomposition(g: &PermGroup, h: &Subgroup, k: &Subgroup) -> Vec<FixedPointSummand> {
    let n = g.normalizer(h);
    let mut classes: Vec<(Subgroup, usize)> = Vec::new();
    for x in 0..g.order() {
        if !h.generators().iter().all(|&s| k.contains(g.conj(s, x))) {
            continue;
        }
        let hx = g.conjugate(h, x);
        let known = classes
            .iter()
            .any(|(c, _)| k.elements().iter().any(|&y| g.conjugate(c, y) == hx));
        if !known {
            classes.push((hx, x));
        }
    }
    classes
        .into_iter()
        .map(|(_, x)| {
            let kx = g.conjugate(k, g.inv(x));
            let stab = n.intersect(g, &kx);
            FixedPointSummand {
                witness: x,
                size: n.order() / stab.order(),
                stabilizer: stab,
            }
        })
        .collect()
}

/// Orbits of `N_G(H)` on `(G/K)^H`, by scanning cosets; each orbit as (least coset, stabilizer).
pub fn fixed_point_orbits(g: &PermGroup, h: &Subgroup, k: &Subgroup) -> Vec<(usize, Subgroup)> {
    let n = g.normalizer(h);
    let nf = g.left_coset_normal_forms(k);
    let fixed: Vec<usize> = g
        .left_coset_reps(k)
        .into_iter()
        .filter(|&c| h.elements().iter().all(|&s| nf[g.mul(s, c)] == c))
        .collect();
    let mut seen = std::collections::BTreeSet::new();
    let mut out = Vec::new();
    for &c in &fixed {
        if seen.contains(&c) {
            continue;
        }
        let mut stab = Vec::new();
        for &y in n.elements() {
            let d = nf[g.mul(y, c)];
            seen.insert(d);
            if d == c {
                stab.push(y);
            }
        }
        out.push((c, g.subgroup_from_elements(stab)));
    }
    out
}
