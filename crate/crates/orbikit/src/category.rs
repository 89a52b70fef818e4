//! Skeletal orbit categories `Or_F(G)`.

use std::fmt;
use std::ops::Range;
use std::collections::BTreeSet;
use std::sync::{Arc, OnceLock};

use crate::group::{Family, PermGroup, Subgroup};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize)]
pub struct ObjectId(pub usize);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MorphismId(pub usize);

impl fmt::Display for ObjectId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// The map `G/H_src → G/H_tgt`, `xH_src ↦ x·rep·H_tgt`, with `rep` least in its coset.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Morphism {
    pub src: ObjectId,
    pub tgt: ObjectId,
    pub rep: usize,
}

/// One object per conjugacy class in the family, ordered by subgroup order then elements.
pub struct OrbitCat {
    group: Arc<PermGroup>,
    family: Family,
    objects: Vec<Subgroup>,
    coset_nf: Vec<Vec<usize>>,
    morphisms: Vec<Morphism>,
    hom_start: Vec<usize>,
    generating: OnceLock<Vec<MorphismId>>,
}

impl fmt::Debug for OrbitCat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let orders: Vec<usize> = self.objects.iter().map(Subgroup::order).collect();
        write!(
            f,
            "OrbitCat(|G| = {}, objects of orders {:?}, {} morphisms)",
            self.group.order(),
            orders,
            self.morphisms.len()
        )
    }
}

impl OrbitCat {
    pub fn new(group: Arc<PermGroup>, family: Family) -> OrbitCat {
        let objects: Vec<Subgroup> = family.class_reps().to_vec();
        let n = objects.len();
        let coset_nf: Vec<Vec<usize>> = objects.iter().map(|k| group.left_coset_normal_forms(k)).collect();
        let mut morphisms = Vec::new();
        let mut hom_start = Vec::with_capacity(n * n + 1);
        for (y, hy) in objects.iter().enumerate() {
            let gens = if hy.generators().is_empty() {
                hy.elements().to_vec()
            } else {
                hy.generators().to_vec()
            };
            for (x, hx) in objects.iter().enumerate() {
                hom_start.push(morphisms.len());
                if hx.order() % hy.order() != 0 {
                    continue;
                }
                let mut reps: Vec<usize> = coset_nf[x].clone();
                reps.sort_unstable();
                reps.dedup();
                for g in reps {
                    if gens.iter().all(|&h| hx.contains(group.conj(h, g))) {
                        morphisms.push(Morphism {
                            src: ObjectId(y),
                            tgt: ObjectId(x),
                            rep: g,
                        });
                    }
                }
            }
        }
        hom_start.push(morphisms.len());
        let cat = OrbitCat {
            group,
            family,
            objects,
            coset_nf,
            morphisms,
            hom_start,
            generating: OnceLock::new(),
        };
        debug_assert!(cat.check_associativity(20_000));
        cat
    }

    /// Builds the category of a group for the given family seeds.
    pub fn from_seeds(group: Arc<PermGroup>, seeds: &[Subgroup]) -> OrbitCat {
        let family = Family::generate(&group, seeds);
        OrbitCat::new(group, family)
    }

    /// One-object category of `G` with the trivial family; modules over it are `R[G]`-modules.
    pub fn trivial_family(group: Arc<PermGroup>) -> OrbitCat {
        let family = Family::generate(&group, &[]);
        OrbitCat::new(group, family)
    }

    pub fn group(&self) -> &PermGroup {
        &self.group
    }

    pub fn group_arc(&self) -> &Arc<PermGroup> {
        &self.group
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn num_objects(&self) -> usize {
        self.objects.len()
    }

    pub fn object_ids(&self) -> impl DoubleEndedIterator<Item = ObjectId> + Clone {
        (0..self.objects.len()).map(ObjectId)
    }

    pub fn subgroup(&self, x: ObjectId) -> &Subgroup {
        &self.objects[x.0]
    }

    pub fn num_morphisms(&self) -> usize {
        self.morphisms.len()
    }

    pub fn morphism(&self, f: MorphismId) -> Morphism {
        self.morphisms[f.0]
    }

    pub fn morphism_ids(&self) -> impl Iterator<Item = MorphismId> {
        (0..self.morphisms.len()).map(MorphismId)
    }

    /// Morphisms `y → x`, as a range of ids.
    pub fn hom(&self, y: ObjectId, x: ObjectId) -> Range<usize> {
        let k = y.0 * self.objects.len() + x.0;
        self.hom_start[k]..self.hom_start[k + 1]
    }

    pub fn hom_ids(&self, y: ObjectId, x: ObjectId) -> impl Iterator<Item = MorphismId> {
        self.hom(y, x).map(MorphismId)
    }

    pub fn hom_count(&self, y: ObjectId, x: ObjectId) -> usize {
        self.hom(y, x).len()
    }

    /// Position of `f` inside its hom-set.
    pub fn local_index(&self, f: MorphismId) -> usize {
        let m = self.morphisms[f.0];
        f.0 - self.hom(m.src, m.tgt).start
    }

    /// The morphism `y → x` given by the coset of `g`, which must satisfy `g⁻¹ H_y g ≤ H_x`.
    pub fn morphism_for(&self, y: ObjectId, x: ObjectId, g: usize) -> Option<MorphismId> {
        let rep = self.coset_nf[x.0][g];
        let r = self.hom(y, x);
        self.morphisms[r.clone()]
            .binary_search_by_key(&rep, |m| m.rep)
            .ok()
            .map(|k| MorphismId(r.start + k))
    }

    pub fn identity(&self, x: ObjectId) -> MorphismId {
        self.morphism_for(x, x, self.group.identity()).expect("identity morphism")
    }

    /// `f ∘ g`, where `g: z → y` and `f: y → x`.
    pub fn compose(&self, f: MorphismId, g: MorphismId) -> MorphismId {
        let mf = self.morphisms[f.0];
        let mg = self.morphisms[g.0];
        assert_eq!(mg.tgt, mf.src, "morphisms are not composable");
        let prod = self.group.mul(mg.rep, mf.rep);
        self.morphism_for(mg.src, mf.tgt, prod).expect("composition is closed")
    }

    /// `ȳ ≤ x̄`: some morphism `y → x` exists.
    pub fn leq(&self, y: ObjectId, x: ObjectId) -> bool {
        !self.hom(y, x).is_empty()
    }

    pub fn lt(&self, y: ObjectId, x: ObjectId) -> bool {
        y != x && self.leq(y, x)
    }

    /// Longest strictly increasing chain ending at `x`.
    pub fn object_length(&self, x: ObjectId) -> usize {
        self.lengths()[x.0]
    }

    pub fn lengths(&self) -> Vec<usize> {
        let n = self.objects.len();
        let mut len = vec![0usize; n];
        for x in 0..n {
            for y in 0..x {
                if self.lt(ObjectId(y), ObjectId(x)) {
                    len[x] = len[x].max(len[y] + 1);
                }
            }
        }
        len
    }

    pub fn category_length(&self) -> usize {
        self.lengths().into_iter().max().unwrap_or(0)
    }

    /// Objects with no strictly larger object.
    pub fn maximal_objects(&self) -> Vec<ObjectId> {
        self.object_ids()
            .filter(|&x| !self.object_ids().any(|z| self.lt(x, z)))
            .collect()
    }

    pub fn automorphisms(&self, x: ObjectId) -> Range<usize> {
        self.hom(x, x)
    }

    pub fn aut_order(&self, x: ObjectId) -> usize {
        self.hom(x, x).len()
    }

    /// The object conjugate to `h`, with `g` such that `g⁻¹ h g` is its representative.
    pub fn object_of(&self, h: &Subgroup) -> Option<(ObjectId, usize)> {
        self.objects
            .iter()
            .enumerate()
            .filter(|(_, r)| r.order() == h.order())
            .find_map(|(i, r)| self.group.conjugating_element(h, r).map(|w| (ObjectId(i), w)))
    }

    /// The one-object category of `Aut(x) ≅ N_G(H)/H`, with the matching of automorphisms.
    pub fn aut_category(&self, x: ObjectId) -> AutCategory {
        let h = &self.objects[x.0];
        let (w, points) = self.group.weyl_group(h);
        let w = Arc::new(w);
        let pos: std::collections::HashMap<usize, usize> = points.iter().enumerate().map(|(i, &c)| (c, i)).collect();
        let nf = &self.coset_nf[x.0];
        let cat = OrbitCat::trivial_family(w.clone());
        let to_weyl: Vec<MorphismId> = self
            .hom(x, x)
            .map(|id| {
                let n = self.morphisms[id].rep;
                let img: Vec<usize> = points.iter().map(|&c| pos[&nf[self.group.mul(n, c)]]).collect();
                let p = crate::group::Perm::from_images(&img).expect("bijective");
                let e = w.index_of(&p).expect("image lies in the Weyl group");
                cat.morphism_for(ObjectId(0), ObjectId(0), e).expect("morphism of the regular object")
            })
            .collect();
        let mut from_weyl = vec![MorphismId(usize::MAX); cat.num_morphisms()];
        let start = self.hom(x, x).start;
        for (k, m) in to_weyl.iter().enumerate() {
            from_weyl[m.0] = MorphismId(start + k);
        }
        AutCategory {
            object: x,
            cat: Arc::new(cat),
            to_weyl,
            from_weyl,
        }
    }

    /// A set of morphisms generating the category under composition.
    ///
    /// Automorphism group generators for each object, plus one representative of each
    /// `Aut(x) × Aut(y)` orbit of morphisms `y → x` that do not factor through an object
    /// strictly between `y` and `x`.
    pub fn generating_morphisms(&self) -> &[MorphismId] {
        self.generating.get_or_init(|| {
            let mut gens = Vec::new();
            for x in self.object_ids() {
                let mut reached: BTreeSet<MorphismId> = BTreeSet::from([self.identity(x)]);
                let mut frontier = vec![self.identity(x)];
                for a in self.hom_ids(x, x) {
                    if reached.contains(&a) {
                        continue;
                    }
                    gens.push(a);
                    // close under the new generator
                    frontier.extend(reached.iter().copied());
                    while let Some(b) = frontier.pop() {
                        for &c in gens.iter().filter(|c| self.morphism(**c).src == x && self.morphism(**c).tgt == x) {
                            let d = self.compose(c, b);
                            if reached.insert(d) {
                                frontier.push(d);
                            }
                        }
                    }
                }
            }
            for x in self.object_ids() {
                for y in self.object_ids() {
                    if !self.lt(y, x) {
                        continue;
                    }
                    let mut covered: BTreeSet<MorphismId> = BTreeSet::new();
                    for z in self.object_ids() {
                        if z == x || z == y || !self.lt(y, z) || !self.lt(z, x) {
                            continue;
                        }
                        for f in self.hom_ids(z, x) {
                            for g in self.hom_ids(y, z) {
                                covered.insert(self.compose(f, g));
                            }
                        }
                    }
                    for u in self.hom_ids(y, x) {
                        if covered.contains(&u) {
                            continue;
                        }
                        gens.push(u);
                        for a in self.hom_ids(x, x) {
                            let au = self.compose(a, u);
                            for b in self.hom_ids(y, y) {
                                covered.insert(self.compose(au, b));
                            }
                        }
                    }
                }
            }
            gens
        })
    }

    /// Checks associativity on composable triples, exhaustively up to `budget` triples.
    pub fn check_associativity(&self, budget: usize) -> bool {
        let mut count = 0usize;
        for f in 0..self.morphisms.len() {
            let mf = self.morphisms[f];
            for g in self.hom_ids_into(mf.src) {
                let mg = self.morphisms[g.0];
                for h in self.hom_ids_into(mg.src) {
                    count += 1;
                    if count > budget {
                        return true;
                    }
                    let a = self.compose(self.compose(MorphismId(f), g), h);
                    let b = self.compose(MorphismId(f), self.compose(g, h));
                    if a != b {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// All morphisms with target `x`.
    pub fn hom_ids_into(&self, x: ObjectId) -> impl Iterator<Item = MorphismId> + '_ {
        self.object_ids().flat_map(move |y| self.hom_ids(y, x))
    }
}

/// `Aut(x)` realized as the one-object orbit category of the Weyl group.
#[derive(Clone)]
pub struct AutCategory {
    pub object: ObjectId,
    pub cat: Arc<OrbitCat>,
    /// Automorphism (in hom order) to the matching morphism of `cat`.
    pub to_weyl: Vec<MorphismId>,
    /// Morphism of `cat` to the matching automorphism id of the parent category.
    pub from_weyl: Vec<MorphismId>,
}

impl AutCategory {
    pub fn order(&self) -> usize {
        self.to_weyl.len()
    }

    /// Image in the Weyl group of a subgroup `K` with `H ≤ K ≤ N_G(H)` (or any `K ≤ N_G(H)`).
    pub fn weyl_image(&self, parent: &OrbitCat, k: &Subgroup) -> Subgroup {
        let x = self.object;
        let start = parent.hom(x, x).start;
        let mut elems: Vec<usize> = k
            .elements()
            .iter()
            .map(|&n| {
                let a = parent.morphism_for(x, x, n).expect("element normalizes the object");
                self.cat.morphism(self.to_weyl[a.0 - start]).rep
            })
            .collect();
        elems.sort_unstable();
        elems.dedup();
        self.cat.group().subgroup_from_elements(elems)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s5_family() -> OrbitCat {
        let g = Arc::new(PermGroup::symmetric(5));
        let c4 = g.subgroup_from_cycles(&[&[&[1, 2, 3, 4]]]).unwrap();
        let c2b = g.subgroup_from_cycles(&[&[&[1, 2]]]).unwrap();
        OrbitCat::from_seeds(g, &[c4, c2b])
    }

    #[test]
    fn s5_category_shape() {
        let cat = s5_family();
        assert_eq!(cat.num_objects(), 4);
        assert_eq!(cat.category_length(), 2);
        assert!(cat.check_associativity(usize::MAX));
        let g = cat.group();
        let c2b = g.subgroup_from_cycles(&[&[&[1, 2]]]).unwrap();
        let c2a = g.subgroup_from_cycles(&[&[&[1, 2], &[3, 4]]]).unwrap();
        let (b, _) = cat.object_of(&c2b).unwrap();
        let (a, _) = cat.object_of(&c2a).unwrap();
        assert_eq!(cat.aut_order(b), 6);
        assert_eq!(cat.hom_count(a, b), 0);
    }

    #[test]
    fn generators_generate() {
        let cat = s5_family();
        let gens = cat.generating_morphisms().to_vec();
        let mut reached: BTreeSet<MorphismId> = cat.object_ids().map(|x| cat.identity(x)).collect();
        let mut frontier: Vec<MorphismId> = reached.iter().copied().collect();
        while let Some(f) = frontier.pop() {
            for &g in &gens {
                if cat.morphism(g).src == cat.morphism(f).tgt {
                    let h = cat.compose(g, f);
                    if reached.insert(h) {
                        frontier.push(h);
                    }
                }
            }
        }
        assert_eq!(reached.len(), cat.num_morphisms());
        assert!(gens.len() < 20);
    }

    #[test]
    fn aut_category_matches_composition() {
        let cat = s5_family();
        for x in cat.object_ids() {
            let ac = cat.aut_category(x);
            assert_eq!(ac.order(), cat.aut_order(x));
            for f in cat.hom_ids(x, x) {
                for g in cat.hom_ids(x, x) {
                    let fg = cat.compose(f, g);
                    let lf = ac.to_weyl[cat.local_index(f)];
                    let lg = ac.to_weyl[cat.local_index(g)];
                    assert_eq!(ac.to_weyl[cat.local_index(fg)], ac.cat.compose(lf, lg));
                }
            }
        }
    }
}
