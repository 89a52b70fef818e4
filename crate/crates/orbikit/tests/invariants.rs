//! Property tests for structural invariants, checked against brute-force oracles.

mod common;

use std::collections::BTreeSet;
use std::sync::Arc;

use orbikit::complex::ChainComplex;
use orbikit::functors::SubgroupPair;
use orbikit::random::{random_free_complex, random_module, random_object};
use orbikit::resolution::{coresolution, e_resolution, ext_groups, minimal_free_resolution};
use orbikit::simplicial::{gcw_chain_complex, GSimplicialComplex, StabilizerPolicy};
use orbikit::{Family, Field, ModuleHom, OrbitCat, PermGroup, RGammaModule, Rational, F2, F3};
use num_traits::Zero;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::*;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn groups() -> Vec<Arc<PermGroup>> {
    vec![symmetric(3), symmetric(4), symmetric(5)]
}

fn categories() -> Vec<Arc<OrbitCat>> {
    let s5 = symmetric(5);
    vec![
        full_cat(symmetric(3)),
        p_cat(4, &[2]),
        full_cat(symmetric(4)),
        Arc::new(OrbitCat::new(s5.clone(), Family::p_subgroups(&s5, &[2, 3]))),
    ]
}

/// The first few (small) categories, for module-level properties.
fn small_categories() -> Vec<Arc<OrbitCat>> {
    categories().into_iter().take(3).collect()
}

fn random_subgroup(g: &PermGroup, r: &mut ChaCha8Rng) -> orbikit::Subgroup {
    let gens: Vec<usize> = (0..r.gen_range(1..=2)).map(|_| r.gen_range(0..g.order())).collect();
    g.generate(&gens)
}

fn random_hom<F: Field>(m: &RGammaModule<F>, n: &RGammaModule<F>, r: &mut ChaCha8Rng) -> ModuleHom<F> {
    let mut phi = ModuleHom::zero(m, n);
    for b in m.hom_basis(n) {
        phi = phi.add(&b.scale(&F::from_i64(r.gen_range(-2..=2))));
    }
    phi
}

/// A random `S_3`-simplicial complex on two copies of `{1, 2, 3}`, subdivided so that
/// stabilizers fix their simplices pointwise.
fn random_s3_space(r: &mut ChaCha8Rng) -> GSimplicialComplex {
    let g = symmetric(3);
    let on = |p: &orbikit::Perm| -> Vec<usize> { (0..6).map(|v| 3 * (v / 3) + p.apply(v % 3)).collect() };
    let mut simplices = BTreeSet::new();
    for _ in 0..r.gen_range(1..=4) {
        let k = r.gen_range(1..=3);
        let s: Vec<usize> = (0..k).map(|_| r.gen_range(0..6)).collect();
        for e in g.elements() {
            let a = on(e);
            let mut t: Vec<usize> = s.iter().map(|&v| a[v]).collect();
            t.sort_unstable();
            t.dedup();
            simplices.insert(t);
        }
    }
    let acts: Vec<Vec<usize>> = g.generators().iter().map(on).collect();
    let simplices: Vec<Vec<usize>> = simplices.into_iter().collect();
    GSimplicialComplex::new(g, 6, &acts, &simplices).expect("invariant complex").barycentric_subdivision()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn normalizer_and_centralizer_match_brute_force(which in 0usize..3, seed: u64) {
        let g = &groups()[which];
        let h = random_subgroup(g, &mut rng(seed));
        prop_assert_eq!(g.normalizer(&h).elements().to_vec(), normalizer(g, h.elements()));
        let cent: Vec<usize> = (0..g.order())
            .filter(|&x| h.elements().iter().all(|&e| g.mul(x, e) == g.mul(e, x)))
            .collect();
        prop_assert_eq!(g.centralizer(&h).elements().to_vec(), cent);
    }

    #[test]
    fn double_cosets_partition_the_group(which in 0usize..3, seed: u64) {
        let g = &groups()[which];
        let mut r = rng(seed);
        let (h, k) = (random_subgroup(g, &mut r), random_subgroup(g, &mut r));
        let mut covered = BTreeSet::new();
        let mut total = 0;
        for d in g.double_cosets(&h, &k) {
            let set: BTreeSet<usize> = h.elements().iter()
                .flat_map(|&a| k.elements().iter().map(move |&b| (a, b)))
                .map(|(a, b)| g.mul(g.mul(a, d), b))
                .collect();
            prop_assert_eq!(g.double_coset_size(&h, d, &k), set.len());
            prop_assert!(covered.is_disjoint(&set));
            total += set.len();
            covered.extend(set);
        }
        prop_assert_eq!(total, g.order());
    }

    #[test]
    fn weyl_group_order(which in 0usize..3, seed: u64) {
        let g = &groups()[which];
        let h = random_subgroup(g, &mut rng(seed));
        let (w, _) = g.weyl_group(&h);
        prop_assert_eq!(w.order() * h.order(), normalizer(g, h.elements()).len());
    }

    #[test]
    fn random_modules_are_functors(which in 0usize..3, seed: u64) {
        let cat = &small_categories()[which];
        let mut r = rng(seed);
        let m = random_module::<F3, _>(cat, &mut r);
        prop_assert!(m.check_functorial().is_ok());
        for f in cat.morphism_ids().step_by(7) {
            let mf = cat.morphism(f);
            for g in cat.hom_ids_into(mf.src).step_by(5) {
                let fg = cat.compose(f, g);
                prop_assert_eq!(m.action(fg).to_dense(), m.action(g).mul(m.action(f)).to_dense());
            }
        }
    }

    #[test]
    fn yoneda(which in 0usize..3, seed: u64) {
        let cat = &small_categories()[which];
        let mut r = rng(seed);
        let m = random_module::<F2, _>(cat, &mut r);
        let x = random_object(cat, &mut r);
        let free = RGammaModule::free_module(cat.clone(), x);
        prop_assert_eq!(hom_dim(&free, &m), m.dim(x));
        prop_assert_eq!(free.hom_dim(&m), m.dim(x));
    }

    #[test]
    fn restriction_and_induction_are_exact(seed: u64) {
        let cat = p_cat(4, &[2]);
        let g = cat.group();
        let mut r = rng(seed);
        let h = cat.family().class_reps()[r.gen_range(0..cat.num_objects())].clone();
        let pair = SubgroupPair::new(cat.clone(), &h).unwrap();
        let (m, n) = (random_module::<F2, _>(&cat, &mut r), random_module::<F2, _>(&cat, &mut r));
        let phi = random_hom(&m, &n, &mut r);
        let rphi = pair.restrict_hom(&phi);
        let (rm, rn) = (pair.restrict(&m), pair.restrict(&n));
        let dims = |x: &RGammaModule<F2>| x.dims().to_vec();
        prop_assert_eq!(dims(&pair.restrict(&m.kernel_of(&phi).0)), dims(&rm.kernel_of(&rphi).0));
        prop_assert_eq!(dims(&pair.restrict(&n.cokernel_of(&phi).0)), dims(&rn.cokernel_of(&rphi).0));
        let small = pair.small();
        let (a, b) = (random_module::<F2, _>(small, &mut r), random_module::<F2, _>(small, &mut r));
        let psi = random_hom(&a, &b, &mut r);
        let ipsi = pair.induce_hom(&psi);
        let (ia, ib) = (pair.induce(&a), pair.induce(&b));
        prop_assert_eq!(dims(&pair.induce(&a.kernel_of(&psi).0)), dims(&ia.kernel_of(&ipsi).0));
        prop_assert_eq!(dims(&pair.induce(&b.cokernel_of(&psi).0)), dims(&ib.cokernel_of(&ipsi).0));
        prop_assert!(g.order() % h.order() == 0);
    }

    #[test]
    fn ext_zero_is_hom(which in 0usize..3, seed: u64) {
        let cat = &small_categories()[which];
        let mut r = rng(seed);
        let (m, n) = (random_module::<Rational, _>(cat, &mut r), random_module::<Rational, _>(cat, &mut r));
        prop_assert_eq!(ext_groups(&m, &n, 0), vec![hom_dim(&m, &n)]);
    }

    #[test]
    fn coresolutions_have_zero_euler_characteristic(which in 0usize..3, seed: u64) {
        let cat = &small_categories()[which];
        let m = random_module::<F2, _>(cat, &mut rng(seed));
        let cr = coresolution(&m);
        prop_assert!(cr.check_exact().is_ok());
        prop_assert!(cr.euler_dims().iter().all(|&e| e == 0));
    }

    #[test]
    fn resolutions_are_deterministic(which in 0usize..3, seed: u64) {
        let cat = &small_categories()[which];
        let m1 = random_module::<F3, _>(cat, &mut rng(seed));
        let m2 = random_module::<F3, _>(cat, &mut rng(seed));
        prop_assert!(m1.actions() == m2.actions());
        let (e1, e2) = (e_resolution(&m1), e_resolution(&m2));
        prop_assert!(e1.maps.iter().zip(&e2.maps).all(|(a, b)| a.components() == b.components()));
        let ((f1, g1), (f2, g2)) = (minimal_free_resolution(&m1, 3), minimal_free_resolution(&m2, 3));
        prop_assert_eq!(g1, g2);
        prop_assert!(f1.maps.iter().zip(&f2.maps).all(|(a, b)| a.components() == b.components()));
    }

    #[test]
    fn free_complexes_square_to_zero_and_keep_euler_characteristic(which in 0usize..3, seed: u64) {
        let cat = &small_categories()[which];
        let c = random_free_complex::<F3, _>(cat, &mut rng(seed), 3);
        let b = betti(&c);
        for x in cat.object_ids() {
            for i in 1..c.top_degree() {
                let dd = c.boundary_at(i, x).mul(&c.boundary_at(i + 1, x));
                prop_assert!(dd.to_dense().iter().flatten().all(|v| *v == F3::new(0)));
            }
            let chi_c: i64 = (0..=c.top_degree()).map(|i| (-1i64).pow(i as u32) * c.module(i).dim(x) as i64).sum();
            let chi_h: i64 = b[x.0].iter().enumerate().map(|(i, &v)| (-1i64).pow(i as u32) * v as i64).sum();
            prop_assert_eq!(chi_c, chi_h);
        }
    }

    #[test]
    fn euler_class_is_additive(seed: u64) {
        let cat = p_cat(4, &[2]);
        let mut r = rng(seed);
        let c = random_free_complex::<F2, _>(&cat, &mut r, 3);
        let d = random_free_complex::<F2, _>(&cat, &mut r, 3);
        let sum = c.direct_sum(&d).euler_class().unwrap();
        let parts = &c.euler_class().unwrap() + &d.euler_class().unwrap();
        prop_assert_eq!(sum, parts);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn families_regenerate_from_class_representatives(which in 0usize..4) {
        let cat = &categories()[which];
        let g = cat.group();
        let fam = cat.family();
        let again = Family::generate(g, fam.class_reps());
        prop_assert_eq!(again.class_reps(), fam.class_reps());
        for h in fam.members(g) {
            for k in g.subgroups_of(h) {
                prop_assert!(fam.contains(g, &k));
            }
            prop_assert!((0..g.order()).all(|x| fam.contains(g, &g.conjugate(h, x))));
        }
    }

    #[test]
    fn category_is_ei_with_free_automorphism_orbits(which in 0usize..4) {
        let cat = &categories()[which];
        let marks = mark_table(cat);
        for y in cat.object_ids() {
            prop_assert_eq!(cat.hom_count(y, y), cat.aut_order(y));
            for x in cat.object_ids() {
                prop_assert_eq!(cat.hom_count(y, x), marks[y.0][x.0]);
                if cat.leq(y, x) && cat.leq(x, y) {
                    prop_assert_eq!(x, y);
                }
                for z in cat.object_ids() {
                    if cat.leq(z, y) && cat.leq(y, x) {
                        prop_assert!(cat.leq(z, x));
                    }
                }
                // automorphisms of the target act freely by postcomposition
                for f in cat.hom_ids(y, x) {
                    let images: BTreeSet<_> = cat.hom_ids(x, x).map(|a| cat.compose(a, f)).collect();
                    prop_assert_eq!(images.len(), cat.aut_order(x));
                }
            }
        }
    }

    #[test]
    fn bredon_complexes_of_random_spaces(seed: u64) {
        let x = random_s3_space(&mut rng(seed));
        let cat = full_cat(x.group().clone());
        let c = gcw_chain_complex::<i64>(&x, &cat, StabilizerPolicy::Strict).unwrap();
        // C_d(H) counts the H-fixed d-simplices
        for y in cat.object_ids() {
            let fixed = x.fixed_simplices(cat.subgroup(y));
            for d in 0..=c.top_degree() {
                let brute = x.simplices(d).iter().filter(|s| {
                    cat.subgroup(y).elements().iter().all(|&e| {
                        let a = x.vertex_action(e);
                        s.iter().all(|&v| a[v] == v)
                    })
                }).count();
                prop_assert_eq!(c.module(d).dim(y), brute);
                prop_assert_eq!(fixed.get(d).map_or(0, Vec::len), brute);
            }
        }
        // field ranks never undercount the rational ranks
        let h = c.homology().unwrap();
        let to_f2: ChainComplex<F2> = c.map_scalars(|v| F2::new(*v));
        let to_f3: ChainComplex<F3> = c.map_scalars(|v| F3::new(*v));
        let (b2, b3) = (betti(&to_f2), betti(&to_f3));
        for y in cat.object_ids() {
            for (i, g) in h.groups[y.0].iter().enumerate() {
                prop_assert!(b2[y.0][i] >= g.rank && b3[y.0][i] >= g.rank);
                let p_torsion = |p: u64| g.torsion.iter().filter(|t| (*t % p).is_zero()).count();
                let below = if i > 0 { h.groups[y.0][i - 1].torsion.iter().filter(|t| (*t % 2u64).is_zero()).count() } else { 0 };
                prop_assert_eq!(b2[y.0][i], g.rank + p_torsion(2) + below);
            }
        }
    }
}
