//! Registered verification suites. Every check records an anchor describing what it
//! reproduces, the expected and measured values, and whether they agree.

use std::sync::Arc;

use clap::ValueEnum;
use orbikit::complex::{join_tensor, ChainComplex, DimFunction, Summand};
use orbikit::functors::{fixed_point_decomposition, fixed_point_orbits, restriction_functor, SubgroupPair};
use orbikit::io::object_names;
use orbikit::projective::{is_projective, k0_class, K0Free, K0Ring};
use orbikit::random::random_free_complex;
use orbikit::resolution::{finite_projdim_obstruction, ProjdimVerdict};
use orbikit::simplicial::{octahedron_complex, octahedron_objects};
use orbikit::{Family, ObjectId, OrbitCat, Perm, PermGroup, RGammaModule, Rational, Subgroup, F2};
use serde_json::{json, Value};

use crate::commands::{k0_json, Context, Outcome};

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Suite {
    /// Octahedron, its join and the resulting dimension function for `S_5` at `p = 2`.
    #[value(name = "s5-p2", alias = "paper-s5-p2")]
    S5P2,
    /// Fixed-point formula against brute-force orbits on `S_4` and `S_5`.
    LemmaFixedPoints,
    /// Restriction of `R[S_5/(C_2×C_3)]` to `S_4` and its projectivity obstruction.
    ExampleRestriction,
    /// `1 - σ(C ⋇ D) = (1 - σ(C))(1 - σ(D))` on random free complexes.
    JoinEuler,
}

struct Checks(Vec<Value>);

impl Checks {
    fn add(&mut self, name: &str, anchor: &str, expected: Value, measured: Value) {
        let pass = expected == measured;
        self.0.push(json!({ "check": name, "anchor": anchor, "expected": expected, "measured": measured, "pass": pass }));
    }

    fn finish(self, extra: Value) -> Outcome {
        let ok = self.0.iter().all(|c| c["pass"] == Value::Bool(true));
        Ok((json!({ "checks": self.0, "passed": ok, "details": extra }), ok))
    }
}

pub fn run(suite: Suite, ctx: &mut Context) -> Outcome {
    match suite {
        Suite::S5P2 => s5_p2(),
        Suite::LemmaFixedPoints => fixed_points(),
        Suite::ExampleRestriction => restriction(),
        Suite::JoinEuler => join_euler(ctx),
    }
}

fn perm(n: usize, cycles: &[&[usize]]) -> Perm {
    let c: Vec<Vec<usize>> = cycles.iter().map(|c| c.to_vec()).collect();
    Perm::from_cycles(n, &c).expect("valid cycles")
}

fn subgroup(g: &PermGroup, gens: &[&[&[usize]]]) -> Subgroup {
    let perms: Vec<Perm> = gens.iter().map(|c| perm(g.degree(), c)).collect();
    g.subgroup(&perms).expect("subgroup of g")
}

/// Cyclic 2-subgroups `1, C_2^A, C_2^B, C_4` (and `C_3` when asked) of `S_n`.
fn cyclic_two_family(g: &PermGroup, with_c3: bool) -> Family {
    let mut seeds = vec![
        subgroup(g, &[&[&[1, 2], &[3, 4]]]),
        subgroup(g, &[&[&[1, 2]]]),
        subgroup(g, &[&[&[1, 2, 3, 4]]]),
    ];
    if with_c3 {
        seeds.push(subgroup(g, &[&[&[1, 2, 3]]]));
    }
    Family::generate(g, &seeds)
}

fn summand_names(c: &ChainComplex<i64>, i: usize, names: &[String]) -> Vec<String> {
    let mut out: Vec<String> = c.decomposition().expect("recorded")[i]
        .iter()
        .map(|s| match s {
            Summand::Free(x) => format!("R[G/{}]", names[x.0]),
            Summand::Permutation(h) => format!("R[G/C{}]", h.order()),
        })
        .collect();
    out.sort();
    out
}

fn s5_p2() -> Outcome {
    let mut checks = Checks(Vec::new());
    let g5 = Arc::new(PermGroup::symmetric(5));
    let cat5 = OrbitCat::new(g5.clone(), cyclic_two_family(&g5, false));
    checks.add(
        "category-length",
        "l(Γ) for S_5 with the cyclic 2-subgroups",
        json!([4, 2]),
        json!([cat5.num_objects(), cat5.category_length()]),
    );

    let (x, c) = octahedron_complex::<i64>();
    let cat = c.cat().clone();
    let names = object_names(&cat);
    let [one, c2a, c2b, c4] = octahedron_objects(&cat);
    let order = [one, c2a, c2b, c4];
    checks.add("f-vector", "subdivided octahedron", json!([26, 72, 48]), json!(x.f_vector()));
    checks.add(
        "chain-terms",
        "2R[H/1] → 3R[H/1] → R[H/C4] ⊕ R[H/C2B] ⊕ R[H/C3]",
        json!([["R[G/C2B]", "R[G/C3]", "R[G/C4]"], ["R[G/1]", "R[G/1]", "R[G/1]"], ["R[G/1]", "R[G/1]"]]),
        json!((0..3).map(|i| summand_names(&c, i, &names)).collect::<Vec<_>>()),
    );
    let h = c.homology()?;
    let ranks = |x: ObjectId| -> Vec<usize> { (0..3).map(|i| h.at(x, i).rank).collect() };
    let torsion_free = cat.object_ids().all(|x| (0..3).all(|i| h.at(x, i).torsion.is_empty()));
    checks.add(
        "fixed-point-homology",
        "X^H is S^2 at 1 and S^0 at C2A, C2B, C4",
        json!([[1, 0, 1], [2, 0, 0], [2, 0, 0], [2, 0, 0], true]),
        json!([ranks(one), ranks(c2a), ranks(c2b), ranks(c4), torsion_free]),
    );

    // H_0 as Aut-modules: R, R[D_8/C_4], R[E/C_2^B], R[D_8/C_4].
    let f2 = c.map_scalars(|v| F2::new(*v));
    let (h0, _, _) = f2.homology_module(0);
    let g = cat.group();
    let mut rng = <rand_chacha::ChaCha8Rng as rand_chacha::rand_core::SeedableRng>::seed_from_u64(0);
    let tree: Vec<bool> = order
        .iter()
        .map(|&x| {
            let hx = cat.subgroup(x);
            let k = if x == one {
                g.whole()
            } else if x == c2a {
                let n = g.normalizer(hx);
                g.subgroups_of(&n)
                    .into_iter()
                    .find(|k| k.order() == 4 && g.is_subgroup_of(hx, k) && k.elements().iter().any(|&e| g.element(e).order() == 4))
                    .expect("a cyclic 4-subgroup over C2A")
            } else {
                hx.clone()
            };
            let aut = cat.aut_category(x);
            let want = RGammaModule::<F2>::permutation_module(aut.cat.clone(), &aut.weyl_image(&cat, &k));
            restriction_functor(&h0, &aut).is_isomorphic(&want, &mut rng)
        })
        .collect();
    checks.add(
        "h0-tree",
        "H_0 = (R, R[D8/C4], R[E/C2B], R[D8/C4]) on (1, C2A, C2B, C4)",
        json!([[1, 2, 2, 2], [true, true, true, true]]),
        json!([order.iter().map(|&x| h0.dim(x)).collect::<Vec<_>>(), tree]),
    );

    let n_oct = DimFunction(cat.object_ids().map(|x| if x == one { 2 } else { 0 }).collect());
    checks.add(
        "octahedron-dimension-function",
        "n̄ = (2,0,0,0), monotone but not strictly monotone",
        json!([true, true, false]),
        json!([c.sphere_check(&n_oct)?.holds(), n_oct.is_monotone(&cat), n_oct.is_strictly_monotone(&cat)]),
    );

    let (k, other) = c.euler_free()?;
    let mut want = K0Free::zero(cat.num_objects());
    want.coeffs[one.0] = -1;
    want.coeffs[c2b.0] = 1;
    want.coeffs[c4.0] = 1;
    checks.add(
        "euler-free-part",
        "σ = [R[H/C4]] + [R[H/C2B]] - 3[R[H/1]] + 2[R[H/1]] with the C3 term flagged",
        json!([k0_json(&names, &want), [[0, 3]]]),
        json!([k0_json(&names, &k), other.iter().map(|(i, h)| (i, h.order())).collect::<Vec<_>>()]),
    );

    let join = join_tensor(&f2, &f2)?;
    let n = join.hdim_function()?;
    let table: Vec<i64> = order.iter().map(|x| n.0[x.0]).collect();
    checks.add(
        "join-dimension-function",
        "two-fold join: n̄(1) = 5, n̄(C2A) = n̄(C2B) = n̄(C4) = 1",
        json!([5, 1, 1, 1]),
        json!(table),
    );
    checks.add(
        "join-oriented-sphere",
        "(k+1) even: H_k(C(Q)) = R with trivial Weyl action",
        json!([true, true]),
        json!([join.sphere_check(&n)?.holds(), join.orientation_check(&n)?.holds()]),
    );
    checks.add(
        "join-monotone",
        "n̄ monotone, not strictly monotone",
        json!([true, false]),
        json!([n.is_monotone(&cat), n.is_strictly_monotone(&cat)]),
    );
    let table: serde_json::Map<String, Value> = order.iter().map(|x| (names[x.0].clone(), Value::from(n.0[x.0]))).collect();
    checks.finish(json!({ "dimension_function": table }))
}

/// Formula summands versus brute-force `N_G(H)`-orbits on `(G/K)^H`: same count, each
/// witness coset fixed by `H`, distinct orbits, matching sizes and exact stabilizers.
fn formula_matches(g: &PermGroup, h: &Subgroup, k: &Subgroup) -> bool {
    let f = fixed_point_decomposition(g, h, k);
    let o = fixed_point_orbits(g, h, k);
    let n = g.normalizer(h);
    let nf = g.left_coset_normal_forms(k);
    let orbit_of = |c: usize| o.iter().position(|&(d, _)| n.elements().iter().any(|&y| nf[g.mul(y, d)] == c));
    let mut hit = vec![false; o.len()];
    f.len() == o.len()
        && f.iter().all(|s| {
            let c = nf[s.witness];
            let fixed = h.elements().iter().all(|&e| nf[g.mul(e, c)] == c);
            let stab: Vec<usize> = n.elements().iter().copied().filter(|&y| nf[g.mul(y, c)] == c).collect();
            match orbit_of(c) {
                Some(i) if fixed && !hit[i] => {
                    hit[i] = true;
                    s.size == n.order() / o[i].1.order() && g.subgroup_from_elements(stab) == s.stabilizer
                }
                _ => false,
            }
        })
}

fn fixed_points() -> Outcome {
    let mut checks = Checks(Vec::new());
    let s4 = PermGroup::symmetric(4);
    let s5 = PermGroup::symmetric(5);
    let cases = [
        ("s4-2-subgroups", "all 2-subgroups of S_4", &s4, Family::p_subgroups(&s4, &[2])),
        ("s5-cyclic-2-and-c3", "{1, C2A, C2B, C4} ∪ {C3} in S_5", &s5, cyclic_two_family(&s5, true)),
    ];
    for (name, anchor, g, fam) in cases {
        let reps = fam.class_reps();
        let pairs = reps.len() * reps.len();
        let good = reps.iter().flat_map(|h| reps.iter().map(move |k| (h, k))).filter(|(h, k)| formula_matches(g, h, k)).count();
        checks.add(name, anchor, json!(pairs), json!(good));
    }
    checks.finish(Value::Null)
}

fn restriction() -> Outcome {
    let mut checks = Checks(Vec::new());
    let g = Arc::new(PermGroup::symmetric(5));
    let big = Arc::new(OrbitCat::new(g.clone(), Family::p_subgroups(&g, &[2, 3])));
    let k = subgroup(&g, &[&[&[1, 2]], &[&[3, 4, 5]]]);
    let h = subgroup(&g, &[&[&[1, 2, 3, 4]], &[&[1, 2]]]);
    checks.add(
        "double-cosets",
        "two representatives of S_4 \\ S_5 / (C2×C3)",
        json!(2),
        json!(g.double_cosets(&h, &k).len()),
    );
    let pair = SubgroupPair::new(big.clone(), &h)?;
    let small = pair.small();
    let sg = small.group();
    let mut rng = <rand_chacha::ChaCha8Rng as rand_chacha::rand_core::SeedableRng>::seed_from_u64(0);
    let f2_iso = {
        let m = RGammaModule::<F2>::permutation_module(big.clone(), &k);
        let r = pair.restrict(&m);
        let want = RGammaModule::<F2>::permutation_module(small.clone(), &subgroup(sg, &[&[&[1, 2]]]))
            .direct_sum(&RGammaModule::permutation_module(small.clone(), &subgroup(sg, &[&[&[1, 2, 3]]])));
        (r.dims() == want.dims(), r.is_isomorphic(&want, &mut rng))
    };
    let q_iso = {
        let m = RGammaModule::<Rational>::permutation_module(big.clone(), &k);
        let r = pair.restrict(&m);
        let want = RGammaModule::<Rational>::permutation_module(small.clone(), &subgroup(sg, &[&[&[1, 2]]]))
            .direct_sum(&RGammaModule::permutation_module(small.clone(), &subgroup(sg, &[&[&[1, 2, 3]]])));
        (r.dims() == want.dims(), r.is_isomorphic(&want, &mut rng))
    };
    checks.add(
        "restriction-decomposition",
        "res R[G/(C2×C3)] = R[H/C2] ⊕ R[H/<(123)>] over F2 and Q",
        json!([[true, true], [true, true]]),
        json!([f2_iso, q_iso]),
    );
    let m = RGammaModule::<F2>::permutation_module(big.clone(), &k);
    let c3 = big.object_of(&subgroup(&g, &[&[&[1, 2, 3]]])).expect("C3 in the family").0;
    let verdict = finite_projdim_obstruction(&m, 2);
    let names = object_names(&big);
    let measured = match verdict {
        ProjdimVerdict::ObstructedAt { object } => json!({ "obstructed_at": names[object.0] }),
        other => serde_json::to_value(other)?,
    };
    checks.add(
        "obstruction",
        "M has no finite projective resolution over F2: M(C3) is not projective",
        json!({ "obstructed_at": names[c3.0] }),
        measured,
    );
    let sylow = g.sylow(2);
    let to_sylow = SubgroupPair::new(big.clone(), &sylow)?;
    checks.add(
        "sylow-restriction-projective",
        "the restriction of M to a Sylow 2-subgroup is projective",
        json!(true),
        json!(is_projective(&to_sylow.restrict(&m)).is_some()),
    );
    checks.finish(Value::Null)
}

fn join_euler(ctx: &mut Context) -> Outcome {
    let mut checks = Checks(Vec::new());
    let g = Arc::new(PermGroup::symmetric(4));
    let cat = Arc::new(OrbitCat::new(g.clone(), Family::p_subgroups(&g, &[2])));
    let ring = K0Ring::new(&cat);
    let one = ring.one();
    let mut failures = Vec::new();
    let trials = 50;
    for t in 0..trials {
        let c = random_free_complex::<F2, _>(&cat, &mut ctx.rng, 2);
        let d = random_free_complex::<F2, _>(&cat, &mut ctx.rng, 2);
        let j = join_tensor(&c, &d)?;
        let mut sigma = K0Free::zero(cat.num_objects());
        for (i, m) in j.modules().iter().enumerate() {
            let k = k0_class(m)?;
            sigma = if i % 2 == 0 { &sigma + &k } else { &sigma - &k };
        }
        let lhs = &one - &sigma;
        let rhs = ring.multiply(&(&one - &c.euler_class()?), &(&one - &d.euler_class()?));
        if lhs != rhs {
            failures.push(t);
        }
    }
    checks.add(
        "join-formula",
        "σ(C⋇D) = σ(C) + σ(D) - σ(C)σ(D) with σ(C⋇D) read off the join terms",
        json!({ "trials": trials, "failures": [] }),
        json!({ "trials": trials, "failures": failures }),
    );
    checks.finish(Value::Null)
}
