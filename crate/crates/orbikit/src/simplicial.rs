//! Finite `G`-simplicial complexes and their Bredon chain complexes over `Or_F(G)`.

use std::collections::{HashMap, VecDeque};
use std::sync::Arc;

use crate::category::{ObjectId, OrbitCat};
use crate::complex::{ChainComplex, Summand};
use crate::error::{ComplexError, GroupError, ModuleError};
use crate::group::{Family, Perm, PermGroup, Subgroup};
use crate::matrix::Matrix;
use crate::module::{ModuleHom, RGammaModule};
use crate::scalar::Scalar;

/// A simplex as a sorted list of vertices.
pub type Simplex = Vec<usize>;

/// What to do with a simplex whose stabilizer lies outside the family.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum StabilizerPolicy {
    /// Reject, naming the simplex.
    #[default]
    Strict,
    /// Keep the permutation summand and flag it in the decomposition.
    Permissive,
}

/// A simplicial complex with a simplicial `G`-action on its vertices.
#[derive(Clone, Debug)]
pub struct GSimplicialComplex {
    group: Arc<PermGroup>,
    num_vertices: usize,
    /// Vertex permutation of every group element.
    action: Vec<Vec<usize>>,
    /// Simplices by dimension, each list sorted.
    simplices: Vec<Vec<Simplex>>,
    index: Vec<HashMap<Simplex, usize>>,
}

fn sort_with_parity(mut v: Vec<usize>) -> (Vec<usize>, bool) {
    let mut odd = false;
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            v.swap(j - 1, j);
            odd = !odd;
            j -= 1;
        }
    }
    (v, odd)
}

impl GSimplicialComplex {
    /// Builds from the vertex permutations of the group generators (in `group.generators()`
    /// order) and a list of simplices, closing downward.
    pub fn new(
        group: Arc<PermGroup>,
        num_vertices: usize,
        generator_actions: &[Vec<usize>],
        simplices: &[Simplex],
    ) -> Result<Self, ComplexError> {
        let gens = group.generators();
        if generator_actions.len() != gens.len() {
            return Err(ComplexError::Precondition(format!(
                "expected {} generator actions, got {}",
                gens.len(),
                generator_actions.len()
            )));
        }
        for a in generator_actions {
            Perm::from_images(a).map_err(|_| ModuleError::Group(GroupError::NotBijective(a.clone())))?;
            if a.len() != num_vertices {
                return Err(ComplexError::Precondition("generator action has the wrong length".into()));
            }
        }
        let gen_idx: Vec<usize> = gens.iter().map(|p| group.index_of(p).expect("generator")).collect();
        let mut action: Vec<Option<Vec<usize>>> = vec![None; group.order()];
        action[group.identity()] = Some((0..num_vertices).collect());
        let mut queue = VecDeque::from([group.identity()]);
        while let Some(e) = queue.pop_front() {
            let ae = action[e].clone().expect("visited");
            for (&s, act_s) in gen_idx.iter().zip(generator_actions) {
                let y = group.mul(s, e);
                let ay: Vec<usize> = ae.iter().map(|&v| act_s[v]).collect();
                match &action[y] {
                    Some(prev) if *prev != ay => {
                        return Err(ComplexError::Precondition("vertex action is not a homomorphism".into()))
                    }
                    Some(_) => {}
                    None => {
                        action[y] = Some(ay);
                        queue.push_back(y);
                    }
                }
            }
        }
        let action: Vec<Vec<usize>> = action.into_iter().map(|a| a.expect("group generated")).collect();
        let mut x = GSimplicialComplex {
            group,
            num_vertices,
            action,
            simplices: Vec::new(),
            index: Vec::new(),
        };
        x.set_simplices(simplices)?;
        Ok(x)
    }

    fn set_simplices(&mut self, maximal: &[Simplex]) -> Result<(), ComplexError> {
        let mut by_dim: Vec<std::collections::BTreeSet<Simplex>> = Vec::new();
        for s in maximal {
            let mut s = s.clone();
            s.sort_unstable();
            s.dedup();
            if s.is_empty() {
                continue;
            }
            if let Some(&v) = s.iter().find(|&&v| v >= self.num_vertices) {
                return Err(ComplexError::Precondition(format!("vertex {v} out of range")));
            }
            // all nonempty subsets
            let k = s.len();
            for mask in 1u64..(1u64 << k) {
                let face: Simplex = (0..k).filter(|i| mask >> i & 1 == 1).map(|i| s[i]).collect();
                let d = face.len() - 1;
                if by_dim.len() <= d {
                    by_dim.resize_with(d + 1, Default::default);
                }
                by_dim[d].insert(face);
            }
        }
        for v in 0..self.num_vertices {
            if by_dim.is_empty() {
                by_dim.push(Default::default());
            }
            by_dim[0].insert(vec![v]);
        }
        self.simplices = by_dim.into_iter().map(|s| s.into_iter().collect()).collect();
        self.index = self
            .simplices
            .iter()
            .map(|l| l.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect())
            .collect();
        for (d, list) in self.simplices.iter().enumerate() {
            for s in list {
                for a in &self.action {
                    let img = self.image(a, s);
                    if !self.index[d].contains_key(&img) {
                        return Err(ComplexError::Precondition(format!("simplex {s:?} is not mapped to a simplex")));
                    }
                }
            }
        }
        Ok(())
    }

    fn image(&self, a: &[usize], s: &[usize]) -> Simplex {
        let mut t: Simplex = s.iter().map(|&v| a[v]).collect();
        t.sort_unstable();
        t
    }

    pub fn group(&self) -> &Arc<PermGroup> {
        &self.group
    }

    pub fn num_vertices(&self) -> usize {
        self.num_vertices
    }

    pub fn dimension(&self) -> usize {
        self.simplices.len().saturating_sub(1)
    }

    pub fn simplices(&self, d: usize) -> &[Simplex] {
        self.simplices.get(d).map_or(&[], Vec::as_slice)
    }

    /// Number of simplices per dimension.
    pub fn f_vector(&self) -> Vec<usize> {
        self.simplices.iter().map(Vec::len).collect()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.f_vector()
            .iter()
            .enumerate()
            .map(|(d, &n)| if d % 2 == 0 { n as i64 } else { -(n as i64) })
            .sum()
    }

    /// Vertex permutation of a group element.
    pub fn vertex_action(&self, g: usize) -> &[usize] {
        &self.action[g]
    }

    /// Vertex permutations of the group generators.
    pub fn generator_actions(&self) -> Vec<Vec<usize>> {
        self.group
            .generators()
            .iter()
            .map(|p| self.action[self.group.index_of(p).expect("generator")].clone())
            .collect()
    }

    /// Simplices not contained in a larger one.
    pub fn maximal_simplices(&self) -> Vec<Simplex> {
        let mut out = Vec::new();
        for (d, list) in self.simplices.iter().enumerate() {
            let mut covered = vec![false; list.len()];
            for t in self.simplices(d + 1) {
                for j in 0..t.len() {
                    let mut f = t.clone();
                    f.remove(j);
                    covered[self.index[d][&f]] = true;
                }
            }
            out.extend(list.iter().zip(covered).filter(|(_, c)| !c).map(|(s, _)| s.clone()));
        }
        out
    }

    /// Setwise stabilizer of a simplex.
    pub fn stabilizer(&self, s: &[usize]) -> Subgroup {
        let elems: Vec<usize> = (0..self.group.order())
            .filter(|&g| self.image(&self.action[g], s) == s)
            .collect();
        self.group.subgroup_from_elements(elems)
    }

    fn fixes(&self, h: &Subgroup, s: &[usize]) -> bool {
        h.generators().iter().all(|&g| self.image(&self.action[g], s) == s)
    }

    /// Every stabilizer fixes its simplex vertexwise; returns an offending simplex otherwise.
    pub fn admissibility_violation(&self) -> Option<Simplex> {
        for list in &self.simplices {
            for s in list {
                for a in &self.action {
                    if self.image(a, s) == *s && s.iter().any(|&v| a[v] != v) {
                        return Some(s.clone());
                    }
                }
            }
        }
        None
    }

    pub fn is_admissible(&self) -> bool {
        self.admissibility_violation().is_none()
    }

    /// Simplices fixed setwise by `h`, by dimension.
    pub fn fixed_simplices(&self, h: &Subgroup) -> Vec<Vec<Simplex>> {
        let mut out: Vec<Vec<Simplex>> = self
            .simplices
            .iter()
            .map(|l| l.iter().filter(|s| self.fixes(h, s)).cloned().collect())
            .collect();
        while out.last().is_some_and(Vec::is_empty) {
            out.pop();
        }
        out
    }

    /// The first barycentric subdivision; vertex `i` is the `i`-th simplex in (dimension, order).
    pub fn barycentric_subdivision(&self) -> GSimplicialComplex {
        let mut vid: Vec<Vec<usize>> = Vec::new();
        let mut n = 0;
        for list in &self.simplices {
            vid.push((n..n + list.len()).collect());
            n += list.len();
        }
        let vertex_of = |s: &Simplex| vid[s.len() - 1][self.index[s.len() - 1][s]];
        // maximal chains: extend downward from each maximal simplex
        let mut chains: Vec<Simplex> = Vec::new();
        let mut stack: Vec<(Simplex, Vec<usize>)> = self.maximal_simplices().into_iter().map(|s| {
            let v = vertex_of(&s);
            (s, vec![v])
        }).collect();
        while let Some((s, chain)) = stack.pop() {
            if s.len() == 1 {
                chains.push(chain);
                continue;
            }
            for j in 0..s.len() {
                let mut f = s.clone();
                f.remove(j);
                let mut c = chain.clone();
                c.push(vertex_of(&f));
                stack.push((f, c));
            }
        }
        let gen_actions: Vec<Vec<usize>> = self
            .generator_actions()
            .iter()
            .map(|a| {
                let mut out = vec![0; n];
                for list in &self.simplices {
                    for s in list {
                        out[vertex_of(s)] = vertex_of(&self.image(a, s));
                    }
                }
                out
            })
            .collect();
        GSimplicialComplex::new(self.group.clone(), n, &gen_actions, &chains).expect("subdivision is a G-complex")
    }

    /// The join `X * Y`; vertices of `Y` are renumbered after those of `X`.
    pub fn join(&self, other: &GSimplicialComplex) -> Result<GSimplicialComplex, ComplexError> {
        if self.group.elements() != other.group.elements() {
            return Err(ComplexError::Precondition("joins need the same group".into()));
        }
        let shift = self.num_vertices;
        let n = shift + other.num_vertices;
        let gen_actions: Vec<Vec<usize>> = self
            .generator_actions()
            .iter()
            .zip(other.generator_actions())
            .map(|(a, b)| a.iter().copied().chain(b.iter().map(|&v| v + shift)).collect())
            .collect();
        let mx = self.maximal_simplices();
        let my: Vec<Simplex> = other
            .maximal_simplices()
            .into_iter()
            .map(|t| t.into_iter().map(|v| v + shift).collect())
            .collect();
        let tops: Vec<Simplex> = if mx.is_empty() {
            my
        } else if my.is_empty() {
            mx
        } else {
            mx.iter()
                .flat_map(|s| my.iter().map(move |t| s.iter().chain(t).copied().collect()))
                .collect()
        };
        GSimplicialComplex::new(self.group.clone(), n, &gen_actions, &tops)
    }

    /// Orbit representatives per dimension with orientation signs and stabilizers.
    fn orbit_data(&self) -> Vec<(Vec<bool>, Vec<(usize, Subgroup)>)> {
        self.simplices
            .iter()
            .enumerate()
            .map(|(d, list)| {
                let mut sign: Vec<Option<bool>> = vec![None; list.len()];
                let mut reps = Vec::new();
                for (i, s) in list.iter().enumerate() {
                    if sign[i].is_some() {
                        continue;
                    }
                    reps.push((i, self.stabilizer(s)));
                    for a in &self.action {
                        let (t, odd) = sort_with_parity(s.iter().map(|&v| a[v]).collect());
                        let j = self.index[d][&t];
                        sign[j].get_or_insert(odd);
                    }
                }
                (sign.into_iter().map(|s| s.expect("orbit covered")).collect(), reps)
            })
            .collect()
    }
}

/// The Bredon chain complex `H ↦ C_*(X^H)` over `cat`, augmented by sending vertices to 1.
///
/// Simplices carry the orientation transported from their orbit representative, so the
/// group acts by plain permutations and each term is a sum of permutation modules.
pub fn gcw_chain_complex<S: Scalar>(
    x: &GSimplicialComplex,
    cat: &Arc<OrbitCat>,
    policy: StabilizerPolicy,
) -> Result<ChainComplex<S>, ComplexError> {
    let g = cat.group();
    if g.elements() != x.group.elements() {
        return Err(ComplexError::Precondition("complex and category use different groups".into()));
    }
    if let Some(s) = x.admissibility_violation() {
        return Err(ComplexError::Precondition(format!("simplex {s:?} is not fixed pointwise by its stabilizer")));
    }
    let orbits = x.orbit_data();
    let mut decomposition = Vec::new();
    for (d, (_, reps)) in orbits.iter().enumerate() {
        let mut parts = Vec::new();
        for (i, stab) in reps {
            match cat.object_of(stab) {
                Some((obj, _)) => parts.push(Summand::Free(obj)),
                None if policy == StabilizerPolicy::Permissive => parts.push(Summand::Permutation(stab.clone())),
                None => {
                    return Err(ComplexError::Precondition(format!(
                        "stabilizer of simplex {:?} (order {}) is outside the family",
                        x.simplices[d][*i],
                        stab.order()
                    )))
                }
            }
        }
        decomposition.push(parts);
    }
    // fixed simplices per object and dimension, as indices into the global lists
    let fixed: Vec<Vec<Vec<usize>>> = cat
        .object_ids()
        .map(|o| {
            let h = cat.subgroup(o);
            x.simplices
                .iter()
                .map(|l| (0..l.len()).filter(|&i| x.fixes(h, &l[i])).collect())
                .collect()
        })
        .collect();
    let pos: Vec<Vec<HashMap<usize, usize>>> = fixed
        .iter()
        .map(|per| per.iter().map(|l| l.iter().enumerate().map(|(p, &i)| (i, p)).collect()).collect())
        .collect();
    let top = x.simplices.len();
    let modules: Vec<RGammaModule<S>> = (0..top)
        .map(|d| {
            let dims: Vec<usize> = cat.object_ids().map(|o| fixed[o.0][d].len()).collect();
            RGammaModule::from_fn(cat.clone(), dims.clone(), |f| {
                let m = cat.morphism(f);
                let a = &x.action[m.rep];
                let targets: Vec<usize> = fixed[m.tgt.0][d]
                    .iter()
                    .map(|&i| {
                        let t = x.image(a, &x.simplices[d][i]);
                        pos[m.src.0][d][&x.index[d][&t]]
                    })
                    .collect();
                Matrix::monomial(dims[m.src.0], &targets, &vec![S::one(); targets.len()])
            })
        })
        .collect();
    let diffs: Vec<ModuleHom<S>> = (1..top)
        .map(|d| {
            let (signs_hi, _) = &orbits[d];
            let (signs_lo, _) = &orbits[d - 1];
            let comps = cat
                .object_ids()
                .map(|o| {
                    let mut trip = Vec::new();
                    for (c, &i) in fixed[o.0][d].iter().enumerate() {
                        let s = &x.simplices[d][i];
                        for j in 0..s.len() {
                            let mut f = s.clone();
                            f.remove(j);
                            let fi = x.index[d - 1][&f];
                            let odd = signs_hi[i] ^ signs_lo[fi] ^ (j % 2 == 1);
                            let v = if odd { -S::one() } else { S::one() };
                            trip.push((pos[o.0][d - 1][&fi], c, v));
                        }
                    }
                    Matrix::from_triplets(fixed[o.0][d - 1].len(), fixed[o.0][d].len(), trip)
                })
                .collect();
            ModuleHom::new(comps)
        })
        .collect();
    let eps = ModuleHom::new(
        cat.object_ids()
            .map(|o| {
                let n = fixed[o.0].first().map_or(0, Vec::len);
                Matrix::from_triplets(1, n, (0..n).map(|c| (0, c, S::one())))
            })
            .collect(),
    );
    let modules = if modules.is_empty() { vec![RGammaModule::zero(cat.clone())] } else { modules };
    if decomposition.is_empty() {
        decomposition.push(vec![]);
    }
    let c = ChainComplex::new(modules, diffs)?
        .with_augmentation(eps)?
        .with_decomposition(decomposition);
    Ok(c)
}

/// The rotation group of the octahedron as `S_4`, acting on the body diagonals through
/// opposite faces. The 90° rotation about the z-axis is `(1234)`, the 120° rotation about
/// `(1,1,1)` is `(243)`.
pub fn octahedron_group() -> PermGroup {
    let a = Perm::from_cycles(4, &[vec![1, 2, 3, 4]]).expect("valid");
    let b = Perm::from_cycles(4, &[vec![2, 4, 3]]).expect("valid");
    PermGroup::from_generators(4, vec![a, b]).expect("order 24")
}

/// Vertices `+e1, -e1, +e2, -e2, +e3, -e3` moved by the two generators of [`octahedron_group`].
pub const OCTAHEDRON_GENERATOR_ACTIONS: [[usize; 6]; 2] = [
    // (x, y, z) ↦ (-y, x, z)
    [2, 3, 1, 0, 4, 5],
    // (x, y, z) ↦ (z, x, y)
    [2, 3, 4, 5, 0, 1],
];

/// The family of cyclic 2-subgroups `{1, C_2^A, C_2^B, C_4}` of `S_4`.
pub fn octahedron_family(g: &PermGroup) -> Family {
    let c2a = g.subgroup_from_cycles(&[&[&[1, 2], &[3, 4]]]).expect("valid");
    let c2b = g.subgroup_from_cycles(&[&[&[1, 2]]]).expect("valid");
    let c4 = g.subgroup_from_cycles(&[&[&[1, 2, 3, 4]]]).expect("valid");
    Family::generate(g, &[c2a, c2b, c4])
}

/// Objects of the octahedron category, in the order `(1, C_2^A, C_2^B, C_4)`.
pub fn octahedron_objects(cat: &OrbitCat) -> [ObjectId; 4] {
    let g = cat.group();
    let find = |cycles: &[&[usize]]| -> ObjectId {
        let h = if cycles.is_empty() { g.trivial() } else { g.subgroup_from_cycles(&[cycles]).expect("valid") };
        cat.object_of(&h).expect("in family").0
    };
    [find(&[]), find(&[&[1, 2], &[3, 4]]), find(&[&[1, 2]]), find(&[&[1, 2, 3, 4]])]
}

/// The first barycentric subdivision of the octahedron with its rotation action.
pub fn octahedron_space() -> GSimplicialComplex {
    let g = Arc::new(octahedron_group());
    let faces: Vec<Simplex> = (0..8)
        .map(|m: usize| vec![m & 1, 2 + (m >> 1 & 1), 4 + (m >> 2 & 1)])
        .collect();
    let acts: Vec<Vec<usize>> = OCTAHEDRON_GENERATOR_ACTIONS.iter().map(|a| a.to_vec()).collect();
    GSimplicialComplex::new(g, 6, &acts, &faces)
        .expect("rotations act on the octahedron")
        .barycentric_subdivision()
}

/// The orbit category of the octahedron example.
pub fn octahedron_category(x: &GSimplicialComplex) -> Arc<OrbitCat> {
    let g = x.group().clone();
    let fam = octahedron_family(&g);
    Arc::new(OrbitCat::new(g, fam))
}

/// The subdivided octahedron and its Bredon chain complex over `{1, C_2^A, C_2^B, C_4}`;
/// the `C_3` vertex orbit is kept as a flagged permutation summand.
pub fn octahedron_complex<S: Scalar>() -> (GSimplicialComplex, ChainComplex<S>) {
    let x = octahedron_space();
    let cat = octahedron_category(&x);
    let c = gcw_chain_complex(&x, &cat, StabilizerPolicy::Permissive).expect("octahedron complex");
    (x, c)
}
