//! Chain-level surgery over a field: killing top free cells, replacing one homology
//! module, pushouts of complexes and Postnikov sections.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::category::{ObjectId, OrbitCat};
use crate::complex::{ChainComplex, ChainMap, Summand};
use crate::error::ComplexError;
use crate::field::{self, Echelon};
use crate::matrix::{Matrix, SparseVec};
use crate::module::{ModuleHom, RGammaModule};
use crate::projective::{is_projective, FreeCover};
use crate::random::random_vector;
use crate::scalar::Field;

/// A projective module with a free cover and a splitting of it.
#[derive(Clone)]
pub struct ProjectiveTerm<F> {
    pub module: RGammaModule<F>,
    pub cover: FreeCover<F>,
    /// `module → cover.free` with `cover.map ∘ section = id`.
    pub section: ModuleHom<F>,
}

impl<F: Field> ProjectiveTerm<F> {
    /// `⊕ R[G/H_j]` in its standard basis.
    pub fn free(cat: &std::sync::Arc<OrbitCat>, objects: &[ObjectId]) -> Self {
        let parts: Vec<RGammaModule<F>> = objects.iter().map(|&x| RGammaModule::free_module(cat.clone(), x)).collect();
        let free = RGammaModule::direct_sum_all(cat, &parts);
        let cover = FreeCover::from_generators(&free, standard_generators(cat, objects));
        ProjectiveTerm {
            section: ModuleHom::identity(&free),
            module: free,
            cover,
        }
    }

    pub fn is_free(&self) -> bool {
        self.cover.free.dims() == self.module.dims()
    }

    fn summands(&self) -> Option<Vec<Summand>> {
        self.is_free()
            .then(|| self.cover.objects().into_iter().map(Summand::Free).collect())
    }
}

/// The identity element of each summand of `⊕_j R[G/H_j]`.
pub fn standard_generators<F: Field>(cat: &OrbitCat, objects: &[ObjectId]) -> Vec<(ObjectId, SparseVec<F>)> {
    objects
        .iter()
        .enumerate()
        .map(|(j, &x)| {
            let offset: usize = objects[..j].iter().map(|&y| cat.hom_count(x, y)).sum();
            (x, vec![(offset + cat.local_index(cat.identity(x)), F::one())])
        })
        .collect()
}

/// `h: P → B` with `through ∘ h = g`, chosen on the generators of the cover of `P`.
pub fn lift_through<F: Field>(
    term: &ProjectiveTerm<F>,
    g: &ModuleHom<F>,
    through: &ModuleHom<F>,
    b: &RGammaModule<F>,
) -> Option<ModuleHom<F>> {
    let cat = b.cat();
    let mut h = ModuleHom::new(cat.object_ids().map(|y| Matrix::zeros(b.dim(y), 0)).collect());
    for (x, v) in &term.cover.generators {
        let t = g.component(*x).mul_vec(v);
        let y = if t.is_empty() {
            Vec::new()
        } else {
            let rhs = Matrix::from_columns(through.component(*x).rows(), &[t]);
            field::solve(through.component(*x), &rhs)?.column(0)
        };
        h = h.hstack(&b.yoneda_map(*x, &y));
    }
    Some(h.compose(&term.section))
}

/// `0 → P_L → … → P_0 → M → 0` whose last term is the first projective kernel.
#[derive(Clone)]
pub struct ProjectiveResolution<F> {
    pub module: RGammaModule<F>,
    pub terms: Vec<ProjectiveTerm<F>>,
    /// `maps[0]: P_0 → M`, `maps[j]: P_j → P_{j-1}`.
    pub maps: Vec<ModuleHom<F>>,
}

impl<F: Field> ProjectiveResolution<F> {
    /// Index of the last term, `-1` for the zero module.
    pub fn length(&self) -> i64 {
        self.terms.len() as i64 - 1
    }

    /// `P_0 ← P_1 ← …` as a chain complex, with its decomposition when every term is free.
    pub fn complex(&self) -> ChainComplex<F> {
        let cat = self.module.cat().clone();
        if self.terms.is_empty() {
            return ChainComplex::zero(cat);
        }
        let modules = self.terms.iter().map(|t| t.module.clone()).collect();
        let c = ChainComplex::from_parts(cat, modules, self.maps[1..].to_vec());
        match self.terms.iter().map(ProjectiveTerm::summands).collect::<Option<Vec<_>>>() {
            Some(dec) => c.with_decomposition(dec),
            None => c,
        }
    }
}

/// Greedy free covers until a kernel is projective; fails past `max_length`.
pub fn projective_resolution<F: Field>(m: &RGammaModule<F>, max_length: usize) -> Result<ProjectiveResolution<F>, ComplexError> {
    let (res, finite) = resolve(m, max_length);
    if finite {
        Ok(res)
    } else {
        Err(ComplexError::Construction(format!(
            "no projective resolution of length at most {max_length}"
        )))
    }
}

/// Up to `max_length + 1` terms; the flag says whether the last kernel was projective.
fn resolve<F: Field>(m: &RGammaModule<F>, max_length: usize) -> (ProjectiveResolution<F>, bool) {
    let mut terms = Vec::new();
    let mut maps = Vec::new();
    let mut current = m.clone();
    let mut into_prev: Option<ModuleHom<F>> = None;
    let mut finite = true;
    while !current.is_zero() {
        if let Some((cover, section)) = is_projective(&current) {
            maps.push(into_prev.take().unwrap_or_else(|| ModuleHom::identity(&current)));
            terms.push(ProjectiveTerm {
                module: current.clone(),
                cover,
                section,
            });
            break;
        }
        if terms.len() > max_length {
            finite = false;
            break;
        }
        let cover = FreeCover::greedy(&current);
        let (k, inc) = cover.free.kernel_of(&cover.map);
        maps.push(match into_prev.take() {
            None => cover.map.clone(),
            Some(i) => i.compose(&cover.map),
        });
        terms.push(ProjectiveTerm::free(current.cat(), &cover.objects()));
        current = k;
        into_prev = Some(inc);
    }
    let res = ProjectiveResolution {
        module: m.clone(),
        terms,
        maps,
    };
    (res, finite)
}

/// The result of attaching a resolution: `C ⊕ P` with the inclusion of `C`, the
/// projection onto the quotient `P` and that quotient as a complex.
pub struct Attached<F> {
    pub complex: ChainComplex<F>,
    pub inclusion: ChainMap<F>,
    pub quotient: ChainComplex<F>,
    pub projection: ChainMap<F>,
}

/// `C ⊕ P` with `P_j` in degree `s + j` and `∂(c, p) = (∂c + h_j p, -∂p)`, where
/// `h_j: P_j → C_{s+j-1}`.
fn attach<F: Field>(c: &ChainComplex<F>, res: &ProjectiveResolution<F>, s: usize, h: &[ModuleHom<F>]) -> Attached<F> {
    let cat = c.cat().clone();
    let len = res.terms.len();
    let n = c.top_degree().max(s + len.saturating_sub(1));
    let c = c.extended_to(n);
    let zero = RGammaModule::zero(cat.clone());
    let p_at = |i: usize| -> Option<&RGammaModule<F>> {
        i.checked_sub(s).and_then(|j| res.terms.get(j)).map(|t| &t.module)
    };
    let p_or_zero = |i: usize| p_at(i).cloned().unwrap_or_else(|| zero.clone());
    let modules: Vec<RGammaModule<F>> = (0..=n).map(|i| c.module(i).direct_sum(&p_or_zero(i))).collect();
    let quotient_terms: Vec<RGammaModule<F>> = (0..=n).map(p_or_zero).collect();
    let mut diffs = Vec::new();
    let mut qdiffs = Vec::new();
    for i in 1..=n {
        let (p_src, p_tgt) = (p_or_zero(i), p_or_zero(i - 1));
        let h_i = match (p_at(i), i.checked_sub(s)) {
            (Some(_), Some(j)) => h[j].clone(),
            _ => ModuleHom::zero(&p_src, c.module(i - 1)),
        };
        let dp = match (p_at(i), p_at(i - 1)) {
            (Some(_), Some(_)) => res.maps[i - s].neg(),
            _ => ModuleHom::zero(&p_src, &p_tgt),
        };
        let top = c.differential(i).hstack(&h_i);
        let bottom = ModuleHom::zero(c.module(i), &p_tgt).hstack(&dp);
        diffs.push(top.vstack(&bottom));
        qdiffs.push(dp);
    }
    let mut complex = ChainComplex::from_parts(cat.clone(), modules.clone(), diffs);
    let term_summands: Option<Vec<Vec<Summand>>> = (0..=n)
        .map(|i| match i.checked_sub(s).and_then(|j| res.terms.get(j)) {
            Some(t) => t.summands(),
            None => Some(vec![]),
        })
        .collect();
    if let (Some(dc), Some(dp)) = (c.decomposition(), &term_summands) {
        complex = complex.with_decomposition(dc.iter().zip(dp).map(|(a, b)| a.iter().chain(b).cloned().collect()).collect());
    }
    let mut quotient = ChainComplex::from_parts(cat.clone(), quotient_terms.clone(), qdiffs);
    if let Some(dp) = term_summands {
        quotient = quotient.with_decomposition(dp);
    }
    let inclusion = ChainMap {
        components: (0..=n)
            .map(|i| ModuleHom::identity(c.module(i)).vstack(&ModuleHom::zero(c.module(i), &quotient_terms[i])))
            .collect(),
    };
    let projection = ChainMap {
        components: (0..=n)
            .map(|i| ModuleHom::zero(c.module(i), &quotient_terms[i]).hstack(&ModuleHom::identity(&quotient_terms[i])))
            .collect(),
    };
    Attached {
        complex,
        inclusion,
        quotient,
        projection,
    }
}

fn resolution_bound(cat: &OrbitCat) -> usize {
    cat.num_objects() + 2
}

/// Kills a submodule `ι: K ↪ H_k(C)` by coning off a lift of a projective resolution of `K`
/// placed in degrees `k+1, k+2, …`. Needs `H_{k+j}(C) = 0` along the length of the resolution.
pub fn kill_homology_submodule<F: Field>(
    c: &ChainComplex<F>,
    k: usize,
    kmod: &RGammaModule<F>,
    iota: &ModuleHom<F>,
) -> Result<Attached<F>, ComplexError> {
    let res = projective_resolution(kmod, resolution_bound(c.cat()))?;
    attach_lifted(c, k, &res, iota)
}

fn attach_lifted<F: Field>(
    c: &ChainComplex<F>,
    k: usize,
    res: &ProjectiveResolution<F>,
    iota: &ModuleHom<F>,
) -> Result<Attached<F>, ComplexError> {
    let len = res.terms.len();
    let c = c.extended_to(k + len);
    let (_, _, proj) = c.homology_module(k);
    let (z, inc) = c.cycles(k);
    let mut f: Vec<ModuleHom<F>> = Vec::new();
    if len > 0 {
        let g = iota.compose(&res.maps[0]);
        let to_cycles = lift_through(&res.terms[0], &g, &proj, &z)
            .ok_or_else(|| ComplexError::Construction("cannot lift the submodule to cycles".into()))?;
        f.push(inc.compose(&to_cycles));
    }
    for j in 1..len {
        let g = f[j - 1].compose(&res.maps[j]);
        let lift = lift_through(&res.terms[j], &g, c.differential(k + j), c.module(k + j)).ok_or_else(|| {
            ComplexError::Precondition(format!("H_{} must vanish to lift the resolution", k + j - 1))
        })?;
        f.push(lift);
    }
    Ok(attach(&c, res, k + 1, &f))
}

/// Kills all of `H_k(C)` for a complex with no homology above `k`.
///
/// Without a finite projective resolution of `H_k`, a partial one reaching past the top
/// degree is attached and the top term replaced by its image, which kills the leftover
/// syzygy; that top term is then not projective.
pub fn kill_top_homology<F: Field>(c: &ChainComplex<F>, k: usize) -> Result<Attached<F>, ComplexError> {
    let (h, _, _) = c.homology_module(k);
    let length = resolution_bound(c.cat()).max(c.top_degree().saturating_sub(k) + 1);
    let (res, finite) = resolve(&h, length);
    let a = attach_lifted(c, k, &res, &ModuleHom::identity(&h))?;
    if finite {
        return Ok(a);
    }
    let t = a.complex.top_degree();
    let (_, zinc) = a.complex.cycles(t);
    let (top, q) = a.complex.module(t).cokernel_of(&zinc);
    let s = objectwise_section(&q, &top);
    let truncate = |cx: &ChainComplex<F>| -> ChainComplex<F> {
        let mut modules = cx.modules().to_vec();
        let mut diffs = cx.differentials().to_vec();
        let d = cx.differential(t);
        diffs[t - 1] = ModuleHom::new(d.components().iter().zip(&s).map(|(a, b)| a.mul(b)).collect());
        modules[t] = top.clone();
        ChainComplex::from_parts(cx.cat().clone(), modules, diffs)
    };
    let complex = truncate(&a.complex);
    let quotient = truncate(&a.quotient);
    let mut inclusion = a.inclusion;
    inclusion.components[t] = q.compose(&inclusion.components[t]);
    let mut projection = a.projection;
    projection.components[t] = ModuleHom::identity(&top);
    Ok(Attached {
        complex,
        inclusion,
        quotient,
        projection,
    })
}

/// Enlarges `H_k(C)` along an injection `φ: H_k(C) → T`, attaching a resolution of
/// `coker φ` from degree `k` with the extension class of `T` as the attaching map.
fn extend_by_cokernel<F: Field>(
    c: &ChainComplex<F>,
    k: usize,
    target: &RGammaModule<F>,
    phi: &ModuleHom<F>,
) -> Result<Attached<F>, ComplexError> {
    let (q, pi) = target.cokernel_of(phi);
    let res = projective_resolution(&q, resolution_bound(c.cat()))?;
    let len = res.terms.len();
    let c = c.extended_to(k + len);
    let (h, _, proj) = c.homology_module(k);
    let (z, inc) = c.cycles(k);
    let fail = |what: &str| ComplexError::Construction(format!("cannot lift {what}"));
    let mut g: Vec<ModuleHom<F>> = Vec::new();
    if len > 0 {
        let below = if k == 0 { RGammaModule::zero(c.cat().clone()) } else { c.module(k - 1).clone() };
        g.push(ModuleHom::zero(&res.terms[0].module, &below));
    }
    if len > 1 {
        let lambda = lift_through(&res.terms[0], &res.maps[0], &pi, target).ok_or_else(|| fail("the cover of the cokernel"))?;
        let cocycle = lambda.compose(&res.maps[1]);
        let into_h = lift_through(&res.terms[1], &cocycle, phi, &h).ok_or_else(|| fail("the extension cocycle"))?;
        let to_cycles = lift_through(&res.terms[1], &into_h, &proj, &z).ok_or_else(|| fail("the cocycle to cycles"))?;
        g.push(inc.compose(&to_cycles));
    }
    for j in 2..len {
        let rhs = g[j - 1].compose(&res.maps[j]);
        let lift = lift_through(&res.terms[j], &rhs, c.differential(k + j - 1), c.module(k + j - 1)).ok_or_else(|| {
            ComplexError::Precondition(format!("H_{} must vanish to lift the resolution", k + j - 2))
        })?;
        g.push(lift);
    }
    Ok(attach(&c, &res, k, &g))
}

/// A complex together with a chain map from the input.
pub struct Modified<F> {
    pub complex: ChainComplex<F>,
    pub map: ChainMap<F>,
}

/// Replaces `H_k(C)` by `T` along `φ: H_k(C) → T`, leaving the other homology unchanged.
///
/// `H_k(C)` is taken in the basis of [`ChainComplex::homology_module`]. The kernel of `φ`
/// is coned off first, then the cokernel attached with the extension class of `T`.
/// Both need finite projective resolutions, and `H_{k+j}(C) = 0` for `j` below their length.
pub fn modify_homology<F: Field>(
    c: &ChainComplex<F>,
    k: usize,
    target: &RGammaModule<F>,
    phi: &ModuleHom<F>,
) -> Result<Modified<F>, ComplexError> {
    let c0 = c.extended_to(k);
    let (h, _, _) = c0.homology_module(k);
    phi.check_natural(&h, target)?;
    let (kmod, kinc) = h.kernel_of(phi);
    let (c1, m1, phi1) = if kmod.is_zero() {
        (c0.clone(), ChainMap::identity(&c0), phi.clone())
    } else {
        let a = kill_homology_submodule(&c0, k, &kmod, &kinc)?;
        let rho = a.inclusion.on_homology(k, &c0, &a.complex);
        let (h1, _, _) = a.complex.homology_module(k);
        let phi1 = ModuleHom::new(
            c0.cat()
                .object_ids()
                .map(|x| {
                    if h1.dim(x) == 0 {
                        return Matrix::zeros(target.dim(x), 0);
                    }
                    let s = field::solve(rho.component(x), &Matrix::identity(h1.dim(x))).expect("induced map is onto");
                    phi.component(x).mul(&s)
                })
                .collect(),
        );
        (a.complex, a.inclusion, phi1)
    };
    let b = extend_by_cokernel(&c1, k, target, &phi1)?;
    let map = b.inclusion.compose(&pad(&m1, &c1, b.inclusion.components.len()));
    Ok(Modified {
        complex: b.complex,
        map,
    })
}

/// Pads a chain map `C → D` with zero components up to `n` terms, padding the target too.
fn pad<F: Field>(m: &ChainMap<F>, d: &ChainComplex<F>, n: usize) -> ChainMap<F> {
    let d = d.extended_to(n.saturating_sub(1));
    let mut components = m.components.clone();
    while components.len() < n {
        let i = components.len();
        let z = RGammaModule::zero(d.cat().clone());
        components.push(ModuleHom::zero(&z, d.module(i)));
    }
    ChainMap { components }
}

/// Degreewise pushout of `B ← A → C`: `P_i = (B_i ⊕ C_i) / {(f a, -g a)}`, with the two
/// maps into it.
pub fn pushout_complexes<F: Field>(
    a: &ChainComplex<F>,
    b: &ChainComplex<F>,
    c: &ChainComplex<F>,
    f: &ChainMap<F>,
    g: &ChainMap<F>,
) -> Result<(ChainComplex<F>, ChainMap<F>, ChainMap<F>), ComplexError> {
    f.check(a, b)?;
    g.check(a, c)?;
    let n = a.top_degree().max(b.top_degree()).max(c.top_degree());
    let (a, b, c) = (a.extended_to(n), b.extended_to(n), c.extended_to(n));
    let cat = a.cat().clone();
    let comp = |m: &ChainMap<F>, i: usize, src: &RGammaModule<F>, tgt: &RGammaModule<F>| {
        m.components.get(i).cloned().unwrap_or_else(|| ModuleHom::zero(src, tgt))
    };
    let mut modules = Vec::new();
    let mut quots = Vec::new();
    let mut sections = Vec::new();
    for i in 0..=n {
        let sum = b.module(i).direct_sum(c.module(i));
        let rel = comp(f, i, a.module(i), b.module(i)).vstack(&comp(g, i, a.module(i), c.module(i)).neg());
        let (p, q) = sum.cokernel_of(&rel);
        let s: Vec<Matrix<F>> = cat
            .object_ids()
            .map(|x| field::solve(q.component(x), &Matrix::identity(p.dim(x))).expect("quotient map is onto"))
            .collect();
        modules.push(p);
        quots.push(q);
        sections.push(s);
    }
    let diffs: Vec<ModuleHom<F>> = (1..=n)
        .map(|i| {
            let d = b.differential(i).direct_sum(c.differential(i));
            ModuleHom::new(
                cat.object_ids()
                    .map(|x| quots[i - 1].component(x).mul(&d.component(x).mul(&sections[i][x.0])))
                    .collect(),
            )
        })
        .collect();
    let p = ChainComplex::from_parts(cat.clone(), modules, diffs);
    let from_b = ChainMap {
        components: (0..=n)
            .map(|i| quots[i].compose(&ModuleHom::identity(b.module(i)).vstack(&ModuleHom::zero(b.module(i), c.module(i)))))
            .collect(),
    };
    let from_c = ChainMap {
        components: (0..=n)
            .map(|i| quots[i].compose(&ModuleHom::zero(c.module(i), b.module(i)).vstack(&ModuleHom::identity(c.module(i)))))
            .collect(),
    };
    p.validate()?;
    Ok((p, from_b, from_c))
}

/// An isomorphism `⊕ R[G/H_j] → P` for a free module `P`, as generator objects and the map.
///
/// Generators are chosen from the largest objects down, each with an automorphism orbit
/// independent of everything already reached: standard basis vectors first, then seeded
/// random vectors.
pub fn free_basis<F: Field>(p: &RGammaModule<F>) -> Result<(Vec<ObjectId>, ModuleHom<F>), ComplexError> {
    let cat = p.cat();
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let mut gens: Vec<(ObjectId, SparseVec<F>)> = Vec::new();
    for x in cat.object_ids().rev() {
        let n = p.dim(x);
        let mut span = Echelon::new(n);
        for (z, v) in &gens {
            for u in cat.hom_ids(x, *z) {
                span.insert(p.action(u).mul_vec(v));
            }
        }
        let w = cat.aut_order(x);
        let mut tries = 0;
        let mut j = 0;
        while span.rank() < n {
            let cand: SparseVec<F> = if j < n {
                j += 1;
                vec![(j - 1, F::one())]
            } else {
                tries += 1;
                if tries > 256 {
                    return Err(ComplexError::NotFree { degree: 0 });
                }
                random_vector(n, &mut rng)
            };
            if span.contains(&cand) {
                continue;
            }
            let mut trial = span.clone();
            for a in cat.hom_ids(x, x) {
                trial.insert(p.action(a).mul_vec(&cand));
            }
            if trial.rank() == span.rank() + w {
                span = trial;
                gens.push((x, cand));
            }
        }
    }
    let cover = FreeCover::from_generators(p, gens);
    if cover.free.dims() != p.dims() {
        return Err(ComplexError::NotFree { degree: 0 });
    }
    Ok((cover.objects(), cover.map))
}

fn inverse_hom<F: Field>(t: &ModuleHom<F>) -> ModuleHom<F> {
    ModuleHom::new(
        t.components()
            .iter()
            .map(|m| field::inverse(m).expect("isomorphism"))
            .collect(),
    )
}

/// Coordinates at each object of the blocks `keep` of `⊕_j R[G/H_j]`.
fn block_coords(cat: &OrbitCat, objects: &[ObjectId], keep: &[bool]) -> Vec<Vec<usize>> {
    cat.object_ids()
        .map(|y| {
            let mut out = Vec::new();
            let mut offset = 0;
            for (j, &x) in objects.iter().enumerate() {
                let n = cat.hom_count(y, x);
                if keep[j] {
                    out.extend(offset..offset + n);
                }
                offset += n;
            }
            out
        })
        .collect()
}

fn select<F: Field>(m: &ModuleHom<F>, rows: Option<&[Vec<usize>]>, cols: Option<&[Vec<usize>]>) -> ModuleHom<F> {
    ModuleHom::new(
        m.components()
            .iter()
            .enumerate()
            .map(|(x, a)| {
                let a = match rows {
                    Some(r) => a.select_rows(&r[x]),
                    None => a.clone(),
                };
                match cols {
                    Some(c) => a.select_cols(&c[x]),
                    None => a,
                }
            })
            .collect(),
    )
}

fn free_sum<F: Field>(cat: &std::sync::Arc<OrbitCat>, objects: impl Iterator<Item = ObjectId>) -> RGammaModule<F> {
    let parts: Vec<RGammaModule<F>> = objects.map(|x| RGammaModule::free_module(cat.clone(), x)).collect();
    RGammaModule::direct_sum_all(cat, &parts)
}

/// Outcome of [`kill_top_free`].
pub struct Killed<F> {
    pub complex: ChainComplex<F>,
    pub map: ChainMap<F>,
    /// Elementary complexes added before the cokernel became free.
    pub stabilizations: usize,
}

/// Lowers `dim C(H)` by one for a complex free in its top two degrees at `H`.
///
/// Needs `hdim C(H) < dim C(H) = d` and `dim C(K) ≤ d - 2` for every `K > H`. The summands
/// `R[G/K]` with `H ≤ K` form a subcomplex; in degrees `d` and `d-1` they are copies of
/// `R[G/H]`, and `∂_d` is replaced by its cokernel. The result is homotopy equivalent to `C`.
pub fn kill_top_free<F: Field>(c: &ChainComplex<F>, h: ObjectId) -> Result<Killed<F>, ComplexError> {
    let cat = c.cat().clone();
    let dims = c.dim_function();
    let d = dims.0[h.0];
    if d < 1 {
        return Err(ComplexError::Precondition(format!("dim C(H) = {d} leaves nothing to kill")));
    }
    let hd = c.hdim_function()?.0[h.0];
    if hd >= d {
        return Err(ComplexError::Precondition(format!("hdim C(H) = {hd} equals the top degree {d}")));
    }
    if let Some(k) = cat.object_ids().find(|&k| cat.lt(h, k) && dims.0[k.0] > d - 2) {
        return Err(ComplexError::Precondition(format!(
            "dim C(K) = {} exceeds {} at the larger object {}",
            dims.0[k.0],
            d - 2,
            k.0
        )));
    }
    let d = d as usize;
    let bound = cat.category_length() + 2;
    let mut current = c.clone();
    let mut incl = ChainMap::identity(c);
    let mut stabilizations = 0;
    loop {
        if let Some((complex, map)) = kill_once(&current, h, d)? {
            let (complex, map) = restore_dimension(complex, map.compose(&incl), c, h, d);
            return Ok(Killed {
                complex,
                map,
                stabilizations,
            });
        }
        if stabilizations >= bound || d < 2 {
            return Err(ComplexError::Construction("cokernel did not become free".into()));
        }
        let e = ChainComplex::elementary(cat.clone(), h, d - 1).extended_to(current.top_degree());
        let next = current.direct_sum(&e);
        incl = ChainMap {
            components: incl
                .components
                .iter()
                .enumerate()
                .map(|(i, m)| m.vstack(&ModuleHom::zero(c.module(i), e.module(i))))
                .collect(),
        };
        current = next;
        stabilizations += 1;
    }
}

/// When the cokernel also vanished in degree `d-1` at `H`, adds `R[G/H] → R[G/H]` in
/// degrees `d-1, d-2` so that `dim D(H) = d - 1`. Objects below `H` already reach degree
/// `d`, so no other dimension moves.
fn restore_dimension<F: Field>(
    complex: ChainComplex<F>,
    map: ChainMap<F>,
    c: &ChainComplex<F>,
    h: ObjectId,
    d: usize,
) -> (ChainComplex<F>, ChainMap<F>) {
    if d < 2 || complex.dim_function().0[h.0] >= d as i64 - 1 {
        return (complex, map);
    }
    let e = ChainComplex::elementary(complex.cat().clone(), h, d - 1).extended_to(c.top_degree());
    let sum = complex.extended_to(c.top_degree()).direct_sum(&e);
    let map = ChainMap {
        components: map
            .components
            .iter()
            .enumerate()
            .map(|(i, m)| m.vstack(&ModuleHom::zero(c.module(i), e.module(i))))
            .collect(),
    };
    (sum.trimmed(), map)
}

/// Objectwise right inverses of a surjection.
fn objectwise_section<F: Field>(q: &ModuleHom<F>, tgt: &RGammaModule<F>) -> Vec<Matrix<F>> {
    q.components()
        .iter()
        .zip(tgt.dims())
        .map(|(m, &n)| field::solve(m, &Matrix::identity(n)).expect("surjective"))
        .collect()
}

fn kill_once<F: Field>(c: &ChainComplex<F>, h: ObjectId, d: usize) -> Result<Option<(ChainComplex<F>, ChainMap<F>)>, ComplexError> {
    let cat = c.cat().clone();
    let n = c.top_degree();
    let standard = |i: usize| free_basis(c.module(i)).map_err(|_| ComplexError::NotFree { degree: i });
    let (obj_d, t_d) = standard(d)?;
    let (obj_l, t_l) = standard(d - 1)?;
    let (ti_d, ti_l) = (inverse_hom(&t_d), inverse_hom(&t_l));
    let keep_d: Vec<bool> = obj_d.iter().map(|&k| cat.leq(h, k)).collect();
    let keep_l: Vec<bool> = obj_l.iter().map(|&k| cat.leq(h, k)).collect();
    let larger = obj_d.iter().zip(&keep_d).chain(obj_l.iter().zip(&keep_l)).any(|(&k, &kept)| kept && k != h);
    if larger {
        return Err(ComplexError::Precondition("a larger summand sits in the top two degrees".into()));
    }
    let not = |v: &[bool]| -> Vec<bool> { v.iter().map(|b| !b).collect() };
    let picked = |objs: &[ObjectId], keep: &[bool]| -> Vec<ObjectId> {
        objs.iter().zip(keep).filter(|p| *p.1).map(|p| *p.0).collect()
    };
    let (sd, sd2) = (block_coords(&cat, &obj_d, &keep_d), block_coords(&cat, &obj_d, &not(&keep_d)));
    let (sl, sl2) = (block_coords(&cat, &obj_l, &keep_l), block_coords(&cat, &obj_l, &not(&keep_l)));
    let rest_d = picked(&obj_d, &not(&keep_d));
    let rest_l = picked(&obj_l, &not(&keep_l));
    let b = free_sum::<F>(&cat, picked(&obj_l, &keep_l).into_iter());
    let dd = ti_l.compose(c.differential(d)).compose(&t_d);
    let (q, qmap) = b.cokernel_of(&select(&dd, Some(&sl), Some(&sd)));
    let Ok((q_obj, q_t)) = free_basis(&q) else {
        return Ok(None);
    };
    let q_mod = free_sum::<F>(&cat, q_obj.iter().copied());
    let q_std = inverse_hom(&q_t).compose(&qmap);

    let mut modules: Vec<RGammaModule<F>> = c.modules().to_vec();
    modules[d] = free_sum(&cat, rest_d.iter().copied());
    modules[d - 1] = q_mod.direct_sum(&free_sum(&cat, rest_l.iter().copied()));
    let mut diffs: Vec<ModuleHom<F>> = c.differentials().to_vec();
    if d < n {
        diffs[d] = select(&ti_d.compose(c.differential(d + 1)), Some(&sd2), None);
    }
    let upper = q_std.compose(&select(&dd, Some(&sl), Some(&sd2)));
    let lower = select(&dd, Some(&sl2), Some(&sd2));
    diffs[d - 1] = upper.vstack(&lower);
    if d >= 2 {
        let dl = c.differential(d - 1).compose(&t_l);
        let s = objectwise_section(&q_std, &q_mod);
        let on_q = select(&dl, None, Some(&sl));
        let via = ModuleHom::new(on_q.components().iter().zip(&s).map(|(a, b)| a.mul(b)).collect());
        diffs[d - 2] = via.hstack(&select(&dl, None, Some(&sl2)));
    }
    let mut complex = ChainComplex::from_parts(cat.clone(), modules, diffs);
    if let Some(dec) = c.decomposition() {
        let mut dec = dec.to_vec();
        dec[d] = rest_d.iter().map(|&x| Summand::Free(x)).collect();
        dec[d - 1] = q_obj.iter().chain(&rest_l).map(|&x| Summand::Free(x)).collect();
        complex = complex.with_decomposition(dec);
    }
    if d >= 2 {
        if let Some(eps) = c.augmentation() {
            complex = complex.with_augmentation(eps.clone())?;
        }
    }
    complex.validate()?;
    let mut components: Vec<ModuleHom<F>> = c.modules().iter().map(ModuleHom::identity).collect();
    components[d] = select(&ti_d, Some(&sd2), None);
    components[d - 1] = q_std
        .compose(&select(&ti_l, Some(&sl), None))
        .vstack(&select(&ti_l, Some(&sl2), None));
    let map = ChainMap { components };
    let complex = complex.trimmed();
    map.check(c, &complex)?;
    Ok(Some((complex, map)))
}

/// Kills top cells at each object, largest objects first, until `dim C(H) = hdim C(H)`.
///
/// Each step needs the preconditions of [`kill_top_free`]; a strictly monotone homology
/// dimension function supplies them.
pub fn reduce_to_homology_dimension<F: Field>(c: &ChainComplex<F>) -> Result<Modified<F>, ComplexError> {
    let cat = c.cat().clone();
    let mut current = c.clone();
    let mut map = ChainMap::identity(c);
    for h in cat.object_ids().rev() {
        loop {
            let dim = current.dim_function().0[h.0];
            let hd = current.hdim_function()?.0[h.0];
            if dim <= hd || dim < 1 {
                break;
            }
            let k = kill_top_free(&current, h)?;
            map = k.map.compose(&map);
            current = k.complex;
        }
    }
    Ok(Modified { complex: current, map })
}

/// One stage `C(i)` of a Postnikov tower.
pub struct PostnikovStage<F> {
    pub degree: usize,
    /// `C(i)`: `H_j(C(i)) = H_j(C)` for `j ≤ i`, zero above.
    pub section: ChainComplex<F>,
    /// `C → C(i)`.
    pub map: ChainMap<F>,
    /// `C(i) → C(i-1)`, for `i ≥ 1`.
    pub to_previous: Option<ChainMap<F>>,
    /// `α_i: C(i-1) → Σ^{i+1} P(H_i)` with its target, for `i ≥ 1`; `C(i)` is the
    /// desuspended cone.
    pub k_invariant: Option<(ChainComplex<F>, ChainMap<F>)>,
}

/// Postnikov sections of a projective complex, from the top homology down to `C(0)`.
///
/// `C(i-1)` is `C(i)` with a lifted projective resolution of `H_i` attached; the quotient
/// by `C(i)` is `Σ^{i+1} P(H_i)` and the projection onto it is `α_i`. When `H_i` has no
/// finite projective resolution the attached resolution is truncated as in
/// [`kill_top_homology`], and its top term is the one non-projective term it adds.
pub fn postnikov_tower<F: Field>(c: &ChainComplex<F>) -> Result<Vec<PostnikovStage<F>>, ComplexError> {
    let homology = c.homology()?;
    let top = homology.dim_function().0.iter().copied().max().unwrap_or(-1).max(0) as usize;
    let mut current = c.clone();
    let mut map = ChainMap::identity(c);
    let mut stages = Vec::new();
    for i in (0..=top).rev() {
        let mut stage = PostnikovStage {
            degree: i,
            section: current.clone(),
            map: map.clone(),
            to_previous: None,
            k_invariant: None,
        };
        let vanishes = current.cat().object_ids().all(|x| homology.at(x, i).is_zero());
        if i > 0 && vanishes {
            stage.to_previous = Some(ChainMap::identity(&current));
        } else if i > 0 {
            let a = kill_top_homology(&current, i)?;
            map = a.inclusion.compose(&pad(&map, &current, a.inclusion.components.len()));
            current = a.complex;
            stage.to_previous = Some(a.inclusion);
            stage.k_invariant = Some((a.quotient, a.projection));
        }
        stages.push(stage);
    }
    stages.reverse();
    Ok(stages)
}
