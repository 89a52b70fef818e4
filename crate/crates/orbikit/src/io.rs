//! JSON formats for groups, families, orbit categories, modules, maps, complexes and
//! `G`-simplicial complexes.
//!
//! Points and vertices are 1-based in every file. Entries are decimal strings so that
//! integers of any size survive the round trip. A matrix is either a row-major array or,
//! for large ones, `{"entries": [[row, col, "value"], …]}` with 0-based positions.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::category::{ObjectId, OrbitCat};
use crate::complex::{ChainComplex, ChainMap, Summand};
use crate::error::IoError;
use crate::group::{Family, Perm, PermGroup, Subgroup};
use crate::matrix::Matrix;
use crate::module::{ModuleHom, RGammaModule};
use crate::scalar::{CoefRing, Scalar};
use crate::simplicial::{GSimplicialComplex, Simplex};

/// A permutation as disjoint cycles of 1-based points.
pub type Cycles = Vec<Vec<usize>>;

/// A matrix of decimal strings, dense or as nonzero triplets.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MatrixSpec {
    Dense(Vec<Vec<String>>),
    Sparse { entries: Vec<(usize, usize, String)> },
}

impl From<Vec<Vec<String>>> for MatrixSpec {
    fn from(rows: Vec<Vec<String>>) -> Self {
        MatrixSpec::Dense(rows)
    }
}

/// Matrices with more entries than this are written as triplets.
const DENSE_LIMIT: usize = 4096;

fn invalid(msg: impl Into<String>) -> IoError {
    IoError::Invalid(msg.into())
}

/// `{ "degree": n, "generators": [[cycle, …], …] }`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GroupSpec {
    pub degree: usize,
    pub generators: Vec<Cycles>,
}

impl GroupSpec {
    pub fn build(&self) -> Result<PermGroup, IoError> {
        let gens = self
            .generators
            .iter()
            .map(|c| Perm::from_cycles(self.degree, c))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(PermGroup::from_generators(self.degree, gens)?)
    }

    pub fn describe(g: &PermGroup) -> Self {
        GroupSpec {
            degree: g.degree(),
            generators: g.generators().iter().map(Perm::cycles).collect(),
        }
    }
}

/// Subgroup given by generators in cycle notation.
pub fn subgroup_from_spec(g: &PermGroup, gens: &[Cycles]) -> Result<Subgroup, IoError> {
    let perms = gens
        .iter()
        .map(|c| Perm::from_cycles(g.degree(), c))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(g.subgroup(&perms)?)
}

pub fn subgroup_to_spec(g: &PermGroup, h: &Subgroup) -> Vec<Cycles> {
    h.generator_perms(g).iter().map(Perm::cycles).collect()
}

/// A family: closure of seed subgroups, all `p`-subgroups for the listed primes, or every
/// subgroup.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FamilySpec {
    Seeds { seeds: Vec<Vec<Cycles>> },
    Primes { primes: Vec<usize> },
    All { all: bool },
}

impl FamilySpec {
    pub fn build(&self, g: &PermGroup) -> Result<Family, IoError> {
        match self {
            FamilySpec::Seeds { seeds } => {
                let subs = seeds
                    .iter()
                    .map(|s| subgroup_from_spec(g, s))
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(Family::generate(g, &subs))
            }
            FamilySpec::Primes { primes } => {
                if let Some(p) = primes.iter().find(|&&p| !is_prime(p)) {
                    return Err(invalid(format!("{p} is not prime")));
                }
                Ok(Family::p_subgroups(g, primes))
            }
            FamilySpec::All { all: true } => Ok(Family::from_predicate(g, |_| true)),
            FamilySpec::All { all: false } => Ok(Family::generate(g, &[g.trivial()])),
        }
    }

    /// Seeds made of the class representatives.
    pub fn describe(g: &PermGroup, f: &Family) -> Self {
        FamilySpec::Seeds {
            seeds: f.class_reps().iter().map(|h| subgroup_to_spec(g, h)).collect(),
        }
    }
}

fn is_prime(p: usize) -> bool {
    p >= 2 && (2..p).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CategorySpec {
    pub group: GroupSpec,
    pub family: FamilySpec,
}

impl CategorySpec {
    pub fn build(&self) -> Result<Arc<OrbitCat>, IoError> {
        let g = Arc::new(self.group.build()?);
        let fam = self.family.build(&g)?;
        Ok(Arc::new(OrbitCat::new(g, fam)))
    }

    pub fn describe(cat: &OrbitCat) -> Self {
        CategorySpec {
            group: GroupSpec::describe(cat.group()),
            family: FamilySpec::describe(cat.group(), cat.family()),
        }
    }
}

/// Names `1`, `C<n>` for cyclic and `H<n>` for other subgroups; names shared by several
/// objects get suffixes `A`, `B`, … with the subgroup moving more points first.
pub fn object_names(cat: &OrbitCat) -> Vec<String> {
    let g = cat.group();
    let base: Vec<String> = cat
        .object_ids()
        .map(|x| {
            let h = cat.subgroup(x);
            if h.is_trivial() {
                "1".to_string()
            } else if h.elements().iter().any(|&e| g.element(e).order() == h.order()) {
                format!("C{}", h.order())
            } else {
                format!("H{}", h.order())
            }
        })
        .collect();
    let moved = |x: usize| -> usize {
        let h = cat.subgroup(ObjectId(x));
        (0..g.degree())
            .filter(|&p| h.generators().iter().any(|&e| g.element(e).apply(p) != p))
            .count()
    };
    let mut names = base.clone();
    for (i, b) in base.iter().enumerate() {
        let mut same: Vec<usize> = (0..base.len()).filter(|&j| &base[j] == b).collect();
        if same.len() < 2 {
            continue;
        }
        same.sort_by_key(|&j| (std::cmp::Reverse(moved(j)), j));
        let pos = same.iter().position(|&j| j == i).expect("present");
        names[i] = format!("{b}{}", suffix(pos));
    }
    names
}

fn suffix(mut k: usize) -> String {
    let mut s = Vec::new();
    loop {
        s.push(b'A' + (k % 26) as u8);
        if k < 26 {
            break;
        }
        k = k / 26 - 1;
    }
    s.reverse();
    String::from_utf8(s).expect("ascii")
}

/// An object by name, by `#index`, or by a subgroup in the family given as generator cycles
/// in JSON.
pub fn parse_object(cat: &OrbitCat, s: &str) -> Result<ObjectId, IoError> {
    let s = s.trim();
    if let Some(i) = s.strip_prefix('#') {
        let i: usize = i.parse().map_err(|_| invalid(format!("bad object index {s:?}")))?;
        return (i < cat.num_objects())
            .then_some(ObjectId(i))
            .ok_or_else(|| invalid(format!("object index {i} out of range")));
    }
    if s.starts_with('[') {
        let gens: Vec<Cycles> = serde_json::from_str(s)?;
        let h = subgroup_from_spec(cat.group(), &gens)?;
        return cat
            .object_of(&h)
            .map(|(x, _)| x)
            .ok_or_else(|| invalid("subgroup is not in the family"));
    }
    object_names(cat)
        .iter()
        .position(|n| n == s)
        .map(ObjectId)
        .ok_or_else(|| invalid(format!("no object named {s:?}")))
}

pub fn matrix_to_spec<S: Scalar>(m: &Matrix<S>) -> MatrixSpec {
    if m.rows() * m.cols() <= DENSE_LIMIT {
        MatrixSpec::Dense(m.to_dense().iter().map(|r| r.iter().map(S::to_string).collect()).collect())
    } else {
        MatrixSpec::Sparse { entries: m.entries().map(|(i, j, v)| (i, j, v.to_string())).collect() }
    }
}

pub fn matrix_from_spec<S: Scalar>(rows: usize, cols: usize, spec: &MatrixSpec) -> Result<Matrix<S>, IoError> {
    match spec {
        // An empty list stands for any matrix with no rows or no columns.
        MatrixSpec::Dense(d) if d.is_empty() && (rows == 0 || cols == 0) => Ok(Matrix::zeros(rows, cols)),
        MatrixSpec::Dense(d) => {
            if d.len() != rows || d.iter().any(|r| r.len() != cols) {
                return Err(invalid(format!("expected a {rows}x{cols} matrix")));
            }
            let dense = d
                .iter()
                .map(|r| r.iter().map(|e| S::parse_decimal(e)).collect::<Result<Vec<_>, _>>())
                .collect::<Result<Vec<_>, _>>()?;
            Ok(Matrix::from_dense(rows, cols, &dense))
        }
        MatrixSpec::Sparse { entries } => {
            let mut seen = std::collections::HashSet::new();
            let mut trip = Vec::with_capacity(entries.len());
            for (i, j, e) in entries {
                if *i >= rows || *j >= cols {
                    return Err(invalid(format!("entry ({i}, {j}) outside a {rows}x{cols} matrix")));
                }
                if !seen.insert((*i, *j)) {
                    return Err(invalid(format!("entry ({i}, {j}) given twice")));
                }
                trip.push((*i, *j, S::parse_decimal(e)?));
            }
            Ok(Matrix::from_triplets(rows, cols, trip))
        }
    }
}

fn check_ring<S: Scalar>(tag: &str) -> Result<(), IoError> {
    let ring: CoefRing = tag.parse()?;
    if ring != S::ring() {
        return Err(invalid(format!("file is over {ring}, expected {}", S::ring())));
    }
    Ok(())
}

/// Dimensions per object and a matrix per morphism `f: y → x` of shape `dims[y] × dims[x]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModuleData {
    pub dims: Vec<usize>,
    pub actions: Vec<MatrixSpec>,
}

impl ModuleData {
    pub fn encode<S: Scalar>(m: &RGammaModule<S>) -> Self {
        ModuleData {
            dims: m.dims().to_vec(),
            actions: m.actions().iter().map(matrix_to_spec).collect(),
        }
    }

    pub fn decode<S: Scalar>(&self, cat: &Arc<OrbitCat>) -> Result<RGammaModule<S>, IoError> {
        if self.dims.len() != cat.num_objects() {
            return Err(invalid(format!("expected {} dimensions", cat.num_objects())));
        }
        if self.actions.len() != cat.num_morphisms() {
            return Err(invalid(format!("expected {} morphism matrices", cat.num_morphisms())));
        }
        let actions = cat
            .morphism_ids()
            .zip(&self.actions)
            .map(|(f, a)| {
                let m = cat.morphism(f);
                matrix_from_spec(self.dims[m.src.0], self.dims[m.tgt.0], a)
            })
            .collect::<Result<Vec<_>, _>>()?;
        let m = RGammaModule::new(cat.clone(), self.dims.clone(), actions)?;
        m.check_functorial()?;
        Ok(m)
    }
}

/// A self-contained module file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModuleSpec {
    pub ring: String,
    pub category: CategorySpec,
    #[serde(flatten)]
    pub module: ModuleData,
}

impl ModuleSpec {
    pub fn encode<S: Scalar>(m: &RGammaModule<S>) -> Self {
        ModuleSpec {
            ring: S::ring().to_string(),
            category: CategorySpec::describe(m.cat()),
            module: ModuleData::encode(m),
        }
    }

    pub fn decode<S: Scalar>(&self) -> Result<RGammaModule<S>, IoError> {
        check_ring::<S>(&self.ring)?;
        self.module.decode(&self.category.build()?)
    }

    /// Decodes over a category already built, which must match the file's.
    pub fn decode_over<S: Scalar>(&self, cat: &Arc<OrbitCat>) -> Result<RGammaModule<S>, IoError> {
        check_ring::<S>(&self.ring)?;
        let own = self.category.build()?;
        if own.group().elements() != cat.group().elements() || own.family().class_reps() != cat.family().class_reps() {
            return Err(invalid("module lives over a different category"));
        }
        self.module.decode(cat)
    }
}

/// A natural transformation as one matrix per object, `tgt(x) × src(x)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HomSpec {
    pub components: Vec<MatrixSpec>,
}

impl HomSpec {
    pub fn encode<S: Scalar>(h: &ModuleHom<S>) -> Self {
        HomSpec {
            components: h.components().iter().map(matrix_to_spec).collect(),
        }
    }

    pub fn decode<S: Scalar>(&self, src: &RGammaModule<S>, tgt: &RGammaModule<S>) -> Result<ModuleHom<S>, IoError> {
        let cat = src.cat();
        if self.components.len() != cat.num_objects() {
            return Err(invalid(format!("expected {} components", cat.num_objects())));
        }
        let comps = cat
            .object_ids()
            .zip(&self.components)
            .map(|(x, c)| matrix_from_spec(tgt.dim(x), src.dim(x), c))
            .collect::<Result<Vec<_>, _>>()?;
        let h = ModuleHom::new(comps);
        h.check_natural(src, tgt)?;
        Ok(h)
    }
}

/// A chain map as one natural transformation per degree.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChainMapSpec {
    pub components: Vec<HomSpec>,
}

impl ChainMapSpec {
    pub fn encode<S: Scalar>(f: &ChainMap<S>) -> Self {
        ChainMapSpec {
            components: f.components.iter().map(HomSpec::encode).collect(),
        }
    }

    /// Missing trailing components are zero.
    pub fn decode<S: Scalar>(&self, c: &ChainComplex<S>, d: &ChainComplex<S>) -> Result<ChainMap<S>, IoError> {
        let n = c.modules().len();
        if self.components.len() > n {
            return Err(invalid(format!("expected at most {n} components")));
        }
        let zero = RGammaModule::zero(c.cat().clone());
        let components = (0..n)
            .map(|i| {
                let tgt = d.modules().get(i).unwrap_or(&zero);
                match self.components.get(i) {
                    Some(h) => h.decode(c.module(i), tgt),
                    None => Ok(ModuleHom::zero(c.module(i), tgt)),
                }
            })
            .collect::<Result<Vec<_>, _>>()?;
        let f = ChainMap { components };
        f.check(c, d)?;
        Ok(f)
    }
}

/// One summand of a chain module: `{"free": object index}` or
/// `{"permutation": [generator cycles]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SummandSpec {
    Free(usize),
    Permutation(Vec<Cycles>),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComplexSpec {
    pub ring: String,
    pub category: CategorySpec,
    /// `C_0, C_1, …`.
    pub modules: Vec<ModuleData>,
    /// `differentials[i]` is `d_{i+1}: C_{i+1} → C_i`, one matrix per object.
    pub differentials: Vec<HomSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub augmentation: Option<HomSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub decomposition: Option<Vec<Vec<SummandSpec>>>,
}

impl ComplexSpec {
    pub fn encode<S: Scalar>(c: &ChainComplex<S>) -> Self {
        let g = c.cat().group();
        ComplexSpec {
            ring: S::ring().to_string(),
            category: CategorySpec::describe(c.cat()),
            modules: c.modules().iter().map(ModuleData::encode).collect(),
            differentials: c.differentials().iter().map(HomSpec::encode).collect(),
            augmentation: c.augmentation().map(HomSpec::encode),
            decomposition: c.decomposition().map(|dec| {
                dec.iter()
                    .map(|row| {
                        row.iter()
                            .map(|s| match s {
                                Summand::Free(x) => SummandSpec::Free(x.0),
                                Summand::Permutation(k) => SummandSpec::Permutation(subgroup_to_spec(g, k)),
                            })
                            .collect()
                    })
                    .collect()
            }),
        }
    }

    pub fn decode<S: Scalar>(&self) -> Result<ChainComplex<S>, IoError> {
        check_ring::<S>(&self.ring)?;
        let cat = self.category.build()?;
        if self.modules.is_empty() {
            return Err(invalid("a complex needs at least one module"));
        }
        if self.differentials.len() + 1 != self.modules.len() {
            return Err(invalid("expected one differential fewer than modules"));
        }
        let modules = self
            .modules
            .iter()
            .map(|m| m.decode::<S>(&cat))
            .collect::<Result<Vec<_>, _>>()?;
        let diffs = self
            .differentials
            .iter()
            .enumerate()
            .map(|(i, d)| d.decode(&modules[i + 1], &modules[i]))
            .collect::<Result<Vec<_>, _>>()?;
        let mut c = ChainComplex::new(modules, diffs)?;
        if let Some(eps) = &self.augmentation {
            let eps = eps.decode(c.module(0), &RGammaModule::constant(cat.clone()))?;
            c = c.with_augmentation(eps)?;
        }
        if let Some(dec) = &self.decomposition {
            let g = cat.group();
            let dec = dec
                .iter()
                .map(|row| {
                    row.iter()
                        .map(|s| match s {
                            SummandSpec::Free(x) if *x < cat.num_objects() => Ok(Summand::Free(ObjectId(*x))),
                            SummandSpec::Free(x) => Err(invalid(format!("object index {x} out of range"))),
                            SummandSpec::Permutation(gens) => Ok(Summand::Permutation(subgroup_from_spec(g, gens)?)),
                        })
                        .collect::<Result<Vec<_>, _>>()
                })
                .collect::<Result<Vec<_>, _>>()?;
            if dec.len() != c.modules().len() {
                return Err(invalid("decomposition needs one entry per module"));
            }
            c = c.with_decomposition(dec);
            crate::complex::check_decomposition(&c)?;
        }
        Ok(c)
    }
}

/// A `G`-simplicial complex: vertex count, the vertex permutation of each group generator
/// as a 1-based image array, and the maximal simplices.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimplicialSpec {
    pub group: GroupSpec,
    pub vertices: usize,
    pub generator_actions: Vec<Vec<usize>>,
    pub maximal_simplices: Vec<Vec<usize>>,
}

fn zero_based(v: &[usize], n: usize) -> Result<Vec<usize>, IoError> {
    v.iter()
        .map(|&x| {
            (1..=n)
                .contains(&x)
                .then(|| x - 1)
                .ok_or_else(|| invalid(format!("vertex {x} outside 1..{n}")))
        })
        .collect()
}

impl SimplicialSpec {
    pub fn build(&self) -> Result<GSimplicialComplex, IoError> {
        let g = Arc::new(self.group.build()?);
        let n = self.vertices;
        let acts = self
            .generator_actions
            .iter()
            .map(|a| zero_based(a, n))
            .collect::<Result<Vec<_>, _>>()?;
        let simplices = self
            .maximal_simplices
            .iter()
            .map(|s| {
                let mut s = zero_based(s, n)?;
                s.sort_unstable();
                s.dedup();
                Ok(s)
            })
            .collect::<Result<Vec<Simplex>, IoError>>()?;
        Ok(GSimplicialComplex::new(g, n, &acts, &simplices)?)
    }

    pub fn describe(x: &GSimplicialComplex) -> Self {
        let one = |v: &[usize]| v.iter().map(|i| i + 1).collect::<Vec<_>>();
        SimplicialSpec {
            group: GroupSpec::describe(x.group()),
            vertices: x.num_vertices(),
            generator_actions: x.generator_actions().iter().map(|a| one(a)).collect(),
            maximal_simplices: x.maximal_simplices().iter().map(|s| one(s)).collect(),
        }
    }
}
