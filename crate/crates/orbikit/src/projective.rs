//! Free covers, projectivity certificates and the free Grothendieck group.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use serde::Serialize;

use crate::category::{AutCategory, ObjectId, OrbitCat};
use crate::error::ModuleError;
use crate::field::Echelon;
use crate::functors::{splitting_dims, splitting_functor};
use crate::matrix::{Matrix, SparseVec};
use crate::module::{ModuleHom, RGammaModule};
use crate::scalar::{Field, Scalar};

/// A surjection from a free module `⊕ R[G/H_x]`, one summand per generator.
#[derive(Clone)]
pub struct FreeCover<S> {
    pub generators: Vec<(ObjectId, SparseVec<S>)>,
    pub free: RGammaModule<S>,
    pub map: ModuleHom<S>,
}

impl<S: Scalar> FreeCover<S> {
    /// The map `⊕ R[G/H_x] → M` sending the identity of the `i`-th summand to the `i`-th generator.
    pub fn from_generators(m: &RGammaModule<S>, generators: Vec<(ObjectId, SparseVec<S>)>) -> Self {
        let cat = m.cat();
        let parts: Vec<RGammaModule<S>> = generators
            .iter()
            .map(|(x, _)| RGammaModule::free_module(cat.clone(), *x))
            .collect();
        let free = RGammaModule::direct_sum_all(cat, &parts);
        let mut map = ModuleHom::new(cat.object_ids().map(|y| Matrix::zeros(m.dim(y), 0)).collect());
        for (x, v) in &generators {
            map = map.hstack(&m.yoneda_map(*x, v));
        }
        FreeCover { generators, free, map }
    }

    /// Every standard basis vector at every object; surjective over any ring.
    pub fn spanning(m: &RGammaModule<S>) -> Self {
        let gens = m
            .cat()
            .object_ids()
            .flat_map(|x| (0..m.dim(x)).map(move |j| (x, vec![(j, S::one())])))
            .collect();
        Self::from_generators(m, gens)
    }

    pub fn objects(&self) -> Vec<ObjectId> {
        self.generators.iter().map(|(x, _)| *x).collect()
    }

    /// A section `s` with `map ∘ s = id`, which exists exactly when `M` is projective.
    pub fn section(&self, m: &RGammaModule<S>) -> Option<ModuleHom<S>> {
        self.map.right_inverse(&self.free, m)
    }
}

impl<F: Field> FreeCover<F> {
    /// Generators chosen greedily, largest objects first, from standard basis vectors
    /// outside the span of what earlier generators already reach.
    pub fn greedy(m: &RGammaModule<F>) -> Self {
        let cat = m.cat();
        let mut gens: Vec<(ObjectId, SparseVec<F>)> = Vec::new();
        for x in cat.object_ids().rev() {
            let mut span = Echelon::new(m.dim(x));
            for (z, v) in &gens {
                for u in cat.hom_ids(x, *z) {
                    span.insert(m.action(u).mul_vec(v));
                }
            }
            for j in 0..m.dim(x) {
                if span.rank() == m.dim(x) {
                    break;
                }
                let e: SparseVec<F> = vec![(j, F::one())];
                if span.contains(&e) {
                    continue;
                }
                for a in cat.hom_ids(x, x) {
                    span.insert(m.action(a).mul_vec(&e));
                }
                gens.push((x, e));
            }
        }
        Self::from_generators(m, gens)
    }
}

/// Projective modules over `F[W]` have dimension divisible by the `p`-part of `|W|`,
/// so each `S_x M` must too.
fn splitting_dims_divisible<F: Field>(m: &RGammaModule<F>) -> bool {
    let p = F::ring().characteristic() as usize;
    if p == 0 {
        return true;
    }
    let cat = m.cat();
    splitting_dims(m).iter().zip(cat.object_ids()).all(|(&d, x)| {
        let mut w = cat.aut_order(x);
        let mut pp = 1;
        while w % p == 0 {
            w /= p;
            pp *= p;
        }
        d % pp == 0
    })
}

/// Projectivity over a field from splitting data alone, without a certificate.
///
/// The map `⊕ E_x S_x M → M` built from lifted sections is always onto, so `M` is
/// projective exactly when every `S_x M` is projective over `F[Aut x]` and the dimensions
/// `dim E_x S_x M (y) = |Hom(y, x)| / |Aut x| · dim S_x M` add up to `dim M(y)`.
pub fn is_projective_by_splitting<F: Field>(m: &RGammaModule<F>) -> bool {
    let cat = m.cat();
    let p = F::ring().characteristic() as usize;
    let mut expected = vec![0usize; cat.num_objects()];
    for x in cat.object_ids() {
        let aut = cat.aut_category(x);
        let (s, _) = splitting_functor(m, &aut);
        let d = s.dim(ObjectId(0));
        if d == 0 {
            continue;
        }
        if p != 0 && !free_over_sylow(&s, &aut, p) {
            return false;
        }
        for y in cat.object_ids() {
            expected[y.0] += cat.hom_count(y, x) / cat.aut_order(x) * d;
        }
    }
    cat.object_ids().all(|y| expected[y.0] == m.dim(y))
}

/// A module over a `p`-group is free exactly when the norm element has rank `dim / |P|`;
/// projectivity over `F[W]` is freeness over a Sylow `p`-subgroup.
fn free_over_sylow<F: Field>(s: &RGammaModule<F>, aut: &AutCategory, p: usize) -> bool {
    let w = aut.cat.group();
    let sylow = w.sylow(p);
    let d = s.dim(ObjectId(0));
    if d % sylow.order() != 0 {
        return false;
    }
    let norm = sylow
        .elements()
        .iter()
        .map(|&g| {
            let f = aut.cat.morphism_for(ObjectId(0), ObjectId(0), g).expect("regular object");
            s.action(f).clone()
        })
        .reduce(|a, b| a.add(&b))
        .expect("nonempty group");
    crate::field::rank(&norm) * sylow.order() == d
}

/// Projectivity over a field, with a splitting of the greedy free cover as certificate.
pub fn is_projective<F: Field>(m: &RGammaModule<F>) -> Option<(FreeCover<F>, ModuleHom<F>)> {
    if !splitting_dims_divisible(m) || !is_projective_by_splitting(m) {
        return None;
    }
    let cover = FreeCover::greedy(m);
    let s = cover.section(m)?;
    Some((cover, s))
}

/// Projectivity over the integers, decided by integral solvability of the splitting system.
pub fn is_projective_integral(m: &RGammaModule<i64>) -> Option<(FreeCover<i64>, ModuleHom<i64>)> {
    let cover = FreeCover::spanning(m);
    let s = cover.section(m)?;
    Some((cover, s))
}

/// An element of the free Grothendieck group with a formal unit `[R]` adjoined.
///
/// `coeffs[x]` counts `R[G/H_x]`; `unit` counts the constant module, which is folded into
/// the top coefficient whenever `G` itself lies in the family.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct K0Free {
    pub unit: i64,
    pub coeffs: Vec<i64>,
}

impl K0Free {
    pub fn zero(n: usize) -> Self {
        K0Free {
            unit: 0,
            coeffs: vec![0; n],
        }
    }

    pub fn basis(n: usize, x: ObjectId) -> Self {
        let mut k = Self::zero(n);
        k.coeffs[x.0] = 1;
        k
    }

    /// The class of `⊕ R[G/H_x]` over the listed objects.
    pub fn from_objects(n: usize, objs: &[ObjectId]) -> Self {
        let mut k = Self::zero(n);
        for x in objs {
            k.coeffs[x.0] += 1;
        }
        k
    }

    pub fn is_zero(&self) -> bool {
        self.unit == 0 && self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn scale(&self, c: i64) -> Self {
        K0Free {
            unit: self.unit * c,
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }
}

impl Add for &K0Free {
    type Output = K0Free;
    fn add(self, o: &K0Free) -> K0Free {
        K0Free {
            unit: self.unit + o.unit,
            coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &K0Free {
    type Output = K0Free;
    fn sub(self, o: &K0Free) -> K0Free {
        self + &o.scale(-1)
    }
}

impl Neg for &K0Free {
    type Output = K0Free;
    fn neg(self) -> K0Free {
        self.scale(-1)
    }
}

impl fmt::Display for K0Free {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms: Vec<String> = Vec::new();
        if self.unit != 0 {
            terms.push(format!("{}[R]", self.unit));
        }
        for (x, &c) in self.coeffs.iter().enumerate() {
            if c != 0 {
                terms.push(format!("{c}[{x}]"));
            }
        }
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

/// Multiplication in `K_0(RΓ, free)` from `R[G/H] ⊗ R[G/K] ≅ ⊕_{H\G/K} R[G/(H ∩ gKg⁻¹)]`.
pub struct K0Ring {
    n: usize,
    whole: Option<usize>,
    table: Vec<Vec<Vec<i64>>>,
}

impl K0Ring {
    pub fn new(cat: &OrbitCat) -> Self {
        let g = cat.group();
        let n = cat.num_objects();
        let mut table = vec![vec![vec![0i64; n]; n]; n];
        for x in cat.object_ids() {
            for y in cat.object_ids() {
                let (hx, hy) = (cat.subgroup(x), cat.subgroup(y));
                for d in g.double_cosets(hx, hy) {
                    let inter = hx.intersect(g, &g.conjugate(hy, g.inv(d)));
                    let (z, _) = cat.object_of(&inter).expect("family is closed under subgroups");
                    table[x.0][y.0][z.0] += 1;
                }
            }
        }
        let whole = cat
            .object_ids()
            .find(|&x| cat.subgroup(x).order() == g.order())
            .map(|x| x.0);
        K0Ring { n, whole, table }
    }

    pub fn one(&self) -> K0Free {
        self.normalize(K0Free {
            unit: 1,
            coeffs: vec![0; self.n],
        })
    }

    /// Folds the formal unit into `[R[G/G]]` when that object exists.
    pub fn normalize(&self, mut a: K0Free) -> K0Free {
        if let Some(w) = self.whole {
            a.coeffs[w] += a.unit;
            a.unit = 0;
        }
        a
    }

    pub fn multiply(&self, a: &K0Free, b: &K0Free) -> K0Free {
        let mut out = K0Free {
            unit: a.unit * b.unit,
            coeffs: vec![0; self.n],
        };
        for x in 0..self.n {
            out.coeffs[x] += a.unit * b.coeffs[x] + b.unit * a.coeffs[x];
        }
        for (x, &ax) in a.coeffs.iter().enumerate() {
            if ax == 0 {
                continue;
            }
            for (y, &by) in b.coeffs.iter().enumerate() {
                if by == 0 {
                    continue;
                }
                for (z, &t) in self.table[x][y].iter().enumerate() {
                    out.coeffs[z] += ax * by * t;
                }
            }
        }
        self.normalize(out)
    }
}

/// Free class of a module over a field, read off from `dim S_x(M) = n_x |Aut(x)|`.
///
/// Exact for free modules; errors when some `S_x(M)` has dimension not divisible by `|Aut(x)|`.
pub fn k0_class<F: Field>(m: &RGammaModule<F>) -> Result<K0Free, ModuleError> {
    let cat = m.cat();
    let dims = splitting_dims(m);
    let mut k = K0Free::zero(cat.num_objects());
    for x in cat.object_ids() {
        let a = cat.aut_order(x);
        if dims[x.0] % a != 0 {
            return Err(ModuleError::Invalid(format!(
                "splitting module at object {} has dimension {} not divisible by |Aut| = {}",
                x.0, dims[x.0], a
            )));
        }
        k.coeffs[x.0] = (dims[x.0] / a) as i64;
    }
    Ok(k)
}
