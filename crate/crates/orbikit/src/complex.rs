//! Chain complexes of module functors: homology, joins, Euler classes, dimension functions.

use std::fmt;
use std::sync::Arc;

use num_traits::One;
use serde::Serialize;

use crate::category::{MorphismId, ObjectId, OrbitCat};
use crate::error::{ComplexError, ModuleError};
use crate::field::{self, Echelon};
use crate::group::Subgroup;
use crate::matrix::{Matrix, SparseVec};
use crate::module::{FGAbGroup, ModuleHom, RGammaModule};
use crate::projective::{K0Free, K0Ring};
use crate::scalar::{Field, Rational, Scalar};

/// How a chain module decomposes: free summands, or permutation summands outside the family.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Summand {
    Free(ObjectId),
    /// `R[G/K]` with `K` not in the family; projective or not depending on the ring.
    Permutation(Subgroup),
}

/// A positive chain complex `C_0 ← C_1 ← … ← C_n`, with an optional augmentation
/// `C_0 → R` and an optional record of how each term decomposes.
#[derive(Clone)]
pub struct ChainComplex<S> {
    cat: Arc<OrbitCat>,
    modules: Vec<RGammaModule<S>>,
    /// `diffs[i]` is `d_{i+1}: C_{i+1} → C_i`.
    diffs: Vec<ModuleHom<S>>,
    augmentation: Option<ModuleHom<S>>,
    decomposition: Option<Vec<Vec<Summand>>>,
}

impl<S: Scalar> fmt::Debug for ChainComplex<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let dims: Vec<&[usize]> = self.modules.iter().map(|m| m.dims()).collect();
        write!(f, "ChainComplex<{}>{:?}", S::ring(), dims)
    }
}

/// A chain map `C → D` (degree 0).
#[derive(Clone)]
pub struct ChainMap<S> {
    pub components: Vec<ModuleHom<S>>,
}

/// Values per object, `-1` meaning empty.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct DimFunction(pub Vec<i64>);

impl fmt::Display for DimFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(i64::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// A pair of objects `(small, large)` with `small ≤ large` violating (strict) monotonicity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct MonotoneWitness {
    pub smaller: ObjectId,
    pub larger: ObjectId,
}

impl DimFunction {
    /// `d(K) ≤ d(H)` whenever `(H) ≤ (K)`.
    pub fn monotone_violation(&self, cat: &OrbitCat) -> Option<MonotoneWitness> {
        self.violation(cat, |dh, dk| dk <= dh, false)
    }

    /// Monotone, and `d(K) < d(H)` whenever `(H) < (K)`.
    pub fn strict_violation(&self, cat: &OrbitCat) -> Option<MonotoneWitness> {
        self.violation(cat, |dh, dk| dk < dh, true)
    }

    pub fn is_monotone(&self, cat: &OrbitCat) -> bool {
        self.monotone_violation(cat).is_none()
    }

    pub fn is_strictly_monotone(&self, cat: &OrbitCat) -> bool {
        self.strict_violation(cat).is_none()
    }

    fn violation(&self, cat: &OrbitCat, ok: impl Fn(i64, i64) -> bool, strict: bool) -> Option<MonotoneWitness> {
        for h in cat.object_ids() {
            for k in cat.object_ids() {
                let related = if strict { cat.lt(h, k) } else { cat.leq(h, k) };
                if related && !ok(self.0[h.0], self.0[k.0]) {
                    return Some(MonotoneWitness { smaller: h, larger: k });
                }
            }
        }
        None
    }
}

/// Homology groups indexed by `[object][degree]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Homology {
    pub groups: Vec<Vec<FGAbGroup>>,
}

impl Homology {
    pub fn at(&self, x: ObjectId, i: usize) -> &FGAbGroup {
        &self.groups[x.0][i]
    }

    /// Highest nonzero degree per object, `-1` if acyclic.
    pub fn dim_function(&self) -> DimFunction {
        DimFunction(
            self.groups
                .iter()
                .map(|g| g.iter().rposition(|h| !h.is_zero()).map_or(-1, |i| i as i64))
                .collect(),
        )
    }
}

/// Result of a sphere or Moore test: `Ok` or the first object and degree that fails.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum SphereCheck {
    Holds,
    Fails { object: ObjectId, degree: i64, reason: String },
}

impl SphereCheck {
    pub fn holds(&self) -> bool {
        matches!(self, SphereCheck::Holds)
    }
}

impl<S: Scalar> ChainComplex<S> {
    /// Validates shapes, naturality and `d∘d = 0`.
    pub fn new(modules: Vec<RGammaModule<S>>, diffs: Vec<ModuleHom<S>>) -> Result<Self, ComplexError> {
        let cat = modules
            .first()
            .map(|m| m.cat().clone())
            .ok_or_else(|| ComplexError::Precondition("a complex needs at least one term".into()))?;
        let c = ChainComplex {
            cat,
            modules,
            diffs,
            augmentation: None,
            decomposition: None,
        };
        c.validate()?;
        Ok(c)
    }

    /// Builds without checks, for internal constructions already known to be complexes.
    pub(crate) fn from_parts(cat: Arc<OrbitCat>, modules: Vec<RGammaModule<S>>, diffs: Vec<ModuleHom<S>>) -> Self {
        ChainComplex {
            cat,
            modules,
            diffs,
            augmentation: None,
            decomposition: None,
        }
    }

    pub fn validate(&self) -> Result<(), ComplexError> {
        if self.diffs.len() + 1 != self.modules.len() {
            return Err(ComplexError::Precondition("need exactly one differential per positive degree".into()));
        }
        for (i, d) in self.diffs.iter().enumerate() {
            d.check_natural(&self.modules[i + 1], &self.modules[i])?;
        }
        for i in 1..self.diffs.len() {
            let dd = self.diffs[i - 1].compose(&self.diffs[i]);
            if let Some(x) = self.cat.object_ids().find(|&x| !dd.component(x).is_zero()) {
                return Err(ComplexError::NotAComplex { degree: i + 1, object: x.0 });
            }
        }
        if let Some(eps) = &self.augmentation {
            let r = RGammaModule::constant(self.cat.clone());
            eps.check_natural(&self.modules[0], &r)?;
            if let Some(d1) = self.diffs.first() {
                if !eps.compose(d1).is_zero() {
                    return Err(ComplexError::NotAugmented);
                }
            }
        }
        Ok(())
    }

    pub fn with_augmentation(mut self, eps: ModuleHom<S>) -> Result<Self, ComplexError> {
        self.augmentation = Some(eps);
        self.validate()?;
        Ok(self)
    }

    pub fn with_decomposition(mut self, dec: Vec<Vec<Summand>>) -> Self {
        self.decomposition = Some(dec);
        self
    }

    /// The zero complex (a single zero term).
    pub fn zero(cat: Arc<OrbitCat>) -> Self {
        let m = RGammaModule::zero(cat.clone());
        ChainComplex::from_parts(cat, vec![m], vec![]).with_decomposition(vec![vec![]])
    }

    /// A module concentrated in degree 0.
    pub fn concentrated(m: RGammaModule<S>) -> Self {
        ChainComplex::from_parts(m.cat().clone(), vec![m], vec![])
    }

    /// The constant module in degree 0 with the identity augmentation.
    pub fn constant(cat: Arc<OrbitCat>) -> Self {
        let r = RGammaModule::constant(cat.clone());
        let id = ModuleHom::identity(&r);
        let mut c = ChainComplex::concentrated(r);
        c.augmentation = Some(id);
        if let Some(top) = cat.object_ids().find(|&x| cat.subgroup(x).order() == cat.group().order()) {
            c.decomposition = Some(vec![vec![Summand::Free(top)]]);
        }
        c
    }

    /// `R[G/H] → R[G/H]` by the identity, in degrees `k` and `k-1`.
    pub fn elementary(cat: Arc<OrbitCat>, x: ObjectId, k: usize) -> Self {
        assert!(k >= 1, "elementary complex needs k ≥ 1");
        let p = RGammaModule::free_module(cat.clone(), x);
        let z = RGammaModule::zero(cat.clone());
        let mut modules = vec![z.clone(); k + 1];
        modules[k - 1] = p.clone();
        modules[k] = p.clone();
        let mut diffs: Vec<ModuleHom<S>> = (0..k).map(|i| ModuleHom::zero(&modules[i + 1], &modules[i])).collect();
        diffs[k - 1] = ModuleHom::identity(&p);
        let mut dec = vec![vec![]; k + 1];
        dec[k - 1] = vec![Summand::Free(x)];
        dec[k] = vec![Summand::Free(x)];
        ChainComplex::from_parts(cat, modules, diffs).with_decomposition(dec)
    }

    pub fn cat(&self) -> &Arc<OrbitCat> {
        &self.cat
    }

    /// Top degree of the stored terms.
    pub fn top_degree(&self) -> usize {
        self.modules.len() - 1
    }

    pub fn module(&self, i: usize) -> &RGammaModule<S> {
        &self.modules[i]
    }

    pub fn modules(&self) -> &[RGammaModule<S>] {
        &self.modules
    }

    /// `d_i: C_i → C_{i-1}` for `i ≥ 1`.
    pub fn differential(&self, i: usize) -> &ModuleHom<S> {
        &self.diffs[i - 1]
    }

    pub fn differentials(&self) -> &[ModuleHom<S>] {
        &self.diffs
    }

    pub fn augmentation(&self) -> Option<&ModuleHom<S>> {
        self.augmentation.as_ref()
    }

    pub fn decomposition(&self) -> Option<&[Vec<Summand>]> {
        self.decomposition.as_deref()
    }

    /// Matrix of `d_i` at `x`, with `d_0 = 0`.
    pub fn boundary_at(&self, i: usize, x: ObjectId) -> Matrix<S> {
        if i == 0 || i > self.diffs.len() {
            let rows = if i == 0 { 0 } else { self.modules.get(i - 1).map_or(0, |m| m.dim(x)) };
            let cols = self.modules.get(i).map_or(0, |m| m.dim(x));
            Matrix::zeros(rows, cols)
        } else {
            self.diffs[i - 1].component(x).clone()
        }
    }

    /// Objectwise homology via ranks and invariant factors.
    pub fn homology(&self) -> Result<Homology, ComplexError> {
        let n = self.modules.len();
        let groups = self
            .cat
            .object_ids()
            .map(|x| {
                let ranks: Vec<usize> = (0..=n).map(|i| S::rank(&self.boundary_at(i, x))).collect();
                (0..n)
                    .map(|i| {
                        let rank = self.modules[i].dim(x) - ranks[i] - ranks[i + 1];
                        let torsion = if S::ring().is_field() || ranks[i + 1] == 0 {
                            Vec::new()
                        } else {
                            S::invariant_factors(&self.boundary_at(i + 1, x))?
                                .into_iter()
                                .filter(|d| !d.is_one())
                                .collect()
                        };
                        Ok(FGAbGroup { rank, torsion })
                    })
                    .collect::<Result<Vec<_>, ComplexError>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Homology { groups })
    }

    /// Highest degree with a nonzero term, per object.
    pub fn dim_function(&self) -> DimFunction {
        DimFunction(
            self.cat
                .object_ids()
                .map(|x| {
                    self.modules
                        .iter()
                        .rposition(|m| m.dim(x) > 0)
                        .map_or(-1, |i| i as i64)
                })
                .collect(),
        )
    }

    pub fn hdim_function(&self) -> Result<DimFunction, ComplexError> {
        Ok(self.homology()?.dim_function())
    }

    /// `R ← C_0 ← C_1 ← …` re-indexed so that `R` sits in degree 0.
    pub fn augmented(&self) -> Result<ChainComplex<S>, ComplexError> {
        let eps = self.augmentation.clone().ok_or(ComplexError::NotAugmented)?;
        let mut modules = vec![RGammaModule::constant(self.cat.clone())];
        modules.extend(self.modules.iter().cloned());
        let mut diffs = vec![eps];
        diffs.extend(self.diffs.iter().cloned());
        Ok(ChainComplex::from_parts(self.cat.clone(), modules, diffs))
    }

    /// Reduced homology; entry `[x][i]` is `H̃_{i-1}`, so index 0 holds degree `-1`.
    pub fn reduced_homology(&self) -> Result<Homology, ComplexError> {
        self.augmented()?.homology()
    }

    /// `H_0(C) ≅ R` through the augmentation, objectwise.
    pub fn is_connected(&self) -> Result<bool, ComplexError> {
        let red = self.reduced_homology()?;
        Ok(self
            .cat
            .object_ids()
            .all(|x| red.groups[x.0][0].is_zero() && red.groups[x.0].get(1).map_or(true, FGAbGroup::is_zero)))
    }

    /// Reduced homology concentrated in degree `n̄(H)` at every object.
    pub fn moore_check(&self, n: &DimFunction) -> Result<SphereCheck, ComplexError> {
        self.sphere_like(n, false)
    }

    /// Moore, with `H̃_{n̄(H)} ≅ R` at every object.
    pub fn sphere_check(&self, n: &DimFunction) -> Result<SphereCheck, ComplexError> {
        self.sphere_like(n, true)
    }

    fn sphere_like(&self, n: &DimFunction, sphere: bool) -> Result<SphereCheck, ComplexError> {
        let red = self.reduced_homology()?;
        for x in self.cat.object_ids() {
            let target = n.0[x.0];
            if target < 0 {
                return Ok(SphereCheck::Fails {
                    object: x,
                    degree: target,
                    reason: "Moore complexes need non-negative dimensions".into(),
                });
            }
            for (idx, h) in red.groups[x.0].iter().enumerate() {
                let deg = idx as i64 - 1;
                if deg == target {
                    if sphere && (h.rank != 1 || !h.torsion.is_empty()) {
                        return Ok(SphereCheck::Fails {
                            object: x,
                            degree: deg,
                            reason: format!("reduced homology is {h}, not R"),
                        });
                    }
                } else if !h.is_zero() {
                    return Ok(SphereCheck::Fails {
                        object: x,
                        degree: deg,
                        reason: format!("reduced homology {h} outside degree {target}"),
                    });
                }
            }
            if sphere && target as usize >= red.groups[x.0].len() - 1 {
                return Ok(SphereCheck::Fails {
                    object: x,
                    degree: target,
                    reason: "no term in the required degree".into(),
                });
            }
        }
        Ok(SphereCheck::Holds)
    }

    /// `σ(C) = Σ (-1)^i [C_i]` from the recorded decomposition, with the non-free
    /// summands listed separately as `(degree, subgroup)`.
    pub fn euler_free(&self) -> Result<(K0Free, Vec<(usize, Subgroup)>), ComplexError> {
        let dec = self
            .decomposition
            .as_ref()
            .ok_or(ComplexError::NotFree { degree: 0 })?;
        let mut k = K0Free::zero(self.cat.num_objects());
        let mut other = Vec::new();
        for (i, parts) in dec.iter().enumerate() {
            let sign = if i % 2 == 0 { 1 } else { -1 };
            for s in parts {
                match s {
                    Summand::Free(x) => k.coeffs[x.0] += sign,
                    Summand::Permutation(h) => other.push((i, h.clone())),
                }
            }
        }
        Ok((k, other))
    }

    /// `σ(C)`, failing when some term is not recorded as free.
    pub fn euler_class(&self) -> Result<K0Free, ComplexError> {
        let (k, other) = self.euler_free()?;
        match other.first() {
            Some((i, _)) => Err(ComplexError::NotFree { degree: *i }),
            None => Ok(k),
        }
    }

    pub fn is_free(&self) -> bool {
        self.decomposition
            .as_ref()
            .is_some_and(|d| d.iter().flatten().all(|s| matches!(s, Summand::Free(_))))
    }

    /// Pads with zero terms up to degree `n`.
    pub fn extended_to(&self, n: usize) -> Self {
        let mut c = self.clone();
        while c.modules.len() <= n {
            let z = RGammaModule::zero(self.cat.clone());
            let top = c.modules.last().expect("nonempty").clone();
            c.diffs.push(ModuleHom::zero(&z, &top));
            c.modules.push(z);
            if let Some(d) = &mut c.decomposition {
                d.push(vec![]);
            }
        }
        c
    }

    /// Drops zero terms from the top.
    pub fn trimmed(&self) -> Self {
        let mut c = self.clone();
        while c.modules.len() > 1 && c.modules.last().is_some_and(RGammaModule::is_zero) {
            c.modules.pop();
            c.diffs.pop();
            if let Some(d) = &mut c.decomposition {
                d.pop();
            }
        }
        c
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        let n = self.top_degree().max(other.top_degree());
        let (a, b) = (self.extended_to(n), other.extended_to(n));
        let modules = a.modules.iter().zip(&b.modules).map(|(x, y)| x.direct_sum(y)).collect();
        let diffs = a.diffs.iter().zip(&b.diffs).map(|(x, y)| x.direct_sum(y)).collect();
        let mut c = ChainComplex::from_parts(self.cat.clone(), modules, diffs);
        c.augmentation = match (&a.augmentation, &b.augmentation) {
            (Some(x), Some(y)) => Some(x.hstack(y)),
            _ => None,
        };
        c.decomposition = match (&a.decomposition, &b.decomposition) {
            (Some(x), Some(y)) => Some(x.iter().zip(y).map(|(p, q)| p.iter().chain(q).cloned().collect()).collect()),
            _ => None,
        };
        c
    }

    /// `ΣC`: shifted up by one with differential `-d`.
    pub fn suspension(&self) -> Self {
        let z = RGammaModule::zero(self.cat.clone());
        let mut modules = vec![z.clone()];
        modules.extend(self.modules.iter().cloned());
        let mut diffs = vec![ModuleHom::zero(&self.modules[0], &z)];
        diffs.extend(self.diffs.iter().map(ModuleHom::neg));
        let mut c = ChainComplex::from_parts(self.cat.clone(), modules, diffs);
        c.decomposition = self.decomposition.as_ref().map(|d| {
            let mut v = vec![vec![]];
            v.extend(d.iter().cloned());
            v
        });
        c
    }

    /// `Σ^{-1}C`, valid when `C_0 = 0`.
    pub fn desuspension(&self) -> Result<Self, ComplexError> {
        if !self.modules[0].is_zero() {
            return Err(ComplexError::Precondition("desuspension needs C_0 = 0".into()));
        }
        if self.modules.len() == 1 {
            return Ok(ChainComplex::zero(self.cat.clone()));
        }
        let modules = self.modules[1..].to_vec();
        let diffs = self.diffs[1..].iter().map(ModuleHom::neg).collect();
        let mut c = ChainComplex::from_parts(self.cat.clone(), modules, diffs);
        c.decomposition = self.decomposition.as_ref().map(|d| d[1..].to_vec());
        Ok(c)
    }

    pub fn map_scalars<T: Scalar>(&self, f: impl Fn(&S) -> T + Copy) -> ChainComplex<T> {
        ChainComplex {
            cat: self.cat.clone(),
            modules: self.modules.iter().map(|m| m.map_scalars(f)).collect(),
            diffs: self.diffs.iter().map(|d| d.map_scalars(f)).collect(),
            augmentation: self.augmentation.as_ref().map(|e| e.map_scalars(f)),
            decomposition: self.decomposition.clone(),
        }
    }

    /// Whether all objectwise homology vanishes.
    pub fn is_acyclic(&self) -> Result<bool, ComplexError> {
        Ok(self.homology()?.groups.iter().flatten().all(FGAbGroup::is_zero))
    }
}

impl ChainComplex<i64> {
    pub fn to_rational(&self) -> ChainComplex<Rational> {
        self.map_scalars(|a| Rational::from_integer((*a).into()))
    }
}

impl<S: Scalar> ChainMap<S> {
    pub fn identity(c: &ChainComplex<S>) -> Self {
        ChainMap {
            components: c.modules.iter().map(ModuleHom::identity).collect(),
        }
    }

    pub fn zero(c: &ChainComplex<S>, d: &ChainComplex<S>) -> Self {
        ChainMap {
            components: (0..c.modules.len())
                .map(|i| {
                    let tgt = d.modules.get(i).cloned().unwrap_or_else(|| RGammaModule::zero(c.cat.clone()));
                    ModuleHom::zero(&c.modules[i], &tgt)
                })
                .collect(),
        }
    }

    /// Naturality in every degree and `d' f = f d`.
    pub fn check(&self, c: &ChainComplex<S>, d: &ChainComplex<S>) -> Result<(), ComplexError> {
        let n = c.top_degree().max(d.top_degree());
        let (c, d) = (c.extended_to(n), d.extended_to(n));
        let f = self.extended(&c, &d);
        for i in 0..=n {
            f.components[i].check_natural(&c.modules[i], &d.modules[i])?;
        }
        for i in 1..=n {
            let lhs = d.differential(i).compose(&f.components[i]);
            let rhs = f.components[i - 1].compose(c.differential(i));
            if let Some(x) = c.cat.object_ids().find(|&x| lhs.component(x) != rhs.component(x)) {
                return Err(ComplexError::NotAChainMap { degree: i, object: x.0 });
            }
        }
        Ok(())
    }

    /// Pads with zero components to match padded complexes.
    fn extended(&self, c: &ChainComplex<S>, d: &ChainComplex<S>) -> Self {
        let mut comps = self.components.clone();
        while comps.len() < c.modules.len() {
            let i = comps.len();
            comps.push(ModuleHom::zero(&c.modules[i], &d.modules[i]));
        }
        ChainMap { components: comps }
    }

    pub fn compose(&self, other: &ChainMap<S>) -> ChainMap<S> {
        ChainMap {
            components: self
                .components
                .iter()
                .zip(&other.components)
                .map(|(a, b)| a.compose(b))
                .collect(),
        }
    }
}

/// The mapping cone `D ⊕ ΣC` with `∂(y, x) = (∂y + f x, -∂x)`.
pub fn mapping_cone<S: Scalar>(f: &ChainMap<S>, c: &ChainComplex<S>, d: &ChainComplex<S>) -> Result<ChainComplex<S>, ComplexError> {
    f.check(c, d)?;
    let n = c.top_degree().max(d.top_degree()) + 1;
    let (c, d) = (c.extended_to(n), d.extended_to(n));
    let f = f.extended(&c, &d);
    let cone_term = |k: usize| -> RGammaModule<S> {
        if k == 0 {
            d.modules[0].clone()
        } else {
            d.modules[k].direct_sum(&c.modules[k - 1])
        }
    };
    let modules: Vec<RGammaModule<S>> = (0..=n).map(cone_term).collect();
    let diffs = (1..=n)
        .map(|k| {
            let dd = d.differential(k);
            let fc = &f.components[k - 1];
            let top = dd.hstack(fc);
            if k == 1 {
                top
            } else {
                let lower = ModuleHom::zero(&d.modules[k], &c.modules[k - 2]).hstack(&c.differential(k - 1).neg());
                top.vstack(&lower)
            }
        })
        .collect();
    let mut cone = ChainComplex::from_parts(c.cat.clone(), modules, diffs);
    if let (Some(dc), Some(dd)) = (&c.decomposition, &d.decomposition) {
        cone.decomposition = Some(
            (0..=n)
                .map(|k| {
                    let mut v = dd[k].clone();
                    if k > 0 {
                        v.extend(dc[k - 1].iter().cloned());
                    }
                    v
                })
                .collect(),
        );
    }
    Ok(cone.trimmed())
}

/// Whether `f` induces an isomorphism on homology at every object (its cone is acyclic).
pub fn quasi_iso_check<S: Scalar>(f: &ChainMap<S>, c: &ChainComplex<S>, d: &ChainComplex<S>) -> Result<bool, ComplexError> {
    mapping_cone(f, c, d)?.is_acyclic()
}

/// The join `C ⋇ D = Σ(C̃ ⊗ D̃)` of augmented complexes.
///
/// Degree `k` is `C_k ⊕ D_k ⊕ ⊕_{i+j=k-1} C_i ⊗ D_j`; the result is augmented by `(ε, -ε)`.
pub fn join_tensor<S: Scalar>(c: &ChainComplex<S>, d: &ChainComplex<S>) -> Result<ChainComplex<S>, ComplexError> {
    let ca = c.augmented()?;
    let da = d.augmented()?;
    let cat = c.cat.clone();
    let (nc, nd) = (ca.modules.len(), da.modules.len());
    // augmented index a = degree + 1; tensor index t = a + b holds the join degree t - 1
    let summands = |t: usize| -> Vec<(usize, usize)> { (0..nc).filter(|&a| t >= a && t - a < nd).map(|a| (a, t - a)).collect() };
    let term = |t: usize| -> RGammaModule<S> {
        let parts: Vec<RGammaModule<S>> = summands(t).iter().map(|&(a, b)| ca.modules[a].tensor(&da.modules[b])).collect();
        RGammaModule::direct_sum_all(&cat, &parts)
    };
    let top = nc + nd - 2;
    let terms: Vec<RGammaModule<S>> = (0..=top).map(term).collect();
    let boundary = |t: usize| -> ModuleHom<S> {
        // from tensor index t to t - 1
        let src = summands(t);
        let tgt = summands(t - 1);
        let comps = cat
            .object_ids()
            .map(|x| {
                let rd: Vec<usize> = tgt.iter().map(|&(a, b)| ca.modules[a].dim(x) * da.modules[b].dim(x)).collect();
                let cd: Vec<usize> = src.iter().map(|&(a, b)| ca.modules[a].dim(x) * da.modules[b].dim(x)).collect();
                let mut blocks: Vec<Vec<Option<Matrix<S>>>> = vec![vec![None; src.len()]; tgt.len()];
                for (j, &(a, b)) in src.iter().enumerate() {
                    if a > 0 {
                        if let Some(i) = tgt.iter().position(|&p| p == (a - 1, b)) {
                            let m = ca.diffs[a - 1].component(x).kron(&Matrix::identity(da.modules[b].dim(x)));
                            blocks[i][j] = Some(m);
                        }
                    }
                    if b > 0 {
                        if let Some(i) = tgt.iter().position(|&p| p == (a, b - 1)) {
                            // sign (-1)^{deg a} with deg a = a - 1
                            let sign = if a % 2 == 1 { S::one() } else { -S::one() };
                            let m = Matrix::identity(ca.modules[a].dim(x)).kron(da.diffs[b - 1].component(x)).scale(&sign);
                            blocks[i][j] = Some(match blocks[i][j].take() {
                                Some(prev) => prev.add(&m),
                                None => m,
                            });
                        }
                    }
                }
                Matrix::from_blocks(&rd, &cd, &blocks)
            })
            .collect();
        ModuleHom::new(comps)
    };
    // join degree k = tensor index k + 1
    let modules: Vec<RGammaModule<S>> = terms[1..].to_vec();
    let diffs: Vec<ModuleHom<S>> = (2..=top).map(boundary).collect();
    let eps = boundary(1);
    let mut j = ChainComplex::from_parts(cat.clone(), modules, diffs);
    j.augmentation = Some(eps);
    if let (Some(dc), Some(dd)) = (&c.decomposition, &d.decomposition) {
        let ring = K0Ring::new(&cat);
        let n = cat.num_objects();
        let unit_dec = |sums: &[Summand]| -> Option<K0Free> {
            let mut k = K0Free::zero(n);
            for s in sums {
                match s {
                    Summand::Free(x) => k.coeffs[x.0] += 1,
                    Summand::Permutation(_) => return None,
                }
            }
            Some(k)
        };
        let dec: Option<Vec<Vec<Summand>>> = (1..=top)
            .map(|t| {
                let mut class = K0Free::zero(n);
                for (a, b) in summands(t) {
                    let ka = if a == 0 { ring.one() } else { unit_dec(&dc[a - 1])? };
                    let kb = if b == 0 { ring.one() } else { unit_dec(&dd[b - 1])? };
                    class = &class + &ring.multiply(&ka, &kb);
                }
                if class.unit != 0 || class.coeffs.iter().any(|&c| c < 0) {
                    return None;
                }
                Some(
                    class
                        .coeffs
                        .iter()
                        .enumerate()
                        .flat_map(|(x, &c)| std::iter::repeat(Summand::Free(ObjectId(x))).take(c as usize))
                        .collect(),
                )
            })
            .collect();
        j.decomposition = dec;
    }
    Ok(j)
}

impl<F: Field> ChainMap<F> {
    /// `H_i(C) → H_i(D)` in the bases of [`ChainComplex::homology_module`].
    pub fn on_homology(&self, i: usize, c: &ChainComplex<F>, d: &ChainComplex<F>) -> ModuleHom<F> {
        let n = c.top_degree().max(d.top_degree()).max(i);
        let (c, d) = (c.extended_to(n), d.extended_to(n));
        let f = self.extended(&c, &d);
        let (hc, inc_c, proj_c) = c.homology_module(i);
        let (hd, inc_d, proj_d) = d.homology_module(i);
        ModuleHom::new(
            c.cat
                .object_ids()
                .map(|x| {
                    if hc.dim(x) == 0 || hd.dim(x) == 0 {
                        return Matrix::zeros(hd.dim(x), hc.dim(x));
                    }
                    let s = field::solve(proj_c.component(x), &Matrix::identity(hc.dim(x))).expect("projection is onto");
                    let image = f.components[i].component(x).mul(&inc_c.component(x).mul(&s));
                    let z = field::solve(inc_d.component(x), &image).expect("cycles map to cycles");
                    proj_d.component(x).mul(&z)
                })
                .collect(),
        )
    }
}

/// Over a field: homology modules `H_i(C)` as functors, with the Weyl actions at each object.
impl<F: Field> ChainComplex<F> {
    /// `Z_i(C)` with its inclusion into `C_i`.
    pub fn cycles(&self, i: usize) -> (RGammaModule<F>, ModuleHom<F>) {
        let ci = &self.modules[i];
        if i == 0 {
            (ci.clone(), ModuleHom::identity(ci))
        } else {
            ci.kernel_of(self.differential(i))
        }
    }

    /// `H_i(C)` as a module, with the cycle inclusion `Z_i → C_i` and projection `Z_i → H_i`.
    pub fn homology_module(&self, i: usize) -> (RGammaModule<F>, ModuleHom<F>, ModuleHom<F>) {
        let (z, inc) = self.cycles(i);
        let bounds: Vec<Matrix<F>> = if i < self.diffs.len() {
            let d = self.differential(i + 1);
            self.cat
                .object_ids()
                .map(|x| field::solve(inc.component(x), d.component(x)).expect("boundaries are cycles"))
                .collect()
        } else {
            self.cat.object_ids().map(|x| Matrix::zeros(z.dim(x), 0)).collect()
        };
        let (h, proj) = z.quotient(&bounds);
        (h, inc, proj)
    }

    /// Cycles at `x` in degree `i` whose classes form a basis of `H_i(C(x))`, with an
    /// echelon basis of the boundaries.
    pub fn homology_basis_at(&self, i: usize, x: ObjectId) -> (Echelon<F>, Vec<SparseVec<F>>) {
        let n = self.modules[i].dim(x);
        let z = field::kernel(&self.boundary_at(i, x));
        let mut b = Echelon::new(n);
        if i + 1 < self.modules.len() {
            for c in self.boundary_at(i + 1, x).columns() {
                b.insert(c);
            }
        }
        let mut ext = b.clone();
        let reps = z.columns().into_iter().filter(|c| ext.insert(c.clone())).collect();
        (b, reps)
    }

    /// Matrices of the generators of `Aut(x)` on `H_i(C(x))` in the basis of
    /// [`homology_basis_at`](Self::homology_basis_at), with the generating automorphisms.
    pub fn weyl_action(&self, i: usize, x: ObjectId) -> Vec<(MorphismId, Matrix<F>)> {
        let (b, reps) = self.homology_basis_at(i, x);
        let mut track = Echelon::tracking(b.ambient_dim());
        for r in b.basis() {
            track.insert(r.clone());
        }
        let offset = b.rank();
        for r in &reps {
            track.insert(r.clone());
        }
        self.aut_generators(x)
            .into_iter()
            .map(|a| {
                let m = self.modules[i].action(a);
                let cols: Vec<SparseVec<F>> = reps
                    .iter()
                    .map(|z| {
                        let w = track.express(m.mul_vec(z)).expect("automorphisms preserve cycles");
                        w.into_iter().filter(|(k, _)| *k >= offset).map(|(k, c)| (k - offset, c)).collect()
                    })
                    .collect();
                (a, Matrix::from_columns(reps.len(), &cols))
            })
            .collect()
    }

    fn aut_generators(&self, x: ObjectId) -> Vec<MorphismId> {
        self.cat
            .generating_morphisms()
            .iter()
            .copied()
            .filter(|&f| {
                let m = self.cat.morphism(f);
                m.src == x && m.tgt == x
            })
            .collect()
    }

    /// Whether `Aut(x)` acts trivially on `H̃_{n̄(x)}(C(x))` at every object.
    pub fn orientation_check(&self, n: &DimFunction) -> Result<SphereCheck, ComplexError> {
        let aug = self.augmented()?;
        for x in self.cat.object_ids() {
            let deg = n.0[x.0];
            if deg < 0 || (deg + 1) as usize >= aug.modules.len() {
                continue;
            }
            let i = (deg + 1) as usize;
            let (b, reps) = aug.homology_basis_at(i, x);
            for a in aug.aut_generators(x) {
                let m = aug.modules[i].action(a);
                let moved = reps.iter().any(|z| {
                    let w = crate::matrix::axpy_sparse(&m.mul_vec(z), &-F::one(), z);
                    !b.contains(&w)
                });
                if moved {
                    return Ok(SphereCheck::Fails {
                        object: x,
                        degree: deg,
                        reason: format!("automorphism {} acts nontrivially", a.0),
                    });
                }
            }
        }
        Ok(SphereCheck::Holds)
    }
}

/// Validates that every free-decomposition entry matches its module dimension vector.
pub fn check_decomposition<S: Scalar>(c: &ChainComplex<S>) -> Result<(), ModuleError> {
    let Some(dec) = &c.decomposition else {
        return Ok(());
    };
    for (i, parts) in dec.iter().enumerate() {
        for x in c.cat.object_ids() {
            let expected: usize = parts
                .iter()
                .map(|s| match s {
                    Summand::Free(y) => c.cat.hom_count(x, *y),
                    Summand::Permutation(k) => {
                        let g = c.cat.group();
                        let h = c.cat.subgroup(x);
                        let nf = g.left_coset_normal_forms(k);
                        g.left_coset_reps(k)
                            .into_iter()
                            .filter(|&cc| h.generators().iter().all(|&s| nf[g.mul(s, cc)] == cc))
                            .count()
                    }
                })
                .sum();
            if expected != c.modules[i].dim(x) {
                return Err(ModuleError::Invalid(format!(
                    "recorded decomposition of degree {i} has rank {expected} at object {}, module has {}",
                    x.0,
                    c.modules[i].dim(x)
                )));
            }
        }
    }
    Ok(())
}
