//! Contravariant module functors over an orbit category.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::One;
use rand::Rng;

use crate::category::{MorphismId, ObjectId, OrbitCat};
use crate::error::ModuleError;
use crate::field::{self, Echelon};
use crate::group::Subgroup;
use crate::matrix::{Matrix, SparseVec};
use crate::scalar::{Field, Scalar};

/// A finitely generated abelian group `Z^rank ⊕ ⊕ Z/d_i` (over a field: a vector space).
#[derive(Clone, Debug, PartialEq, Eq, Hash, serde::Serialize)]
pub struct FGAbGroup {
    pub rank: usize,
    pub torsion: Vec<BigInt>,
}

impl FGAbGroup {
    pub fn zero() -> Self {
        FGAbGroup {
            rank: 0,
            torsion: Vec::new(),
        }
    }

    pub fn free(rank: usize) -> Self {
        FGAbGroup {
            rank,
            torsion: Vec::new(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }

    /// Cokernel of a matrix, `Z^rows / image`.
    pub fn cokernel<S: Scalar>(m: &Matrix<S>) -> Result<Self, crate::error::LinalgError> {
        let inv = S::invariant_factors(m)?;
        let torsion: Vec<BigInt> = inv.iter().filter(|d| !d.is_one()).cloned().collect();
        Ok(FGAbGroup {
            rank: m.rows() - inv.len(),
            torsion,
        })
    }
}

impl fmt::Display for FGAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if self.rank > 0 {
            parts.push(if self.rank == 1 { "R".to_string() } else { format!("R^{}", self.rank) });
        }
        parts.extend(self.torsion.iter().map(|d| format!("Z/{d}")));
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// A contravariant functor `Γ → R-mod` with free values.
///
/// For `f: y → x` the matrix `action(f)` maps `value(x)` to `value(y)` and has shape
/// `dim(y) × dim(x)`; functoriality reads `action(f ∘ g) = action(g) · action(f)`.
#[derive(Clone)]
pub struct RGammaModule<S> {
    cat: Arc<OrbitCat>,
    dims: Vec<usize>,
    actions: Vec<Matrix<S>>,
}

impl<S: Scalar> fmt::Debug for RGammaModule<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RGammaModule<{}>(dims {:?})", S::ring(), self.dims)
    }
}

/// A natural transformation, one matrix per object (`dim_target(x) × dim_source(x)`).
#[derive(Clone)]
pub struct ModuleHom<S> {
    components: Vec<Matrix<S>>,
}

impl<S: Scalar> fmt::Debug for ModuleHom<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.components).finish()
    }
}

impl<S: Scalar> PartialEq for ModuleHom<S> {
    fn eq(&self, other: &Self) -> bool {
        self.components == other.components
    }
}

impl<S: Scalar> RGammaModule<S> {
    /// Checks shapes; functoriality is checked separately by [`Self::check_functorial`].
    pub fn new(cat: Arc<OrbitCat>, dims: Vec<usize>, actions: Vec<Matrix<S>>) -> Result<Self, ModuleError> {
        if dims.len() != cat.num_objects() || actions.len() != cat.num_morphisms() {
            return Err(ModuleError::Invalid("dimension or action count does not match the category".into()));
        }
        for f in cat.morphism_ids() {
            let m = cat.morphism(f);
            if actions[f.0].shape() != (dims[m.src.0], dims[m.tgt.0]) {
                return Err(ModuleError::Invalid(format!("action of morphism {} has the wrong shape", f.0)));
            }
        }
        Ok(RGammaModule { cat, dims, actions })
    }

    /// Builds a module from a function giving the action of every morphism.
    pub fn from_fn(cat: Arc<OrbitCat>, dims: Vec<usize>, action: impl Fn(MorphismId) -> Matrix<S>) -> Self {
        let actions = cat.morphism_ids().map(action).collect();
        RGammaModule::new(cat, dims, actions).expect("consistent shapes")
    }

    pub fn zero(cat: Arc<OrbitCat>) -> Self {
        let dims = vec![0; cat.num_objects()];
        Self::from_fn(cat, dims, |_| Matrix::zeros(0, 0))
    }

    /// The constant functor `R`.
    pub fn constant(cat: Arc<OrbitCat>) -> Self {
        let dims = vec![1; cat.num_objects()];
        Self::from_fn(cat, dims, |_| Matrix::identity(1))
    }

    /// `H ↦ R[(G/K)^H]` for any subgroup `K` (free when `K` is in the family).
    ///
    /// The basis at each object is the list of fixed cosets ordered by least element.
    pub fn permutation_module(cat: Arc<OrbitCat>, k: &Subgroup) -> Self {
        let g = cat.group();
        let nf = g.left_coset_normal_forms(k);
        let cosets = g.left_coset_reps(k);
        let fixed: Vec<Vec<usize>> = cat
            .object_ids()
            .map(|x| {
                let h = cat.subgroup(x);
                cosets
                    .iter()
                    .copied()
                    .filter(|&c| h.generators().iter().all(|&s| nf[g.mul(s, c)] == c))
                    .collect()
            })
            .collect();
        let dims: Vec<usize> = fixed.iter().map(Vec::len).collect();
        let c2 = cat.clone();
        Self::from_fn(cat, dims, |f| {
            let m = c2.morphism(f);
            let src = &fixed[m.src.0];
            let targets: Vec<usize> = fixed[m.tgt.0]
                .iter()
                .map(|&c| {
                    let img = nf[c2.group().mul(m.rep, c)];
                    src.binary_search(&img).expect("fixed coset maps to fixed coset")
                })
                .collect();
            Matrix::monomial(src.len(), &targets, &vec![S::one(); targets.len()])
        })
    }

    /// The free module `R[G/H_x]`; its basis at `y` is `Mor(y, x)` in id order.
    pub fn free_module(cat: Arc<OrbitCat>, x: ObjectId) -> Self {
        let k = cat.subgroup(x).clone();
        Self::permutation_module(cat, &k)
    }

    pub fn cat(&self) -> &Arc<OrbitCat> {
        &self.cat
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self, x: ObjectId) -> usize {
        self.dims[x.0]
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.dims.iter().all(|&d| d == 0)
    }

    pub fn action(&self, f: MorphismId) -> &Matrix<S> {
        &self.actions[f.0]
    }

    pub fn actions(&self) -> &[Matrix<S>] {
        &self.actions
    }

    /// Objects where the value is nonzero.
    pub fn support(&self) -> Vec<ObjectId> {
        self.cat.object_ids().filter(|&x| self.dims[x.0] > 0).collect()
    }

    /// `max l(x)` over the support, or `-1` for the zero module.
    pub fn length(&self) -> i64 {
        let l = self.cat.lengths();
        self.support().iter().map(|x| l[x.0] as i64).max().unwrap_or(-1)
    }

    pub fn same_category(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.cat, &other.cat)
    }

    /// Verifies identities act trivially and `M(f∘g) = M(g)M(f)` on all composable pairs.
    pub fn check_functorial(&self) -> Result<(), ModuleError> {
        for x in self.cat.object_ids() {
            let id = self.cat.identity(x);
            if self.dims[x.0] > 0 && !self.actions[id.0].is_identity() {
                return Err(ModuleError::NotFunctorial(id.0, id.0));
            }
        }
        for f in self.cat.morphism_ids() {
            let mf = self.cat.morphism(f);
            for g in self.cat.hom_ids_into(mf.src) {
                let fg = self.cat.compose(f, g);
                if self.actions[fg.0] != self.actions[g.0].mul(&self.actions[f.0]) {
                    return Err(ModuleError::NotFunctorial(f.0, g.0));
                }
            }
        }
        Ok(())
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        assert!(self.same_category(other), "direct sum across categories");
        let dims = self.dims.iter().zip(&other.dims).map(|(a, b)| a + b).collect();
        let actions = self
            .actions
            .iter()
            .zip(&other.actions)
            .map(|(a, b)| a.direct_sum(b))
            .collect();
        RGammaModule {
            cat: self.cat.clone(),
            dims,
            actions,
        }
    }

    pub fn direct_sum_all(cat: &Arc<OrbitCat>, parts: &[Self]) -> Self {
        parts
            .iter()
            .fold(RGammaModule::zero(cat.clone()), |acc, m| acc.direct_sum(m))
    }

    /// `M ⊗_R N` with the diagonal action; basis pairs `(i, j)` ordered row-major.
    pub fn tensor(&self, other: &Self) -> Self {
        assert!(self.same_category(other), "tensor across categories");
        let dims = self.dims.iter().zip(&other.dims).map(|(a, b)| a * b).collect();
        let actions = self
            .actions
            .iter()
            .zip(&other.actions)
            .map(|(a, b)| a.kron(b))
            .collect();
        RGammaModule {
            cat: self.cat.clone(),
            dims,
            actions,
        }
    }

    /// Restricts values to objects in `keep` (others become zero), e.g. `I_x Res_x`.
    pub fn restrict_support(&self, keep: &[ObjectId]) -> Self {
        let on = |x: ObjectId| keep.contains(&x);
        let dims: Vec<usize> = self
            .cat
            .object_ids()
            .map(|x| if on(x) { self.dims[x.0] } else { 0 })
            .collect();
        let actions = self
            .cat
            .morphism_ids()
            .map(|f| {
                let m = self.cat.morphism(f);
                if on(m.src) && on(m.tgt) {
                    self.actions[f.0].clone()
                } else {
                    Matrix::zeros(dims[m.src.0], dims[m.tgt.0])
                }
            })
            .collect();
        RGammaModule {
            cat: self.cat.clone(),
            dims,
            actions,
        }
    }

    /// Converts coefficients (e.g. reduction mod p of an integral module).
    pub fn map_scalars<T: Scalar>(&self, f: impl Fn(&S) -> T) -> RGammaModule<T> {
        RGammaModule {
            cat: self.cat.clone(),
            dims: self.dims.clone(),
            actions: self.actions.iter().map(|a| a.map(&f)).collect(),
        }
    }

    /// The Yoneda map `R[G/H_x] → M` sending the identity of `x` to `v ∈ M(x)`.
    pub fn yoneda_map(&self, x: ObjectId, v: &SparseVec<S>) -> ModuleHom<S> {
        let components = self
            .cat
            .object_ids()
            .map(|y| {
                let cols: Vec<SparseVec<S>> = self.cat.hom_ids(y, x).map(|u| self.actions[u.0].mul_vec(v)).collect();
                Matrix::from_columns(self.dims[y.0], &cols)
            })
            .collect();
        ModuleHom { components }
    }

    /// Basis of `Hom(M, N)` (a lattice basis over the integers) from the naturality system.
    pub fn hom_basis(&self, other: &Self) -> Vec<ModuleHom<S>> {
        let (sys, offsets) = naturality_system(self, other);
        let kernel = S::kernel(&sys);
        kernel
            .columns()
            .into_iter()
            .map(|c| unflatten(&c, &offsets, self, other))
            .collect()
    }

    pub fn hom_dim(&self, other: &Self) -> usize {
        let (sys, _) = naturality_system(self, other);
        sys.cols() - S::rank(&sys)
    }

    /// Change of basis: new actions `T_y⁻¹ M(f) T_x` for invertible `T` supplied with inverses.
    pub fn conjugate_by(&self, t: &[Matrix<S>], t_inv: &[Matrix<S>]) -> Self {
        let actions = self
            .cat
            .morphism_ids()
            .map(|f| {
                let m = self.cat.morphism(f);
                t_inv[m.src.0].mul(&self.actions[f.0]).mul(&t[m.tgt.0])
            })
            .collect();
        RGammaModule {
            cat: self.cat.clone(),
            dims: self.dims.clone(),
            actions,
        }
    }

    /// The dual covariant functor `Hom_R(M, R)`.
    pub fn dual(&self) -> LeftModule<S> {
        LeftModule {
            cat: self.cat.clone(),
            dims: self.dims.clone(),
            actions: self.actions.iter().map(Matrix::transpose).collect(),
        }
    }
}

/// Builds the linear system whose solutions are natural transformations `M → N`.
///
/// Unknowns are the row-major entries of the components; equations are imposed on a
/// generating set of morphisms, which suffices by functoriality.
fn naturality_system<S: Scalar>(m: &RGammaModule<S>, n: &RGammaModule<S>) -> (Matrix<S>, Vec<usize>) {
    assert!(m.same_category(n), "hom across categories");
    let cat = &m.cat;
    let mut offsets = Vec::with_capacity(cat.num_objects() + 1);
    let mut total = 0;
    for x in cat.object_ids() {
        offsets.push(total);
        total += m.dims[x.0] * n.dims[x.0];
    }
    offsets.push(total);
    let mut rows: Vec<SparseVec<S>> = Vec::new();
    for &f in cat.generating_morphisms() {
        let mf = cat.morphism(f);
        let (y, x) = (mf.src.0, mf.tgt.0);
        let (my, mx, ny) = (m.dims[y], m.dims[x], n.dims[y]);
        if ny == 0 || mx == 0 {
            continue;
        }
        // φ_y M(f) - N(f) φ_x, entry (i, j) with i < ny, j < mx
        let mcols = m.actions[f.0].columns();
        let nf = &n.actions[f.0];
        for i in 0..ny {
            for (j, mcol) in mcols.iter().enumerate() {
                let mut row: Vec<(usize, S)> = Vec::new();
                for (k, a) in mcol {
                    row.push((offsets[y] + i * my + k, a.clone()));
                }
                for (k, b) in nf.row(i) {
                    row.push((offsets[x] + k * mx + j, -b.clone()));
                }
                let row = crate::matrix::normalize(row);
                if !row.is_empty() {
                    rows.push(row);
                }
            }
        }
    }
    (Matrix::from_rows(total, rows), offsets)
}

fn unflatten<S: Scalar>(v: &SparseVec<S>, offsets: &[usize], m: &RGammaModule<S>, n: &RGammaModule<S>) -> ModuleHom<S> {
    let components = m
        .cat
        .object_ids()
        .map(|x| {
            let (r, c) = (n.dims[x.0], m.dims[x.0]);
            let lo = offsets[x.0];
            let trip = v
                .iter()
                .filter(|(k, _)| *k >= lo && *k < lo + r * c)
                .map(|(k, a)| ((k - lo) / c, (k - lo) % c, a.clone()));
            Matrix::from_triplets(r, c, trip)
        })
        .collect();
    ModuleHom { components }
}

impl<S: Scalar> ModuleHom<S> {
    pub fn new(components: Vec<Matrix<S>>) -> Self {
        ModuleHom { components }
    }

    pub fn zero(src: &RGammaModule<S>, tgt: &RGammaModule<S>) -> Self {
        ModuleHom {
            components: src
                .cat
                .object_ids()
                .map(|x| Matrix::zeros(tgt.dims[x.0], src.dims[x.0]))
                .collect(),
        }
    }

    pub fn identity(m: &RGammaModule<S>) -> Self {
        ModuleHom {
            components: m.dims.iter().map(|&d| Matrix::identity(d)).collect(),
        }
    }

    pub fn component(&self, x: ObjectId) -> &Matrix<S> {
        &self.components[x.0]
    }

    pub fn components(&self) -> &[Matrix<S>] {
        &self.components
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &ModuleHom<S>) -> ModuleHom<S> {
        ModuleHom {
            components: self
                .components
                .iter()
                .zip(&other.components)
                .map(|(a, b)| a.mul(b))
                .collect(),
        }
    }

    pub fn add(&self, other: &ModuleHom<S>) -> ModuleHom<S> {
        ModuleHom {
            components: self
                .components
                .iter()
                .zip(&other.components)
                .map(|(a, b)| a.add(b))
                .collect(),
        }
    }

    pub fn scale(&self, c: &S) -> ModuleHom<S> {
        ModuleHom {
            components: self.components.iter().map(|a| a.scale(c)).collect(),
        }
    }

    pub fn neg(&self) -> ModuleHom<S> {
        self.scale(&-S::one())
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(Matrix::is_zero)
    }

    /// `[a b]: A ⊕ B → C`.
    pub fn hstack(&self, other: &ModuleHom<S>) -> ModuleHom<S> {
        ModuleHom {
            components: self
                .components
                .iter()
                .zip(&other.components)
                .map(|(a, b)| a.hstack(b))
                .collect(),
        }
    }

    /// `[a; b]: A → B ⊕ C`.
    pub fn vstack(&self, other: &ModuleHom<S>) -> ModuleHom<S> {
        ModuleHom {
            components: self
                .components
                .iter()
                .zip(&other.components)
                .map(|(a, b)| a.vstack(b))
                .collect(),
        }
    }

    pub fn direct_sum(&self, other: &ModuleHom<S>) -> ModuleHom<S> {
        ModuleHom {
            components: self
                .components
                .iter()
                .zip(&other.components)
                .map(|(a, b)| a.direct_sum(b))
                .collect(),
        }
    }

    /// `f ⊗ g` objectwise.
    pub fn tensor(&self, other: &ModuleHom<S>) -> ModuleHom<S> {
        ModuleHom {
            components: self
                .components
                .iter()
                .zip(&other.components)
                .map(|(a, b)| a.kron(b))
                .collect(),
        }
    }

    /// Checks shapes and naturality on every morphism.
    pub fn check_natural(&self, src: &RGammaModule<S>, tgt: &RGammaModule<S>) -> Result<(), ModuleError> {
        for x in src.cat.object_ids() {
            if self.components[x.0].shape() != (tgt.dims[x.0], src.dims[x.0]) {
                return Err(ModuleError::Invalid(format!("component at object {} has the wrong shape", x.0)));
            }
        }
        for f in src.cat.morphism_ids() {
            let m = src.cat.morphism(f);
            let lhs = self.components[m.src.0].mul(&src.actions[f.0]);
            let rhs = tgt.actions[f.0].mul(&self.components[m.tgt.0]);
            if lhs != rhs {
                return Err(ModuleError::NotNatural(f.0));
            }
        }
        Ok(())
    }

    pub fn map_scalars<T: Scalar>(&self, f: impl Fn(&S) -> T) -> ModuleHom<T> {
        ModuleHom {
            components: self.components.iter().map(|a| a.map(&f)).collect(),
        }
    }

    /// A natural `s: tgt → src` with `self ∘ s = id`, found by solving over a Hom basis.
    pub fn right_inverse(&self, src: &RGammaModule<S>, tgt: &RGammaModule<S>) -> Option<ModuleHom<S>> {
        let basis = tgt.hom_basis(src);
        let mut offsets = Vec::new();
        let mut total = 0;
        for x in tgt.cat.object_ids() {
            offsets.push(total);
            total += tgt.dim(x) * tgt.dim(x);
        }
        let flatten = |h: &ModuleHom<S>| -> SparseVec<S> {
            let mut v = Vec::new();
            for x in tgt.cat.object_ids() {
                let d = tgt.dim(x);
                for (r, c, a) in h.component(x).entries() {
                    v.push((offsets[x.0] + r * d + c, a.clone()));
                }
            }
            crate::matrix::normalize(v)
        };
        let cols: Vec<SparseVec<S>> = basis.iter().map(|b| flatten(&self.compose(b))).collect();
        let a = Matrix::from_columns(total, &cols);
        let rhs = Matrix::from_columns(total, &[flatten(&ModuleHom::identity(tgt))]);
        let coeffs = S::solve(&a, &rhs)?.column(0);
        let mut s = ModuleHom::zero(tgt, src);
        for (i, c) in coeffs {
            s = s.add(&basis[i].scale(&c));
        }
        Some(s)
    }
}

/// Kernel, image and cokernel constructions over a field.
impl<F: Field> RGammaModule<F> {
    /// Submodule with the given basis (columns) at every object; actions solved in that basis.
    pub fn submodule(&self, bases: &[Matrix<F>]) -> (RGammaModule<F>, ModuleHom<F>) {
        let expressers: Vec<Echelon<F>> = bases
            .iter()
            .map(|b| {
                let mut e = Echelon::tracking(b.rows());
                for c in b.columns() {
                    e.insert(c);
                }
                e
            })
            .collect();
        let dims: Vec<usize> = bases.iter().map(Matrix::cols).collect();
        let actions = self
            .cat
            .morphism_ids()
            .map(|f| {
                let m = self.cat.morphism(f);
                let (y, x) = (m.src.0, m.tgt.0);
                let img = self.actions[f.0].mul(&bases[x]);
                let cols: Vec<SparseVec<F>> = img
                    .columns()
                    .into_iter()
                    .map(|c| expressers[y].express(c).expect("subspace is stable under the action"))
                    .collect();
                Matrix::from_columns(dims[y], &cols)
            })
            .collect();
        let sub = RGammaModule {
            cat: self.cat.clone(),
            dims,
            actions,
        };
        (sub, ModuleHom::new(bases.to_vec()))
    }

    /// Kernel of `φ: self → tgt` with its inclusion.
    pub fn kernel_of(&self, phi: &ModuleHom<F>) -> (RGammaModule<F>, ModuleHom<F>) {
        let bases: Vec<Matrix<F>> = phi.components.iter().map(field::kernel).collect();
        self.submodule(&bases)
    }

    /// Image of `φ: self → tgt` inside `tgt`, with the inclusion and the corestriction.
    pub fn image_of(&self, tgt: &RGammaModule<F>, phi: &ModuleHom<F>) -> (RGammaModule<F>, ModuleHom<F>, ModuleHom<F>) {
        let bases: Vec<Matrix<F>> = phi.components.iter().map(field::image).collect();
        let (img, incl) = tgt.submodule(&bases);
        let onto = ModuleHom::new(
            bases
                .iter()
                .zip(&phi.components)
                .map(|(b, c)| field::solve(b, c).expect("image contains the map"))
                .collect(),
        );
        (img, incl, onto)
    }

    /// Quotient by the subspaces spanned by the columns of `rels`, with the projection.
    pub fn quotient(&self, rels: &[Matrix<F>]) -> (RGammaModule<F>, ModuleHom<F>) {
        let echs: Vec<Echelon<F>> = rels
            .iter()
            .zip(&self.dims)
            .map(|(r, &d)| {
                let mut e = Echelon::new(d);
                for c in r.columns() {
                    e.insert(c);
                }
                e
            })
            .collect();
        let dims: Vec<usize> = echs.iter().map(|e| e.ambient_dim() - e.rank()).collect();
        let proj: Vec<Matrix<F>> = echs
            .iter()
            .zip(&dims)
            .map(|(e, &qd)| {
                let cols: Vec<SparseVec<F>> = (0..e.ambient_dim())
                    .map(|j| e.quotient_coords(vec![(j, F::one())]))
                    .collect();
                Matrix::from_columns(qd, &cols)
            })
            .collect();
        let lifts: Vec<Vec<usize>> = echs.iter().map(Echelon::non_pivots).collect();
        let actions = self
            .cat
            .morphism_ids()
            .map(|f| {
                let m = self.cat.morphism(f);
                let (y, x) = (m.src.0, m.tgt.0);
                let lifted = self.actions[f.0].select_cols(&lifts[x]);
                proj[y].mul(&lifted)
            })
            .collect();
        let q = RGammaModule {
            cat: self.cat.clone(),
            dims,
            actions,
        };
        (q, ModuleHom::new(proj))
    }

    /// Cokernel of `φ: src → self`, with the projection.
    pub fn cokernel_of(&self, phi: &ModuleHom<F>) -> (RGammaModule<F>, ModuleHom<F>) {
        self.quotient(&phi.components)
    }

    /// Submodule generated by elements `v ∈ M(x)`.
    pub fn generated_by(&self, elements: &[(ObjectId, SparseVec<F>)]) -> (RGammaModule<F>, ModuleHom<F>) {
        let bases: Vec<Matrix<F>> = self
            .cat
            .object_ids()
            .map(|y| {
                let mut e = Echelon::new(self.dims[y.0]);
                for (x, v) in elements {
                    for u in self.cat.hom_ids(y, *x) {
                        e.insert(self.actions[u.0].mul_vec(v));
                    }
                }
                Matrix::from_columns(self.dims[y.0], e.basis())
            })
            .collect();
        self.submodule(&bases)
    }

    /// Searches for an isomorphism using seeded random combinations of a Hom basis.
    ///
    /// A `None` answer means no witness was found within the given number of tries.
    pub fn find_isomorphism<R: Rng>(&self, other: &Self, rng: &mut R, tries: usize) -> Option<ModuleHom<F>> {
        if self.dims != other.dims {
            return None;
        }
        let basis = self.hom_basis(other);
        if basis.is_empty() {
            return self.is_zero().then(|| ModuleHom::identity(self));
        }
        for t in 0..tries {
            let mut phi = ModuleHom::zero(self, other);
            for (k, b) in basis.iter().enumerate() {
                let c = if t == 0 && k == 0 {
                    F::one()
                } else {
                    F::from_i64(rng.gen_range(-3i64..=3))
                };
                phi = phi.add(&b.scale(&c));
            }
            if phi.components.iter().all(|c| c.rows() == 0 || field::rank(c) == c.rows()) {
                return Some(phi);
            }
        }
        None
    }

    pub fn is_isomorphic<R: Rng>(&self, other: &Self, rng: &mut R) -> bool {
        self.find_isomorphism(other, rng, 64).is_some()
    }

    /// Random change of basis at every object, returning the twisted module.
    pub fn random_twist<R: Rng>(&self, rng: &mut R) -> Self {
        let mut t = Vec::new();
        let mut ti = Vec::new();
        for &d in &self.dims {
            loop {
                let dense: Vec<Vec<F>> = (0..d)
                    .map(|_| (0..d).map(|_| F::from_i64(rng.gen_range(-2i64..=2))).collect())
                    .collect();
                let m = Matrix::from_dense(d, d, &dense);
                if let Some(inv) = field::inverse(&m) {
                    t.push(m);
                    ti.push(inv);
                    break;
                }
            }
        }
        self.conjugate_by(&t, &ti)
    }
}

/// A covariant functor `Γ → R-mod`; `action(f)` for `f: y → x` maps `value(y)` to `value(x)`.
#[derive(Clone)]
pub struct LeftModule<S> {
    cat: Arc<OrbitCat>,
    dims: Vec<usize>,
    actions: Vec<Matrix<S>>,
}

impl<S: Scalar> LeftModule<S> {
    /// `R Mor(x, -)`, the free covariant module at `x`.
    pub fn free(cat: Arc<OrbitCat>, x: ObjectId) -> Self {
        let dims: Vec<usize> = cat.object_ids().map(|y| cat.hom_count(x, y)).collect();
        let actions = cat
            .morphism_ids()
            .map(|f| {
                let m = cat.morphism(f);
                let start = cat.hom(x, m.tgt).start;
                let targets: Vec<usize> = cat.hom_ids(x, m.src).map(|u| cat.compose(f, u).0 - start).collect();
                Matrix::monomial(dims[m.tgt.0], &targets, &vec![S::one(); targets.len()])
            })
            .collect();
        LeftModule { cat, dims, actions }
    }

    pub fn cat(&self) -> &Arc<OrbitCat> {
        &self.cat
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn action(&self, f: MorphismId) -> &Matrix<S> {
        &self.actions[f.0]
    }
}

/// `M ⊗_{RΓ} N`: the direct sum of `M(x) ⊗ N(x)` modulo `M(f)m ⊗ n ∼ m ⊗ N(f)n`.
pub fn tensor_over_cat<S: Scalar>(m: &RGammaModule<S>, n: &LeftModule<S>) -> Result<FGAbGroup, ModuleError> {
    let cat = &m.cat;
    let mut offsets = Vec::new();
    let mut total = 0;
    for x in cat.object_ids() {
        offsets.push(total);
        total += m.dims[x.0] * n.dims[x.0];
    }
    let mut cols: Vec<SparseVec<S>> = Vec::new();
    for &f in cat.generating_morphisms() {
        let mf = cat.morphism(f);
        let (y, x) = (mf.src.0, mf.tgt.0);
        let (mx, ny, nx) = (m.dims[x], n.dims[y], n.dims[x]);
        // relation for basis m_i ∈ M(x), n_j ∈ N(y): (M(f) m_i) ⊗ n_j - m_i ⊗ (N(f) n_j)
        let mcols = m.actions[f.0].columns();
        let ncols = n.actions[f.0].columns();
        for (i, mc) in mcols.iter().enumerate().take(mx) {
            for (j, nc) in ncols.iter().enumerate().take(ny) {
                let mut v: Vec<(usize, S)> = Vec::new();
                for (k, a) in mc {
                    v.push((offsets[y] + k * ny + j, a.clone()));
                }
                for (k, b) in nc {
                    v.push((offsets[x] + i * nx + k, -b.clone()));
                }
                let v = crate::matrix::normalize(v);
                if !v.is_empty() {
                    cols.push(v);
                }
            }
        }
    }
    let rel = Matrix::from_columns(total, &cols);
    Ok(FGAbGroup::cokernel(&rel)?)
}
