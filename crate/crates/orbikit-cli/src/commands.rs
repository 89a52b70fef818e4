use std::path::{Path, PathBuf};
use std::sync::Arc;

use orbikit::complex::{join_tensor, ChainComplex, DimFunction, Homology};
use orbikit::functors::{extension_functor, splitting_functor, SubgroupPair};
use orbikit::io::{
    object_names, parse_object, subgroup_from_spec, CategorySpec, ChainMapSpec, ComplexSpec, Cycles, FamilySpec,
    GroupSpec, HomSpec, ModuleSpec, SimplicialSpec,
};
use orbikit::projective::{is_projective, is_projective_by_splitting, is_projective_integral, k0_class, K0Free};
use orbikit::resolution::{coresolution, ext_groups, minimal_free_resolution};
use orbikit::simplicial::{gcw_chain_complex, octahedron_complex, octahedron_family, octahedron_space, StabilizerPolicy};
use orbikit::surgery::{kill_top_free, modify_homology, postnikov_tower, pushout_complexes, reduce_to_homology_dimension};
use orbikit::{CoefRing, ComplexError, IoError, ModuleError, OrbitCat, RGammaModule, Rational, Scalar, F2, F3, F5, F7};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::{CatPrint, CategoryArgs, Command, ModuleCmd};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("cannot write {path}: {source}")]
    Write { path: PathBuf, source: std::io::Error },
    #[error(transparent)]
    Input(#[from] IoError),
    #[error(transparent)]
    Module(#[from] ModuleError),
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error("coefficient ring {0} is not supported here (use Z, Q, F2, F3, F5 or F7)")]
    Ring(String),
    #[error("this command needs field coefficients")]
    NeedsField,
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Read { .. } | CliError::Write { .. } => "io",
            CliError::Input(IoError::Json(_)) => "malformed-json",
            CliError::Input(IoError::Group(orbikit::GroupError::OrderCap { .. })) => "cap-exceeded",
            CliError::Input(_) => "invalid-input",
            CliError::Module(_) => "module",
            CliError::Complex(ComplexError::Precondition(_)) => "precondition",
            CliError::Complex(_) => "complex",
            CliError::Ring(_) | CliError::NeedsField => "unsupported-ring",
            CliError::Usage(_) => "usage",
        }
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Input(IoError::Json(e))
    }
}

pub type Outcome = Result<(Value, bool), CliError>;

/// Dispatches on a field tag, binding `$S` to the scalar type.
macro_rules! any_field {
    ($ring:expr, $S:ident => $body:expr) => {
        match $ring {
            CoefRing::Rationals => {
                type $S = Rational;
                $body
            }
            CoefRing::PrimeField(2) => {
                type $S = F2;
                $body
            }
            CoefRing::PrimeField(3) => {
                type $S = F3;
                $body
            }
            CoefRing::PrimeField(5) => {
                type $S = F5;
                $body
            }
            CoefRing::PrimeField(7) => {
                type $S = F7;
                $body
            }
            CoefRing::Integers => Err(CliError::NeedsField),
            r => Err(CliError::Ring(r.to_string())),
        }
    };
}

/// As [`any_field`], with the integers as well.
macro_rules! any_ring {
    ($ring:expr, $S:ident => $body:expr) => {
        match $ring {
            CoefRing::Integers => {
                type $S = i64;
                $body
            }
            r => any_field!(r, $S => $body),
        }
    };
}

pub struct Context {
    pub inputs: Vec<Vec<u8>>,
    pub rng: ChaCha8Rng,
}

impl Context {
    pub fn new(seed: u64) -> Self {
        Context {
            inputs: Vec::new(),
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    fn read(&mut self, path: &Path) -> Result<Vec<u8>, CliError> {
        let bytes = std::fs::read(path).map_err(|source| CliError::Read {
            path: path.to_path_buf(),
            source,
        })?;
        self.inputs.push(bytes.clone());
        Ok(bytes)
    }

    fn load<T: DeserializeOwned>(&mut self, path: &Path) -> Result<T, CliError> {
        let bytes = self.read(path)?;
        Ok(serde_json::from_slice(&bytes)?)
    }

    /// The `ring` tag of a module or complex file.
    fn ring_of(&mut self, path: &Path) -> Result<CoefRing, CliError> {
        let v: Value = self.load(path)?;
        let tag = v
            .get("ring")
            .and_then(Value::as_str)
            .ok_or_else(|| IoError::Invalid(format!("{} has no ring tag", path.display())))?;
        Ok(tag.parse().map_err(IoError::from)?)
    }

    fn category(&mut self, args: &CategoryArgs) -> Result<Arc<OrbitCat>, CliError> {
        let spec = match (&args.category, &args.group, &args.family) {
            (Some(c), _, _) => self.load::<CategorySpec>(c)?,
            (None, Some(g), Some(f)) => CategorySpec {
                group: self.load::<GroupSpec>(g)?,
                family: self.load::<FamilySpec>(f)?,
            },
            _ => return Err(CliError::Usage("give --category or both --group and --family".into())),
        };
        Ok(spec.build()?)
    }

    fn module<S: Scalar>(&mut self, path: &Path) -> Result<RGammaModule<S>, CliError> {
        Ok(self.load::<ModuleSpec>(path)?.decode()?)
    }

    fn complex<S: Scalar>(&mut self, path: &Path) -> Result<ChainComplex<S>, CliError> {
        Ok(self.load::<ComplexSpec>(path)?.decode()?)
    }
}

fn parse_ring(s: &str) -> Result<CoefRing, CliError> {
    Ok(s.parse().map_err(IoError::from)?)
}

fn parse_subgroup(cat: &OrbitCat, s: &str) -> Result<orbikit::Subgroup, CliError> {
    let gens: Vec<Cycles> = serde_json::from_str(s)?;
    Ok(subgroup_from_spec(cat.group(), &gens)?)
}

/// The artifact itself, or its path after writing it.
fn emit<T: Serialize>(out: &Option<PathBuf>, artifact: &T) -> Result<Value, CliError> {
    match out {
        None => Ok(serde_json::to_value(artifact)?),
        Some(p) => {
            let text = serde_json::to_string_pretty(artifact)?;
            std::fs::write(p, text).map_err(|source| CliError::Write { path: p.clone(), source })?;
            Ok(json!({ "written": p.display().to_string() }))
        }
    }
}

pub fn k0_json(names: &[String], k: &K0Free) -> Value {
    let mut terms = Vec::new();
    if k.unit != 0 {
        terms.push(format!("{}[R]", k.unit));
    }
    for (x, &c) in k.coeffs.iter().enumerate() {
        if c != 0 {
            terms.push(format!("{c}[R[G/{}]]", names[x]));
        }
    }
    json!({
        "unit": k.unit,
        "coefficients": k.coeffs,
        "display": if terms.is_empty() { "0".to_string() } else { terms.join(" + ") },
    })
}

/// `[object][degree]` groups as `{rank, torsion}`.
pub fn homology_json(h: &Homology) -> Value {
    Value::Array(
        h.groups
            .iter()
            .map(|row| {
                Value::Array(
                    row.iter()
                        .map(|g| json!({ "rank": g.rank, "torsion": g.torsion.iter().map(|d| d.to_string()).collect::<Vec<_>>() }))
                        .collect(),
                )
            })
            .collect(),
    )
}

fn module_summary<S: Scalar>(m: &RGammaModule<S>) -> Value {
    json!({ "objects": object_names(m.cat()), "dims": m.dims() })
}

fn complex_summary<S: Scalar>(c: &ChainComplex<S>) -> Value {
    json!({
        "objects": object_names(c.cat()),
        "dims": c.modules().iter().map(|m| m.dims().to_vec()).collect::<Vec<_>>(),
        "dim_function": c.dim_function().0,
    })
}

/// `2,0,0,0` in object order or `1=2,C4=0,…` by name.
pub fn parse_dimfn(cat: &OrbitCat, s: &str) -> Result<DimFunction, CliError> {
    let parts: Vec<&str> = s.split(',').map(str::trim).filter(|p| !p.is_empty()).collect();
    let bad = |p: &str| CliError::Usage(format!("bad dimension function entry {p:?}"));
    if parts.iter().all(|p| p.contains('=')) {
        let mut v = vec![None; cat.num_objects()];
        for p in &parts {
            let (name, val) = p.split_once('=').expect("checked");
            let x = parse_object(cat, name)?;
            v[x.0] = Some(val.trim().parse::<i64>().map_err(|_| bad(p))?);
        }
        let v: Option<Vec<i64>> = v.into_iter().collect();
        return v.map(DimFunction).ok_or_else(|| CliError::Usage("dimension function misses an object".into()));
    }
    let v = parts
        .iter()
        .map(|p| p.parse::<i64>().map_err(|_| bad(p)))
        .collect::<Result<Vec<_>, _>>()?;
    if v.len() != cat.num_objects() {
        return Err(CliError::Usage(format!("expected {} values", cat.num_objects())));
    }
    Ok(DimFunction(v))
}

fn check_json(c: &orbikit::complex::SphereCheck, names: &[String]) -> Value {
    match c {
        orbikit::complex::SphereCheck::Holds => json!({ "holds": true }),
        orbikit::complex::SphereCheck::Fails { object, degree, reason } => json!({
            "holds": false,
            "object": names[object.0],
            "degree": degree,
            "reason": reason,
        }),
    }
}

fn sphere_report<S: Scalar>(c: &ChainComplex<S>, n: &DimFunction) -> Result<Value, CliError> {
    let cat = c.cat();
    let names = object_names(cat);
    let moore = c.moore_check(n)?;
    let sphere = c.sphere_check(n)?;
    let oriented = if sphere.holds() {
        check_json(&orientation(c, n)?, &names)
    } else {
        Value::Null
    };
    Ok(json!({
        "objects": names,
        "dimfn": n.0,
        "moore": check_json(&moore, &names),
        "sphere": check_json(&sphere, &names),
        "oriented": oriented,
        "monotone": n.is_monotone(cat),
        "strictly_monotone": n.is_strictly_monotone(cat),
    }))
}

/// Orientation over the complex's own field; the integers go through the rationals.
fn orientation<S: Scalar>(c: &ChainComplex<S>, n: &DimFunction) -> Result<orbikit::complex::SphereCheck, CliError> {
    let ring = match S::ring() {
        CoefRing::Integers => CoefRing::Rationals,
        r => r,
    };
    any_field!(ring, T => {
        let t: ChainComplex<T> = c.map_scalars(|s| T::parse_decimal(&s.to_string()).expect("decimal entries"));
        Ok(t.orientation_check(n)?)
    })
}

pub fn run(cmd: &Command, ctx: &mut Context) -> Outcome {
    match cmd {
        Command::Cat { cat, print } => {
            let cat = ctx.category(cat)?;
            Ok((cat_report(&cat, *print), true))
        }
        Command::Module(m) => module_cmd(m, ctx),
        Command::Homology { complex, reduced } => {
            let ring = ctx.ring_of(complex)?;
            any_ring!(ring, S => {
                let c = ctx.complex::<S>(complex)?;
                let h = if *reduced { c.reduced_homology()? } else { c.homology()? };
                Ok((json!({
                    "objects": object_names(c.cat()),
                    "first_degree": if *reduced { -1 } else { 0 },
                    "homology": homology_json(&h),
                    "hdim_function": c.hdim_function()?.0,
                }), true))
            })
        }
        Command::Join { left, right, out } => {
            let ring = ctx.ring_of(left)?;
            any_ring!(ring, S => {
                let a = ctx.complex::<S>(left)?;
                let b = ctx.complex::<S>(right)?;
                let j = join_tensor(&a, &b)?;
                Ok((json!({ "summary": complex_summary(&j), "complex": emit(out, &ComplexSpec::encode(&j))? }), true))
            })
        }
        Command::Euler { complex } => {
            let ring = ctx.ring_of(complex)?;
            any_ring!(ring, S => {
                let c = ctx.complex::<S>(complex)?;
                let names = object_names(c.cat());
                let (k, other) = c.euler_free()?;
                let g = c.cat().group();
                let flagged: Vec<Value> = other
                    .iter()
                    .map(|(i, h)| json!({ "degree": i, "subgroup": orbikit::io::subgroup_to_spec(g, h), "order": h.order() }))
                    .collect();
                Ok((json!({ "objects": names, "free_part": k0_json(&names, &k), "non_free_summands": flagged, "is_free": other.is_empty() }), true))
            })
        }
        Command::CheckSphere { complex, dimfn } => {
            let ring = ctx.ring_of(complex)?;
            any_ring!(ring, S => {
                let c = ctx.complex::<S>(complex)?;
                let n = parse_dimfn(c.cat(), dimfn)?;
                Ok((sphere_report(&c, &n)?, true))
            })
        }
        Command::Resolve { module, length } => {
            let ring = ctx.ring_of(module)?;
            any_field!(ring, S => {
                let m = ctx.module::<S>(module)?;
                let names = object_names(m.cat());
                let (res, gens) = minimal_free_resolution(&m, *length);
                res.check_exact()?;
                let gens: Vec<Vec<&String>> = gens.iter().map(|g| g.iter().map(|x| &names[x.0]).collect()).collect();
                Ok((json!({
                    "generators": gens,
                    "term_dims": res.terms.iter().map(|t| t.dims().to_vec()).collect::<Vec<_>>(),
                    "kernel_dims": res.kernel.dims(),
                    "finite": res.is_finite(),
                    "length": res.length(),
                }), true))
            })
        }
        Command::Ext { m, n, max_degree } => {
            let ring = ctx.ring_of(m)?;
            any_field!(ring, S => {
                let a = ctx.module::<S>(m)?;
                let b = ctx.load::<ModuleSpec>(n)?.decode_over::<S>(a.cat())?;
                Ok((json!({ "dims": ext_groups(&a, &b, *max_degree) }), true))
            })
        }
        Command::Coresolve { module } => {
            let ring = ctx.ring_of(module)?;
            any_field!(ring, S => {
                let m = ctx.module::<S>(module)?;
                let co = coresolution(&m);
                let exact = co.check_exact().is_ok();
                Ok((json!({
                    "objects": object_names(m.cat()),
                    "length": co.length(),
                    "term_dims": co.terms.iter().map(|t| t.dims().to_vec()).collect::<Vec<_>>(),
                    "cokernel_dims": co.cokernels.iter().map(|t| t.dims().to_vec()).collect::<Vec<_>>(),
                    "exact": exact,
                    "finite": co.cokernels.last().map_or(true, |c| c.is_zero()),
                }), exact))
            })
        }
        Command::Octahedron { ring, out } => {
            any_ring!(parse_ring(ring)?, S => {
                let (x, c) = octahedron_complex::<S>();
                Ok((json!({
                    "f_vector": x.f_vector(),
                    "summary": complex_summary(&c),
                    "decomposition": ComplexSpec::encode(&c).decomposition,
                    "homology": homology_json(&c.homology()?),
                    "complex": emit(out, &ComplexSpec::encode(&c))?,
                }), true))
            })
        }
        Command::Gcw { complex, family, ring, permissive, out } => {
            let x = ctx.load::<SimplicialSpec>(complex)?.build()?;
            let fam = ctx.load::<FamilySpec>(family)?.build(x.group())?;
            let cat = Arc::new(OrbitCat::new(x.group().clone(), fam));
            let policy = if *permissive { StabilizerPolicy::Permissive } else { StabilizerPolicy::Strict };
            any_ring!(parse_ring(ring)?, S => {
                let c = gcw_chain_complex::<S>(&x, &cat, policy)?;
                Ok((json!({
                    "f_vector": x.f_vector(),
                    "summary": complex_summary(&c),
                    "complex": emit(out, &ComplexSpec::encode(&c))?,
                }), true))
            })
        }
        Command::Joinspace { space, family, copies, ring, out } => {
            let (x, cat) = match (space, family) {
                (Some(s), Some(f)) => {
                    let x = ctx.load::<SimplicialSpec>(s)?.build()?;
                    let fam = ctx.load::<FamilySpec>(f)?.build(x.group())?;
                    let cat = Arc::new(OrbitCat::new(x.group().clone(), fam));
                    (x, cat)
                }
                _ => {
                    let x = octahedron_space();
                    let fam = octahedron_family(x.group());
                    let cat = Arc::new(OrbitCat::new(x.group().clone(), fam));
                    (x, cat)
                }
            };
            if *copies == 0 {
                return Err(CliError::Usage("--copies must be at least 1".into()));
            }
            any_ring!(parse_ring(ring)?, S => joinspace::<S>(&x, &cat, *copies, out))
        }
        Command::Kill { complex, object, all, out } => {
            let ring = ctx.ring_of(complex)?;
            any_field!(ring, S => {
                let c = ctx.complex::<S>(complex)?;
                let (d, stab) = if *all {
                    (reduce_to_homology_dimension(&c)?.complex, None)
                } else {
                    let h = parse_object(c.cat(), object)?;
                    let k = kill_top_free(&c, h)?;
                    (k.complex, Some(k.stabilizations))
                };
                let same = c.homology()? == d.homology()?;
                Ok((json!({
                    "before": complex_summary(&c),
                    "after": complex_summary(&d),
                    "stabilizations": stab,
                    "homology_unchanged": same,
                    "complex": emit(out, &ComplexSpec::encode(&d))?,
                }), same))
            })
        }
        Command::Modify { complex, degree, target, map, out } => {
            let ring = ctx.ring_of(complex)?;
            any_field!(ring, S => {
                let c = ctx.complex::<S>(complex)?;
                let t = ctx.load::<ModuleSpec>(target)?.decode_over::<S>(c.cat())?;
                let (hk, _, _) = c.homology_module(*degree);
                let phi = ctx.load::<HomSpec>(map)?.decode(&hk, &t)?;
                let m = modify_homology(&c, *degree, &t, &phi)?;
                let h = m.complex.homology()?;
                Ok((json!({
                    "before": complex_summary(&c),
                    "after": complex_summary(&m.complex),
                    "homology": homology_json(&h),
                    "complex": emit(out, &ComplexSpec::encode(&m.complex))?,
                }), true))
            })
        }
        Command::Postnikov { complex } => {
            let ring = ctx.ring_of(complex)?;
            any_field!(ring, S => {
                let c = ctx.complex::<S>(complex)?;
                let h = c.homology()?;
                let stages = postnikov_tower(&c)?;
                let mut ok = true;
                let mut out = Vec::new();
                for st in &stages {
                    let hs = st.section.homology()?;
                    let matches = c.cat().object_ids().all(|x| {
                        (0..hs.groups[x.0].len().max(h.groups[x.0].len())).all(|j| {
                            let got = hs.groups[x.0].get(j).map_or(0, |g| g.rank);
                            let want = if j <= st.degree { h.groups[x.0].get(j).map_or(0, |g| g.rank) } else { 0 };
                            got == want
                        })
                    });
                    ok &= matches;
                    let projective: Vec<bool> = st.section.modules().iter().map(is_projective_by_splitting).collect();
                    out.push(json!({
                        "degree": st.degree,
                        "dims": st.section.modules().iter().map(|m| m.dims().to_vec()).collect::<Vec<_>>(),
                        "homology": homology_json(&hs),
                        "projective_terms": projective,
                        "truncation_holds": matches,
                    }));
                }
                Ok((json!({ "objects": object_names(c.cat()), "stages": out }), ok))
            })
        }
        Command::Pushout { a, b, c, f, g, out } => {
            let ring = ctx.ring_of(a)?;
            any_field!(ring, S => {
                let ca = ctx.complex::<S>(a)?;
                let cb = ctx.complex::<S>(b)?;
                let cc = ctx.complex::<S>(c)?;
                let fm = ctx.load::<ChainMapSpec>(f)?.decode(&ca, &cb)?;
                let gm = ctx.load::<ChainMapSpec>(g)?.decode(&ca, &cc)?;
                let (p, _, _) = pushout_complexes(&ca, &cb, &cc, &fm, &gm)?;
                Ok((json!({
                    "summary": complex_summary(&p),
                    "homology": homology_json(&p.homology()?),
                    "complex": emit(out, &ComplexSpec::encode(&p))?,
                }), true))
            })
        }
        Command::Verify { suite } => crate::verify::run(*suite, ctx),
    }
}

fn joinspace<S: Scalar>(
    x: &orbikit::simplicial::GSimplicialComplex,
    cat: &Arc<OrbitCat>,
    copies: usize,
    out: &Option<PathBuf>,
) -> Outcome {
    let mut space = x.clone();
    for _ in 1..copies {
        space = space.join(x)?;
    }
    let simplicial = gcw_chain_complex::<S>(&space, cat, StabilizerPolicy::Permissive)?;
    let single = gcw_chain_complex::<S>(x, cat, StabilizerPolicy::Permissive)?;
    let mut chain = single.clone();
    for _ in 1..copies {
        chain = join_tensor(&chain, &single)?;
    }
    let hs = simplicial.homology()?;
    let hc = chain.homology()?;
    let agree = hs == hc;
    let n = hs.dim_function();
    let sphere = sphere_report(&simplicial, &n)?;
    // Too large to inline; written only on request.
    let complex = match out {
        Some(_) => emit(out, &ComplexSpec::encode(&simplicial))?,
        None => Value::Null,
    };
    Ok((
        json!({
            "f_vector": space.f_vector(),
            "objects": object_names(cat),
            "hdim_simplicial": n.0,
            "hdim_chain": hc.dim_function().0,
            "routes_agree": agree,
            "homology": homology_json(&hs),
            "sphere": sphere,
            "complex": complex,
        }),
        agree,
    ))
}

fn cat_report(cat: &OrbitCat, print: CatPrint) -> Value {
    let names = object_names(cat);
    let g = cat.group();
    match print {
        CatPrint::Objects => Value::Array(
            cat.object_ids()
                .map(|x| {
                    let h = cat.subgroup(x);
                    json!({
                        "name": names[x.0],
                        "index": x.0,
                        "order": h.order(),
                        "generators": orbikit::io::subgroup_to_spec(g, h),
                    })
                })
                .collect(),
        ),
        CatPrint::Morphisms => {
            let mut table = serde_json::Map::new();
            for y in cat.object_ids() {
                for x in cat.object_ids() {
                    table.insert(format!("{}->{}", names[y.0], names[x.0]), Value::from(cat.hom_count(y, x)));
                }
            }
            json!({ "objects": names, "hom_counts": table })
        }
        CatPrint::Lengths => {
            let lengths = cat.lengths();
            let by_name: serde_json::Map<String, Value> =
                names.iter().zip(&lengths).map(|(n, &l)| (n.clone(), Value::from(l))).collect();
            json!({ "objects": names, "lengths": by_name, "category_length": cat.category_length() })
        }
        CatPrint::Aut => {
            let table: serde_json::Map<String, Value> = cat
                .object_ids()
                .map(|x| {
                    let h = cat.subgroup(x);
                    (
                        names[x.0].clone(),
                        json!({ "aut_order": cat.aut_order(x), "normalizer_order": g.normalizer(h).order() }),
                    )
                })
                .collect();
            json!({ "objects": names, "aut": table })
        }
    }
}

fn module_cmd(cmd: &ModuleCmd, ctx: &mut Context) -> Outcome {
    match cmd {
        ModuleCmd::Free { cat, object, ring, out } => {
            let cat = ctx.category(cat)?;
            let x = parse_object(&cat, object)?;
            any_ring!(parse_ring(ring)?, S => {
                let m = RGammaModule::<S>::free_module(cat.clone(), x);
                Ok((json!({ "summary": module_summary(&m), "module": emit(out, &ModuleSpec::encode(&m))? }), true))
            })
        }
        ModuleCmd::Permutation { cat, subgroup, ring, out } => {
            let cat = ctx.category(cat)?;
            let k = parse_subgroup(&cat, subgroup)?;
            any_ring!(parse_ring(ring)?, S => {
                let m = RGammaModule::<S>::permutation_module(cat.clone(), &k);
                Ok((json!({ "summary": module_summary(&m), "module": emit(out, &ModuleSpec::encode(&m))? }), true))
            })
        }
        ModuleCmd::Restrict { module, subgroup, out } => {
            let ring = ctx.ring_of(module)?;
            any_ring!(ring, S => {
                let m = ctx.module::<S>(module)?;
                let h = parse_subgroup(m.cat(), subgroup)?;
                let pair = SubgroupPair::new(m.cat().clone(), &h)?;
                let r = pair.restrict(&m);
                Ok((json!({ "summary": module_summary(&r), "module": emit(out, &ModuleSpec::encode(&r))? }), true))
            })
        }
        ModuleCmd::Induce { module, cat, subgroup, out } => {
            let big = ctx.category(cat)?;
            let h = parse_subgroup(&big, subgroup)?;
            let pair = SubgroupPair::new(big.clone(), &h)?;
            let ring = ctx.ring_of(module)?;
            any_ring!(ring, S => {
                let n = ctx.load::<ModuleSpec>(module)?.decode_over::<S>(pair.small())?;
                let i = pair.induce(&n);
                Ok((json!({ "summary": module_summary(&i), "module": emit(out, &ModuleSpec::encode(&i))? }), true))
            })
        }
        ModuleCmd::Ex { module, cat, object, out } => {
            let cat = ctx.category(cat)?;
            let x = parse_object(&cat, object)?;
            let aut = cat.aut_category(x);
            let ring = ctx.ring_of(module)?;
            any_ring!(ring, S => {
                let v = ctx.load::<ModuleSpec>(module)?.decode_over::<S>(&aut.cat)?;
                let e = extension_functor(&cat, &aut, &v)?;
                Ok((json!({ "summary": module_summary(&e), "module": emit(out, &ModuleSpec::encode(&e))? }), true))
            })
        }
        ModuleCmd::Sx { module, object, out } => {
            let ring = ctx.ring_of(module)?;
            any_field!(ring, S => {
                let m = ctx.module::<S>(module)?;
                let x = parse_object(m.cat(), object)?;
                let aut = m.cat().aut_category(x);
                let (s, _) = splitting_functor(&m, &aut);
                Ok((json!({ "dim": s.total_dim(), "aut_order": aut.order(), "module": emit(out, &ModuleSpec::encode(&s))? }), true))
            })
        }
        ModuleCmd::Isproj { module } => {
            let ring = ctx.ring_of(module)?;
            let cover = match ring {
                CoefRing::Integers => {
                    let m = ctx.module::<i64>(module)?;
                    is_projective_integral(&m).map(|(c, _)| (object_names(m.cat()), c.objects()))
                }
                r => any_field!(r, S => {
                    let m = ctx.module::<S>(module)?;
                    Ok::<_, CliError>(is_projective(&m).map(|(c, _)| (object_names(m.cat()), c.objects())))
                })?,
            };
            let value = match cover {
                Some((names, objs)) => json!({
                    "projective": true,
                    "cover": objs.iter().map(|x| names[x.0].clone()).collect::<Vec<_>>(),
                }),
                None => json!({ "projective": false }),
            };
            Ok((value, true))
        }
        ModuleCmd::K0 { module } => {
            let ring = ctx.ring_of(module)?;
            any_field!(ring, S => {
                let m = ctx.module::<S>(module)?;
                let k = k0_class(&m)?;
                Ok((json!({ "objects": object_names(m.cat()), "class": k0_json(&object_names(m.cat()), &k) }), true))
            })
        }
    }
}
