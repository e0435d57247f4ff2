//! Loading category instances from JSON description files, plus the
//! built-in example corpus.
//!
//! A description file declares a quiver with relations, a list of named
//! indecomposable representations, an object predicate, a conflation
//! strategy, the additive generators of the distinguished subcategory A,
//! and optionally a torsion pair.

use crate::confcat::{
    Conflation, ConflationStrategy, Instance, ObjKey, ObjectPredicate, Shape, TorsionPair,
};
use crate::exactla::FieldMatrix;
use crate::quiverrep::{
    cokernel_morphism, direct_sum, hom_basis, is_isomorphic, Arrow, IndecRegistry, Quiver,
    Relation, RepMorphism, Representation,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SpecError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("quiver: {0}")]
    Quiver(String),
    #[error("indecomposable {name}: {message}")]
    Indec { name: String, message: String },
    #[error("unknown name '{0}' (not a registered indecomposable)")]
    UnknownName(String),
    #[error("generator {index}: {message}")]
    Generator { index: usize, message: String },
    #[error("field characteristic must be a prime, got {0}")]
    BadPrime(u64),
}

fn default_p() -> u64 {
    7
}

#[derive(Deserialize)]
pub struct SpecFile {
    pub name: String,
    #[serde(default = "default_p")]
    pub p: u64,
    pub quiver: QuiverSpec,
    pub indecomposables: Vec<IndecSpec>,
    pub category: CategorySpec,
    pub conflations: ConflationsSpec,
    #[serde(default)]
    pub sub_a: Vec<String>,
    #[serde(default)]
    pub torsion: Option<TorsionSpec>,
}

#[derive(Deserialize)]
pub struct QuiverSpec {
    pub vertices: Vec<String>,
    pub arrows: Vec<ArrowSpec>,
    #[serde(default)]
    pub relations: Vec<Vec<RelTermSpec>>,
}

#[derive(Deserialize)]
pub struct ArrowSpec {
    pub name: String,
    pub source: String,
    pub target: String,
}

/// One term of a relation: coefficient times a path, the path listing
/// arrow names in order of application.
#[derive(Deserialize)]
pub struct RelTermSpec {
    pub coeff: i64,
    pub path: Vec<String>,
}

#[derive(Deserialize)]
pub struct IndecSpec {
    pub name: String,
    pub dims: BTreeMap<String, usize>,
    #[serde(default)]
    pub maps: BTreeMap<String, Vec<Vec<i64>>>,
}

#[derive(Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum CategorySpec {
    All,
    KaroubiExclude { names: Vec<String> },
    ExcludeShapes { shapes: Vec<ShapeSpec> },
}

#[derive(Deserialize)]
pub struct ShapeSpec {
    pub fixed: BTreeMap<String, usize>,
    #[serde(default)]
    pub wildcard: Option<String>,
}

#[derive(Deserialize)]
#[serde(tag = "strategy", rename_all = "snake_case")]
pub enum ConflationsSpec {
    AllKernelCokernel,
    AmbientExact,
    GeneratedBy {
        #[serde(default)]
        include_split: bool,
        dim_bound: usize,
        generators: Vec<GeneratorSpec>,
    },
}

/// Generator conflation: end-term multisets and optional explicit matrices
/// (keyed by vertex name) for the inflation and the deflation.
#[derive(Deserialize)]
pub struct GeneratorSpec {
    pub x: BTreeMap<String, usize>,
    pub y: BTreeMap<String, usize>,
    pub z: BTreeMap<String, usize>,
    #[serde(default)]
    pub i: Option<BTreeMap<String, Vec<Vec<i64>>>>,
    #[serde(default)]
    pub p: Option<BTreeMap<String, Vec<Vec<i64>>>>,
}

#[derive(Deserialize)]
pub struct TorsionSpec {
    pub t: Vec<String>,
    pub f: Vec<String>,
}

fn is_prime(n: u64) -> bool {
    n >= 2 && (2..n).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

/// Built-in corpus instance sources, by name.
pub fn corpus(name: &str) -> Option<&'static str> {
    match name {
        "p3" => Some(include_str!("../corpus/p3.json")),
        "p4" => Some(include_str!("../corpus/p4.json")),
        "r3" => Some(include_str!("../corpus/r3.json")),
        "torsion" => Some(include_str!("../corpus/torsion.json")),
        "serre" => Some(include_str!("../corpus/serre.json")),
        _ => None,
    }
}

pub fn corpus_names() -> Vec<&'static str> {
    vec!["p3", "p4", "r3", "torsion", "serre"]
}

fn matrix_from_spec(
    p: u64,
    rows: usize,
    cols: usize,
    m: Option<&Vec<Vec<i64>>>,
) -> Result<FieldMatrix, String> {
    match m {
        None => Ok(FieldMatrix::zero(p, rows, cols)),
        Some(rows_data) => {
            if rows_data.len() != rows || rows_data.iter().any(|r| r.len() != cols) {
                return Err(format!("expected a {rows}x{cols} matrix"));
            }
            Ok(FieldMatrix::from_rows(p, rows_data))
        }
    }
}

fn realize_key(
    quiver: &Quiver,
    registry: &IndecRegistry,
    key: &ObjKey,
    p: u64,
) -> Result<Representation, SpecError> {
    let mut parts: Vec<&Representation> = Vec::new();
    for (name, rep) in &registry.entries {
        if let Some(&m) = key.get(name) {
            for _ in 0..m {
                parts.push(rep);
            }
        }
    }
    let found: usize = key
        .iter()
        .filter(|(n, _)| registry.get(n).is_some())
        .map(|(_, m)| m)
        .sum();
    let want: usize = key.values().sum();
    if found != want {
        let missing = key
            .keys()
            .find(|n| registry.get(n).is_none())
            .cloned()
            .unwrap_or_default();
        return Err(SpecError::UnknownName(missing));
    }
    Ok(direct_sum(quiver, &parts, p).sum)
}

fn morphism_from_spec(
    quiver: &Quiver,
    source: &Representation,
    target: &Representation,
    maps: &BTreeMap<String, Vec<Vec<i64>>>,
    p: u64,
) -> Result<RepMorphism, String> {
    for v in maps.keys() {
        if quiver.vertex_index(v).is_none() {
            return Err(format!("unknown vertex '{v}'"));
        }
    }
    let mut out = RepMorphism::zero(source, target);
    for (vi, vname) in quiver.vertices.iter().enumerate() {
        out.maps[vi] = matrix_from_spec(
            p,
            target.dims[vi],
            source.dims[vi],
            maps.get(vname),
        )
        .map_err(|e| format!("vertex '{vname}': {e}"))?;
    }
    if !out.intertwines(quiver) {
        return Err("matrices do not commute with the arrow maps".into());
    }
    Ok(out)
}

/// Search for an ambient-exact conflation with the prescribed end terms,
/// preferring a non-split one.
fn synthesize_conflation(
    quiver: &Quiver,
    x: &Representation,
    y: &Representation,
    z: &Representation,
    p: u64,
    seed: u64,
) -> Option<Conflation> {
    let basis = hom_basis(quiver, x, y);
    if basis.is_empty() {
        return None;
    }
    let mut candidates: Vec<RepMorphism> = Vec::new();
    if basis.len() <= 3 {
        let total = (p as usize).pow(basis.len() as u32);
        for mut n in 0..total {
            let mut f = RepMorphism::zero(x, y);
            for b in &basis {
                f = f.add(&b.scale((n as u64) % p));
                n /= p as usize;
            }
            candidates.push(f);
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37);
        for _ in 0..400 {
            let mut f = RepMorphism::zero(x, y);
            for b in &basis {
                f = f.add(&b.scale(rng.gen_range(0..p)));
            }
            candidates.push(f);
        }
    }
    let mut split_fallback = None;
    for i in candidates {
        if !i.is_vertexwise_injective() {
            continue;
        }
        let (coker, proj) = cokernel_morphism(quiver, &i);
        if coker.dims != z.dims {
            continue;
        }
        if let Some((iso, _)) = is_isomorphic(quiver, &coker, z, seed) {
            let c = Conflation { i: i.clone(), p: iso.compose(&proj) };
            let has_section = crate::quiverrep::solve_factor_through(
                quiver,
                &c.p,
                &RepMorphism::identity(z),
            )
            .is_some();
            if has_section {
                split_fallback.get_or_insert(c);
            } else {
                return Some(c);
            }
        }
    }
    split_fallback
}

/// Parse and validate a description file, producing a ready instance.
pub fn load_instance(
    json: &str,
    bound_n: usize,
    depth_d: usize,
    seed: u64,
) -> Result<Instance, SpecError> {
    let spec: SpecFile = serde_json::from_str(json)?;
    if !is_prime(spec.p) {
        return Err(SpecError::BadPrime(spec.p));
    }
    let p = spec.p;

    // quiver
    let mut arrows = Vec::new();
    for a in &spec.quiver.arrows {
        let source = spec
            .quiver
            .vertices
            .iter()
            .position(|v| *v == a.source)
            .ok_or_else(|| SpecError::Quiver(format!("unknown vertex '{}'", a.source)))?;
        let target = spec
            .quiver
            .vertices
            .iter()
            .position(|v| *v == a.target)
            .ok_or_else(|| SpecError::Quiver(format!("unknown vertex '{}'", a.target)))?;
        arrows.push(Arrow { name: a.name.clone(), source, target });
    }
    let mut relations = Vec::new();
    for rel in &spec.quiver.relations {
        let mut terms = Vec::new();
        for t in rel {
            let mut path = Vec::new();
            for an in &t.path {
                let ai = arrows
                    .iter()
                    .position(|a| a.name == *an)
                    .ok_or_else(|| SpecError::Quiver(format!("unknown arrow '{an}'")))?;
                path.push(ai);
            }
            terms.push((t.coeff.rem_euclid(p as i64) as u64, path));
        }
        relations.push(Relation { terms });
    }
    let quiver = Quiver { vertices: spec.quiver.vertices.clone(), arrows, relations };
    quiver.validate().map_err(SpecError::Quiver)?;

    // indecomposables
    let mut entries = Vec::new();
    for ind in &spec.indecomposables {
        let mk_err = |message: String| SpecError::Indec { name: ind.name.clone(), message };
        for v in ind.dims.keys() {
            if quiver.vertex_index(v).is_none() {
                return Err(mk_err(format!("unknown vertex '{v}'")));
            }
        }
        for k in ind.maps.keys() {
            if quiver.arrow_index(k).is_none() {
                return Err(mk_err(format!("unknown arrow '{k}'")));
            }
        }
        let dims: Vec<usize> = quiver
            .vertices
            .iter()
            .map(|v| ind.dims.get(v).copied().unwrap_or(0))
            .collect();
        let mut maps = Vec::new();
        for a in &quiver.arrows {
            let m = matrix_from_spec(p, dims[a.target], dims[a.source], ind.maps.get(&a.name))
                .map_err(|e| mk_err(format!("arrow '{}': {e}", a.name)))?;
            maps.push(m);
        }
        let rep = Representation { p, dims, maps };
        rep.validate(&quiver).map_err(mk_err)?;
        entries.push((ind.name.clone(), rep));
    }
    let registry = IndecRegistry { quiver: quiver.clone(), entries };
    registry
        .verify_local_endos()
        .map_err(|e| SpecError::Indec { name: "registry".into(), message: e })?;
    let known = |n: &String| registry.get(n).is_some();

    // object predicate
    let predicate = match &spec.category {
        CategorySpec::All => ObjectPredicate::All,
        CategorySpec::KaroubiExclude { names } => {
            if let Some(bad) = names.iter().find(|n| !known(n)) {
                return Err(SpecError::UnknownName(bad.clone()));
            }
            ObjectPredicate::KaroubiExclude { names: names.clone() }
        }
        CategorySpec::ExcludeShapes { shapes } => {
            let mut out = Vec::new();
            for s in shapes {
                if let Some(bad) = s.fixed.keys().find(|n| !known(n)) {
                    return Err(SpecError::UnknownName(bad.clone()));
                }
                if let Some(w) = &s.wildcard {
                    if !known(w) {
                        return Err(SpecError::UnknownName(w.clone()));
                    }
                }
                out.push(Shape { fixed: s.fixed.clone(), wildcard: s.wildcard.clone() });
            }
            ObjectPredicate::ExcludeShapes { shapes: out }
        }
    };

    // conflation strategy
    let strategy = match &spec.conflations {
        ConflationsSpec::AllKernelCokernel => ConflationStrategy::AllKernelCokernel,
        ConflationsSpec::AmbientExact => ConflationStrategy::AmbientExact,
        ConflationsSpec::GeneratedBy { include_split, dim_bound, generators } => {
            let mut gens = Vec::new();
            for (index, g) in generators.iter().enumerate() {
                let gen_err =
                    |message: String| SpecError::Generator { index, message };
                let x = realize_key(&quiver, &registry, &g.x, p)?;
                let y = realize_key(&quiver, &registry, &g.y, p)?;
                let z = realize_key(&quiver, &registry, &g.z, p)?;
                let conf = match (&g.i, &g.p) {
                    (Some(im), Some(pm)) => Conflation {
                        i: morphism_from_spec(&quiver, &x, &y, im, p).map_err(&gen_err)?,
                        p: morphism_from_spec(&quiver, &y, &z, pm, p).map_err(&gen_err)?,
                    },
                    (None, None) => synthesize_conflation(&quiver, &x, &y, &z, p, seed)
                        .ok_or_else(|| {
                            gen_err("no conflation with these end terms found".into())
                        })?,
                    _ => {
                        return Err(gen_err(
                            "give both matrices or neither".into(),
                        ))
                    }
                };
                gens.push(conf);
            }
            ConflationStrategy::GeneratedBy {
                generators: gens,
                include_split: *include_split,
                dim_bound: *dim_bound,
            }
        }
    };

    if let Some(bad) = spec.sub_a.iter().find(|n| !known(n)) {
        return Err(SpecError::UnknownName(bad.clone()));
    }
    let torsion = match &spec.torsion {
        None => None,
        Some(t) => {
            if let Some(bad) = t.t.iter().chain(t.f.iter()).find(|n| !known(n)) {
                return Err(SpecError::UnknownName(bad.clone()));
            }
            Some(TorsionPair { t: t.t.clone(), f: t.f.clone() })
        }
    };

    let mut inst = Instance::new(
        spec.name.clone(),
        quiver,
        p,
        registry,
        predicate,
        strategy,
        spec.sub_a.clone(),
        bound_n,
        depth_d,
        seed,
    );
    inst.torsion = torsion;

    // sanity: generators must be ambient exact
    if let ConflationStrategy::GeneratedBy { generators, .. } = &inst.strategy {
        for (index, g) in generators.iter().enumerate() {
            if !inst.ambient_exact(g) {
                return Err(SpecError::Generator {
                    index,
                    message: "not an ambient-exact kernel-cokernel pair".into(),
                });
            }
        }
    }
    Ok(inst)
}
