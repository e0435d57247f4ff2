//! Concrete conflation categories: a full additive subcategory of quiver
//! representations (cut out by an object predicate) equipped with a chosen
//! class of conflations, plus a distinguished additive subcategory A.
//!
//! Three conflation classes are supported: all ambient kernel-cokernel
//! pairs, ambient-exact pairs with all three terms in the category, and the
//! closure of a finite generator list under isomorphism, direct sums,
//! composition of deflations, pullback of deflations, and pushout of
//! inflations, within a dimension bound.

use crate::quiverrep::{
    cokernel_morphism, direct_sum, decompose, find_invertible_combo, hom_basis, is_isomorphic,
    kernel_morphism, morphism_coords, pullback, pushout, solve_factor_through,
    image_factorization, IndecRegistry, Quiver, RepMorphism, Representation,
};
use crate::exactla::FieldMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};
use std::rc::Rc;

/// Object multiset: indecomposable name -> multiplicity.
pub type ObjKey = BTreeMap<String, usize>;

/// A kernel-cokernel candidate: i: X -> Y followed by p: Y -> Z.
#[derive(Clone, Debug)]
pub struct Conflation {
    pub i: RepMorphism,
    pub p: RepMorphism,
}

impl Conflation {
    pub fn x(&self) -> &Representation {
        &self.i.source
    }
    pub fn y(&self) -> &Representation {
        &self.i.target
    }
    pub fn z(&self) -> &Representation {
        &self.p.target
    }
}

/// Shape pattern for object exclusion: a fixed multiset plus an optional
/// wildcard indecomposable absorbed in any multiplicity.
#[derive(Clone, Debug)]
pub struct Shape {
    pub fixed: ObjKey,
    pub wildcard: Option<String>,
}

impl Shape {
    fn matches(&self, key: &ObjKey) -> bool {
        let mut rest = key.clone();
        for (name, mult) in &self.fixed {
            match rest.get_mut(name) {
                Some(m) if *m >= *mult => {
                    *m -= *mult;
                }
                _ => return false,
            }
        }
        rest.retain(|_, m| *m > 0);
        match &self.wildcard {
            Some(w) => rest.keys().all(|k| k == w),
            None => rest.is_empty(),
        }
    }
}

#[derive(Clone, Debug)]
pub enum ObjectPredicate {
    /// Every finite-dimensional representation.
    All,
    /// Objects with no summand among the named indecomposables.
    KaroubiExclude { names: Vec<String> },
    /// Objects whose decomposition matches none of the excluded shapes.
    ExcludeShapes { shapes: Vec<Shape> },
}

impl ObjectPredicate {
    pub fn allows(&self, key: &ObjKey) -> bool {
        match self {
            ObjectPredicate::All => true,
            ObjectPredicate::KaroubiExclude { names } => {
                key.keys().all(|k| !names.contains(k))
            }
            ObjectPredicate::ExcludeShapes { shapes } => {
                shapes.iter().all(|s| !s.matches(key))
            }
        }
    }
}

#[derive(Clone, Debug)]
pub enum ConflationStrategy {
    /// Every ambient kernel-cokernel pair is a conflation.
    AllKernelCokernel,
    /// Ambient-exact pairs whose three terms lie in the category.
    AmbientExact,
    /// Closure of the generators, with optional split conflations.
    GeneratedBy {
        generators: Vec<Conflation>,
        include_split: bool,
        dim_bound: usize,
    },
}

/// Saturated conflation class for the generated strategy: a list of
/// non-split "cores"; the class consists of everything equivalent to a
/// direct sum of cores and (when splits are included) a split conflation.
pub struct Saturation {
    pub cores: Vec<(Conflation, [ObjKey; 3])>,
    pub include_split: bool,
    /// Whether the closure rounds reached a fixpoint within the caps.
    pub fixpoint: bool,
}

struct Caches {
    hom: HashMap<(Representation, Representation), Rc<Vec<RepMorphism>>>,
    decompose: HashMap<Representation, Result<ObjKey, String>>,
    deflation: HashMap<(Representation, Representation, Vec<FieldMatrix>), bool>,
    inflation: HashMap<(Representation, Representation, Vec<FieldMatrix>), bool>,
}

/// A declared torsion pair (additive generators of each class).
#[derive(Clone, Debug)]
pub struct TorsionPair {
    pub t: Vec<String>,
    pub f: Vec<String>,
}

/// A conflation category instance with a distinguished subcategory A and
/// the search bounds used for all bounded decisions.
pub struct Instance {
    pub name: String,
    pub quiver: Quiver,
    pub p: u64,
    pub registry: IndecRegistry,
    pub predicate: ObjectPredicate,
    pub strategy: ConflationStrategy,
    /// Additive generators of the distinguished subcategory A.
    pub sub_a: Vec<String>,
    pub bound_n: usize,
    pub depth_d: usize,
    pub seed: u64,
    pub torsion: Option<TorsionPair>,
    caches: RefCell<Caches>,
    saturation: RefCell<Option<Rc<Saturation>>>,
}

/// Enumerate multisets over `names` with total multiplicity at most
/// `max_total`, including the empty multiset.
pub fn multisets(names: &[String], max_total: usize) -> Vec<ObjKey> {
    let mut out = vec![ObjKey::new()];
    let mut rec = Vec::new();
    fn go(names: &[String], idx: usize, left: usize, cur: &mut ObjKey, out: &mut Vec<ObjKey>) {
        if idx == names.len() {
            if !cur.is_empty() {
                out.push(cur.clone());
            }
            return;
        }
        for m in 0..=left {
            if m > 0 {
                cur.insert(names[idx].clone(), m);
            }
            go(names, idx + 1, left - m, cur, out);
            cur.remove(&names[idx]);
        }
    }
    go(names, 0, max_total, &mut ObjKey::new(), &mut rec);
    out.extend(rec);
    out
}

fn key_sub(a: &ObjKey, b: &ObjKey) -> Option<ObjKey> {
    let mut out = a.clone();
    for (name, mult) in b {
        match out.get_mut(name) {
            Some(m) if *m >= *mult => *m -= *mult,
            _ => return None,
        }
    }
    out.retain(|_, m| *m > 0);
    Some(out)
}

fn key_add(a: &ObjKey, b: &ObjKey) -> ObjKey {
    let mut out = a.clone();
    for (name, mult) in b {
        *out.entry(name.clone()).or_insert(0) += mult;
    }
    out
}

impl Instance {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        name: String,
        quiver: Quiver,
        p: u64,
        registry: IndecRegistry,
        predicate: ObjectPredicate,
        strategy: ConflationStrategy,
        sub_a: Vec<String>,
        bound_n: usize,
        depth_d: usize,
        seed: u64,
    ) -> Instance {
        Instance {
            name,
            quiver,
            p,
            registry,
            predicate,
            strategy,
            sub_a,
            bound_n,
            depth_d,
            seed,
            torsion: None,
            caches: RefCell::new(Caches {
                hom: HashMap::new(),
                decompose: HashMap::new(),
                deflation: HashMap::new(),
                inflation: HashMap::new(),
            }),
            saturation: RefCell::new(None),
        }
    }

    /// Whether negative conflation answers are only certified at the bound.
    pub fn negatives_bounded(&self) -> bool {
        matches!(self.strategy, ConflationStrategy::GeneratedBy { .. })
    }

    pub fn zero_object(&self) -> Representation {
        Representation::zero(&self.quiver, self.p)
    }

    /// Canonical object of a multiset key: direct sum in registry order.
    pub fn realize(&self, key: &ObjKey) -> Representation {
        let parts = self.expand(key);
        let refs: Vec<&Representation> = parts.iter().copied().collect();
        direct_sum(&self.quiver, &refs, self.p).sum
    }

    fn expand(&self, key: &ObjKey) -> Vec<&Representation> {
        let mut parts = Vec::new();
        for (name, rep) in &self.registry.entries {
            if let Some(&m) = key.get(name) {
                for _ in 0..m {
                    parts.push(rep);
                }
            }
        }
        parts
    }

    pub fn key_of(&self, rep: &Representation) -> Result<ObjKey, String> {
        if let Some(r) = self.caches.borrow().decompose.get(rep) {
            return r.clone();
        }
        let r = decompose(&self.quiver, rep, &self.registry, self.seed);
        self.caches.borrow_mut().decompose.insert(rep.clone(), r.clone());
        r
    }

    pub fn in_category_key(&self, key: &ObjKey) -> bool {
        self.predicate.allows(key)
    }

    pub fn in_category(&self, rep: &Representation) -> bool {
        match self.key_of(rep) {
            Ok(key) => self.predicate.allows(&key),
            Err(_) => false,
        }
    }

    /// Whether the object lies in the subcategory A.
    pub fn in_a(&self, rep: &Representation) -> bool {
        match self.key_of(rep) {
            Ok(key) => key.keys().all(|k| self.sub_a.contains(k)),
            Err(_) => false,
        }
    }

    pub fn hom(&self, x: &Representation, y: &Representation) -> Rc<Vec<RepMorphism>> {
        let k = (x.clone(), y.clone());
        if let Some(b) = self.caches.borrow().hom.get(&k) {
            return Rc::clone(b);
        }
        let b = Rc::new(hom_basis(&self.quiver, x, y));
        self.caches.borrow_mut().hom.insert(k, Rc::clone(&b));
        b
    }

    /// Deterministic morphism samples: the whole space when the hom space
    /// is at most 2-dimensional, otherwise the basis plus seeded combos.
    pub fn morphism_samples(&self, x: &Representation, y: &Representation) -> Vec<RepMorphism> {
        let basis = self.hom(x, y);
        let d = basis.len();
        if d == 0 {
            return vec![RepMorphism::zero(x, y)];
        }
        if d <= 2 {
            let total = (self.p as usize).pow(d as u32);
            let mut out = Vec::with_capacity(total);
            for mut n in 0..total {
                let mut f = RepMorphism::zero(x, y);
                for b in basis.iter() {
                    let c = (n as u64) % self.p;
                    n /= self.p as usize;
                    f = f.add(&b.scale(c));
                }
                out.push(f);
            }
            return out;
        }
        let mut out: Vec<RepMorphism> = vec![RepMorphism::zero(x, y)];
        out.extend(basis.iter().cloned());
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed ^ 0x5a5a);
        for _ in 0..64 {
            let mut f = RepMorphism::zero(x, y);
            for b in basis.iter() {
                f = f.add(&b.scale(rng.gen_range(0..self.p)));
            }
            out.push(f);
        }
        out
    }

    /// Multisets of in-category objects with total multiplicity at most
    /// `max_total` (canonical object keys).
    pub fn object_keys(&self, max_total: usize) -> Vec<ObjKey> {
        multisets(&self.registry.names(), max_total)
            .into_iter()
            .filter(|k| self.in_category_key(k))
            .collect()
    }

    /// Multisets of A-indecomposables with total multiplicity at most
    /// `max_total`, including the empty one (zero object).
    pub fn a_object_keys(&self, max_total: usize) -> Vec<ObjKey> {
        multisets(&self.sub_a, max_total)
    }

    /// In-category indecomposable names.
    pub fn category_indec_names(&self) -> Vec<String> {
        self.registry
            .names()
            .into_iter()
            .filter(|n| {
                let key = ObjKey::from([(n.clone(), 1)]);
                self.in_category_key(&key)
            })
            .collect()
    }

    /// Shape and exactness checks in the ambient abelian category: i mono,
    /// p epi, p.i = 0, and dimensions additive at every vertex.
    pub fn ambient_exact(&self, c: &Conflation) -> bool {
        if c.i.target != c.p.source {
            return false;
        }
        if !c.i.intertwines(&self.quiver) || !c.p.intertwines(&self.quiver) {
            return false;
        }
        if !c.i.is_vertexwise_injective() || !c.p.is_vertexwise_surjective() {
            return false;
        }
        if !c.p.compose(&c.i).is_zero() {
            return false;
        }
        c.x()
            .dims
            .iter()
            .zip(&c.y().dims)
            .zip(&c.z().dims)
            .all(|((&x, &y), &z)| x + z == y)
    }

    pub fn is_conflation(&self, c: &Conflation) -> bool {
        if !self.ambient_exact(c) {
            return false;
        }
        let in_cat = self.in_category(c.x()) && self.in_category(c.y()) && self.in_category(c.z());
        if !in_cat {
            return false;
        }
        match &self.strategy {
            ConflationStrategy::AllKernelCokernel | ConflationStrategy::AmbientExact => true,
            ConflationStrategy::GeneratedBy { .. } => {
                let sat = self.saturated();
                self.generated_membership(c, &sat)
            }
        }
    }

    /// p is a deflation iff together with its kernel it forms a conflation.
    pub fn is_deflation(&self, p: &RepMorphism) -> bool {
        let key = (p.source.clone(), p.target.clone(), p.maps.clone());
        if let Some(&v) = self.caches.borrow().deflation.get(&key) {
            return v;
        }
        let v = if p.is_vertexwise_surjective() {
            let (_, incl) = kernel_morphism(&self.quiver, p);
            self.is_conflation(&Conflation { i: incl, p: p.clone() })
        } else {
            false
        };
        self.caches.borrow_mut().deflation.insert(key, v);
        v
    }

    /// i is an inflation iff together with its cokernel it forms a conflation.
    pub fn is_inflation(&self, i: &RepMorphism) -> bool {
        let key = (i.source.clone(), i.target.clone(), i.maps.clone());
        if let Some(&v) = self.caches.borrow().inflation.get(&key) {
            return v;
        }
        let v = if i.is_vertexwise_injective() {
            let (_, proj) = cokernel_morphism(&self.quiver, i);
            self.is_conflation(&Conflation { i: i.clone(), p: proj })
        } else {
            false
        };
        self.caches.borrow_mut().inflation.insert(key, v);
        v
    }

    /// Deflation-inflation factorization of f through its image, when both
    /// halves are admitted.
    pub fn admissible_factorization(
        &self,
        f: &RepMorphism,
    ) -> Option<(RepMorphism, RepMorphism)> {
        let (_, surj, incl) = image_factorization(&self.quiver, f);
        if self.is_deflation(&surj) && self.is_inflation(&incl) {
            Some((surj, incl))
        } else {
            None
        }
    }

    /// Conflation equivalence: an invertible middle map commuting with both
    /// legs (the outer maps are then forced and automatically invertible
    /// when the end terms have equal dimension vectors).
    pub fn equivalent_conflations(&self, a: &Conflation, b: &Conflation) -> bool {
        if a.x().dims != b.x().dims || a.y().dims != b.y().dims || a.z().dims != b.z().dims {
            return false;
        }
        let hom = self.hom(a.y(), b.y());
        if hom.is_empty() {
            return a.y().is_zero();
        }
        // subspace of v with p_b . v . i_a = 0
        let cols: Vec<Vec<u64>> = hom
            .iter()
            .map(|h| morphism_coords(&b.p.compose(h).compose(&a.i)))
            .collect();
        let ncoords = cols[0].len();
        let mat = FieldMatrix::from_columns(self.p, ncoords, &cols);
        let sub: Vec<RepMorphism> = mat
            .kernel_basis()
            .into_iter()
            .map(|kv| {
                let mut v = RepMorphism::zero(a.y(), b.y());
                for (c, h) in kv.iter().zip(hom.iter()) {
                    v = v.add(&h.scale(*c));
                }
                v
            })
            .collect();
        if ncoords == 0 {
            // zero end terms at every vertex of Z and X: v unconstrained
            return find_invertible_combo(&hom, self.seed).is_some();
        }
        find_invertible_combo(&sub, self.seed).is_some()
    }

    /// Direct sum of conflations, in the given order.
    pub fn sum_conflations(&self, parts: &[&Conflation]) -> Conflation {
        let xs: Vec<&Representation> = parts.iter().map(|c| c.x()).collect();
        let ys: Vec<&Representation> = parts.iter().map(|c| c.y()).collect();
        let zs: Vec<&Representation> = parts.iter().map(|c| c.z()).collect();
        let dx = direct_sum(&self.quiver, &xs, self.p);
        let dy = direct_sum(&self.quiver, &ys, self.p);
        let dz = direct_sum(&self.quiver, &zs, self.p);
        let mut i = RepMorphism::zero(&dx.sum, &dy.sum);
        let mut p = RepMorphism::zero(&dy.sum, &dz.sum);
        for (k, c) in parts.iter().enumerate() {
            i = i.add(&dy.injections[k].compose(&c.i).compose(&dx.projections[k]));
            p = p.add(&dz.injections[k].compose(&c.p).compose(&dy.projections[k]));
        }
        Conflation { i, p }
    }

    /// The split conflation U -> U + V -> V on canonical objects.
    pub fn split_conflation(&self, u: &ObjKey, v: &ObjKey) -> Conflation {
        let ur = self.realize(u);
        let vr = self.realize(v);
        let ds = direct_sum(&self.quiver, &[&ur, &vr], self.p);
        Conflation { i: ds.injections[0].clone(), p: ds.projections[1].clone() }
    }

    /// Whether p admits a section (then the pair is equivalent to a split
    /// conflation).
    pub fn splits(&self, c: &Conflation) -> bool {
        let idz = RepMorphism::identity(c.z());
        solve_factor_through(&self.quiver, &c.p, &idz).is_some()
    }

    fn conflation_keys(&self, c: &Conflation) -> Option<[ObjKey; 3]> {
        Some([
            self.key_of(c.x()).ok()?,
            self.key_of(c.y()).ok()?,
            self.key_of(c.z()).ok()?,
        ])
    }

    /// Membership in the saturated generated class, at the ambient level
    /// (no object-predicate filtering).
    fn generated_membership(&self, c: &Conflation, sat: &Saturation) -> bool {
        if !self.ambient_exact(c) {
            return false;
        }
        let keys = match self.conflation_keys(c) {
            Some(k) => k,
            None => return false,
        };
        if sat.include_split && self.splits(c) {
            return true;
        }
        // sums of cores plus split padding matching the object keys
        let fits: Vec<usize> = (0..sat.cores.len())
            .filter(|&k| key_sub(&keys[1], &sat.cores[k].1[1]).is_some())
            .collect();
        let mut chosen: Vec<usize> = Vec::new();
        self.membership_search(c, &keys, sat, &fits, 0, &mut chosen)
    }

    fn membership_search(
        &self,
        c: &Conflation,
        keys: &[ObjKey; 3],
        sat: &Saturation,
        fits: &[usize],
        from: usize,
        chosen: &mut Vec<usize>,
    ) -> bool {
        // try to complete the current core multiset with split padding
        if !chosen.is_empty() || sat.include_split {
            let mut sx = ObjKey::new();
            let mut sy = ObjKey::new();
            let mut sz = ObjKey::new();
            for &k in chosen.iter() {
                sx = key_add(&sx, &sat.cores[k].1[0]);
                sy = key_add(&sy, &sat.cores[k].1[1]);
                sz = key_add(&sz, &sat.cores[k].1[2]);
            }
            let pad = (|| {
                let u = key_sub(&keys[0], &sx)?;
                let v = key_sub(&keys[2], &sz)?;
                let rest = key_sub(&keys[1], &sy)?;
                if rest != key_add(&u, &v) {
                    return None;
                }
                if !sat.include_split && (!u.is_empty() || !v.is_empty()) {
                    return None;
                }
                Some((u, v))
            })();
            if let Some((u, v)) = pad {
                let mut parts: Vec<Conflation> =
                    chosen.iter().map(|&k| sat.cores[k].0.clone()).collect();
                if !u.is_empty() || !v.is_empty() || parts.is_empty() {
                    parts.push(self.split_conflation(&u, &v));
                }
                let refs: Vec<&Conflation> = parts.iter().collect();
                let canon = self.sum_conflations(&refs);
                if self.equivalent_conflations(c, &canon) {
                    return true;
                }
            }
        }
        for (pos, &k) in fits.iter().enumerate().skip(from) {
            // prune: the chosen middles must still fit inside Y
            let mut sy = sat.cores[k].1[1].clone();
            for &j in chosen.iter() {
                sy = key_add(&sy, &sat.cores[j].1[1]);
            }
            if key_sub(&keys[1], &sy).is_none() {
                continue;
            }
            chosen.push(k);
            if self.membership_search(c, keys, sat, fits, pos, chosen) {
                return true;
            }
            chosen.pop();
        }
        false
    }

    /// The saturated class for the generated strategy (built lazily).
    pub fn saturated(&self) -> Rc<Saturation> {
        if let Some(s) = self.saturation.borrow().as_ref() {
            return Rc::clone(s);
        }
        let sat = Rc::new(self.build_saturation());
        *self.saturation.borrow_mut() = Some(Rc::clone(&sat));
        sat
    }

    fn build_saturation(&self) -> Saturation {
        let (generators, include_split, dim_bound) = match &self.strategy {
            ConflationStrategy::GeneratedBy { generators, include_split, dim_bound } => {
                (generators.clone(), *include_split, *dim_bound)
            }
            _ => {
                return Saturation { cores: Vec::new(), include_split: true, fixpoint: true };
            }
        };
        const MAX_CORES: usize = 48;
        const MAX_ROUNDS: usize = 3;
        let mut sat =
            Saturation { cores: Vec::new(), include_split, fixpoint: false };
        for g in &generators {
            assert!(self.ambient_exact(g), "generator is not ambient exact");
            self.consider_core(&mut sat, g.clone(), usize::MAX);
        }
        let single_pads: Vec<Option<ObjKey>> = std::iter::once(None)
            .chain(self.registry.names().into_iter().map(|n| Some(ObjKey::from([(n, 1)]))))
            .collect();
        let small_keys = multisets(&self.registry.names(), 2);
        for _round in 0..MAX_ROUNDS {
            let snapshot: Vec<Conflation> =
                sat.cores.iter().map(|(c, _)| c.clone()).collect();
            let before = sat.cores.len();
            // composition of deflations (with optional split padding on the
            // first deflation's end terms)
            for c1 in &snapshot {
                for pad in &single_pads {
                    let padded = match pad {
                        None => c1.clone(),
                        Some(k) => {
                            let s = self.split_conflation(&ObjKey::new(), k);
                            self.sum_conflations(&[c1, &s])
                        }
                    };
                    for c2 in &snapshot {
                        if padded.z().dims != c2.y().dims {
                            continue;
                        }
                        if let Some((iso, _)) =
                            is_isomorphic(&self.quiver, padded.z(), c2.y(), self.seed)
                        {
                            let q = c2.p.compose(&iso).compose(&padded.p);
                            let (_, incl) = kernel_morphism(&self.quiver, &q);
                            let cand = Conflation { i: incl, p: q };
                            self.consider_core(&mut sat, cand, dim_bound);
                        }
                    }
                }
            }
            // pullback of deflations along maps from small objects
            for c1 in &snapshot {
                for tk in &small_keys {
                    let t = self.realize(tk);
                    if t.total_dim() + c1.x().total_dim() > dim_bound {
                        continue;
                    }
                    for g in self.morphism_samples(&t, c1.z()) {
                        let (_, p1, p2) = pullback(&self.quiver, &c1.p, &g);
                        if !p2.is_vertexwise_surjective() {
                            continue;
                        }
                        let (_, incl) = kernel_morphism(&self.quiver, &p2);
                        let cand = Conflation { i: incl, p: p2.clone() };
                        let _ = p1;
                        self.consider_core(&mut sat, cand, dim_bound);
                    }
                }
            }
            // pushout of inflations along maps to small objects
            for c1 in &snapshot {
                for tk in &small_keys {
                    let t = self.realize(tk);
                    if t.total_dim() + c1.z().total_dim() > dim_bound {
                        continue;
                    }
                    for f in self.morphism_samples(c1.x(), &t) {
                        let (_, i1, i2) = pushout(&self.quiver, &c1.i, &f);
                        if !i2.is_vertexwise_injective() {
                            continue;
                        }
                        let (_, proj) = cokernel_morphism(&self.quiver, &i2);
                        let cand = Conflation { i: i2.clone(), p: proj };
                        let _ = i1;
                        self.consider_core(&mut sat, cand, dim_bound);
                    }
                }
            }
            if sat.cores.len() == before {
                sat.fixpoint = true;
                break;
            }
            if sat.cores.len() >= MAX_CORES {
                break;
            }
        }
        sat
    }

    fn consider_core(&self, sat: &mut Saturation, cand: Conflation, dim_bound: usize) {
        if cand.y().total_dim() > dim_bound {
            return;
        }
        if !self.ambient_exact(&cand) {
            return;
        }
        if sat.include_split && self.splits(&cand) {
            return;
        }
        if self.generated_membership(&cand, sat) {
            return;
        }
        let keys = match self.conflation_keys(&cand) {
            Some(k) => k,
            None => return,
        };
        sat.cores.push((cand, keys));
    }

    /// Products g.h running through single A-indecomposables; their span is
    /// exactly the set of morphisms X -> Y factoring through an object of A.
    fn fta_products(
        &self,
        x: &Representation,
        y: &Representation,
    ) -> Vec<(String, RepMorphism, RepMorphism)> {
        let mut out = Vec::new();
        for name in &self.sub_a {
            let a = self.registry.get(name).expect("registered A-generator").clone();
            let into = self.hom(x, &a);
            let from = self.hom(&a, y);
            for h in into.iter() {
                for g in from.iter() {
                    out.push((name.clone(), g.clone(), h.clone()));
                }
            }
        }
        out
    }

    /// Basis of the subspace of Hom(X, Y) of morphisms factoring through A.
    pub fn fta_basis(&self, x: &Representation, y: &Representation) -> Vec<RepMorphism> {
        let products = self.fta_products(x, y);
        let mut basis: Vec<RepMorphism> = Vec::new();
        let mut coords: Vec<Vec<u64>> = Vec::new();
        for (_, g, h) in &products {
            let f = g.compose(h);
            if f.is_zero() {
                continue;
            }
            let c = morphism_coords(&f);
            let mut cols = coords.clone();
            cols.push(c.clone());
            let mat = FieldMatrix::from_columns(self.p, c.len(), &cols);
            if mat.rank() > coords.len() {
                coords.push(c);
                basis.push(f);
            }
        }
        basis
    }

    /// Whether f factors through an object of A (decided exactly).
    pub fn factors_through_a(&self, f: &RepMorphism) -> bool {
        self.fta_factorization(f).is_some()
    }

    /// Explicit factorization f = G . H through a direct sum of
    /// A-indecomposables, when one exists.
    pub fn fta_factorization(
        &self,
        f: &RepMorphism,
    ) -> Option<(RepMorphism, RepMorphism)> {
        if f.is_zero() {
            let zero = self.zero_object();
            return Some((
                RepMorphism::zero(&zero, &f.target),
                RepMorphism::zero(&f.source, &zero),
            ));
        }
        let products = self.fta_products(&f.source, &f.target);
        if products.is_empty() {
            return None;
        }
        let cols: Vec<Vec<u64>> = products
            .iter()
            .map(|(_, g, h)| morphism_coords(&g.compose(h)))
            .collect();
        let target = morphism_coords(f);
        let mat = FieldMatrix::from_columns(self.p, target.len(), &cols);
        let sol = mat.solve(&target)?;
        // assemble the middle object from the terms actually used
        let used: Vec<(u64, &(String, RepMorphism, RepMorphism))> = sol
            .iter()
            .zip(&products)
            .filter(|(c, _)| **c != 0)
            .map(|(c, p)| (*c, p))
            .collect();
        let mids: Vec<&Representation> = used
            .iter()
            .map(|(_, (name, _, _))| self.registry.get(name).unwrap())
            .collect();
        if mids.is_empty() {
            return None;
        }
        let ds = direct_sum(&self.quiver, &mids, self.p);
        let mut bigh = RepMorphism::zero(&f.source, &ds.sum);
        let mut bigg = RepMorphism::zero(&ds.sum, &f.target);
        for (k, (c, (_, g, h))) in used.iter().enumerate() {
            bigh = bigh.add(&ds.injections[k].compose(&h.scale(*c)));
            bigg = bigg.add(&g.compose(&ds.projections[k]));
        }
        debug_assert_eq!(bigg.compose(&bigh).maps, f.maps);
        Some((bigg, bigh))
    }

    /// The same data with all arrows reversed: deflations and inflations
    /// trade places, A and the bounds are kept.
    pub fn opposite(&self) -> Instance {
        let quiver = self.quiver.opposite();
        let registry = IndecRegistry {
            quiver: quiver.clone(),
            entries: self
                .registry
                .entries
                .iter()
                .map(|(n, r)| (n.clone(), r.opposite(&self.quiver)))
                .collect(),
        };
        let strategy = match &self.strategy {
            ConflationStrategy::AllKernelCokernel => ConflationStrategy::AllKernelCokernel,
            ConflationStrategy::AmbientExact => ConflationStrategy::AmbientExact,
            ConflationStrategy::GeneratedBy { generators, include_split, dim_bound } => {
                ConflationStrategy::GeneratedBy {
                    generators: generators
                        .iter()
                        .map(|c| Conflation {
                            i: c.p.opposite(&self.quiver),
                            p: c.i.opposite(&self.quiver),
                        })
                        .collect(),
                    include_split: *include_split,
                    dim_bound: *dim_bound,
                }
            }
        };
        let mut inst = Instance::new(
            format!("{}-op", self.name),
            quiver,
            self.p,
            registry,
            self.predicate.clone(),
            strategy,
            self.sub_a.clone(),
            self.bound_n,
            self.depth_d,
            self.seed,
        );
        // torsion and torsion-free classes trade places under duality
        inst.torsion = self
            .torsion
            .as_ref()
            .map(|tp| TorsionPair { t: tp.f.clone(), f: tp.t.clone() });
        inst
    }
}
