//! Quivers with relations, finite-dimensional representations over F_p,
//! intertwiner spaces, kernels/cokernels/pullbacks/pushouts, and
//! decomposition into registered indecomposables.

use crate::exactla::FieldMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arrow {
    pub name: String,
    pub source: usize,
    pub target: usize,
}

/// One relation: a linear combination of parallel paths that must evaluate
/// to zero. A path lists arrow indices in order of application (first
/// traversed arrow first).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation {
    pub terms: Vec<(u64, Vec<usize>)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quiver {
    pub vertices: Vec<String>,
    pub arrows: Vec<Arrow>,
    pub relations: Vec<Relation>,
}

impl Quiver {
    pub fn vertex_index(&self, name: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v == name)
    }

    pub fn arrow_index(&self, name: &str) -> Option<usize> {
        self.arrows.iter().position(|a| a.name == name)
    }

    pub fn validate(&self) -> Result<(), String> {
        for a in &self.arrows {
            if a.source >= self.vertices.len() || a.target >= self.vertices.len() {
                return Err(format!("arrow {} has undeclared endpoint", a.name));
            }
        }
        for (ri, rel) in self.relations.iter().enumerate() {
            let mut endpoints = None;
            for (_, path) in &rel.terms {
                if path.is_empty() {
                    return Err(format!("relation {ri} contains an empty path"));
                }
                for w in path.windows(2) {
                    if self.arrows[w[0]].target != self.arrows[w[1]].source {
                        return Err(format!("relation {ri} contains a non-composable path"));
                    }
                }
                let ep = (self.arrows[path[0]].source, self.arrows[*path.last().unwrap()].target);
                if let Some(prev) = endpoints {
                    if prev != ep {
                        return Err(format!("relation {ri} mixes paths with different endpoints"));
                    }
                } else {
                    endpoints = Some(ep);
                }
            }
        }
        Ok(())
    }

    /// Quiver with all arrows reversed and relation paths read backwards.
    pub fn opposite(&self) -> Quiver {
        Quiver {
            vertices: self.vertices.clone(),
            arrows: self
                .arrows
                .iter()
                .map(|a| Arrow { name: a.name.clone(), source: a.target, target: a.source })
                .collect(),
            relations: self
                .relations
                .iter()
                .map(|r| Relation {
                    terms: r
                        .terms
                        .iter()
                        .map(|(c, path)| (*c, path.iter().rev().copied().collect()))
                        .collect(),
                })
                .collect(),
        }
    }
}

/// A finite-dimensional representation: a dimension per vertex and a matrix
/// per arrow, of shape dims[target] x dims[source].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Representation {
    pub p: u64,
    pub dims: Vec<usize>,
    pub maps: Vec<FieldMatrix>,
}

impl Representation {
    pub fn zero(quiver: &Quiver, p: u64) -> Representation {
        Representation {
            p,
            dims: vec![0; quiver.vertices.len()],
            maps: quiver.arrows.iter().map(|_| FieldMatrix::zero(p, 0, 0)).collect(),
        }
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.total_dim() == 0
    }

    pub fn eval_path(&self, path: &[usize], quiver: &Quiver) -> FieldMatrix {
        let start = quiver.arrows[path[0]].source;
        let mut m = FieldMatrix::identity(self.p, self.dims[start]);
        for &a in path {
            m = self.maps[a].mul(&m);
        }
        m
    }

    pub fn validate(&self, quiver: &Quiver) -> Result<(), String> {
        if self.dims.len() != quiver.vertices.len() || self.maps.len() != quiver.arrows.len() {
            return Err("dimension/arrow count mismatch with quiver".into());
        }
        for (i, a) in quiver.arrows.iter().enumerate() {
            let m = &self.maps[i];
            if m.rows != self.dims[a.target] || m.cols != self.dims[a.source] {
                return Err(format!("matrix shape mismatch on arrow {}", a.name));
            }
        }
        for (ri, rel) in quiver.relations.iter().enumerate() {
            let mut acc: Option<FieldMatrix> = None;
            for (c, path) in &rel.terms {
                let t = self.eval_path(path, quiver).scale(*c);
                acc = Some(match acc {
                    Some(a) => a.add(&t),
                    None => t,
                });
            }
            if let Some(a) = acc {
                if !a.is_zero() {
                    return Err(format!("relation {ri} violated"));
                }
            }
        }
        Ok(())
    }

    pub fn opposite(&self, quiver: &Quiver) -> Representation {
        // arrow list order is preserved by Quiver::opposite
        let _ = quiver;
        Representation {
            p: self.p,
            dims: self.dims.clone(),
            maps: self.maps.iter().map(|m| m.transpose()).collect(),
        }
    }
}

/// Direct sum together with the canonical injections and projections.
pub struct DirectSum {
    pub sum: Representation,
    pub injections: Vec<RepMorphism>,
    pub projections: Vec<RepMorphism>,
}

pub fn direct_sum(quiver: &Quiver, parts: &[&Representation], p: u64) -> DirectSum {
    let nv = quiver.vertices.len();
    let dims: Vec<usize> = (0..nv).map(|v| parts.iter().map(|r| r.dims[v]).sum()).collect();
    let maps: Vec<FieldMatrix> = quiver
        .arrows
        .iter()
        .enumerate()
        .map(|(ai, _)| {
            let blocks: Vec<&FieldMatrix> = parts.iter().map(|r| &r.maps[ai]).collect();
            FieldMatrix::block_diag(p, &blocks)
        })
        .collect();
    let sum = Representation { p, dims, maps };
    let mut injections = Vec::new();
    let mut projections = Vec::new();
    let mut offsets = vec![vec![0usize; nv]; parts.len()];
    for v in 0..nv {
        let mut off = 0;
        for (k, r) in parts.iter().enumerate() {
            offsets[k][v] = off;
            off += r.dims[v];
        }
    }
    for (k, r) in parts.iter().enumerate() {
        let inj_maps: Vec<FieldMatrix> = (0..nv)
            .map(|v| {
                FieldMatrix::from_fn(p, sum.dims[v], r.dims[v], |i, j| {
                    u64::from(i == offsets[k][v] + j)
                })
            })
            .collect();
        let proj_maps: Vec<FieldMatrix> = (0..nv)
            .map(|v| {
                FieldMatrix::from_fn(p, r.dims[v], sum.dims[v], |i, j| {
                    u64::from(j == offsets[k][v] + i)
                })
            })
            .collect();
        injections.push(RepMorphism {
            source: (*r).clone(),
            target: sum.clone(),
            maps: inj_maps,
        });
        projections.push(RepMorphism {
            source: sum.clone(),
            target: (*r).clone(),
            maps: proj_maps,
        });
    }
    DirectSum { sum, injections, projections }
}

/// A morphism of representations: one matrix per vertex intertwining the
/// arrow maps.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RepMorphism {
    pub source: Representation,
    pub target: Representation,
    pub maps: Vec<FieldMatrix>,
}

impl RepMorphism {
    pub fn identity(x: &Representation) -> RepMorphism {
        RepMorphism {
            source: x.clone(),
            target: x.clone(),
            maps: x.dims.iter().map(|&d| FieldMatrix::identity(x.p, d)).collect(),
        }
    }

    pub fn zero(x: &Representation, y: &Representation) -> RepMorphism {
        RepMorphism {
            source: x.clone(),
            target: y.clone(),
            maps: x
                .dims
                .iter()
                .zip(&y.dims)
                .map(|(&s, &t)| FieldMatrix::zero(x.p, t, s))
                .collect(),
        }
    }

    pub fn intertwines(&self, quiver: &Quiver) -> bool {
        quiver.arrows.iter().enumerate().all(|(ai, a)| {
            self.maps[a.target]
                .mul(&self.source.maps[ai])
                .sub(&self.target.maps[ai].mul(&self.maps[a.source]))
                .is_zero()
        })
    }

    /// self after other: (self . other)(x) = self(other(x)).
    pub fn compose(&self, other: &RepMorphism) -> RepMorphism {
        debug_assert_eq!(other.target, self.source, "composition mismatch");
        RepMorphism {
            source: other.source.clone(),
            target: self.target.clone(),
            maps: self.maps.iter().zip(&other.maps).map(|(g, f)| g.mul(f)).collect(),
        }
    }

    pub fn add(&self, other: &RepMorphism) -> RepMorphism {
        RepMorphism {
            source: self.source.clone(),
            target: self.target.clone(),
            maps: self.maps.iter().zip(&other.maps).map(|(a, b)| a.add(b)).collect(),
        }
    }

    pub fn sub(&self, other: &RepMorphism) -> RepMorphism {
        RepMorphism {
            source: self.source.clone(),
            target: self.target.clone(),
            maps: self.maps.iter().zip(&other.maps).map(|(a, b)| a.sub(b)).collect(),
        }
    }

    pub fn scale(&self, c: u64) -> RepMorphism {
        RepMorphism {
            source: self.source.clone(),
            target: self.target.clone(),
            maps: self.maps.iter().map(|m| m.scale(c)).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.maps.iter().all(|m| m.is_zero())
    }

    pub fn is_vertexwise_injective(&self) -> bool {
        self.maps.iter().all(|m| m.rank() == m.cols)
    }

    pub fn is_vertexwise_surjective(&self) -> bool {
        self.maps.iter().all(|m| m.rank() == m.rows)
    }

    pub fn is_vertexwise_invertible(&self) -> bool {
        self.maps.iter().all(|m| m.is_invertible())
    }

    /// Inverse morphism when every vertex map is invertible; the inverse
    /// automatically intertwines.
    pub fn inverse(&self) -> Option<RepMorphism> {
        let maps: Option<Vec<FieldMatrix>> = self.maps.iter().map(|m| m.inverse()).collect();
        Some(RepMorphism { source: self.target.clone(), target: self.source.clone(), maps: maps? })
    }

    pub fn opposite(&self, quiver: &Quiver) -> RepMorphism {
        RepMorphism {
            source: self.target.opposite(quiver),
            target: self.source.opposite(quiver),
            maps: self.maps.iter().map(|m| m.transpose()).collect(),
        }
    }
}

/// Flatten a morphism's vertex maps into one coordinate vector (row-major,
/// vertices in order). Used to express hom-space conditions linearly.
pub fn morphism_coords(f: &RepMorphism) -> Vec<u64> {
    let mut out = Vec::new();
    for m in &f.maps {
        out.extend_from_slice(m.entries());
    }
    out
}

pub fn morphism_from_coords(
    x: &Representation,
    y: &Representation,
    coords: &[u64],
) -> RepMorphism {
    let mut maps = Vec::new();
    let mut off = 0;
    for v in 0..x.dims.len() {
        let (r, c) = (y.dims[v], x.dims[v]);
        let m = FieldMatrix::from_fn(x.p, r, c, |i, j| coords[off + i * c + j]);
        maps.push(m);
        off += r * c;
    }
    RepMorphism { source: x.clone(), target: y.clone(), maps }
}

/// Basis of Hom(x, y): solve the intertwining equations for the stacked
/// vertex-map entries.
pub fn hom_basis(quiver: &Quiver, x: &Representation, y: &Representation) -> Vec<RepMorphism> {
    let p = x.p;
    let nvars: usize = x.dims.iter().zip(&y.dims).map(|(&s, &t)| s * t).sum();
    if nvars == 0 {
        return Vec::new();
    }
    let mut var_off = vec![0usize; x.dims.len()];
    {
        let mut off = 0;
        for v in 0..x.dims.len() {
            var_off[v] = off;
            off += x.dims[v] * y.dims[v];
        }
    }
    // T_v index (v, i, j): var_off[v] + i * x.dims[v] + j, i < y.dims[v], j < x.dims[v]
    let mut rows: Vec<Vec<i64>> = Vec::new();
    for (ai, a) in quiver.arrows.iter().enumerate() {
        let (u, v) = (a.source, a.target);
        // T_v X(a) - Y(a) T_u = 0, entry (i, j): i < y.dims[v], j < x.dims[u]
        for i in 0..y.dims[v] {
            for j in 0..x.dims[u] {
                let mut row = vec![0i64; nvars];
                for k in 0..x.dims[v] {
                    row[var_off[v] + i * x.dims[v] + k] += x.maps[ai].get(k, j) as i64;
                }
                for k in 0..y.dims[u] {
                    row[var_off[u] + k * x.dims[u] + j] -= y.maps[ai].get(i, k) as i64;
                }
                rows.push(row);
            }
        }
    }
    let mat = if rows.is_empty() {
        FieldMatrix::zero(p, 0, nvars)
    } else {
        FieldMatrix::from_rows(p, &rows)
    };
    mat.kernel_basis()
        .into_iter()
        .map(|coords| morphism_from_coords(x, y, &coords))
        .collect()
}

/// Kernel of a morphism: per-vertex null spaces with induced arrow maps.
pub fn kernel_morphism(quiver: &Quiver, f: &RepMorphism) -> (Representation, RepMorphism) {
    let p = f.source.p;
    let incl_mats: Vec<FieldMatrix> = f
        .maps
        .iter()
        .map(|m| {
            let basis = m.kernel_basis();
            FieldMatrix::from_columns(p, m.cols, &basis)
        })
        .collect();
    let dims: Vec<usize> = incl_mats.iter().map(|m| m.cols).collect();
    let maps: Vec<FieldMatrix> = quiver
        .arrows
        .iter()
        .enumerate()
        .map(|(ai, a)| {
            // incl_target * K(a) = X(a) * incl_source; incl is injective so the
            // solution exists (X(a) maps the kernel into the kernel) and is unique.
            let rhs = f.source.maps[ai].mul(&incl_mats[a.source]);
            incl_mats[a.target].solve_matrix(&rhs).expect("kernel not arrow-stable")
        })
        .collect();
    let ker = Representation { p, dims, maps };
    let incl = RepMorphism { source: ker.clone(), target: f.source.clone(), maps: incl_mats };
    (ker, incl)
}

/// Cokernel of a morphism: per-vertex quotients with induced arrow maps.
pub fn cokernel_morphism(quiver: &Quiver, f: &RepMorphism) -> (Representation, RepMorphism) {
    let p = f.source.p;
    let proj_mats: Vec<FieldMatrix> = f
        .maps
        .iter()
        .map(|m| {
            // Extend a basis of im(m) by standard unit vectors to a basis of the
            // target; the quotient coordinates are the added directions.
            let n = m.rows;
            let mut cols: Vec<Vec<u64>> = Vec::new();
            let mut cur = FieldMatrix::zero(p, n, 0);
            for j in 0..m.cols {
                let cand = m.column(j);
                let test = cur.hstack(&FieldMatrix::from_columns(p, n, &[cand.clone()]));
                if test.rank() > cur.rank() {
                    cols.push(cand);
                    cur = test;
                }
            }
            let rank = cols.len();
            for e in 0..n {
                if cur.rank() == n {
                    break;
                }
                let mut cand = vec![0u64; n];
                cand[e] = 1;
                let test = cur.hstack(&FieldMatrix::from_columns(p, n, &[cand.clone()]));
                if test.rank() > cur.rank() {
                    cols.push(cand);
                    cur = test;
                }
            }
            let basis = FieldMatrix::from_columns(p, n, &cols);
            let inv = basis.inverse().expect("completed basis must be invertible");
            inv.slice(rank, n, 0, n)
        })
        .collect();
    let dims: Vec<usize> = proj_mats.iter().map(|m| m.rows).collect();
    let maps: Vec<FieldMatrix> = quiver
        .arrows
        .iter()
        .enumerate()
        .map(|(ai, a)| {
            // C(a) * proj_source = proj_target * Y(a); proj is surjective so the
            // solution exists and is unique.
            let rhs = proj_mats[a.target].mul(&f.target.maps[ai]);
            proj_mats[a.source].solve_left(&rhs).expect("cokernel not arrow-stable")
        })
        .collect();
    let coker = Representation { p, dims, maps };
    let proj = RepMorphism { source: f.target.clone(), target: coker.clone(), maps: proj_mats };
    (coker, proj)
}

/// Image factorization f = incl . surj through ker(coker(f)).
pub fn image_factorization(
    quiver: &Quiver,
    f: &RepMorphism,
) -> (Representation, RepMorphism, RepMorphism) {
    let (_, proj) = cokernel_morphism(quiver, f);
    let (im, incl) = kernel_morphism(quiver, &proj);
    let surj = solve_factor_through_mono(&incl, f).expect("image factorization");
    (im, surj, incl)
}

/// Pullback of f: X -> Z along g: Y -> Z, with the two projections.
pub fn pullback(
    quiver: &Quiver,
    f: &RepMorphism,
    g: &RepMorphism,
) -> (Representation, RepMorphism, RepMorphism) {
    assert_eq!(f.target, g.target, "pullback needs a common target");
    let p = f.source.p;
    let ds = direct_sum(quiver, &[&f.source, &g.source], p);
    // h = f . proj_X - g . proj_Y : X + Y -> Z; pullback = ker h
    let h = f.compose(&ds.projections[0]).sub(&g.compose(&ds.projections[1]));
    let (pb, incl) = kernel_morphism(quiver, &h);
    let p1 = ds.projections[0].compose(&incl);
    let p2 = ds.projections[1].compose(&incl);
    (pb, p1, p2)
}

/// Pushout of f: Z -> X along g: Z -> Y, with the two injections.
pub fn pushout(
    quiver: &Quiver,
    f: &RepMorphism,
    g: &RepMorphism,
) -> (Representation, RepMorphism, RepMorphism) {
    assert_eq!(f.source, g.source, "pushout needs a common source");
    let p = f.source.p;
    let ds = direct_sum(quiver, &[&f.target, &g.target], p);
    // h = inj_X . f - inj_Y . g : Z -> X + Y; pushout = coker h
    let h = ds.injections[0].compose(f).sub(&ds.injections[1].compose(g));
    let (po, proj) = cokernel_morphism(quiver, &h);
    let i1 = proj.compose(&ds.injections[0]);
    let i2 = proj.compose(&ds.injections[1]);
    (po, i1, i2)
}

/// Unique h with mono . h = f, when it exists (mono vertexwise injective).
pub fn solve_factor_through_mono(mono: &RepMorphism, f: &RepMorphism) -> Option<RepMorphism> {
    debug_assert_eq!(mono.target, f.target);
    let maps: Option<Vec<FieldMatrix>> = mono
        .maps
        .iter()
        .zip(&f.maps)
        .map(|(m, fm)| m.solve_matrix(fm))
        .collect();
    let h = RepMorphism { source: f.source.clone(), target: mono.source.clone(), maps: maps? };
    // uniqueness per vertex; intertwining is inherited, but verify cheaply
    if mono.compose(&h).maps.iter().zip(&f.maps).all(|(a, b)| a == b) {
        Some(h)
    } else {
        None
    }
}

/// Unique h with h . epi = f, when it exists (epi vertexwise surjective).
pub fn solve_factor_through_epi(epi: &RepMorphism, f: &RepMorphism) -> Option<RepMorphism> {
    debug_assert_eq!(epi.source, f.source);
    let maps: Option<Vec<FieldMatrix>> = epi
        .maps
        .iter()
        .zip(&f.maps)
        .map(|(e, fm)| e.solve_left(fm))
        .collect();
    let h = RepMorphism { source: epi.target.clone(), target: f.target.clone(), maps: maps? };
    if h.compose(epi).maps.iter().zip(&f.maps).all(|(a, b)| a == b) {
        Some(h)
    } else {
        None
    }
}

/// All h: X -> W with g . h = f, as (particular solution, kernel directions),
/// for arbitrary g: W -> Y and f: X -> Y. Solves the intertwining equations
/// of h jointly with the composition constraint.
pub fn solve_factor_through(
    quiver: &Quiver,
    g: &RepMorphism,
    f: &RepMorphism,
) -> Option<(RepMorphism, Vec<RepMorphism>)> {
    debug_assert_eq!(g.target, f.target);
    let x = &f.source;
    let w = &g.source;
    let p = x.p;
    let nvars: usize = x.dims.iter().zip(&w.dims).map(|(&s, &t)| s * t).sum();
    let hom = hom_basis(quiver, x, w);
    if hom.is_empty() {
        return if f.is_zero() {
            Some((RepMorphism::zero(x, w), Vec::new()))
        } else if nvars == 0 {
            None
        } else {
            None
        };
    }
    // coordinates in the hom basis: columns are coords of g . h_i
    let cols: Vec<Vec<u64>> = hom.iter().map(|h| morphism_coords(&g.compose(h))).collect();
    let target = morphism_coords(f);
    let mat = FieldMatrix::from_columns(p, target.len(), &cols);
    let sol = mat.solve(&target)?;
    let mut part = RepMorphism::zero(x, w);
    for (c, h) in sol.iter().zip(&hom) {
        part = part.add(&h.scale(*c));
    }
    let kernel_dirs = mat
        .kernel_basis()
        .into_iter()
        .map(|kv| {
            let mut d = RepMorphism::zero(x, w);
            for (c, h) in kv.iter().zip(&hom) {
                d = d.add(&h.scale(*c));
            }
            d
        })
        .collect();
    Some((part, kernel_dirs))
}

/// Registry of named indecomposables with verified local endomorphism rings.
#[derive(Clone, Debug)]
pub struct IndecRegistry {
    pub quiver: Quiver,
    pub entries: Vec<(String, Representation)>,
}

impl IndecRegistry {
    pub fn get(&self, name: &str) -> Option<&Representation> {
        self.entries.iter().find(|(n, _)| n == name).map(|(_, r)| r)
    }

    pub fn names(&self) -> Vec<String> {
        self.entries.iter().map(|(n, _)| n.clone()).collect()
    }

    /// Local endomorphism ring test: every endomorphism is invertible or
    /// nilpotent. Exhaustive over F_p combinations when the endo space is
    /// small, seeded sampling otherwise.
    pub fn verify_local_endos(&self) -> Result<(), String> {
        for (name, rep) in &self.entries {
            if rep.is_zero() {
                return Err(format!("{name}: zero object registered as indecomposable"));
            }
            rep.validate(&self.quiver).map_err(|e| format!("{name}: {e}"))?;
            let endos = hom_basis(&self.quiver, rep, rep);
            let d = endos.len();
            let total = rep.total_dim();
            let check = |e: &RepMorphism| -> bool {
                if e.is_vertexwise_invertible() {
                    return true;
                }
                let mut pw = e.clone();
                for _ in 0..total {
                    if pw.is_zero() {
                        return true;
                    }
                    pw = pw.compose(e);
                }
                pw.is_zero()
            };
            let p = rep.p;
            if d <= 4 {
                let mut coeffs = vec![0u64; d];
                loop {
                    let mut e = RepMorphism::zero(rep, rep);
                    for (c, b) in coeffs.iter().zip(&endos) {
                        e = e.add(&b.scale(*c));
                    }
                    if !check(&e) {
                        return Err(format!("{name}: endomorphism neither invertible nor nilpotent"));
                    }
                    let mut k = 0;
                    while k < d && coeffs[k] == p - 1 {
                        coeffs[k] = 0;
                        k += 1;
                    }
                    if k == d {
                        break;
                    }
                    coeffs[k] += 1;
                }
            } else {
                let mut rng = ChaCha8Rng::seed_from_u64(0xE2D0);
                for b in &endos {
                    if !check(b) {
                        return Err(format!("{name}: endomorphism neither invertible nor nilpotent"));
                    }
                }
                for _ in 0..256 {
                    let mut e = RepMorphism::zero(rep, rep);
                    for b in &endos {
                        e = e.add(&b.scale(rng.gen_range(0..p)));
                    }
                    if !check(&e) {
                        return Err(format!("{name}: endomorphism neither invertible nor nilpotent"));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Search an invertible-vertexwise F_p combination of the given morphisms:
/// up to 32 seeded random attempts, then exhaustive when the span is small
/// (dimension <= 6), else give up.
pub fn find_invertible_combo(basis: &[RepMorphism], seed: u64) -> Option<RepMorphism> {
    if basis.is_empty() {
        return None;
    }
    let p = basis[0].source.p;
    for b in basis {
        if b.is_vertexwise_invertible() {
            return Some(b.clone());
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..32 {
        let mut e = RepMorphism::zero(&basis[0].source, &basis[0].target);
        for b in basis {
            e = e.add(&b.scale(rng.gen_range(0..p)));
        }
        if e.is_vertexwise_invertible() {
            return Some(e);
        }
    }
    let d = basis.len();
    if d <= 6 {
        let mut coeffs = vec![0u64; d];
        loop {
            let mut e = RepMorphism::zero(&basis[0].source, &basis[0].target);
            for (c, b) in coeffs.iter().zip(basis) {
                e = e.add(&b.scale(*c));
            }
            if e.is_vertexwise_invertible() {
                return Some(e);
            }
            let mut k = 0;
            while k < d && coeffs[k] == p - 1 {
                coeffs[k] = 0;
                k += 1;
            }
            if k == d {
                break;
            }
            coeffs[k] += 1;
        }
    }
    None
}

/// Mutually inverse isomorphism pair, if the representations are isomorphic.
pub fn is_isomorphic(
    quiver: &Quiver,
    x: &Representation,
    y: &Representation,
    seed: u64,
) -> Option<(RepMorphism, RepMorphism)> {
    if x.dims != y.dims {
        return None;
    }
    if x.is_zero() {
        return Some((RepMorphism::zero(x, y), RepMorphism::zero(y, x)));
    }
    let basis = hom_basis(quiver, x, y);
    let f = find_invertible_combo(&basis, seed)?;
    let inv = f.inverse()?;
    Some((f, inv))
}

/// Decompose into registered indecomposables by peeling one summand at a
/// time: find s: I -> x and r: x -> I with r.s invertible in End(I), split
/// off I, recurse on ker(r').
pub fn decompose(
    quiver: &Quiver,
    x: &Representation,
    reg: &IndecRegistry,
    seed: u64,
) -> Result<BTreeMap<String, usize>, String> {
    let mut out: BTreeMap<String, usize> = BTreeMap::new();
    let mut rest = x.clone();
    'outer: while !rest.is_zero() {
        for (name, indec) in &reg.entries {
            if indec.dims.iter().zip(&rest.dims).any(|(a, b)| a > b) {
                continue;
            }
            let sections = hom_basis(quiver, indec, &rest);
            let retractions = hom_basis(quiver, &rest, indec);
            if sections.is_empty() || retractions.is_empty() {
                continue;
            }
            if let Some((s, r)) = find_split_pair(indec, &sections, &retractions, seed) {
                // normalize: w = r.s invertible in End(I); r' = w^{-1}.r so r'.s = 1
                let w = r.compose(&s);
                let winv = w.inverse().ok_or("split pair normalization failed")?;
                let rp = winv.compose(&r);
                let (ker, incl) = kernel_morphism(quiver, &rp);
                // verify [s | incl] : I + K -> rest is an isomorphism
                let ds = direct_sum(quiver, &[indec, &ker], x.p);
                let glue = s
                    .compose(&ds.projections[0])
                    .add(&incl.compose(&ds.projections[1]));
                if !glue.is_vertexwise_invertible() {
                    continue;
                }
                *out.entry(name.clone()).or_insert(0) += 1;
                rest = ker;
                continue 'outer;
            }
        }
        return Err(format!(
            "no registered summand found for dimension vector {:?}",
            rest.dims
        ));
    }
    Ok(out)
}

/// Find (s, r) with r.s an invertible endomorphism of `indec`.
fn find_split_pair(
    indec: &Representation,
    sections: &[RepMorphism],
    retractions: &[RepMorphism],
    seed: u64,
) -> Option<(RepMorphism, RepMorphism)> {
    for s in sections {
        for r in retractions {
            if r.compose(s).is_vertexwise_invertible() {
                return Some((s.clone(), r.clone()));
            }
        }
    }
    let p = indec.p;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5A11);
    for _ in 0..128 {
        let mut s = RepMorphism::zero(&sections[0].source, &sections[0].target);
        for b in sections {
            s = s.add(&b.scale(rng.gen_range(0..p)));
        }
        let mut r = RepMorphism::zero(&retractions[0].source, &retractions[0].target);
        for b in retractions {
            r = r.add(&b.scale(rng.gen_range(0..p)));
        }
        if r.compose(&s).is_vertexwise_invertible() {
            return Some((s, r));
        }
    }
    None
}
