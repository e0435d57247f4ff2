//! Grothendieck groups.  Two bounded presentations are computed and
//! compared: the coWaldhausen one (conflation relations plus weak
//! equivalences on the original category) and the quotient one (descended
//! conflation relations plus isomorphisms in the localization, detected as
//! key-level weak-isomorphism orbits).  Both are reduced via the Smith
//! normal form over the integers.

use crate::confcat::{Instance, ObjKey};
use crate::exactla::{smith_normal_form, IntMatrix};
use crate::localize::{enum_conflations, single_steps_into, weak_iso_orbit};

#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct K0Report {
    /// Generators: the indecomposable objects of the category.
    pub generators: Vec<String>,
    pub relation_count: usize,
    /// Non-trivial invariant factors (absolute values > 1).
    pub invariant_factors: Vec<i128>,
    /// Rank of the free part.
    pub free_rank: usize,
}

fn key_to_row(key: &ObjKey, generators: &[String]) -> Vec<i128> {
    generators
        .iter()
        .map(|g| key.get(g).copied().unwrap_or(0) as i128)
        .collect()
}

fn sub_rows(a: &[i128], b: &[i128]) -> Vec<i128> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn reduce(generators: Vec<String>, rows: Vec<Vec<i128>>) -> K0Report {
    let relation_count = rows.len();
    let n = generators.len();
    let mat = if rows.is_empty() {
        IntMatrix::zero(1, n)
    } else {
        IntMatrix::from_rows(&rows)
    };
    let snf = smith_normal_form(&mat);
    let mut nonzero = 0usize;
    let mut invariant_factors = Vec::new();
    for i in 0..snf.d.rows.min(snf.d.cols) {
        let d = snf.d.get(i, i).abs();
        if d != 0 {
            nonzero += 1;
            if d > 1 {
                invariant_factors.push(d);
            }
        }
    }
    K0Report { generators, relation_count, invariant_factors, free_rank: n - nonzero }
}

/// Indecomposables occurring as summands of some object of the category,
/// even when not objects of the category on their own (the category need
/// not be closed under direct summands).
fn k0_generators(inst: &Instance) -> Vec<String> {
    let keys = inst.object_keys(inst.bound_n.min(3));
    inst.registry
        .names()
        .into_iter()
        .filter(|n| keys.iter().any(|k| k.contains_key(n)))
        .collect()
}

/// Grothendieck group of the coWaldhausen structure: conflation relations
/// [Y] - [X] - [Z] together with [W'] = [W] for every elementary weak
/// isomorphism W' -> W.
pub fn k0_waldhausen(inst: &Instance) -> K0Report {
    let generators = k0_generators(inst);
    let mut rows: Vec<Vec<i128>> = Vec::new();
    for c in enum_conflations(inst, 2, 400) {
        let (kx, ky, kz) = match (inst.key_of(c.x()), inst.key_of(c.y()), inst.key_of(c.z())) {
            (Ok(a), Ok(b), Ok(c)) => (a, b, c),
            _ => continue,
        };
        let ends: Vec<i128> = key_to_row(&kx, &generators)
            .iter()
            .zip(&key_to_row(&kz, &generators))
            .map(|(a, b)| a + b)
            .collect();
        rows.push(sub_rows(&key_to_row(&ky, &generators), &ends));
    }
    for k in inst.object_keys(2) {
        let w = inst.realize(&k);
        if w.is_zero() {
            continue;
        }
        for step in single_steps_into(inst, &w).into_iter().take(6) {
            if let Ok(src) = inst.key_of(&step.map.source) {
                rows.push(sub_rows(&key_to_row(&src, &generators), &key_to_row(&k, &generators)));
            }
        }
    }
    reduce(generators, rows)
}

/// Grothendieck group of the quotient: descended conflation relations plus
/// identifications of key-level weak-isomorphism orbits.
pub fn k0_quotient(inst: &Instance) -> K0Report {
    let generators = k0_generators(inst);
    let mut rows: Vec<Vec<i128>> = Vec::new();
    for c in enum_conflations(inst, 2, 400) {
        if let (Ok(kx), Ok(ky), Ok(kz)) =
            (inst.key_of(c.x()), inst.key_of(c.y()), inst.key_of(c.z()))
        {
            let ends: Vec<i128> = key_to_row(&kx, &generators)
                .iter()
                .zip(&key_to_row(&kz, &generators))
                .map(|(a, b)| a + b)
                .collect();
            rows.push(sub_rows(&key_to_row(&ky, &generators), &ends));
        }
    }
    for k in inst.object_keys(1) {
        if inst.realize(&k).is_zero() {
            continue;
        }
        let base = key_to_row(&k, &generators);
        for other in weak_iso_orbit(inst, &k, 2) {
            if other != k {
                rows.push(sub_rows(&key_to_row(&other, &generators), &base));
            }
        }
    }
    reduce(generators, rows)
}
