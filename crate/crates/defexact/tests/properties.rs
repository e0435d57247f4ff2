//! Seeded randomized property suite: 200 cases per property on every
//! applicable built-in instance, zero tolerated failures.

mod common;

use common::{property_table, run_property};

const CASES: usize = 200;
const SEED: u64 = 0;

fn run(name: &str) {
    let (prop, f, instances) =
        property_table().into_iter().find(|(n, _, _)| *n == name).unwrap();
    for instance in instances {
        let o = run_property(prop, f, instance, CASES, SEED);
        assert!(
            o.failures.is_empty(),
            "{} on {}: {} failures, first: {}",
            prop,
            instance,
            o.failures.len(),
            o.failures[0]
        );
        assert!(o.checked > 0, "{prop} on {instance}: no case was ever checked");
    }
}

#[test]
fn pullback_pasting() {
    run("pullback pasting");
}

#[test]
fn pushout_of_an_inflation_is_its_cokernel() {
    run("pushout of an inflation is its cokernel");
}

#[test]
fn pullback_of_an_inflation_along_a_deflation() {
    run("pullback of an inflation along a deflation");
}

#[test]
fn weak_iso_pullback() {
    run("weak-isomorphism pullback");
}

#[test]
fn composition_of_kernel_in_a_deflations() {
    run("composition of kernel-in-A deflations");
}

#[test]
fn weak_iso_chains_compose() {
    run("weak-isomorphism chains compose");
}

#[test]
fn completion_squares_exist() {
    run("completion squares exist");
}

#[test]
fn maps_through_a_are_annihilated() {
    run("maps through A are annihilated");
}

#[test]
fn roof_equivalence_is_transitive() {
    run("roof equivalence is transitive");
}

#[test]
fn conflation_lifting_contract() {
    run("conflation lifting contract");
}

#[test]
fn zero_roof_criterion_three_way_agreement() {
    run("zero-roof criterion three-way agreement");
}
