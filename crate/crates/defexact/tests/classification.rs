//! Axiom checking and subcategory classification on the built-in corpus.

use defexact::axioms::{
    check_exact_axioms, check_subobject_closed, check_torsion_pair, classify_subcategory,
    find_report,
};
use defexact::confcat::Instance;
use defexact::specio::{corpus, load_instance};

fn load(name: &str) -> Instance {
    load_instance(corpus(name).unwrap(), 5, 3, 0).unwrap()
}

fn assert_holds(reports: &[defexact::axioms::AxiomReport], name: &str, expect: bool) {
    let r = find_report(reports, name)
        .unwrap_or_else(|| panic!("missing report {name}"));
    assert_eq!(
        r.holds, expect,
        "{name}: expected holds={expect}, got {:?} (witness: {:?})",
        r.holds, r.witness
    );
}

#[test]
fn exact_axioms_hold_on_ambient_exact_instances() {
    // one-sided: only the deflation axioms are guaranteed in general
    for name in ["r3", "serre", "torsion", "p3"] {
        let inst = load(name);
        let reports = check_exact_axioms(&inst);
        for ax in ["R0", "R0*", "R1", "R2", "R3"] {
            assert_holds(&reports, ax, true);
        }
    }
    // the full representation category is abelian, hence two-sided exact
    let reports = check_exact_axioms(&load("serre"));
    for ax in ["L0", "L0*", "L1", "L2", "L3"] {
        assert_holds(&reports, ax, true);
    }
}

#[test]
fn exotic_structure_satisfies_one_sided_exactness() {
    let inst = load("p4");
    let reports = check_exact_axioms(&inst);
    for ax in ["R0", "R0*", "R1", "R2", "R3"] {
        assert_holds(&reports, ax, true);
    }
}

#[test]
fn p3_instance_fails_only_the_pushout_axiom() {
    let inst = load("p3");
    let reports = classify_subcategory(&inst);
    assert_holds(&reports, "P1", true);
    assert_holds(&reports, "P2", true);
    assert_holds(&reports, "P3", false);
    assert_holds(&reports, "P4", true);
    assert_holds(&reports, "RightFiltering", true);
    assert_holds(&reports, "DeflationPercolating", false);
    let w = find_report(&reports, "P3").unwrap().witness.as_ref().unwrap();
    assert!(w.contains("P2") && w.contains("P3"), "unexpected witness: {w}");
}

#[test]
fn p4_instance_fails_only_the_descent_axiom() {
    let inst = load("p4");
    let reports = classify_subcategory(&inst);
    assert_holds(&reports, "P1", true);
    assert_holds(&reports, "P2", true);
    assert_holds(&reports, "P3", true);
    assert_holds(&reports, "P4", false);
    let w = find_report(&reports, "P4").unwrap().witness.as_ref().unwrap();
    assert!(w.contains("S3"), "unexpected witness: {w}");
}

#[test]
fn r3_subcategory_is_admissibly_percolating() {
    let inst = load("r3");
    let reports = classify_subcategory(&inst);
    for ax in ["A1", "A2", "A3", "AdmissiblyDeflationPercolating"] {
        assert_holds(&reports, ax, true);
    }
    assert_holds(&reports, "DeflationPercolating", true);
}

#[test]
fn torsion_free_class_percolates_but_is_not_special() {
    let inst = load("torsion");
    let reports = classify_subcategory(&inst);
    for ax in ["P1", "P2", "P3", "P4", "DeflationPercolating"] {
        assert_holds(&reports, ax, true);
    }
    assert_holds(&reports, "RightSpecial", false);
    let w = find_report(&reports, "RightSpecial").unwrap().witness.as_ref().unwrap();
    assert!(w.contains("X") && w.contains("I2"), "unexpected witness: {w}");
}

#[test]
fn torsion_pair_is_cohereditary() {
    let inst = load("torsion");
    let reports = check_torsion_pair(&inst);
    assert_holds(&reports, "TorsionHomVanishing", true);
    assert_holds(&reports, "TorsionSequences", true);
    assert_holds(&reports, "Cohereditary:FSerre", true);
}

#[test]
fn simple_top_subcategory_is_strongly_percolating_and_subobject_closed() {
    let inst = load("serre");
    let reports = classify_subcategory(&inst);
    for ax in [
        "P1",
        "P2",
        "P3",
        "P4",
        "StronglyRightFiltering",
        "StronglyDeflationPercolating",
        "AdmissiblyDeflationPercolating",
    ] {
        assert_holds(&reports, ax, true);
    }
    let sub = check_subobject_closed(&inst);
    assert!(sub.holds, "add of a simple module should be subobject closed");
}
