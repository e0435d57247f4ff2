//! Grothendieck-group computations on the corpus: the coWaldhausen and
//! quotient presentations must agree, with the expected free ranks.

use defexact::k0::{k0_quotient, k0_waldhausen};
use defexact::specio::{corpus, load_instance};

#[test]
fn quotient_and_waldhausen_presentations_agree() {
    for (name, rank) in [("r3", 2usize), ("serre", 3), ("torsion", 2), ("p3", 3)] {
        let inst = load_instance(corpus(name).unwrap(), 5, 3, 0).unwrap();
        let w = k0_waldhausen(&inst);
        let q = k0_quotient(&inst);
        assert_eq!(w.free_rank, rank, "{name}: free rank (coWaldhausen)");
        assert_eq!(q.free_rank, rank, "{name}: free rank (quotient)");
        assert_eq!(
            w.invariant_factors, q.invariant_factors,
            "{name}: invariant factors disagree"
        );
        assert!(w.invariant_factors.is_empty(), "{name}: expected a free group");
    }
}

#[test]
fn trivial_subcategory_gives_the_full_group() {
    // the full representation category with A = 0: no identifications, so
    // the group is free on the four simple modules
    let spec = corpus("serre").unwrap().replace("\"S1\"\n  ]\n}", "]\n}");
    let inst = load_instance(&spec, 5, 3, 0).unwrap();
    let w = k0_waldhausen(&inst);
    assert_eq!(w.free_rank, 4);
    assert!(w.invariant_factors.is_empty());
    let q = k0_quotient(&inst);
    assert_eq!(q.free_rank, 4);
}
