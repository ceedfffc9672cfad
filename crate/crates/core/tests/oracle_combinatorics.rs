//! Brute-force oracles for the root combinatorics: the base definition and
//! its uniqueness checked by subset enumeration, remoteness checked by
//! exhaustive chain search, and the structural sandwich facts about the
//! broad base.

use std::collections::BTreeSet;

use parinv_core::roots::{
    antidiagonal_check, greater, BaseLayers, Composition, GeneratorSet, Root,
};
use parinv_core::verify::{compositions_up_to, sweep_invariance};

fn comp(sizes: &[usize]) -> Composition {
    Composition::new(sizes.to_vec()).unwrap()
}

/// The two clauses of the base definition.
fn is_base(m: &BTreeSet<Root>, s: &BTreeSet<Root>) -> bool {
    if !s.is_subset(m) {
        return false;
    }
    let antichain = s
        .iter()
        .all(|&a| !s.iter().any(|&b| a != b && (greater(a, b) || greater(b, a))));
    let dominated = m
        .difference(s)
        .all(|&gamma| s.iter().any(|&xi| greater(gamma, xi)));
    antichain && dominated
}

#[test]
fn computed_base_satisfies_the_definition_up_to_n10() {
    for sizes in compositions_up_to(10) {
        let c = comp(&sizes);
        let m = c.nilradical_roots();
        let s = BaseLayers::compute(&c).roots();
        assert!(is_base(&m, &s), "base definition fails for {sizes:?}");
    }
}

#[test]
fn base_is_the_unique_subset_satisfying_the_definition() {
    for sizes in compositions_up_to(10) {
        let c = comp(&sizes);
        let m: Vec<Root> = c.nilradical_roots().into_iter().collect();
        if m.len() > 12 {
            continue;
        }
        let m_set: BTreeSet<Root> = m.iter().copied().collect();
        let computed = BaseLayers::compute(&c).roots();
        let mut matches = Vec::new();
        for mask in 0u32..(1u32 << m.len()) {
            let subset: BTreeSet<Root> = m
                .iter()
                .enumerate()
                .filter(|(idx, _)| mask & (1 << idx) != 0)
                .map(|(_, &r)| r)
                .collect();
            if is_base(&m_set, &subset) {
                matches.push(subset);
            }
        }
        assert_eq!(matches.len(), 1, "base not unique for {sizes:?}");
        assert_eq!(matches[0], computed, "computed base differs for {sizes:?}");
    }
}

#[test]
fn antidiagonals_always_land_in_the_base_up_to_n10() {
    for sizes in compositions_up_to(10) {
        let c = comp(&sizes);
        let base = BaseLayers::compute(&c);
        assert!(antidiagonal_check(&c, &base), "antidiagonal escapes S for {sizes:?}");
    }
}

/// Exhaustive longest-chain search, independent of the DP table.
fn remoteness_by_chain_search(m: &BTreeSet<Root>, gamma: Root) -> usize {
    let mut best = 1;
    for &next in m {
        if greater(gamma, next) {
            best = best.max(1 + remoteness_by_chain_search(m, next));
        }
    }
    best
}

#[test]
fn remoteness_matches_chain_enumeration() {
    for sizes in compositions_up_to(7) {
        let c = comp(&sizes);
        let m = c.nilradical_roots();
        for &gamma in &m {
            let expected = remoteness_by_chain_search(&m, gamma);
            let got = parinv_core::roots::remoteness(&c, gamma).unwrap();
            assert_eq!(got, expected, "remoteness of {gamma} in {sizes:?}");
        }
    }
}

#[test]
fn layer_index_bounds_remoteness() {
    for sizes in compositions_up_to(8) {
        let c = comp(&sizes);
        let base = BaseLayers::compute(&c);
        for (k, layer) in base.layers().iter().enumerate() {
            for &gamma in layer {
                let r = parinv_core::roots::remoteness(&c, gamma).unwrap();
                assert!(
                    r >= k + 1,
                    "layer {} root {gamma} has remoteness {r} in {sizes:?}",
                    k + 1
                );
            }
        }
    }
}

#[test]
fn broad_base_sandwich_up_to_n10() {
    for sizes in compositions_up_to(10) {
        let gens = GeneratorSet::from_sizes(sizes.clone()).unwrap();
        let s = gens.base().roots();
        assert!(s.is_subset(gens.broad()), "S not inside T for {sizes:?}");
        assert!(
            gens.broad().is_subset(gens.nilradical()),
            "T escapes M for {sizes:?}"
        );
        let outside: BTreeSet<Root> = gens
            .nilradical()
            .difference(gens.m_prime())
            .copied()
            .collect();
        assert!(
            outside.is_subset(gens.broad()),
            "superdiagonal cells escape T for {sizes:?}"
        );
    }
}

#[test]
fn phi_disjoint_from_base_up_to_n10() {
    for sizes in compositions_up_to(10) {
        // construction reports overlaps as typed errors; none is expected
        let gens = GeneratorSet::from_sizes(sizes.clone()).unwrap();
        assert!(gens.phi().is_disjoint(&gens.base().roots()));
    }
}

#[test]
fn invariance_sweep_holds_on_small_sizes() {
    // quick version of the full sweep used by the acceptance gate
    let (checked, failures) = sweep_invariance(5);
    assert_eq!(checked, 31);
    assert!(failures.is_empty());
}
