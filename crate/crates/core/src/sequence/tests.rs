use std::collections::BTreeSet;

use proptest::prelude::*;

use super::*;
use crate::group::{make_abelian_p_group, make_cyclic, make_heisenberg};

/// All products of all orderings, by explicit permutation.
fn brute_pi(g: &GroupTable, terms: &[ElementId]) -> BTreeSet<ElementId> {
    fn go(g: &GroupTable, rest: &mut Vec<ElementId>, acc: ElementId, out: &mut BTreeSet<ElementId>) {
        if rest.is_empty() {
            out.insert(acc);
            return;
        }
        for i in 0..rest.len() {
            let t = rest.remove(i);
            go(g, rest, g.mul(acc, t), out);
            rest.insert(i, t);
        }
    }
    let mut out = BTreeSet::new();
    go(g, &mut terms.to_vec(), g.identity(), &mut out);
    out
}

fn brute_big_pi(g: &GroupTable, terms: &[ElementId]) -> BTreeSet<ElementId> {
    let mut out = BTreeSet::new();
    for mask in 1u32..(1 << terms.len()) {
        let sub: Vec<_> = (0..terms.len()).filter(|i| mask >> i & 1 == 1).map(|i| terms[i]).collect();
        out.extend(brute_pi(g, &sub));
    }
    out
}

fn ids(v: &[u16]) -> Vec<ElementId> {
    v.iter().map(|&i| ElementId(i)).collect()
}

#[test]
fn pi_matches_permutation_oracle_on_h27() {
    let g = make_heisenberg(3).unwrap();
    let cases: [&[u16]; 4] = [&[9, 3], &[9, 3, 3, 12], &[1, 9, 3, 22, 26], &[9, 9, 3, 3, 12, 21]];
    for c in cases {
        let terms = ids(c);
        let s = Sequence::from_terms(&g, terms.iter().copied());
        let got: BTreeSet<_> = s.pi_set(DEFAULT_STATE_BUDGET).unwrap().iter().collect();
        assert_eq!(got, brute_pi(&g, &terms), "{c:?}");
    }
}

#[test]
fn x_and_y_have_two_products() {
    let g = make_heisenberg(3).unwrap();
    let x = g.parse_element("x").unwrap();
    let y = g.parse_element("y").unwrap();
    let s = Sequence::from_terms(&g, [x, y]);
    let pi = s.pi_set(DEFAULT_STATE_BUDGET).unwrap();
    assert_eq!(pi.len(), 2);
    assert!(pi.contains(g.mul(x, y)) && pi.contains(g.mul(y, x)));
}

#[test]
fn cyclic_pi_is_the_sum() {
    let g = make_cyclic(11).unwrap();
    let s = Sequence::from_terms(&g, ids(&[3, 5, 5, 9]));
    assert_eq!(s.pi_set(DEFAULT_STATE_BUDGET).unwrap().to_vec(), ids(&[0]));
}

#[test]
fn shortest_witness_is_shortest_and_verifies() {
    let g = make_heisenberg(3).unwrap();
    let x = g.parse_element("x").unwrap();
    let y = g.parse_element("y").unwrap();
    let x2 = g.parse_element("x^2").unwrap();
    let s = Sequence::from_terms(&g, [x, x, y, x2, y]);
    let w = s.product_one_witness(DEFAULT_STATE_BUDGET).unwrap().unwrap();
    assert_eq!(w.len(), 2);
    w.verify(&s).unwrap();
    assert!(s.product_one_witness_of_length(3, DEFAULT_STATE_BUDGET).unwrap().is_none());
    let s = Sequence::from_terms(&g, [x, x, x, y, x2, g.inv(y)]);
    let w4 = s.product_one_witness_of_length(4, DEFAULT_STATE_BUDGET).unwrap().unwrap();
    assert_eq!(w4.len(), 4);
    w4.verify(&s).unwrap();
}

#[test]
fn zero_sum_free_has_no_witness() {
    let g = make_cyclic(5).unwrap();
    let s = Sequence::from_terms(&g, ids(&[1, 1, 1, 1]));
    assert!(!s.has_product_one_subsequence(DEFAULT_STATE_BUDGET).unwrap());
    assert!(s.product_one_witness(DEFAULT_STATE_BUDGET).unwrap().is_none());
}

#[test]
fn witness_verification_rejects_bad_witnesses() {
    let g = make_cyclic(5).unwrap();
    let s = Sequence::from_terms(&g, ids(&[1, 4]));
    let over = Witness { terms: vec![Term { element: ElementId(1), occurrence: 1 }], target: ElementId(1) };
    assert!(over.verify(&s).is_err());
    let wrong = Witness::from_elements(&ids(&[1]), ElementId(0));
    assert!(wrong.verify(&s).is_err());
    let twice = Witness { terms: vec![Term { element: ElementId(1), occurrence: 0 }; 2], target: ElementId(2) };
    assert!(twice.verify(&Sequence::from_terms(&g, ids(&[1, 1]))).is_err());
}

#[test]
fn from_positions_numbers_occurrences() {
    let src = ids(&[4, 2, 4, 4]);
    let w = Witness::from_positions(&src, &[3, 1, 0], ElementId(0));
    let occ: Vec<u32> = w.terms.iter().map(|t| t.occurrence).collect();
    assert_eq!(occ, vec![2, 0, 0]);
}

#[test]
fn budget_is_enforced() {
    let g = make_heisenberg(3).unwrap();
    let s = Sequence::from_terms(&g, (1..27).map(ElementId));
    assert!(matches!(s.pi_set(1000), Err(SequenceError::StateBudgetExceeded { .. })));
}

#[test]
fn central_product_value_requires_nilpotency_class_two() {
    let g = make_heisenberg(3).unwrap();
    let v = g.parse_element("v").unwrap();
    let x = g.parse_element("x").unwrap();
    let x2 = g.parse_element("x^2").unwrap();
    let s = Sequence::from_terms(&g, [x, x2, v]);
    assert_eq!(s.central_product_value().unwrap(), Some(v));
    assert_eq!(Sequence::from_terms(&g, [x]).central_product_value().unwrap(), None);
}

#[test]
fn divides_concat_without() {
    let g = make_cyclic(6).unwrap();
    let s = Sequence::from_terms(&g, ids(&[1, 1, 2]));
    let t = Sequence::from_terms(&g, ids(&[1]));
    assert!(t.divides(&s) && !s.divides(&t));
    assert_eq!(s.without(&t).unwrap().concat(&t), s);
    assert_eq!(t.without(&s), Err(SequenceError::NotASubsequence));
}

fn h27_terms(max_len: usize) -> impl Strategy<Value = Vec<u16>> {
    prop::collection::vec(0u16..27, 1..=max_len)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn pi_agrees_with_permutations(terms in h27_terms(6)) {
        let g = make_heisenberg(3).unwrap();
        let t = ids(&terms);
        let s = Sequence::from_terms(&g, t.iter().copied());
        let got: BTreeSet<_> = s.pi_set(DEFAULT_STATE_BUDGET).unwrap().iter().collect();
        prop_assert_eq!(got, brute_pi(&g, &t));
    }

    #[test]
    fn big_pi_agrees_with_subsets(terms in h27_terms(6)) {
        let g = make_heisenberg(3).unwrap();
        let t = ids(&terms);
        let s = Sequence::from_terms(&g, t.iter().copied());
        let got: BTreeSet<_> = s.subsequence_products(DEFAULT_STATE_BUDGET).unwrap().iter().collect();
        prop_assert_eq!(got, brute_big_pi(&g, &t));
    }

    #[test]
    fn pi_lies_in_one_commutator_coset(terms in h27_terms(12)) {
        let g = make_heisenberg(3).unwrap();
        let s = Sequence::from_terms(&g, ids(&terms));
        let pi = s.pi_set(DEFAULT_STATE_BUDGET).unwrap();
        let first = pi.iter().next().unwrap();
        for h in pi.iter() {
            prop_assert!(g.commutator_subgroup().contains(g.mul(g.inv(first), h)));
        }
    }

    #[test]
    fn input_order_is_irrelevant(mut terms in h27_terms(10), rot in 0usize..10) {
        let g = make_heisenberg(3).unwrap();
        let a = Sequence::from_terms(&g, ids(&terms));
        let r = rot % terms.len();
        terms.rotate_left(r);
        terms.reverse();
        let b = Sequence::from_terms(&g, ids(&terms));
        prop_assert_eq!(a.pi_set(DEFAULT_STATE_BUDGET).unwrap(), b.pi_set(DEFAULT_STATE_BUDGET).unwrap());
    }

    #[test]
    fn big_pi_is_monotone(terms in h27_terms(10), cut in 1usize..10) {
        let g = make_heisenberg(3).unwrap();
        let cut = cut.min(terms.len());
        let s = Sequence::from_terms(&g, ids(&terms));
        let t = Sequence::from_terms(&g, ids(&terms[..cut]));
        let a = t.subsequence_products(DEFAULT_STATE_BUDGET).unwrap();
        let b = s.subsequence_products(DEFAULT_STATE_BUDGET).unwrap();
        prop_assert!(a.is_subset(&b));
    }

    #[test]
    fn witnesses_always_verify(terms in prop::collection::vec(0u16..27, 1..14)) {
        let g = make_heisenberg(3).unwrap();
        let s = Sequence::from_terms(&g, ids(&terms));
        if let Some(w) = s.product_one_witness(DEFAULT_STATE_BUDGET).unwrap() {
            prop_assert!(w.verify(&s).is_ok());
        }
    }

    #[test]
    fn abelian_pi_is_a_singleton(terms in prop::collection::vec(0u16..9, 1..12)) {
        let g = make_abelian_p_group(3, &[1, 1]).unwrap();
        let s = Sequence::from_terms(&g, ids(&terms));
        prop_assert_eq!(s.pi_set(DEFAULT_STATE_BUDGET).unwrap().len(), 1);
    }
}
