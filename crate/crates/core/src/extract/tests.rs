use proptest::prelude::*;
use rand::Rng as _;

use super::*;
use crate::group::{make_cyclic, make_heisenberg, ElementId, GroupTable};
use crate::rng::instance_rng;
use crate::sequence::{ordered_product, Sequence, DEFAULT_STATE_BUDGET};

fn h27() -> GroupTable {
    make_heisenberg(3).unwrap()
}

fn el(g: &GroupTable, s: &str) -> ElementId {
    g.parse_element(s).unwrap()
}

fn c3_sum(t: &[u8], pos: &[usize]) -> u8 {
    (pos.iter().map(|&i| t[i] as usize).sum::<usize>() % 3) as u8
}

fn distinct_positions(pos: &[usize], n: usize) -> bool {
    let mut seen = vec![false; n];
    pos.iter().all(|&i| i < n && !std::mem::replace(&mut seen[i], true))
}

use super::checks::c3_multisets;

#[test]
fn c3_selection_length_28_exhaustive() {
    let all = c3_multisets(28);
    assert_eq!(all.len(), 435);
    let mut two_sums = 0;
    for t in all {
        // Oracle: some single removal leaves sum 0.
        let total = c3_sum(&t, &(0..28).collect::<Vec<_>>());
        let has_zero = t.contains(&total);
        match solve_c3_selection(&t, 27).unwrap().unwrap() {
            C3Selection::ZeroSum(p) => {
                assert!(has_zero);
                assert!(p.len() == 27 && distinct_positions(&p, 28) && c3_sum(&t, &p) == 0);
            }
            C3Selection::TwoSums { sum_u, sum_u2 } => {
                assert!(!has_zero, "{t:?}");
                two_sums += 1;
                for (p, s) in [(&sum_u, 1), (&sum_u2, 2)] {
                    assert!(p.len() == 27 && distinct_positions(p, 28));
                    assert_eq!(c3_sum(&t, p), s);
                }
            }
            other => panic!("unexpected {other:?}"),
        }
    }
    assert!(two_sums > 0);
}

#[test]
fn c3_selection_length_27_exhaustive() {
    let all = c3_multisets(27);
    assert_eq!(all.len(), 406);
    let mut forms = std::collections::BTreeSet::new();
    for t in all {
        match solve_c3_selection(&t, 27).unwrap().unwrap() {
            C3Selection::ZeroSum(p) => assert_eq!(c3_sum(&t, &p), 0),
            C3Selection::Blocks { triples, residual, form } => {
                assert_ne!(c3_sum(&t, &(0..27).collect::<Vec<_>>()), 0);
                assert_eq!(triples.len(), 8);
                for tr in &triples {
                    assert!(t[tr[0]] == t[tr[1]] && t[tr[1]] == t[tr[2]]);
                }
                let mut all_pos: Vec<usize> = triples.iter().flatten().copied().collect();
                all_pos.extend(residual);
                assert!(distinct_positions(&all_pos, 27) && all_pos.len() == 27);
                assert_eq!(ResidualForm::of(residual.map(|i| t[i])), Some(form));
                forms.insert(form.exponents());
            }
            other => panic!("unexpected {other:?}"),
        }
    }
    // Every listed residual form, the sixth included, actually occurs.
    assert_eq!(forms.len(), 6);
}

#[test]
fn c3_selection_report_is_clean() {
    let r = verify_c3_selection();
    assert!(r.passed(), "{:?}", r.violations);
    assert_eq!(r.cases, 435 + 406);
    assert_eq!(r.notes, vec!["residual forms seen: 6".to_string()]);
}

#[test]
fn twin_short3_report_is_clean() {
    let r = verify_twin_short3();
    assert!(r.passed(), "{:?}", r.violations);
    assert!(r.counters["four classes"] > 0 && r.counters["thick, two or three classes"] > 0);
}

#[test]
fn c3_selection_examples() {
    let ones = vec![0u8; 28];
    assert!(matches!(solve_c3_selection(&ones, 27).unwrap(), Some(C3Selection::ZeroSum(_))));
    // Eight triples of 1 and residual 1·1·u·u.
    let mut t = vec![0u8; 26];
    t.extend([1, 1]);
    let Some(C3Selection::TwoSums { sum_u, sum_u2 }) = solve_c3_selection(&t, 27).unwrap() else {
        panic!("expected two selections");
    };
    let left_out = |p: &[usize]| (0..28).find(|i| !p.contains(i)).unwrap();
    // 1·1·u completes sum u; 1·u·u completes sum u².
    assert_eq!(t[left_out(&sum_u)], 1);
    assert_eq!(t[left_out(&sum_u2)], 0);
    assert!(solve_c3_selection(&[3], 1).is_err());
    assert!(
        matches!(solve_c3_selection(&[1, 1, 1, 2], 3).unwrap(), Some(C3Selection::ZeroSum(p)) if p == vec![0, 1, 2])
    );
    assert_eq!(solve_c3_selection(&[1, 1], 2).unwrap(), None);
}

proptest! {
    #[test]
    fn sum_selection_matches_subset_oracle(vals in proptest::collection::vec((0usize..3, 0usize..3), 0..10), k in 0usize..6, ta in 0usize..3, tb in 0usize..3) {
        let n = vals.len();
        let oracle = (0u32..1 << n).any(|m| {
            m.count_ones() as usize == k && {
                let (a, b) = (0..n).filter(|i| m >> i & 1 == 1).fold((0, 0), |s, i| (s.0 + vals[i].0, s.1 + vals[i].1));
                (a % 3, b % 3) == (ta, tb)
            }
        });
        let got = sum_selection(&vals, 3, k, (ta, tb));
        prop_assert_eq!(got.is_some(), oracle);
        if let Some(p) = got {
            prop_assert_eq!(p.len(), k);
            let (a, b) = p.iter().fold((0, 0), |s, &i| (s.0 + vals[i].0, s.1 + vals[i].1));
            prop_assert_eq!((a % 3, b % 3), (ta, tb));
        }
    }

    #[test]
    fn ordering_search_matches_pi_oracle(seed in any::<u64>(), len in 1usize..8) {
        let g = h27();
        let mut rng = instance_rng(seed, 0);
        let t = random_central_sequence(&g, &mut rng, len);
        let pi = Sequence::from_terms(&g, t.iter().copied()).pi_set(DEFAULT_STATE_BUDGET).unwrap();
        let got = order_to_one(&g, &t);
        prop_assert_eq!(got.is_some(), pi.contains(g.identity()));
        if let Some(o) = got {
            let mut sorted = o.clone();
            sorted.sort_unstable();
            prop_assert_eq!(sorted, (0..len).collect::<Vec<_>>());
            prop_assert_eq!(ordered_product(&g, &o.iter().map(|&i| t[i]).collect::<Vec<_>>()), g.identity());
        }
    }

    #[test]
    fn block_values_are_pi_sets(seed in any::<u64>()) {
        let g = h27();
        let mut rng = instance_rng(seed, 1);
        let t: Vec<ElementId> = (0..33).map(|_| ElementId(rng.gen_range(0..27))).collect();
        let part = extract_short3_blocks(&g, &t);
        prop_assert_eq!(part.blocks.len(), 9);
        prop_assert_eq!(part.residual.len(), 6);
        let mut used: Vec<usize> = part.blocks.iter().flat_map(|b| b.positions).chain(part.residual.iter().copied()).collect();
        used.sort_unstable();
        prop_assert_eq!(used, (0..33).collect::<Vec<_>>());
        for b in &part.blocks {
            let pi = Sequence::from_terms(&g, b.positions.map(|i| t[i])).pi_set(64).unwrap();
            let vals: Vec<ElementId> = b.values().into_iter().map(|z| ElementId(z as u16)).collect();
            prop_assert_eq!(pi.to_vec(), vals);
            for &(z, o) in &b.orders {
                prop_assert_eq!(ordered_product(&g, &o.map(|i| t[i])), ElementId(z as u16));
            }
        }
    }
}

#[test]
fn blocks_of_trivial_inputs() {
    let g = h27();
    let part = extract_short3_blocks(&g, &[g.identity(); 33]);
    assert_eq!(part.blocks.len(), 9);
    assert!(part.blocks.iter().all(|b| b.values() == vec![0]));
    let x = el(&g, "x");
    let part = extract_short3_blocks(&g, &[x; 33]);
    assert!(part.blocks.iter().all(|b| b.values() == vec![0] && b.class == crate::egz::Short3Class::ThickA));
}

#[test]
fn seven_with_identity_gives_single_term() {
    let g = h27();
    let t = [el(&g, "x"), el(&g, "y"), g.identity(), el(&g, "xy"), el(&g, "x"), el(&g, "y"), el(&g, "y")];
    let r = extract_product_one_7(&g, &t).unwrap();
    assert_eq!(r.witness.len(), 1);
    assert_eq!(r.case, ProofCase::Central);
}

#[test]
fn seven_three_three_one_example() {
    let g = h27();
    let t: Vec<ElementId> = ["x", "xv", "x^2v", "y", "yv", "y^2v", "xy"].iter().map(|s| el(&g, s)).collect();
    let r = extract_product_one_7(&g, &t).unwrap();
    assert_eq!(r.case, ProofCase::ThreeThreeOne);
    assert_eq!(r.profile.shape(), "(3,3,1,0)");
    assert_eq!(ordered_product(&g, &r.witness.elements()), g.identity());
}

#[test]
fn seven_rejects_bad_input() {
    let g = h27();
    assert!(matches!(extract_product_one_7(&g, &[g.identity(); 6]), Err(ExtractError::WrongLength { .. })));
    let c9 = make_cyclic(9).unwrap();
    assert_eq!(extract_product_one_7(&c9, &[c9.identity(); 7]).unwrap_err(), ExtractError::NotH27);
}

#[test]
fn seven_random_cover_every_case() {
    let g = h27();
    let mut cases = std::collections::BTreeSet::new();
    let mut rng = instance_rng(77, 0);
    for _ in 0..3000 {
        let t: Vec<ElementId> = (0..7).map(|_| ElementId(rng.gen_range(0..27))).collect();
        let r = extract_product_one_7(&g, &t).unwrap();
        r.witness.verify(&Sequence::from_terms(&g, t.iter().copied())).unwrap();
        cases.insert(r.case);
    }
    assert_eq!(cases.len(), 6);
}

#[test]
fn seven_term_tables_hold() {
    let r = validate_seven_term_tables();
    assert!(r.passed(), "{:?}", r.violations);
    for key in ["(3,3,1,0) table rows", "(3,2,2,0) table rows", "(3,2,1,1) g4g6g7 central", "(3,2,1,1) g6g7 ~ g1^2"] {
        assert!(r.counters[key] > 0, "{key}");
    }
}

fn check27(g: &GroupTable, t: &[ElementId], policy: &ExtractPolicy) -> Extraction {
    let x = extract_product_one_27(g, t, policy).unwrap_or_else(|e| panic!("{e}"));
    assert_eq!(x.witness.len(), 27);
    x.witness.verify(&Sequence::from_terms(g, t.iter().copied())).unwrap();
    assert_eq!(ordered_product(g, &x.positions.iter().map(|&i| t[i]).collect::<Vec<_>>()), g.identity());
    x
}

#[test]
fn extract27_sanity_family() {
    // T0 · 1^[26] · g, with g completing T0's product.
    let g = h27();
    let mut rng = instance_rng(5, 0);
    for _ in 0..50 {
        let t0: Vec<ElementId> = (0..6).map(|_| ElementId(rng.gen_range(0..27))).collect();
        let mut t = t0.clone();
        t.extend([g.identity(); 26]);
        t.push(g.inv(ordered_product(&g, &t0)));
        let x = check27(&g, &t, &ExtractPolicy::default());
        assert!(x.layer <= Layer::Egz);
    }
}

#[test]
fn extract27_all_central() {
    let g = h27();
    let mut rng = instance_rng(6, 0);
    for _ in 0..200 {
        let t: Vec<ElementId> = (0..33).map(|_| ElementId(rng.gen_range(0..3))).collect();
        check27(&g, &t, &ExtractPolicy::default());
    }
}

#[test]
fn extract27_random_and_adversarial() {
    let g = h27();
    for (k, fam) in Family::ALL.into_iter().enumerate() {
        for i in 0..150 {
            let t = fam.sample(&mut instance_rng(1000 + k as u64, i));
            check27(&g, &t, &ExtractPolicy::default());
        }
    }
}

#[test]
fn extract27_is_deterministic() {
    let g = h27();
    let t = Family::TwoClasses.sample(&mut instance_rng(3, 3));
    let a = check27(&g, &t, &ExtractPolicy::default());
    let b = check27(&g, &t, &ExtractPolicy::default());
    assert_eq!(a, b);
}

#[test]
fn extract27_rejects_bad_input() {
    let g = h27();
    assert!(matches!(
        extract_product_one_27(&g, &[g.identity(); 32], &ExtractPolicy::default()),
        Err(ExtractError::WrongLength { expected: 33, got: 32 })
    ));
}

#[test]
fn fuzz_summary_is_reproducible() {
    let a = fuzz_extract27(120, 9, &Family::ALL, Some(1)).unwrap();
    let b = fuzz_extract27(120, 9, &Family::ALL, Some(2)).unwrap();
    assert!(a.passed());
    assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    assert_eq!(a.by_family.values().sum::<u64>(), 120);
}

#[test]
fn egz_fuzz_small() {
    for p in [3, 5] {
        let r = fuzz_egz(p, 100, 4, Some(1)).unwrap();
        assert!(r.passed(), "{:?}", r.violations);
        assert_eq!(r.counters["reordered to 1"], 100);
        assert!(r.counters["oracle checked"] > 0);
    }
}

fn check_found(g: &GroupTable, t: &[ElementId], f: &super::h27::Found) {
    assert_eq!(f.positions.len(), 27);
    assert!(distinct_positions(&f.positions, 33));
    assert_eq!(ordered_product(g, &f.positions.iter().map(|&i| t[i]).collect::<Vec<_>>()), g.identity());
}

#[test]
fn later_layers_give_valid_orders_on_their_own() {
    // Run the deeper layers directly, since the earlier ones rarely leave
    // them any work.
    let g = h27();
    let mut hits = [0; 3];
    for (k, fam) in Family::ALL.into_iter().enumerate() {
        for i in 0..40 {
            let t = fam.sample(&mut instance_rng(2000 + k as u64, i));
            if let Some(f) = super::h27::flexible_quad(&g, &t) {
                check_found(&g, &t, &f);
                hits[0] += 1;
            }
            if let Some(f) = super::h27::principal_completion(&g, &t) {
                check_found(&g, &t, &f);
                hits[1] += 1;
            }
            let f = super::h27::sweep(&g, &t).expect("some removal works");
            check_found(&g, &t, &f);
            assert_eq!(f.layer, Layer::Sweep);
            hits[2] += 1;
        }
    }
    assert!(hits.iter().all(|&h| h > 0), "{hits:?}");
}
