use proptest::prelude::*;
use rand::Rng as _;

use super::*;
use crate::group::{automorphisms, make_heisenberg};
use crate::rng::instance_rng;
use crate::sequence::DEFAULT_STATE_BUDGET;

fn el(g: &GroupTable, s: &str) -> ElementId {
    g.parse_element(s).unwrap()
}

/// Principal-part test straight from the definition: for every
/// `α ≤ β`, `g_p` and `g_α ⋯ g_β` must fail to commute (checked by
/// comparing both products).
fn oracle_principal(g: &GroupTable, parts: &[ElementId]) -> bool {
    let p = parts.len();
    let last = parts[p - 1];
    for a in 0..p - 1 {
        for b in a..p - 1 {
            let prod = ordered_product(g, &parts[a..=b]);
            if g.mul(last, prod) == g.mul(prod, last) {
                return false;
            }
        }
    }
    true
}

fn oracle_has_principal(g: &GroupTable, terms: &[ElementId], p: usize) -> bool {
    fn go(g: &GroupTable, terms: &[ElementId], p: usize, pick: &mut Vec<usize>) -> bool {
        if pick.len() == p {
            let parts: Vec<_> = pick.iter().map(|&i| terms[i]).collect();
            return oracle_principal(g, &parts);
        }
        for i in 0..terms.len() {
            if !pick.contains(&i) {
                pick.push(i);
                if go(g, terms, p, pick) {
                    return true;
                }
                pick.pop();
            }
        }
        false
    }
    go(g, terms, p, &mut Vec::new())
}

/// Random sequence of length `len` over `H_{p³}` with central product.
fn random_central(g: &GroupTable, rng: &mut crate::rng::Rng, len: usize) -> Vec<ElementId> {
    crate::extract::random_central_sequence(g, rng, len)
}

#[test]
fn x_x_y_has_a_principal_part() {
    let g = make_heisenberg(3).unwrap();
    let t = [el(&g, "x"), el(&g, "x"), el(&g, "y")];
    let pp = find_principal_part(&g, &t).unwrap();
    assert_eq!(pp, vec![0, 1, 2]);
}

#[test]
fn single_class_has_no_principal_part() {
    let g = make_heisenberg(3).unwrap();
    let t = [el(&g, "x"), el(&g, "x^2"), el(&g, "xv"), el(&g, "v"), el(&g, "x")];
    assert!(find_principal_part(&g, &t).is_none());
}

#[test]
fn short_sequences_are_never_egz() {
    let g = make_heisenberg(3).unwrap();
    let t = [el(&g, "x"), el(&g, "y"), el(&g, "x^2y^2v")];
    assert!(g.is_central(ordered_product(&g, &t)));
    assert!(certify_egz(&g, &t).is_none());
}

#[test]
fn principal_part_prefers_more_classes() {
    let g = make_heisenberg(3).unwrap();
    // x·x·y uses two classes; x·y·xy uses three.
    let t = [el(&g, "x"), el(&g, "x"), el(&g, "y"), el(&g, "xy")];
    let pp = find_principal_part(&g, &t).unwrap();
    let classes: std::collections::BTreeSet<_> = pp.iter().map(|&i| g.z_class_of(t[i])).collect();
    assert_eq!(classes.len(), 3);
}

#[test]
fn principal_search_matches_oracle_on_h27() {
    let g = make_heisenberg(3).unwrap();
    let mut rng = instance_rng(11, 0);
    for _ in 0..400 {
        let len = rng.gen_range(3..7);
        let t: Vec<ElementId> = (0..len).map(|_| ElementId(rng.gen_range(0..27))).collect();
        let found = find_principal_part(&g, &t);
        assert_eq!(found.is_some(), oracle_has_principal(&g, &t, 3), "{t:?}");
        if let Some(pp) = found {
            let parts: Vec<_> = pp.iter().map(|&i| t[i]).collect();
            assert!(oracle_principal(&g, &parts));
        }
    }
}

#[test]
fn principal_search_matches_oracle_on_h125() {
    let g = make_heisenberg(5).unwrap();
    let mut rng = instance_rng(12, 0);
    for _ in 0..60 {
        let len = rng.gen_range(5..8);
        let t: Vec<ElementId> = (0..len).map(|_| ElementId(rng.gen_range(0..125))).collect();
        assert_eq!(find_principal_part(&g, &t).is_some(), oracle_has_principal(&g, &t, 5), "{t:?}");
    }
}

fn check_certificate(g: &GroupTable, cert: &EgzCertificate) {
    let p = cert.p;
    let mut w = cert.w_i.clone();
    w.sort();
    w.dedup();
    assert_eq!(w.len(), p - 1);
    assert!(w.iter().all(|&c| c != g.identity() && g.is_central(c)));
    assert!(oracle_principal(g, &cert.principal_elements()));
    let wit = egz_reorder_to_one(g, cert);
    assert_eq!(wit.len(), cert.ambient.len());
    assert_eq!(ordered_product(g, &wit.elements()), g.identity());
}

#[test]
fn reorder_reaches_identity_on_h27() {
    let g = make_heisenberg(3).unwrap();
    let mut rng = instance_rng(13, 0);
    let mut certified = 0;
    for _ in 0..3000 {
        let len = rng.gen_range(4..=10);
        let t = random_central(&g, &mut rng, len);
        if let Some(cert) = certify_egz(&g, &t) {
            certified += 1;
            check_certificate(&g, &cert);
        }
    }
    assert!(certified > 1000, "{certified}");
}

#[test]
fn reorder_reaches_identity_on_h125() {
    let g = make_heisenberg(5).unwrap();
    let mut rng = instance_rng(14, 0);
    let mut certified = 0;
    for _ in 0..300 {
        let len = rng.gen_range(6..=12);
        let t = random_central(&g, &mut rng, len);
        if let Some(cert) = certify_egz(&g, &t) {
            certified += 1;
            check_certificate(&g, &cert);
        }
    }
    assert!(certified > 100, "{certified}");
}

#[test]
fn trivial_central_value_keeps_the_block() {
    let g = make_heisenberg(3).unwrap();
    // x·x·y·(x^2 y^2 ...) with product 1 in the given order.
    let t = vec![el(&g, "x"), el(&g, "x"), el(&g, "y")];
    let last = g.inv(ordered_product(&g, &t));
    let mut amb = t;
    amb.push(last);
    let cert = EgzCertificate::new(&g, amb, vec![0, 1, 2]).unwrap();
    assert_eq!(cert.w, g.identity());
    assert_eq!(egz_reorder_positions(&g, &cert), vec![0, 1, 2, 3]);
}

#[test]
fn certified_sequences_contain_product_one() {
    let g = make_heisenberg(3).unwrap();
    let mut rng = instance_rng(15, 0);
    for _ in 0..300 {
        let t = random_central(&g, &mut rng, 5);
        if certify_egz(&g, &t).is_some() {
            let s = Sequence::from_terms(&g, t.iter().copied());
            assert!(s.has_product_one_subsequence(DEFAULT_STATE_BUDGET).unwrap());
            assert!(s.pi_set(DEFAULT_STATE_BUDGET).unwrap().contains(g.identity()));
        }
    }
}

#[test]
fn egz_is_inherited_by_central_supersequences() {
    let g = make_heisenberg(3).unwrap();
    let mut rng = instance_rng(16, 0);
    for _ in 0..300 {
        let t1 = random_central(&g, &mut rng, 5);
        if certify_egz(&g, &t1).is_none() {
            continue;
        }
        let mut t2 = t1.clone();
        t2.extend(random_central(&g, &mut rng, 4));
        assert!(certify_egz(&g, &t2).is_some());
    }
}

#[test]
fn record_line_lists_everything() {
    let g = make_heisenberg(3).unwrap();
    let t = vec![el(&g, "x"), el(&g, "x"), el(&g, "y"), el(&g, "xy^2")];
    let cert = certify_egz(&g, &t).unwrap();
    let w = egz_reorder_to_one(&g, &cert);
    let line = cert.record(&g, &w);
    assert!(line.starts_with("egz p=3 seq="));
    assert!(line.contains(" principal=") && line.contains(" w_i=") && line.contains(" order="));
}

#[test]
fn short3_examples() {
    let g = make_heisenberg(3).unwrap();
    let c = |a: &str, b: &str, d: &str| classify_short3(&g, [el(&g, a), el(&g, b), el(&g, d)]);
    assert_eq!(c("v", "v", "v"), Ok(Short3Class::Central));
    assert_eq!(c("x", "x^2v", "v"), Ok(Short3Class::Thin));
    assert_eq!(c("x", "xv", "xv^2"), Ok(Short3Class::ThickA));
    assert_eq!(c("x", "y", "x^2y^2"), Ok(Short3Class::ThickB));
    assert_eq!(c("x", "y", "v"), Err(EgzError::NotCentral));
}

#[test]
fn short3_class_is_invariant_under_permutation_and_automorphism() {
    let g = make_heisenberg(3).unwrap();
    let auts = automorphisms(&g).unwrap();
    for a in 0..27u16 {
        for b in a..27u16 {
            let (a, b) = (ElementId(a), ElementId(b));
            let c = g.inv(g.mul(a, b));
            for z in g.center().iter() {
                let c = g.mul(c, z);
                if c < b {
                    continue;
                }
                let k = classify_short3(&g, [a, b, c]).unwrap();
                for perm in [[b, a, c], [c, b, a], [a, c, b]] {
                    if g.is_central(ordered_product(&g, &perm)) {
                        assert_eq!(classify_short3(&g, perm).unwrap(), k);
                    }
                }
                for phi in &auts {
                    let img = [phi.apply(a), phi.apply(b), phi.apply(c)];
                    assert_eq!(classify_short3(&g, img).unwrap(), k);
                }
            }
        }
    }
}

/// All short 3-sequences of non-central type, as sorted triples.
fn noncentral_short3(g: &GroupTable) -> Vec<[ElementId; 3]> {
    let mut out = Vec::new();
    for a in g.elements() {
        for b in g.elements().filter(|&b| b >= a) {
            for c in g.elements().filter(|&c| c >= b) {
                if let Ok(k) = classify_short3(g, [a, b, c]) {
                    if k != Short3Class::Central {
                        out.push([a, b, c]);
                    }
                }
            }
        }
    }
    out
}

#[test]
fn twin_short3_cases_always_certify() {
    let g = make_heisenberg(3).unwrap();
    let all = noncentral_short3(&g);
    let mut rng = instance_rng(17, 0);
    let mut hits = [0usize; 2];
    for _ in 0..20_000 {
        let u1 = all[rng.gen_range(0..all.len())];
        let u2 = all[rng.gen_range(0..all.len())];
        let terms: Vec<ElementId> = u1.iter().chain(&u2).copied().collect();
        let mut classes: Vec<usize> = terms.iter().filter(|&&t| !g.is_central(t)).map(|&t| g.z_class_of(t)).collect();
        classes.sort();
        classes.dedup();
        let k1 = classify_short3(&g, u1).unwrap();
        let k2 = classify_short3(&g, u2).unwrap();
        let four = classes.len() >= 4;
        let thick = classes.len() >= 2 && (k1.is_thick() || k2.is_thick());
        let cert = combine_twin_short3(&g, u1, u2);
        if four || thick {
            let cert = cert.unwrap_or_else(|| panic!("{u1:?} {u2:?}"));
            check_certificate(&g, &cert);
            hits[four as usize] += 1;
        } else {
            assert!(cert.is_none());
            assert!(!oracle_has_principal(&g, &terms, 3) || classes.len() >= 2);
        }
    }
    assert!(hits[0] > 100 && hits[1] > 100, "{hits:?}");
}

#[test]
fn thick_b_with_thin_uses_the_conjugate_pair() {
    let g = make_heisenberg(3).unwrap();
    let u1 = [el(&g, "x"), el(&g, "y"), el(&g, "x^2y^2")];
    let u2 = [el(&g, "x"), el(&g, "x^2"), el(&g, "v")];
    let cert = combine_twin_short3(&g, u1, u2).unwrap();
    assert_eq!(cert.principal, vec![0, 3, 1]);
}

#[test]
fn same_class_thick_a_pair_has_no_certificate() {
    let g = make_heisenberg(3).unwrap();
    let u = [el(&g, "x"), el(&g, "xv"), el(&g, "xv^2")];
    assert!(combine_twin_short3(&g, u, u).is_none());
}

#[test]
fn four_term_fix_identity_and_swap() {
    let g = make_heisenberg(3).unwrap();
    let t = [el(&g, "x"), el(&g, "x^2"), el(&g, "y"), el(&g, "y^2")];
    assert_eq!(four_term_center_fix(&g, t, g.identity()), Ok([0, 1, 2, 3]));
    let r = g.commutator(t[1], t[2]);
    let sigma = four_term_center_fix(&g, t, r).unwrap();
    assert_eq!(sigma, [0, 2, 1, 3]);
}

#[test]
fn four_term_fix_is_total_on_h27() {
    let g = make_heisenberg(3).unwrap();
    let center: Vec<ElementId> = g.center().iter().collect();
    let noncentral: Vec<ElementId> = g.elements().filter(|&e| !g.is_central(e)).collect();
    let mut count = 0;
    for &g1 in &noncentral {
        for &z2 in &center {
            let g2 = g.mul(g.inv(g1), z2);
            for &g3 in noncentral.iter().filter(|&&h| g.z_class_of(h) != g.z_class_of(g1)) {
                for &z4 in &center {
                    let g4 = g.mul(g.inv(g3), z4);
                    for &u in &center {
                        let s = four_term_center_fix(&g, [g1, g2, g3, g4], u).unwrap();
                        let t = [g1, g2, g3, g4];
                        let ord: Vec<_> = s.iter().map(|&i| t[i]).collect();
                        assert_eq!(g.mul(ordered_product(&g, &ord), u), g.identity());
                        count += 1;
                    }
                }
            }
        }
    }
    assert_eq!(count, 24 * 3 * 18 * 3 * 3);
}

#[test]
fn four_term_fix_rejects_bad_input() {
    let g = make_heisenberg(3).unwrap();
    let t = [el(&g, "x"), el(&g, "x^2"), el(&g, "xv"), el(&g, "x^2")];
    assert!(matches!(four_term_center_fix(&g, t, g.identity()), Err(EgzError::Precondition(_))));
    let g5 = make_heisenberg(5).unwrap();
    assert_eq!(four_term_center_fix(&g5, [ElementId(25); 4], ElementId(0)), Err(EgzError::NotH27));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn certificates_are_sound(seed in any::<u64>(), len in 4usize..12) {
        let g = make_heisenberg(3).unwrap();
        let mut rng = instance_rng(seed, 0);
        let t = random_central(&g, &mut rng, len);
        if let Some(cert) = certify_egz(&g, &t) {
            check_certificate(&g, &cert);
        }
    }
}
