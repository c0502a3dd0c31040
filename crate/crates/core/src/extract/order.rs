//! Orderings of a whole multiset with product 1.

use crate::group::{ElementId, GroupTable};
use crate::rng::instance_rng;
use crate::sequence::{ordered_product, Sequence};
use rand::seq::SliceRandom;

/// DP fallback budget for [`order_to_one`].
const ORDER_DP_BUDGET: u64 = 1 << 20;

/// Base orderings tried by the insertion search.
const INSERTION_ROUNDS: u64 = 8;

/// Positions of all of `terms` in an order whose product is 1.
///
/// Tries the given order, then moves one term to every other position in
/// a few base orders (moving `b` rightwards past `t` scales a central
/// product by `[t, b]`), then falls back to the exact DP when its state
/// space is small. `None` means no ordering was found, which is only
/// conclusive when the terms pairwise commute or the DP ran.
pub fn order_to_one(g: &GroupTable, terms: &[ElementId]) -> Option<Vec<usize>> {
    let n = terms.len();
    let e = g.identity();
    let mut order: Vec<usize> = (0..n).collect();
    let product = |o: &[usize]| g.product(o.iter().map(|&i| terms[i]));
    if product(&order) == e {
        return Some(order);
    }
    let commutative = (0..n).all(|a| (a + 1..n).all(|b| g.commutes(terms[a], terms[b])));
    if commutative {
        return None;
    }
    let key = terms.iter().fold(0u64, |h, t| h.wrapping_mul(31).wrapping_add(t.index() as u64));
    for round in 0..INSERTION_ROUNDS {
        if round > 0 {
            order.shuffle(&mut instance_rng(key, round));
        }
        if let Some(o) = single_move(g, terms, &order) {
            return Some(o);
        }
    }
    let seq = Sequence::from_terms(g, terms.iter().copied());
    let w = seq.product_one_witness_of_length(n, ORDER_DP_BUDGET).ok()??;
    // Map witness occurrences back to input positions.
    let mut used = vec![false; n];
    let positions = w
        .elements()
        .into_iter()
        .map(|x| {
            let i = (0..n).find(|&i| !used[i] && terms[i] == x).expect("witness uses input terms");
            used[i] = true;
            i
        })
        .collect();
    Some(positions)
}

/// Some order obtained from `order` by moving one entry, with product 1.
fn single_move(g: &GroupTable, terms: &[ElementId], order: &[usize]) -> Option<Vec<usize>> {
    let n = order.len();
    let e = g.identity();
    for i in 0..n {
        let b = terms[order[i]];
        let rest: Vec<ElementId> = order.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &k)| terms[k]).collect();
        let mut suffix = vec![e; n];
        for q in (0..n - 1).rev() {
            suffix[q] = g.mul(rest[q], suffix[q + 1]);
        }
        let mut prefix = e;
        for q in 0..n {
            if g.mul(g.mul(prefix, b), suffix[q]) == e {
                let mut out: Vec<usize> =
                    order.iter().copied().enumerate().filter(|&(j, _)| j != i).map(|(_, k)| k).collect();
                out.insert(q, order[i]);
                debug_assert_eq!(ordered_product(g, &out.iter().map(|&k| terms[k]).collect::<Vec<_>>()), e);
                return Some(out);
            }
            if q < n - 1 {
                prefix = g.mul(prefix, rest[q]);
            }
        }
    }
    None
}
