//! Length-`p³` subsequences from block sums in abelian sections.
//!
//! `G/Z(G)`, `Z(G)` and each maximal subgroup of `H_{p³}` are elementary
//! abelian, and their Gao constants say how many terms force a zero-sum
//! block of the right length. Repeatedly cutting such blocks out of a
//! long sequence assembles the subsequences below.

use crate::group::{heisenberg_coords, ElementId, GroupTable};
use crate::sequence::{ordered_product, Witness};

/// Positions of exactly `k` of `values` summing to zero in `C_p^2`,
/// values given as `(a, b)` coordinates.
pub fn zero_sum_selection(values: &[(usize, usize)], p: usize, k: usize) -> Option<Vec<usize>> {
    sum_selection(values, p, k, (0, 0))
}

/// Positions of exactly `k` of `values` summing to `target` in `C_p^2`.
/// Exact DP over `(items, count, sum)`.
pub fn sum_selection(values: &[(usize, usize)], p: usize, k: usize, target: (usize, usize)) -> Option<Vec<usize>> {
    let n = values.len();
    if k > n {
        return None;
    }
    let sums = p * p;
    let idx = |c: usize, s: usize| c * sums + s;
    // reach[i][c][s]: some selection of c among the first i items sums to s.
    let mut reach = vec![vec![false; (k + 1) * sums]; n + 1];
    reach[0][idx(0, 0)] = true;
    for (i, &(a, b)) in values.iter().enumerate() {
        let v = (a % p) * p + b % p;
        for c in 0..=k {
            for s in 0..sums {
                if !reach[i][idx(c, s)] {
                    continue;
                }
                reach[i + 1][idx(c, s)] = true;
                if c < k {
                    let t = ((s / p + v / p) % p) * p + (s % p + v % p) % p;
                    reach[i + 1][idx(c + 1, t)] = true;
                }
            }
        }
    }
    let goal = (target.0 % p) * p + target.1 % p;
    if !reach[n][idx(k, goal)] {
        return None;
    }
    let mut picks = Vec::with_capacity(k);
    let (mut c, mut s) = (k, goal);
    for i in (0..n).rev() {
        if reach[i][idx(c, s)] {
            continue;
        }
        let (a, b) = values[i];
        let prev = ((s / p + p - a % p) % p) * p + (s % p + p - b % p) % p;
        debug_assert!(reach[i][idx(c - 1, prev)]);
        picks.push(i);
        c -= 1;
        s = prev;
    }
    picks.reverse();
    Some(picks)
}

/// Cut blocks of `block` zero-sum positions out of `pool` (positions into
/// some term list, with their coordinates) until `rounds` blocks are
/// found, always searching the first `window` remaining positions.
fn cut_blocks(
    pool: &mut Vec<usize>,
    coord: impl Fn(usize) -> (usize, usize),
    p: usize,
    block: usize,
    window: usize,
    rounds: usize,
) -> Option<Vec<Vec<usize>>> {
    let mut out = Vec::with_capacity(rounds);
    for _ in 0..rounds {
        let w = window.min(pool.len());
        let vals: Vec<(usize, usize)> = pool[..w].iter().map(|&i| coord(i)).collect();
        let sel = zero_sum_selection(&vals, p, block)?;
        let chosen: Vec<usize> = sel.iter().map(|&j| pool[j]).collect();
        for &j in sel.iter().rev() {
            pool.remove(j);
        }
        out.push(chosen);
    }
    Some(out)
}

fn prime(g: &GroupTable) -> Option<usize> {
    g.heisenberg_prime().map(|p| p as usize)
}

/// `p³` positions of `terms` whose product (in the given order) is
/// central. Needs `ℓ ≥ p³ + 3p - 3`; uses `p` blocks of `p²` terms with
/// zero image in `G/Z(G)`, each found among `p² + 2p - 2` terms.
pub fn central_product_subsequence(g: &GroupTable, terms: &[ElementId]) -> Option<Vec<usize>> {
    let p = prime(g)?;
    let mut pool: Vec<usize> = (0..terms.len()).collect();
    let coord = |i: usize| {
        let (a, b, _) = heisenberg_coords(p, terms[i]);
        (a, b)
    };
    let blocks = cut_blocks(&mut pool, coord, p, p * p, p * p + 2 * p - 2, p)?;
    let picks: Vec<usize> = blocks.concat();
    let prod = ordered_product(g, &picks.iter().map(|&i| terms[i]).collect::<Vec<_>>());
    g.is_central(prod).then_some(picks)
}

/// Product-one subsequence of length `p³` from at least `p³ + p - 1`
/// central terms: `p²` blocks of `p` central terms with product 1, each
/// found among `2p - 1`.
pub fn product_one_from_center(g: &GroupTable, terms: &[ElementId]) -> Option<Witness> {
    let p = prime(g)?;
    let mut pool: Vec<usize> = (0..terms.len()).filter(|&i| g.is_central(terms[i])).collect();
    let coord = |i: usize| (0, heisenberg_coords(p, terms[i]).2);
    let blocks = cut_blocks(&mut pool, coord, p, p, 2 * p - 1, p * p)?;
    let w = Witness::from_positions(terms, &blocks.concat(), g.identity());
    (ordered_product(g, &w.elements()) == g.identity()).then_some(w)
}

/// The `p + 1` maximal subgroups `K_j ∪ Z(G)`, as membership tests on
/// `G/Z(G)` coordinates: the line through `dir`.
pub fn maximal_subgroup_directions(p: usize) -> Vec<(usize, usize)> {
    let mut dirs: Vec<(usize, usize)> = (0..p).map(|i| (i, 1)).collect();
    dirs.push((1, 0));
    dirs
}

/// Whether `g` lies in the maximal subgroup through `dir`.
pub fn in_maximal_subgroup(p: usize, dir: (usize, usize), g: ElementId) -> bool {
    let (a, b, _) = heisenberg_coords(p, g);
    (a * dir.1 + p * p - b * dir.0).is_multiple_of(p)
}

/// Product-one subsequence of length `p³` from at least `p³ + 2p - 2`
/// terms in one maximal subgroup `M ≅ C_p × C_p`: `p` blocks of `p²`
/// terms with product 1, each found among `p² + 2p - 2`.
pub fn product_one_from_maximal(g: &GroupTable, terms: &[ElementId]) -> Option<Witness> {
    let p = prime(g)?;
    let need = p * p * p + 2 * p - 2;
    for dir in maximal_subgroup_directions(p) {
        let mut pool: Vec<usize> = (0..terms.len()).filter(|&i| in_maximal_subgroup(p, dir, terms[i])).collect();
        if pool.len() < need {
            continue;
        }
        // M = <h> × Z(G); coordinates (t, k) of h^t v^k.
        let h = crate::group::heisenberg_id(p, dir.0, dir.1, 0);
        let coord = |i: usize| {
            let (a, b, _) = heisenberg_coords(p, terms[i]);
            let along = if dir.1 == 1 { b } else { a };
            let z = g.mul(g.inv(g.pow(h, along as u64)), terms[i]);
            (along, heisenberg_coords(p, z).2)
        };
        let blocks = cut_blocks(&mut pool, coord, p, p * p, p * p + 2 * p - 2, p)?;
        let w = Witness::from_positions(terms, &blocks.concat(), g.identity());
        return (ordered_product(g, &w.elements()) == g.identity()).then_some(w);
    }
    None
}
