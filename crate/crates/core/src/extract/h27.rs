//! Length-27 product-one subsequences of length-33 sequences over `H_27`.
//!
//! Layers, first success wins:
//!
//! 1. cut nine short 3-sequences and pick one reachable central value
//!    per block so the values cancel;
//! 2. rebuild one or two blocks from the six leftover terms, or use four
//!    terms whose orderings reach every central value;
//! 3. find an EGZ subsequence (a twin pair of blocks, a principal part
//!    inside the blocks, or a principal part completed by an abelian
//!    zero-sum selection) and reorder;
//! 4. repeat 1 to 3 on seeded shuffles of the input;
//! 5. sweep every six-term removal with the right image in `G/Z(G)` and
//!    order what is left.

use std::fmt;

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use super::blocks::{extract_short3_blocks_in, make_block, Block, BlockPartition};
use super::order::order_to_one;
use super::{sum_selection, ExtractError, FailureDump};
use crate::egz::{combine_twin_short3, egz_reorder_positions, four_term_center_fix, is_principal_part, EgzCertificate};
use crate::egz::{find_principal_part, Short3Class};
use crate::group::{heisenberg_coords, heisenberg_id, ElementId, GroupTable};
use crate::rng::instance_rng;
use crate::sequence::{Sequence, Witness};

pub const INPUT_LEN: usize = 33;
pub const OUTPUT_LEN: usize = 27;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtractPolicy {
    /// Shuffled restarts in layer 4.
    pub restart_limit: u32,
    pub seed: u64,
    /// Rebuild pairs of blocks in layer 2, not just single blocks.
    pub rebuild_pairs: bool,
}

impl Default for ExtractPolicy {
    fn default() -> Self {
        ExtractPolicy { restart_limit: 64, seed: 0, rebuild_pairs: true }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Layer {
    BlockSums,
    Rebuild,
    Egz,
    Restart,
    Sweep,
}

impl Layer {
    pub const ALL: [Layer; 5] = [Layer::BlockSums, Layer::Rebuild, Layer::Egz, Layer::Restart, Layer::Sweep];

    pub fn label(self) -> &'static str {
        match self {
            Layer::BlockSums => "L1",
            Layer::Rebuild => "L2",
            Layer::Egz => "L3",
            Layer::Restart => "L4",
            Layer::Sweep => "L5",
        }
    }
}

impl fmt::Display for Layer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// A verified length-27 witness and how it was found.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Extraction {
    pub witness: Witness,
    /// Input positions in witness order.
    pub positions: Vec<usize>,
    pub layer: Layer,
    /// Which move inside the layer succeeded.
    pub method: String,
    /// Set when the input needed the search layers (4 and 5) rather than
    /// a construction from the case analysis.
    pub heuristic_region: bool,
    pub restarts: u32,
}

pub(crate) struct Found {
    pub(crate) positions: Vec<usize>,
    pub(crate) layer: Layer,
    pub(crate) method: &'static str,
}

fn found(positions: Vec<usize>, layer: Layer, method: &'static str) -> Option<Found> {
    Some(Found { positions, layer, method })
}

/// Image of a term in `G/Z(G) ≅ C_3²`.
fn ab(t: ElementId) -> (usize, usize) {
    let (i, j, _) = heisenberg_coords(3, t);
    (i, j)
}

/// One value from each set, summing to `target` mod 3.
fn choose_sums(sets: &[Vec<u8>], target: u8) -> Option<Vec<u8>> {
    // reach[i][s]: value chosen for set i-1 on some path to sum s.
    let mut reach = vec![[None::<u8>; 3]; sets.len() + 1];
    reach[0][0] = Some(0);
    for (i, set) in sets.iter().enumerate() {
        for s in 0..3u8 {
            if reach[i][s as usize].is_none() {
                continue;
            }
            for &z in set {
                let t = ((s + z) % 3) as usize;
                reach[i + 1][t].get_or_insert(z);
            }
        }
    }
    reach[sets.len()][target as usize]?;
    let mut picks = vec![0u8; sets.len()];
    let mut s = target;
    for i in (0..sets.len()).rev() {
        // Any value in set i whose predecessor sum is reachable.
        let z = *sets[i].iter().find(|&&z| reach[i][((s + 3 - z) % 3) as usize].is_some())?;
        picks[i] = z;
        s = (s + 3 - z) % 3;
    }
    Some(picks)
}

/// Sums reachable by picking one value per block.
fn reachable(blocks: &[&Block]) -> [bool; 3] {
    let mut r = [true, false, false];
    for b in blocks {
        let mut next = [false; 3];
        for s in 0..3 {
            if r[s] {
                for z in b.values() {
                    next[(s + z as usize) % 3] = true;
                }
            }
        }
        r = next;
    }
    r
}

/// Concatenate block orders that realise a cancelling choice of values.
fn emit(blocks: &[&Block]) -> Option<Vec<usize>> {
    let sets: Vec<Vec<u8>> = blocks.iter().map(|b| b.values()).collect();
    let picks = choose_sums(&sets, 0)?;
    Some(blocks.iter().zip(picks).flat_map(|(b, z)| b.order_for(z).expect("picked value is reachable")).collect())
}

fn layer1(part: &BlockPartition) -> Option<Found> {
    let blocks: Vec<&Block> = part.blocks.iter().collect();
    found(emit(&blocks)?, Layer::BlockSums, "block-sums")
}

fn triples(pool: &[usize]) -> impl Iterator<Item = [usize; 3]> + '_ {
    let n = pool.len();
    (0..n).flat_map(move |a| (a + 1..n).flat_map(move |b| (b + 1..n).map(move |c| [pool[a], pool[b], pool[c]])))
}

pub(crate) fn layer2(
    g: &GroupTable,
    terms: &[ElementId],
    part: &BlockPartition,
    policy: &ExtractPolicy,
) -> Option<Found> {
    let bs = &part.blocks;
    let n = bs.len();
    // Single rebuilds.
    for i in 0..n {
        let others: Vec<&Block> = (0..n).filter(|&j| j != i).map(|j| &bs[j]).collect();
        let r = reachable(&others);
        let pool: Vec<usize> = bs[i].positions.iter().chain(&part.residual).copied().collect();
        for t in triples(&pool) {
            let Some(nb) = make_block(g, terms, t) else { continue };
            if nb.values().iter().any(|&z| r[(3 - z as usize) % 3]) {
                let mut all = others.clone();
                all.insert(i, &nb);
                return found(emit(&all)?, Layer::Rebuild, "single-rebuild");
            }
        }
    }
    if let Some(f) = flexible_quad(g, terms) {
        return Some(f);
    }
    if !policy.rebuild_pairs {
        return None;
    }
    for i in 0..n {
        for j in i + 1..n {
            let others: Vec<&Block> = (0..n).filter(|&k| k != i && k != j).map(|k| &bs[k]).collect();
            let r = reachable(&others);
            let pool: Vec<usize> =
                bs[i].positions.iter().chain(&bs[j].positions).chain(&part.residual).copied().collect();
            let cands: Vec<Block> = triples(&pool).filter_map(|t| make_block(g, terms, t)).collect();
            for (x, a) in cands.iter().enumerate() {
                for b in &cands[x + 1..] {
                    if a.positions.iter().any(|p| b.positions.contains(p)) {
                        continue;
                    }
                    let hit = a.values().iter().any(|&za| b.values().iter().any(|&zb| r[(6 - (za + zb) as usize) % 3]));
                    if hit {
                        let mut all = others.clone();
                        all.push(a);
                        all.push(b);
                        return found(emit(&all)?, Layer::Rebuild, "pair-rebuild");
                    }
                }
            }
        }
    }
    None
}

/// Four non-central terms `g1·g2`, `g3·g4` with central products and `g1`,
/// `g3` in distinct z-classes reach every central value; complete them
/// with 23 terms of zero image in `G/Z(G)`.
pub(crate) fn flexible_quad(g: &GroupTable, terms: &[ElementId]) -> Option<Found> {
    let n = terms.len();
    let nc: Vec<usize> = (0..n).filter(|&i| !g.is_central(terms[i])).collect();
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for (x, &a) in nc.iter().enumerate() {
        for &b in &nc[x + 1..] {
            if g.is_central(g.mul(terms[a], terms[b])) {
                pairs.push((a, b));
            }
        }
    }
    for (x, &(a, b)) in pairs.iter().enumerate() {
        for &(c, d) in &pairs[x + 1..] {
            if [a, b].iter().any(|p| [c, d].contains(p)) || g.z_class_of(terms[a]) == g.z_class_of(terms[c]) {
                continue;
            }
            let quad = [a, b, c, d];
            let rest: Vec<usize> = (0..n).filter(|i| !quad.contains(i)).collect();
            let vals: Vec<(usize, usize)> = rest.iter().map(|&i| ab(terms[i])).collect();
            let Some(sel) = sum_selection(&vals, 3, OUTPUT_LEN - 4, (0, 0)) else {
                // Selection only depends on which four are removed; another
                // quad in the same classes can still succeed.
                continue;
            };
            let mut positions: Vec<usize> = sel.iter().map(|&k| rest[k]).collect();
            let u = g.product(positions.iter().map(|&i| terms[i]));
            let sigma = four_term_center_fix(g, quad.map(|i| terms[i]), u).ok()?;
            positions.extend(sigma.map(|k| quad[k]));
            return found(positions, Layer::Rebuild, "four-term-fix");
        }
    }
    None
}

/// Input positions ordered by an EGZ certificate over `ambient` (given as
/// positions).
fn reorder(g: &GroupTable, terms: &[ElementId], ambient: &[usize], principal: Vec<usize>) -> Option<Vec<usize>> {
    let elems: Vec<ElementId> = ambient.iter().map(|&i| terms[i]).collect();
    let cert = EgzCertificate::new(g, elems, principal).ok()?;
    Some(egz_reorder_positions(g, &cert).into_iter().map(|k| ambient[k]).collect())
}

pub(crate) fn layer3(g: &GroupTable, terms: &[ElementId], part: &BlockPartition) -> Option<Found> {
    let bs = &part.blocks;
    let ambient: Vec<usize> = bs.iter().flat_map(|b| b.positions).collect();
    for i in 0..bs.len() {
        for j in i + 1..bs.len() {
            if bs[i].class == Short3Class::Central || bs[j].class == Short3Class::Central {
                continue;
            }
            let (ui, uj) = (bs[i].positions.map(|k| terms[k]), bs[j].positions.map(|k| terms[k]));
            let Some(cert) = combine_twin_short3(g, ui, uj) else { continue };
            let six: Vec<usize> = bs[i].positions.iter().chain(&bs[j].positions).copied().collect();
            let principal: Vec<usize> = cert
                .principal
                .iter()
                .map(|&k| ambient.iter().position(|&a| a == six[k]).expect("block position"))
                .collect();
            if let Some(o) = reorder(g, terms, &ambient, principal) {
                return found(o, Layer::Egz, "twin-short3");
            }
        }
    }
    let elems: Vec<ElementId> = ambient.iter().map(|&i| terms[i]).collect();
    if let Some(pr) = find_principal_part(g, &elems) {
        if let Some(o) = reorder(g, terms, &ambient, pr) {
            return found(o, Layer::Egz, "principal-part");
        }
    }
    principal_completion(g, terms)
}

/// A principal part anywhere in the input plus 24 further terms whose
/// images in `G/Z(G)` cancel it.
pub(crate) fn principal_completion(g: &GroupTable, terms: &[ElementId]) -> Option<Found> {
    let n = terms.len();
    let mut firsts: Vec<usize> = Vec::new();
    for i in 0..n {
        if !g.is_central(terms[i]) && firsts.iter().all(|&f| terms[f] != terms[i]) {
            firsts.push(i);
        }
    }
    let next = |after: usize, val: ElementId| (after + 1..n).find(|&k| terms[k] == val);
    for &c in &firsts {
        for (x, &a) in firsts.iter().enumerate() {
            for &b0 in &firsts[x..] {
                // Second occurrence when g1 = g2.
                let b = if b0 == a { next(a, terms[a]) } else { Some(b0) };
                let Some(b) = b else { continue };
                if a == c || b == c {
                    continue;
                }
                let part = [a, b, c];
                if !is_principal_part(g, &part.map(|k| terms[k])) {
                    continue;
                }
                let rest: Vec<usize> = (0..n).filter(|k| !part.contains(k)).collect();
                let vals: Vec<(usize, usize)> = rest.iter().map(|&k| ab(terms[k])).collect();
                let s = part.iter().fold((0, 0), |acc, &k| {
                    let v = ab(terms[k]);
                    (acc.0 + v.0, acc.1 + v.1)
                });
                let target = ((9 - s.0 % 3) % 3, (9 - s.1 % 3) % 3);
                let Some(sel) = sum_selection(&vals, 3, OUTPUT_LEN - 3, target) else { continue };
                let ambient: Vec<usize> = part.iter().copied().chain(sel.iter().map(|&k| rest[k])).collect();
                if let Some(o) = reorder(g, terms, &ambient, vec![0, 1, 2]) {
                    return found(o, Layer::Egz, "principal-completion");
                }
            }
        }
    }
    None
}

/// Every six-term removal (as a multiset of values) with the input's
/// image in `G/Z(G)`, ordering the rest.
pub(crate) fn sweep(g: &GroupTable, terms: &[ElementId]) -> Option<Found> {
    let mut distinct: Vec<ElementId> = terms.to_vec();
    distinct.sort_unstable();
    distinct.dedup();
    let count = |v: ElementId| terms.iter().filter(|&&t| t == v).count();
    let caps: Vec<usize> = distinct.iter().map(|&v| count(v)).collect();
    let total = terms.iter().fold((0, 0), |s, &t| {
        let v = ab(t);
        ((s.0 + v.0) % 3, (s.1 + v.1) % 3)
    });
    let mut take = vec![0usize; distinct.len()];
    let mut out = None;
    sweep_rec(g, terms, &distinct, &caps, &mut take, 0, 6, (0, 0), total, &mut out);
    out
}

#[allow(clippy::too_many_arguments)]
fn sweep_rec(
    g: &GroupTable,
    terms: &[ElementId],
    distinct: &[ElementId],
    caps: &[usize],
    take: &mut Vec<usize>,
    i: usize,
    left: usize,
    sum: (usize, usize),
    total: (usize, usize),
    out: &mut Option<Found>,
) {
    if out.is_some() {
        return;
    }
    if left == 0 {
        if sum != total {
            return;
        }
        let mut skip = take.clone();
        let kept: Vec<usize> = (0..terms.len())
            .filter(|&k| {
                let d = distinct.binary_search(&terms[k]).expect("value present");
                if skip[d] > 0 {
                    skip[d] -= 1;
                    false
                } else {
                    true
                }
            })
            .collect();
        let elems: Vec<ElementId> = kept.iter().map(|&k| terms[k]).collect();
        if let Some(o) = order_to_one(g, &elems) {
            *out = found(o.into_iter().map(|k| kept[k]).collect(), Layer::Sweep, "removal-sweep");
        }
        return;
    }
    if i == distinct.len() {
        return;
    }
    let v = ab(distinct[i]);
    for c in (0..=caps[i].min(left)).rev() {
        take[i] = c;
        let s = ((sum.0 + c * v.0) % 3, (sum.1 + c * v.1) % 3);
        sweep_rec(g, terms, distinct, caps, take, i + 1, left - c, s, total, out);
    }
    take[i] = 0;
}

fn attempt(g: &GroupTable, terms: &[ElementId], order: &[usize], policy: &ExtractPolicy) -> Option<Found> {
    let part = extract_short3_blocks_in(g, terms, order);
    layer1(&part).or_else(|| layer2(g, terms, &part, policy)).or_else(|| layer3(g, terms, &part))
}

/// Whether `g` is the Heisenberg group of order 27 in the standard
/// labelling.
pub(crate) fn check_h27(g: &GroupTable) -> Result<(), ExtractError> {
    if g.heisenberg_prime() == Some(3) && g.order() == 27 && heisenberg_id(3, 0, 0, 1) == ElementId(1) {
        Ok(())
    } else {
        Err(ExtractError::NotH27)
    }
}

/// A verified product-one subsequence of length 27 of a length-33
/// sequence over `H_27`.
pub fn extract_product_one_27(
    g: &GroupTable,
    terms: &[ElementId],
    policy: &ExtractPolicy,
) -> Result<Extraction, ExtractError> {
    check_h27(g)?;
    if terms.len() != INPUT_LEN {
        return Err(ExtractError::WrongLength { expected: INPUT_LEN, got: terms.len() });
    }
    let identity: Vec<usize> = (0..INPUT_LEN).collect();
    let mut restarts = 0;
    let mut hit = attempt(g, terms, &identity, policy);
    while hit.is_none() && restarts < policy.restart_limit {
        restarts += 1;
        let mut order = identity.clone();
        order.shuffle(&mut instance_rng(policy.seed, restarts as u64));
        hit = attempt(g, terms, &order, policy).map(|f| Found { layer: Layer::Restart, ..f });
    }
    let hit = hit.or_else(|| sweep(g, terms)).ok_or_else(|| {
        ExtractError::ExtractionFailed(Box::new(FailureDump {
            terms: terms.iter().map(|&t| g.name(t).to_string()).collect(),
            seed: policy.seed,
        }))
    })?;
    let witness = Witness::from_positions(terms, &hit.positions, g.identity());
    let seq = Sequence::from_terms(g, terms.iter().copied());
    witness.verify(&seq).map_err(|e| ExtractError::Internal(format!("witness rejected: {e}")))?;
    if witness.len() != OUTPUT_LEN {
        return Err(ExtractError::Internal(format!("witness has {} terms", witness.len())));
    }
    let heuristic_region = matches!(hit.layer, Layer::Restart | Layer::Sweep);
    Ok(Extraction {
        witness,
        positions: hit.positions,
        layer: hit.layer,
        method: hit.method.to_string(),
        heuristic_region,
        restarts,
    })
}
