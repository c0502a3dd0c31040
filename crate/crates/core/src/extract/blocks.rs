//! Short 3-sequences cut from a sequence over `H_27`.

use serde::{Deserialize, Serialize};

use crate::egz::{classify_short3, Short3Class};
use crate::group::{heisenberg_coords, ElementId, GroupTable};
use crate::sequence::Sequence;

/// Terms scanned per block; any 9 terms of `G/Z(G) ≅ C_3²` contain three
/// with sum 0.
pub const BLOCK_WINDOW: usize = 9;

/// Three terms with central product.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Block {
    /// Positions in the input.
    pub positions: [usize; 3],
    pub class: Short3Class,
    /// Each reachable central value (as an exponent of `v`) with a
    /// position order realising it.
    pub orders: Vec<(u8, [usize; 3])>,
}

impl Block {
    /// Reachable central values, as exponents of `v`.
    pub fn values(&self) -> Vec<u8> {
        self.orders.iter().map(|&(z, _)| z).collect()
    }

    pub fn order_for(&self, z: u8) -> Option<[usize; 3]> {
        self.orders.iter().find(|&&(v, _)| v == z).map(|&(_, o)| o)
    }
}

/// Disjoint blocks plus the leftover positions.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockPartition {
    pub blocks: Vec<Block>,
    pub residual: Vec<usize>,
}

/// Exponent of a central element of `H_27` in `v`.
pub(crate) fn z_exp(z: ElementId) -> u8 {
    heisenberg_coords(3, z).2 as u8
}

/// The block on three positions, if their product can be central.
pub(crate) fn make_block(g: &GroupTable, terms: &[ElementId], pos: [usize; 3]) -> Option<Block> {
    let t = pos.map(|i| terms[i]);
    let class = classify_short3(g, t).ok()?;
    let mut orders: Vec<(u8, [usize; 3])> = Vec::with_capacity(2);
    for perm in [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]] {
        let o = perm.map(|k| pos[k]);
        let z = z_exp(g.product(o.map(|i| terms[i])));
        if orders.iter().all(|&(v, _)| v != z) {
            orders.push((z, o));
        }
    }
    orders.sort_unstable();
    if cfg!(debug_assertions) {
        let pi = Sequence::from_terms(g, t).pi_set(1 << 10).expect("three terms");
        debug_assert_eq!(pi.iter().map(z_exp).collect::<Vec<_>>(), orders.iter().map(|&(z, _)| z).collect::<Vec<_>>());
    }
    Some(Block { positions: pos, class, orders })
}

/// Best block among the first [`BLOCK_WINDOW`] positions of `pool`:
/// most reachable values, then lexicographically first.
fn best_block(g: &GroupTable, terms: &[ElementId], pool: &[usize]) -> Option<Block> {
    let w = pool.len().min(BLOCK_WINDOW);
    let mut best: Option<Block> = None;
    for a in 0..w {
        for b in a + 1..w {
            for c in b + 1..w {
                let Some(blk) = make_block(g, terms, [pool[a], pool[b], pool[c]]) else {
                    continue;
                };
                if best.as_ref().is_none_or(|x| blk.orders.len() > x.orders.len()) {
                    best = Some(blk);
                }
            }
        }
    }
    best
}

/// Greedily cut blocks from `terms`, scanning positions in `order`,
/// while at least [`BLOCK_WINDOW`] terms remain.
pub fn extract_short3_blocks_in(g: &GroupTable, terms: &[ElementId], order: &[usize]) -> BlockPartition {
    let mut pool = order.to_vec();
    let mut blocks = Vec::new();
    while pool.len() >= BLOCK_WINDOW {
        let blk = best_block(g, terms, &pool).expect("nine terms of C_3² contain a zero-sum triple");
        pool.retain(|i| !blk.positions.contains(i));
        blocks.push(blk);
    }
    BlockPartition { blocks, residual: pool }
}

/// [`extract_short3_blocks_in`] in input order. For 33 terms this gives
/// nine blocks and six residual terms.
pub fn extract_short3_blocks(g: &GroupTable, terms: &[ElementId]) -> BlockPartition {
    extract_short3_blocks_in(g, terms, &(0..terms.len()).collect::<Vec<_>>())
}
