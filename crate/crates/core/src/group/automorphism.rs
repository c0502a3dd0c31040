use super::structure::generated_subgroup;
use super::{ElementId, GroupError, GroupTable};

/// Automorphism enumeration is only attempted up to this order.
pub const AUTOMORPHISM_ORDER_LIMIT: usize = 128;

/// Candidate generator-image tuples examined before giving up.
const CANDIDATE_BUDGET: u128 = 50_000_000;

/// A group automorphism stored as its image table.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Automorphism {
    images: Vec<ElementId>,
}

impl Automorphism {
    #[inline]
    pub fn apply(&self, g: ElementId) -> ElementId {
        self.images[g.index()]
    }

    pub fn images(&self) -> &[ElementId] {
        &self.images
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, g)| g.index() == i)
    }
}

/// A small generating set: greedy by subgroup size, then redundant
/// generators are dropped.
fn generating_set(g: &GroupTable) -> Vec<ElementId> {
    let n = g.order();
    let mut gens: Vec<ElementId> = Vec::new();
    let mut span = generated_subgroup(g, &gens);
    while span.len() < n {
        let mut best: Option<(usize, ElementId)> = None;
        for a in g.elements().filter(|a| !span.contains(*a)) {
            let mut trial = gens.clone();
            trial.push(a);
            let size = generated_subgroup(g, &trial).len();
            if best.is_none_or(|(s, _)| size > s) {
                best = Some((size, a));
            }
        }
        let (_, a) = best.expect("span is a proper subgroup");
        gens.push(a);
        span = generated_subgroup(g, &gens);
    }
    let mut i = 0;
    while i < gens.len() {
        let mut without = gens.clone();
        without.remove(i);
        if generated_subgroup(g, &without).len() == n {
            gens = without;
        } else {
            i += 1;
        }
    }
    gens
}

/// All automorphisms of `g`, identity first, in lexicographic order of
/// generator images.
///
/// Each automorphism is determined by the images of a generating set.
/// Every tuple of same-order images is extended along the Cayley graph;
/// it is accepted when every edge `a -> a·s` is consistent and the
/// resulting map is a bijection.
pub fn automorphisms(g: &GroupTable) -> Result<Vec<Automorphism>, GroupError> {
    let n = g.order();
    if n > AUTOMORPHISM_ORDER_LIMIT {
        return Err(GroupError::TooLarge(n));
    }
    let gens = generating_set(g);
    let candidates: Vec<Vec<ElementId>> =
        gens.iter().map(|&s| g.elements().filter(|&t| g.element_order(t) == g.element_order(s)).collect()).collect();
    let total: u128 = candidates.iter().map(|c| c.len() as u128).product();
    if total > CANDIDATE_BUDGET {
        return Err(GroupError::AutomorphismBudget { candidates: total });
    }

    // Spanning tree of the Cayley graph: each element reached as parent·gen.
    let e = g.identity();
    let mut tree: Vec<(ElementId, usize, ElementId)> = Vec::with_capacity(n);
    let mut seen = vec![false; n];
    seen[e.index()] = true;
    let mut queue = std::collections::VecDeque::from([e]);
    while let Some(a) = queue.pop_front() {
        for (k, &s) in gens.iter().enumerate() {
            let b = g.mul(a, s);
            if !seen[b.index()] {
                seen[b.index()] = true;
                tree.push((a, k, b));
                queue.push_back(b);
            }
        }
    }

    let mut out = Vec::new();
    let mut choice = vec![0usize; gens.len()];
    let mut images = vec![ElementId(0); n];
    let mut hit = vec![false; n];
    'outer: loop {
        let img: Vec<ElementId> = choice.iter().zip(&candidates).map(|(&c, cand)| cand[c]).collect();
        images[e.index()] = e;
        for &(a, k, b) in &tree {
            images[b.index()] = g.mul(images[a.index()], img[k]);
        }
        let consistent = g
            .elements()
            .all(|a| gens.iter().zip(&img).all(|(&s, &t)| images[g.mul(a, s).index()] == g.mul(images[a.index()], t)));
        if consistent {
            hit.iter_mut().for_each(|h| *h = false);
            let bijective = images.iter().all(|b| !std::mem::replace(&mut hit[b.index()], true));
            if bijective {
                out.push(Automorphism { images: images.clone() });
            }
        }
        // Odometer over candidate images, last generator fastest.
        for pos in (0..choice.len()).rev() {
            choice[pos] += 1;
            if choice[pos] < candidates[pos].len() {
                continue 'outer;
            }
            choice[pos] = 0;
        }
        break;
    }
    // Identity first; generator images of the identity map may not be the
    // first candidates.
    if let Some(pos) = out.iter().position(Automorphism::is_identity) {
        let id = out.remove(pos);
        out.insert(0, id);
    }
    Ok(out)
}
