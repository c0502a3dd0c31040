//! Sequences over a finite group and their product sets.
//!
//! A [`Sequence`] is an unordered multiset of group elements, stored as a
//! multiplicity vector indexed by element id. `π(S)` is the set of
//! products over all orderings of `S`; `Π(S)` is the union of `π(T)`
//! over all non-empty `T | S`. Both are computed exactly by dynamic
//! programming over sub-multisets, under an explicit state budget.

pub(crate) mod dp;
pub mod text;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bitset::ElementSet;
use crate::group::{ElementId, GroupError, GroupTable};
use dp::ReachTable;

/// Products reachable by some ordering.
pub type ReachSet = ElementSet;

/// Default cap on the number of DP states (sub-multisets).
pub const DEFAULT_STATE_BUDGET: u64 = 1 << 22;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SequenceError {
    #[error("sub-multiset DP needs {states} states, budget is {budget}")]
    StateBudgetExceeded { states: u128, budget: u64 },
    #[error("the sequence is empty")]
    EmptySequence,
    #[error("subsequence length {k} outside 1..={len}")]
    LengthOutOfRange { k: usize, len: usize },
    #[error("central product is order-dependent: [G,G] is not contained in Z(G)")]
    CentralityUndefined,
    #[error("not a subsequence")]
    NotASubsequence,
    #[error("witness rejected: {0}")]
    WitnessRejected(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// Ordered product `g_1 ⋯ g_ℓ`; the empty product is the identity.
pub fn ordered_product(g: &GroupTable, terms: &[ElementId]) -> ElementId {
    g.product(terms.iter().copied())
}

/// An unordered sequence over a group.
#[derive(Clone)]
pub struct Sequence<'g> {
    group: &'g GroupTable,
    mult: Vec<u32>,
    len: usize,
}

impl fmt::Debug for Sequence<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Sequence({self})")
    }
}

/// Sequences are equal when they live in the same table and have the
/// same multiplicities.
impl PartialEq for Sequence<'_> {
    fn eq(&self, other: &Self) -> bool {
        std::ptr::eq(self.group, other.group) && self.mult == other.mult
    }
}

impl Eq for Sequence<'_> {}

impl std::hash::Hash for Sequence<'_> {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.mult.hash(state)
    }
}

impl<'g> Sequence<'g> {
    pub fn new(group: &'g GroupTable) -> Self {
        Sequence { group, mult: vec![0; group.order()], len: 0 }
    }

    pub fn from_terms<I: IntoIterator<Item = ElementId>>(group: &'g GroupTable, terms: I) -> Self {
        let mut s = Self::new(group);
        for g in terms {
            s.push(g);
        }
        s
    }

    pub fn from_multiplicities(group: &'g GroupTable, mult: Vec<u32>) -> Self {
        assert_eq!(mult.len(), group.order(), "one multiplicity per element");
        let len = mult.iter().map(|&m| m as usize).sum();
        Sequence { group, mult, len }
    }

    pub fn group(&self) -> &'g GroupTable {
        self.group
    }

    pub fn push(&mut self, g: ElementId) {
        self.push_n(g, 1);
    }

    pub fn push_n(&mut self, g: ElementId, n: u32) {
        self.mult[g.index()] += n;
        self.len += n as usize;
    }

    /// `v_g(S)`.
    pub fn multiplicity(&self, g: ElementId) -> u32 {
        self.mult[g.index()]
    }

    pub fn multiplicities(&self) -> &[u32] {
        &self.mult
    }

    /// `ℓ(S)`.
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Distinct terms with their multiplicities, by increasing id.
    pub fn distinct(&self) -> impl Iterator<Item = (ElementId, u32)> + '_ {
        self.mult.iter().enumerate().filter(|(_, &m)| m > 0).map(|(i, &m)| (ElementId::from_index(i), m))
    }

    /// All terms with repetition, sorted by id. This is the canonical
    /// ordering `S*` used wherever an ordered representative is needed.
    pub fn terms(&self) -> Vec<ElementId> {
        self.distinct().flat_map(|(g, m)| std::iter::repeat_n(g, m as usize)).collect()
    }

    /// `T | S`.
    pub fn divides(&self, other: &Sequence<'_>) -> bool {
        self.mult.iter().zip(&other.mult).all(|(a, b)| a <= b)
    }

    /// `S·T`.
    pub fn concat(&self, other: &Sequence<'_>) -> Sequence<'g> {
        let mult = self.mult.iter().zip(&other.mult).map(|(a, b)| a + b).collect();
        Sequence::from_multiplicities(self.group, mult)
    }

    /// `T^{[-1]}·S`: remove the terms of `t` from `self`.
    pub fn without(&self, t: &Sequence<'_>) -> Result<Sequence<'g>, SequenceError> {
        if !t.divides(self) {
            return Err(SequenceError::NotASubsequence);
        }
        let mult = self.mult.iter().zip(&t.mult).map(|(a, b)| a - b).collect();
        Ok(Sequence::from_multiplicities(self.group, mult))
    }

    fn reach_table(&self, budget: u64) -> Result<(ReachTable, Vec<ElementId>), SequenceError> {
        let (elems, mults): (Vec<ElementId>, Vec<u32>) = self.distinct().unzip();
        let idx: Vec<usize> = elems.iter().map(|g| g.index()).collect();
        Ok((ReachTable::build(self.group, &idx, &mults, budget)?, elems))
    }

    /// `π(S)`: products over all orderings of every term.
    pub fn pi_set(&self, budget: u64) -> Result<ReachSet, SequenceError> {
        if self.is_empty() {
            return Err(SequenceError::EmptySequence);
        }
        let (table, _) = self.reach_table(budget)?;
        Ok(ElementSet::from_words(self.group.order(), table.set(table.full_state())))
    }

    /// `Π(S)`: products of all orderings of all non-empty subsequences.
    pub fn subsequence_products(&self, budget: u64) -> Result<ReachSet, SequenceError> {
        let (table, _) = self.reach_table(budget)?;
        let mut out = ElementSet::empty(self.group.order());
        for state in 1..table.states() {
            out.union_with(&ElementSet::from_words(self.group.order(), table.set(state)));
        }
        Ok(out)
    }

    /// Whether `1 ∈ Π(S)`.
    pub fn has_product_one_subsequence(&self, budget: u64) -> Result<bool, SequenceError> {
        Ok(self.subsequence_products(budget)?.contains(self.group.identity()))
    }

    /// A shortest product-one subsequence, as a verified ordered witness.
    pub fn product_one_witness(&self, budget: u64) -> Result<Option<Witness>, SequenceError> {
        self.witness_where(budget, |_| true)
    }

    /// A product-one subsequence of length exactly `k`.
    pub fn product_one_witness_of_length(&self, k: usize, budget: u64) -> Result<Option<Witness>, SequenceError> {
        if k == 0 || k > self.len {
            return Err(SequenceError::LengthOutOfRange { k, len: self.len });
        }
        self.witness_where(budget, |len| len == k)
    }

    fn witness_where(&self, budget: u64, accept_len: impl Fn(usize) -> bool) -> Result<Option<Witness>, SequenceError> {
        let (table, elems) = self.reach_table(budget)?;
        let e = self.group.identity().index();
        let best = (1..table.states())
            .filter(|&s| accept_len(table.len_of(s)) && table.contains(s, e))
            .min_by_key(|&s| (table.len_of(s), s));
        let Some(state) = best else {
            return Ok(None);
        };
        let order: Vec<ElementId> = table.reconstruct(self.group, state, e).into_iter().map(|i| elems[i]).collect();
        let w = Witness::from_elements(&order, self.group.identity());
        w.verify(self)?;
        Ok(Some(w))
    }

    /// For groups with `[G,G] ⊆ Z(G)`: the product of the canonical
    /// ordering when it is central, else `None`. Every ordering of `S` then
    /// lies in the same `[G,G]`-coset, so centrality does not depend on the
    /// ordering.
    pub fn central_product_value(&self) -> Result<Option<ElementId>, SequenceError> {
        let g = self.group;
        if !g.commutator_subgroup().is_subset(g.center()) {
            return Err(SequenceError::CentralityUndefined);
        }
        let w = ordered_product(g, &self.terms());
        Ok(g.is_central(w).then_some(w))
    }
}

/// One occurrence of an element inside a sequence: the `occurrence`-th
/// copy (0-based) of `element`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Term {
    pub element: ElementId,
    pub occurrence: u32,
}

/// An ordered list of term occurrences whose left-to-right product is
/// `target`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub terms: Vec<Term>,
    pub target: ElementId,
}

impl Witness {
    /// Number occurrences of each element in order of appearance.
    pub fn from_elements(order: &[ElementId], target: ElementId) -> Self {
        let mut seen: std::collections::HashMap<ElementId, u32> = std::collections::HashMap::new();
        let terms = order
            .iter()
            .map(|&element| {
                let c = seen.entry(element).or_insert(0);
                *c += 1;
                Term { element, occurrence: *c - 1 }
            })
            .collect();
        Witness { terms, target }
    }

    /// Witness over positions of a source term list. The occurrence of a
    /// position is its rank among the positions holding the same element.
    pub fn from_positions(source: &[ElementId], positions: &[usize], target: ElementId) -> Self {
        let terms = positions
            .iter()
            .map(|&p| {
                let element = source[p];
                let occurrence = source[..p].iter().filter(|&&x| x == element).count() as u32;
                Term { element, occurrence }
            })
            .collect();
        Witness { terms, target }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn elements(&self) -> Vec<ElementId> {
        self.terms.iter().map(|t| t.element).collect()
    }

    /// Re-multiply and check occurrences against `seq`.
    pub fn verify(&self, seq: &Sequence<'_>) -> Result<(), SequenceError> {
        let g = seq.group();
        let mut used = std::collections::HashSet::new();
        for t in &self.terms {
            if t.occurrence >= seq.multiplicity(t.element) {
                return Err(SequenceError::WitnessRejected(format!(
                    "occurrence {} of {} exceeds multiplicity",
                    t.occurrence,
                    g.name(t.element)
                )));
            }
            if !used.insert(*t) {
                return Err(SequenceError::WitnessRejected("term used twice".into()));
            }
        }
        let product = ordered_product(g, &self.elements());
        if product != self.target {
            return Err(SequenceError::WitnessRejected(format!(
                "product {} differs from target {}",
                g.name(product),
                g.name(self.target)
            )));
        }
        Ok(())
    }

    /// `name#occurrence` tokens, e.g. `x^1y^0v^0#0 x^1y^0v^0#1`.
    pub fn display(&self, g: &GroupTable) -> String {
        self.terms.iter().map(|t| format!("{}#{}", g.name(t.element), t.occurrence)).collect::<Vec<_>>().join(" ")
    }
}

#[cfg(test)]
mod tests;
