//! Fixed-width membership masks over element ids.

use std::fmt;

use crate::group::ElementId;

/// Number of 64-bit words needed to hold `n` membership bits.
#[inline]
pub(crate) fn words_for(n: usize) -> usize {
    n.div_ceil(64)
}

/// A set of element ids of one group, stored as a bit mask.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ElementSet {
    universe: usize,
    words: Vec<u64>,
}

impl ElementSet {
    pub fn empty(universe: usize) -> Self {
        ElementSet { universe, words: vec![0; words_for(universe)] }
    }

    pub fn full(universe: usize) -> Self {
        let mut s = Self::empty(universe);
        for i in 0..universe {
            s.insert_index(i);
        }
        s
    }

    pub fn from_ids<I: IntoIterator<Item = ElementId>>(universe: usize, ids: I) -> Self {
        let mut s = Self::empty(universe);
        for g in ids {
            s.insert(g);
        }
        s
    }

    pub(crate) fn from_words(universe: usize, words: &[u64]) -> Self {
        debug_assert_eq!(words.len(), words_for(universe));
        ElementSet { universe, words: words.to_vec() }
    }

    /// Size of the ambient group.
    pub fn universe(&self) -> usize {
        self.universe
    }

    #[inline]
    pub fn insert(&mut self, g: ElementId) {
        self.insert_index(g.index());
    }

    #[inline]
    pub(crate) fn insert_index(&mut self, i: usize) {
        self.words[i >> 6] |= 1 << (i & 63);
    }

    pub fn remove(&mut self, g: ElementId) {
        let i = g.index();
        self.words[i >> 6] &= !(1 << (i & 63));
    }

    #[inline]
    pub fn contains(&self, g: ElementId) -> bool {
        let i = g.index();
        i < self.universe && self.words[i >> 6] & (1 << (i & 63)) != 0
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn union_with(&mut self, other: &ElementSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub fn is_subset(&self, other: &ElementSet) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    /// Ids in increasing order.
    pub fn iter(&self) -> impl Iterator<Item = ElementId> + '_ {
        iter_bits(&self.words).map(ElementId::from_index)
    }

    pub fn to_vec(&self) -> Vec<ElementId> {
        self.iter().collect()
    }
}

impl fmt::Debug for ElementSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter().map(|g| g.0)).finish()
    }
}

/// Iterate set bit positions of a word slice in increasing order.
#[inline]
pub(crate) fn iter_bits(words: &[u64]) -> impl Iterator<Item = usize> + '_ {
    words.iter().enumerate().flat_map(|(wi, &w)| {
        let mut rest = w;
        std::iter::from_fn(move || {
            if rest == 0 {
                None
            } else {
                let b = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(wi * 64 + b)
            }
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn insert_contains_iter() {
        let mut s = ElementSet::empty(130);
        for i in [0usize, 63, 64, 129] {
            s.insert(ElementId::from_index(i));
        }
        assert_eq!(s.len(), 4);
        assert!(s.contains(ElementId::from_index(64)));
        assert!(!s.contains(ElementId::from_index(65)));
        let ids: Vec<usize> = s.iter().map(|g| g.index()).collect();
        assert_eq!(ids, vec![0, 63, 64, 129]);
        s.remove(ElementId::from_index(63));
        assert_eq!(s.len(), 3);
    }

    #[test]
    fn subset_and_union() {
        let a = ElementSet::from_ids(10, [1, 2].map(ElementId::from_index));
        let mut b = ElementSet::from_ids(10, [2, 7].map(ElementId::from_index));
        assert!(!a.is_subset(&b));
        b.union_with(&a);
        assert!(a.is_subset(&b));
        assert_eq!(ElementSet::full(10).len(), 10);
    }
}
