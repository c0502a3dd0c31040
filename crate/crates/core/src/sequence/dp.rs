//! Dynamic programming over sub-multisets.
//!
//! States are multiplicity vectors `0 <= a_i <= m_i` over the distinct
//! terms, ranked in mixed radix (term 0 least significant). Each state
//! holds the set of products over all orderings of that sub-multiset:
//! `R[∅] = {1}`, `R[A] = ∪_{g ∈ A} R[A \ g]·g`. Every ordering ends in
//! some last term, so the recurrence is exact.

use crate::bitset::{iter_bits, words_for};
use crate::group::GroupTable;

use super::SequenceError;

pub(crate) struct ReachTable {
    words: usize,
    elems: Vec<usize>,
    mults: Vec<u32>,
    strides: Vec<usize>,
    lens: Vec<u16>,
    sets: Vec<u64>,
}

/// `Π (m_i + 1)`, saturating.
pub(crate) fn state_count(mults: &[u32]) -> u128 {
    mults.iter().fold(1u128, |acc, &m| acc.saturating_mul(m as u128 + 1))
}

impl ReachTable {
    pub(crate) fn build(g: &GroupTable, elems: &[usize], mults: &[u32], budget: u64) -> Result<Self, SequenceError> {
        let states = state_count(mults);
        if states > budget as u128 {
            return Err(SequenceError::StateBudgetExceeded { states, budget });
        }
        let states = states as usize;
        let words = words_for(g.order());
        let mut strides = Vec::with_capacity(elems.len());
        let mut s = 1usize;
        for &m in mults {
            strides.push(s);
            s *= m as usize + 1;
        }
        let mut sets = vec![0u64; states * words];
        let mut lens = vec![0u16; states];
        let e = g.identity().index();
        sets[e >> 6] |= 1 << (e & 63);

        let mut digits = vec![0u32; elems.len()];
        let mut len = 0u16;
        for (state, slot) in lens.iter_mut().enumerate().skip(1) {
            // Odometer increment.
            for (i, d) in digits.iter_mut().enumerate() {
                if *d < mults[i] {
                    *d += 1;
                    len += 1;
                    break;
                }
                len -= *d as u16;
                *d = 0;
            }
            *slot = len;
            let (done, rest) = sets.split_at_mut(state * words);
            let target = &mut rest[..words];
            for (i, &d) in digits.iter().enumerate() {
                if d == 0 {
                    continue;
                }
                let pred = state - strides[i];
                let gi = elems[i];
                for h in iter_bits(&done[pred * words..(pred + 1) * words]) {
                    let c = g.mul_idx(h, gi);
                    target[c >> 6] |= 1 << (c & 63);
                }
            }
        }
        Ok(ReachTable { words, elems: elems.to_vec(), mults: mults.to_vec(), strides, lens, sets })
    }

    pub(crate) fn states(&self) -> usize {
        self.lens.len()
    }

    pub(crate) fn full_state(&self) -> usize {
        self.states() - 1
    }

    pub(crate) fn len_of(&self, state: usize) -> usize {
        self.lens[state] as usize
    }

    pub(crate) fn set(&self, state: usize) -> &[u64] {
        &self.sets[state * self.words..(state + 1) * self.words]
    }

    #[inline]
    pub(crate) fn contains(&self, state: usize, elem: usize) -> bool {
        self.set(state)[elem >> 6] & (1 << (elem & 63)) != 0
    }

    /// Union of the reach sets of all states of each length `0..=ℓ`.
    pub(crate) fn unions_by_length(&self) -> Vec<Vec<u64>> {
        let total: usize = self.mults.iter().map(|&m| m as usize).sum();
        let mut out = vec![vec![0u64; self.words]; total + 1];
        for state in 0..self.states() {
            let dst = &mut out[self.len_of(state)];
            for (d, s) in dst.iter_mut().zip(self.set(state)) {
                *d |= s;
            }
        }
        out
    }

    /// Multiplicity of distinct term `i` in `state`.
    pub(crate) fn digit(&self, state: usize, i: usize) -> u32 {
        ((state / self.strides[i]) % (self.mults[i] as usize + 1)) as u32
    }

    /// An ordering of the terms of `state` whose product is `target`,
    /// returned as distinct-term indices. Requires `target ∈ R[state]`.
    pub(crate) fn reconstruct(&self, g: &GroupTable, mut state: usize, target: usize) -> Vec<usize> {
        debug_assert!(self.contains(state, target));
        let mut t = target;
        let mut rev = Vec::with_capacity(self.len_of(state));
        while state != 0 {
            let i = (0..self.elems.len())
                .find(|&i| {
                    self.digit(state, i) > 0 && {
                        let h = g.mul_idx(t, g.inv(crate::group::ElementId::from_index(self.elems[i])).index());
                        self.contains(state - self.strides[i], h)
                    }
                })
                .expect("reach table is consistent");
            let gi = crate::group::ElementId::from_index(self.elems[i]);
            t = g.mul_idx(t, g.inv(gi).index());
            state -= self.strides[i];
            rev.push(i);
        }
        rev.reverse();
        rev
    }
}
