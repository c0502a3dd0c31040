//! Length-27 selections over `C_3`.
//!
//! Values are exponents `0, 1, 2` of a fixed generator `u`.

use serde::{Deserialize, Serialize};

use super::ExtractError;

/// The nonzero-sum three-term residues left over after eight identical
/// triples are cut from a length-27 sequence, up to order.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ResidualForm {
    /// `1·1·u`
    OneOneU,
    /// `1·1·u²`
    OneOneU2,
    /// `1·u·u`
    OneUU,
    /// `1·u²·u²`
    OneU2U2,
    /// `u·u·u²`
    UUU2,
    /// `u·u²·u²`
    UU2U2,
}

impl ResidualForm {
    pub const ALL: [ResidualForm; 6] = [
        ResidualForm::OneOneU,
        ResidualForm::OneOneU2,
        ResidualForm::OneUU,
        ResidualForm::OneU2U2,
        ResidualForm::UUU2,
        ResidualForm::UU2U2,
    ];

    /// Sorted exponents.
    pub fn exponents(self) -> [u8; 3] {
        match self {
            ResidualForm::OneOneU => [0, 0, 1],
            ResidualForm::OneOneU2 => [0, 0, 2],
            ResidualForm::OneUU => [0, 1, 1],
            ResidualForm::OneU2U2 => [0, 2, 2],
            ResidualForm::UUU2 => [1, 1, 2],
            ResidualForm::UU2U2 => [1, 2, 2],
        }
    }

    pub fn of(mut e: [u8; 3]) -> Option<Self> {
        e.sort_unstable();
        Self::ALL.into_iter().find(|f| f.exponents() == e)
    }
}

/// Outcome of [`solve_c3_selection`]. Positions index the input.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum C3Selection {
    /// `k` positions with sum 0.
    ZeroSum(Vec<usize>),
    /// Two `k`-selections with sums `u` and `u²` respectively.
    TwoSums { sum_u: Vec<usize>, sum_u2: Vec<usize> },
    /// Eight triples of equal values plus a residual of the given form
    /// (length 27, nonzero sum).
    Blocks { triples: Vec<[usize; 3]>, residual: [usize; 3], form: ResidualForm },
}

fn sum(t: &[u8], pos: &[usize]) -> u8 {
    (pos.iter().map(|&i| t[i] as usize).sum::<usize>() % 3) as u8
}

/// Cut triples of equal values from `t`, leaving residual counts
/// `keep[v]` of each value `v`. Returns `(triples, residual positions)`.
fn cut_triples(t: &[u8], keep: [usize; 3]) -> (Vec<[usize; 3]>, Vec<usize>) {
    let mut by_val: [Vec<usize>; 3] = Default::default();
    for (i, &v) in t.iter().enumerate() {
        by_val[v as usize].push(i);
    }
    let mut triples = Vec::new();
    let mut residual = Vec::new();
    for (v, pos) in by_val.iter().enumerate() {
        let (rest, kept) = pos.split_at(pos.len() - keep[v]);
        triples.extend(rest.chunks_exact(3).map(|c| [c[0], c[1], c[2]]));
        residual.extend_from_slice(kept);
    }
    (triples, residual)
}

/// Residual counts `r[v] ≡ counts[v] (mod 3)`, `r[v] ≤ counts[v]`,
/// summing to `total`.
fn residual_counts(counts: [usize; 3], total: usize) -> Option<[usize; 3]> {
    for a in (counts[0] % 3..=counts[0].min(total)).step_by(3) {
        for b in (counts[1] % 3..=counts[1].min(total - a)).step_by(3) {
            let c = total - a - b;
            if c <= counts[2] && c % 3 == counts[2] % 3 {
                return Some([a, b, c]);
            }
        }
    }
    None
}

/// Zero-sum or near-zero-sum selections of `k` terms of `t` (exponents
/// mod 3).
///
/// * `ℓ = 28, k = 27`: a zero-sum selection, or eight equal triples plus
///   a residual `α·α·β·β` from which two selections with sums `u` and `u²`
///   are built.
/// * `ℓ = 27, k = 27`: the whole sequence if it sums to 0, else eight
///   equal triples and a classified residual.
/// * otherwise: an exact zero-sum selection of `k` terms if one exists.
pub fn solve_c3_selection(t: &[u8], k: usize) -> Result<Option<C3Selection>, ExtractError> {
    if t.iter().any(|&v| v > 2) {
        return Err(ExtractError::Precondition("values must be exponents 0, 1, 2".into()));
    }
    if k > t.len() {
        return Err(ExtractError::Precondition(format!("cannot select {k} of {} terms", t.len())));
    }
    let mut counts = [0usize; 3];
    for &v in t {
        counts[v as usize] += 1;
    }
    match (t.len(), k) {
        (28, 27) => {
            let s = sum(t, &(0..28).collect::<Vec<_>>());
            if let Some(drop) = t.iter().position(|&v| v == s) {
                return Ok(Some(C3Selection::ZeroSum((0..28).filter(|&i| i != drop).collect())));
            }
            let keep = residual_counts(counts, 4).expect("no zero-sum 27-selection forces an α·α·β·β residual");
            let (triples, residual) = cut_triples(t, keep);
            let vals: Vec<usize> = (0..3).filter(|&v| keep[v] == 2).collect();
            assert_eq!(vals.len(), 2, "residual must be α·α·β·β");
            let pair = |v: usize| residual.iter().copied().filter(|&i| t[i] as usize == v).collect::<Vec<_>>();
            let (pa, pb) = (pair(vals[0]), pair(vals[1]));
            let base: Vec<usize> = triples.iter().flatten().copied().collect();
            // The table of completions: α·α·β and α·β·β, labelled by sum.
            let x = [&base[..], &pa, &pb[..1]].concat();
            let y = [&base[..], &pa[..1], &pb].concat();
            let (sum_u, sum_u2) = if sum(t, &x) == 1 { (x, y) } else { (y, x) };
            debug_assert_eq!((sum(t, &sum_u), sum(t, &sum_u2)), (1, 2));
            Ok(Some(C3Selection::TwoSums { sum_u, sum_u2 }))
        }
        (27, 27) => {
            let all: Vec<usize> = (0..27).collect();
            if sum(t, &all) == 0 {
                return Ok(Some(C3Selection::ZeroSum(all)));
            }
            let keep = residual_counts(counts, 3).expect("27 terms leave a 3-term residual");
            let (triples, residual) = cut_triples(t, keep);
            let residual: [usize; 3] = residual.try_into().expect("three residual terms");
            let form = ResidualForm::of(residual.map(|i| t[i])).expect("nonzero-sum residual has a listed form");
            Ok(Some(C3Selection::Blocks { triples, residual, form }))
        }
        _ => {
            let vals: Vec<(usize, usize)> = t.iter().map(|&v| (v as usize, 0)).collect();
            Ok(super::zero_sum_selection(&vals, 3, k).map(C3Selection::ZeroSum))
        }
    }
}
