//! Exhaustive computation of `d(G)`, `D(G)`, `s(G)`, `E(G)` and the
//! verification suites built on the same search engine.
//!
//! Every search walks orbit representatives of multisets under
//! `Aut(G)` (see [`canonical_form`]) and re-checks each reported witness
//! with a fresh DP before returning.

mod engine;
mod verify;

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::group::{automorphisms, Automorphism, ElementId, GroupError, GroupTable};
use crate::sequence::{text::format_sequence, Sequence, SequenceError};

pub use engine::{canonical_form, default_workers, SearchOptions};
pub use verify::{
    greedy_zero_sum_free, random_zero_sum_free, verify_cyclic_multiplicity_bound, verify_extremal_coverage,
    verify_long_subsequences, verify_structured_theorems, LongSequenceFamily, ZClassProfile,
};

use engine::{NoVisit, Rule, Search, Visitor};


pub const SEARCH_REPORT_SCHEMA: &str = "zerosum.search-report/v1";
pub const VERIFICATION_REPORT_SCHEMA: &str = "zerosum.verification-report/v1";

/// Largest group on which `s` and `E` are searched exhaustively.
pub const EXHAUSTIVE_GAO_LIMIT: usize = 9;
/// Largest non-abelian group on which `D` is searched exhaustively.
pub const LARGE_DAVENPORT_LIMIT: usize = 16;

#[derive(Debug, Error)]
pub enum ConstantsError {
    #[error(transparent)]
    Sequence(#[from] SequenceError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("operation requires an abelian group")]
    NotAbelian,
    #[error("group of order {order} is too large for this exhaustive search (limit {limit})")]
    TooLarge { order: usize, limit: usize },
    #[error("--resume needs a checkpoint path")]
    ResumeWithoutCheckpoint,
    #[error("checkpoint belongs to task `{found}`, expected `{expected}`")]
    CheckpointMismatch { expected: String, found: String },
    #[error("i/o: {0}")]
    Io(String),
    #[error("worker pool: {0}")]
    Pool(String),
    #[error("invalid input: {0}")]
    Precondition(String),
    #[error("witness failed independent re-verification: {0}")]
    WitnessRejected(String),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    /// The search covered every orbit.
    Exact,
    /// The value is certified from below only.
    LowerBoundOnly,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShardLine {
    pub id: usize,
    pub prefix: String,
    pub nodes: u64,
    pub max_len: usize,
    pub truncated: bool,
}

/// Result of a constant computation.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SearchReport {
    pub schema: String,
    pub constant: String,
    pub group: String,
    pub value: usize,
    pub status: Status,
    /// Extremal sequences, each re-verified.
    pub witnesses: Vec<String>,
    pub states_explored: u64,
    pub canonical_by_length: Vec<u64>,
    pub shards_total: usize,
    pub shards_completed: usize,
    pub shard_log: Vec<ShardLine>,
    pub notes: Vec<String>,
    /// Kept out of structured output so reports stay byte-identical.
    #[serde(skip)]
    pub wall: Duration,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Verified,
    Violated,
    Incomplete,
}

/// Result of a verification suite.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VerificationReport {
    pub schema: String,
    pub check: String,
    pub group: String,
    pub verdict: Verdict,
    /// Instances examined.
    pub cases: u64,
    pub counters: BTreeMap<String, u64>,
    /// First few counterexamples, if any.
    pub violations: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub seed: Option<u64>,
    pub notes: Vec<String>,
    #[serde(skip)]
    pub wall: Duration,
}

pub(crate) const VIOLATION_CAP: usize = 16;

impl VerificationReport {
    pub(crate) fn new(check: &str, group: String) -> Self {
        VerificationReport {
            schema: VERIFICATION_REPORT_SCHEMA.into(),
            check: check.into(),
            group,
            verdict: Verdict::Verified,
            cases: 0,
            counters: BTreeMap::new(),
            violations: Vec::new(),
            seed: None,
            notes: Vec::new(),
            wall: Duration::ZERO,
        }
    }

    pub(crate) fn bump(&mut self, key: &str, by: u64) {
        *self.counters.entry(key.to_string()).or_insert(0) += by;
    }

    pub(crate) fn violation(&mut self, msg: String) {
        self.verdict = Verdict::Violated;
        self.bump("violations", 1);
        if self.violations.len() < VIOLATION_CAP {
            self.violations.push(msg);
        }
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Verified
    }
}

/// `Aut(G)` when it can be enumerated, else just the identity.
pub(crate) fn symmetry(g: &GroupTable, notes: &mut Vec<String>) -> Vec<Automorphism> {
    match automorphisms(g) {
        Ok(a) => a,
        Err(e) => {
            notes.push(format!("no symmetry reduction: {e}"));
            vec![]
        }
    }
}

fn names(g: &GroupTable, terms: &[ElementId]) -> String {
    format_sequence(&Sequence::from_terms(g, terms.iter().copied()))
}

fn shard_lines<V>(g: &GroupTable, out: &engine::Outcome<V>) -> Vec<ShardLine> {
    out.shard_log
        .iter()
        .map(|(id, d)| ShardLine {
            id: *id,
            prefix: names(g, &d.prefix),
            nodes: d.tally.nodes(),
            max_len: d.tally.max_len(),
            truncated: d.tally.truncated,
        })
        .collect()
}

#[allow(clippy::too_many_arguments)]
fn report_from<V>(
    g: &GroupTable,
    constant: &str,
    value: usize,
    complete: bool,
    witnesses: Vec<String>,
    out: &engine::Outcome<V>,
    notes: Vec<String>,
    started: Instant,
) -> SearchReport {
    SearchReport {
        schema: SEARCH_REPORT_SCHEMA.into(),
        constant: constant.into(),
        group: g.family().to_string(),
        value,
        status: if complete { Status::Exact } else { Status::LowerBoundOnly },
        witnesses,
        states_explored: out.tally.nodes(),
        canonical_by_length: out.tally.by_length.clone(),
        shards_total: out.shards_total,
        shards_completed: out.shard_log.len(),
        shard_log: shard_lines(g, out),
        notes,
        wall: started.elapsed(),
    }
}

fn run_search<V: Visitor>(
    g: &GroupTable,
    auts: &[Automorphism],
    rule: Rule,
    max_len: usize,
    opts: &SearchOptions,
    make: &(dyn Fn() -> V + Sync),
) -> Result<engine::Outcome<V>, ConstantsError> {
    let task = format!("{rule:?} max_len={max_len} group={} visitor={}", g.family(), std::any::type_name::<V>());
    Search { g, auts, rule, max_len, task }.run::<V>(opts, make)
}

/// Small Davenport constant: the longest zero-sum-free sequence.
pub fn small_davenport(g: &GroupTable, opts: &SearchOptions) -> Result<SearchReport, ConstantsError> {
    let started = Instant::now();
    let mut notes = Vec::new();
    let auts = symmetry(g, &mut notes);
    let out = run_search(g, &auts, Rule::ZeroSumFree, g.order(), opts, &|| NoVisit)?;
    let value = out.tally.max_len();
    let mut witnesses = Vec::new();
    for w in &out.tally.longest {
        let s = Sequence::from_terms(g, w.iter().copied());
        if s.has_product_one_subsequence(opts.state_budget)? {
            return Err(ConstantsError::WitnessRejected(format!("{s} has a product-one subsequence")));
        }
        witnesses.push(s.to_string());
    }
    Ok(report_from(g, "d", value, out.complete, witnesses, &out, notes, started))
}

/// Olson's value `1 + Σ (p^{e_i} - 1)` of `D` for an abelian `p`-group.
pub fn olson_formula(p: u64, exps: &[u32]) -> u64 {
    1 + exps.iter().map(|&e| p.pow(e) - 1).sum::<u64>()
}

/// Upper bound on `D(G)` for abelian `G`: `exp + |G|/exp - 1` when
/// `exp ≥ √|G|`, else `⌊2√|G| - 1⌋`.
pub fn davenport_upper_bound(g: &GroupTable) -> Result<u64, ConstantsError> {
    if !g.is_abelian() {
        return Err(ConstantsError::NotAbelian);
    }
    let n = g.order() as u64;
    let e = g.exponent();
    if e * e >= n {
        Ok(e + n / e - 1)
    } else {
        Ok((4 * n).isqrt() - 1)
    }
}

/// Whether `s` is product-one and admits no split into two non-empty
/// product-one subsequences.
pub fn is_minimal_product_one(s: &Sequence<'_>, budget: u64) -> Result<bool, ConstantsError> {
    let g = s.group();
    let (elems, mults): (Vec<ElementId>, Vec<u32>) = s.distinct().unzip();
    let idx: Vec<usize> = elems.iter().map(|e| e.index()).collect();
    let t = crate::sequence::dp::ReachTable::build(g, &idx, &mults, budget)?;
    let e = g.identity().index();
    let full = t.full_state();
    if s.is_empty() || !t.contains(full, e) {
        return Ok(false);
    }
    // Digit-wise complement of a state is `full - state`.
    Ok(!(1..full).any(|a| t.contains(a, e) && t.contains(full - a, e)))
}

/// Large Davenport constant: the longest minimal product-one sequence.
///
/// Abelian groups use `D = d + 1`, with a minimal witness built from a
/// longest zero-sum-free sequence. Non-abelian groups up to order 16 are
/// searched exhaustively; larger ones get the certified lower bound
/// `d + 1`.
pub fn large_davenport(g: &GroupTable, opts: &SearchOptions) -> Result<SearchReport, ConstantsError> {
    let started = Instant::now();
    let d = small_davenport(g, opts)?;
    let mut notes = d.notes.clone();
    let zsf = Sequence::from_terms(g, crate::sequence::text::parse_sequence(g, &d.witnesses[0])?.terms());
    let closing = if zsf.is_empty() {
        g.identity()
    } else {
        let first = zsf.pi_set(opts.state_budget)?.iter().next();
        g.inv(first.expect("π of a non-empty sequence is non-empty"))
    };
    let mut lower = zsf.clone();
    lower.push(closing);
    if !is_minimal_product_one(&lower, opts.state_budget)? {
        return Err(ConstantsError::WitnessRejected(format!("{lower} is not a minimal product-one sequence")));
    }

    if g.is_abelian() {
        notes.push("abelian: D = d + 1".into());
        let mut r = d;
        r.constant = "D".into();
        r.value = lower.len();
        r.witnesses = vec![lower.to_string()];
        r.notes = notes;
        r.wall = started.elapsed();
        return Ok(r);
    }
    if g.order() > LARGE_DAVENPORT_LIMIT {
        notes.push(format!("order above {LARGE_DAVENPORT_LIMIT}: lower bound d + 1 only"));
        let mut r = d;
        r.constant = "D".into();
        r.value = lower.len();
        r.status = Status::LowerBoundOnly;
        r.witnesses = vec![lower.to_string()];
        r.notes = notes;
        r.wall = started.elapsed();
        return Ok(r);
    }

    let auts = symmetry(g, &mut notes);
    let out = run_search(g, &auts, Rule::All, g.order(), opts, &MinimalVisitor::default)?;
    let value = out.visitor.best_len.max(lower.len());
    let mut witnesses = Vec::new();
    for w in out.visitor.best.iter().filter(|w| w.len() == value) {
        let s = Sequence::from_terms(g, w.iter().copied());
        if !is_minimal_product_one(&s, opts.state_budget)? {
            return Err(ConstantsError::WitnessRejected(format!("{s} is not minimal product-one")));
        }
        witnesses.push(s.to_string());
    }
    if witnesses.is_empty() {
        witnesses.push(lower.to_string());
    }
    Ok(report_from(g, "D", value, out.complete, witnesses, &out, notes, started))
}

#[derive(Clone, Default, Serialize, Deserialize)]
struct MinimalVisitor {
    best_len: usize,
    best: Vec<Vec<ElementId>>,
}

impl Visitor for MinimalVisitor {
    fn visit(&mut self, g: &GroupTable, terms: &[ElementId], table: &crate::sequence::dp::ReachTable) {
        if terms.is_empty() || terms.len() < self.best_len {
            return;
        }
        let e = g.identity().index();
        let full = table.full_state();
        if !table.contains(full, e) {
            return;
        }
        if (1..full).any(|a| table.contains(a, e) && table.contains(full - a, e)) {
            return;
        }
        if terms.len() > self.best_len {
            self.best_len = terms.len();
            self.best.clear();
        }
        if self.best.len() < engine::WITNESS_CAP {
            self.best.push(terms.to_vec());
        }
    }

    fn merge(&mut self, other: Self) {
        if other.best_len > self.best_len {
            *self = other;
        } else if other.best_len == self.best_len {
            for w in other.best {
                if self.best.len() < engine::WITNESS_CAP {
                    self.best.push(w);
                }
            }
        }
    }
}

fn exhaustive_avoidance(
    g: &GroupTable,
    constant: &str,
    k: usize,
    opts: &SearchOptions,
) -> Result<SearchReport, ConstantsError> {
    let started = Instant::now();
    let mut notes = Vec::new();
    let auts = symmetry(g, &mut notes);
    // The longest avoiding length sits far below this cap for the orders
    // accepted here; reaching it marks the result partial.
    let cap = 2 * g.order() + k;
    let out = run_search(g, &auts, Rule::AvoidLength(k), cap, opts, &|| NoVisit)?;
    let longest = out.tally.max_len();
    let complete = out.complete && longest < cap;
    let mut witnesses = Vec::new();
    for w in &out.tally.longest {
        let s = Sequence::from_terms(g, w.iter().copied());
        if s.len() >= k && s.product_one_witness_of_length(k, opts.state_budget)?.is_some() {
            return Err(ConstantsError::WitnessRejected(format!("{s} has a product-one subsequence of length {k}")));
        }
        witnesses.push(s.to_string());
    }
    notes.push(format!("longest sequence without a length-{k} product-one subsequence: {longest}"));
    Ok(report_from(g, constant, longest + 1, complete, witnesses, &out, notes, started))
}

/// `s(G)`: least `N` forcing a product-one subsequence of length
/// `exp(G)`. Exhaustive, for `|G| ≤ 9`.
pub fn egz_constant_s(g: &GroupTable, opts: &SearchOptions) -> Result<SearchReport, ConstantsError> {
    if g.order() > EXHAUSTIVE_GAO_LIMIT {
        return Err(ConstantsError::TooLarge { order: g.order(), limit: EXHAUSTIVE_GAO_LIMIT });
    }
    exhaustive_avoidance(g, "s", g.exponent() as usize, opts)
}

/// `E(G)`: least `N` forcing a product-one subsequence of length `|G|`.
///
/// Exhaustive for `|G| ≤ 9`. Larger groups get the certified lower bound
/// `d(G) + |G|` from [`lower_bound_certificate_e`].
pub fn gao_constant_e(g: &GroupTable, opts: &SearchOptions) -> Result<SearchReport, ConstantsError> {
    if g.order() <= EXHAUSTIVE_GAO_LIMIT {
        return exhaustive_avoidance(g, "E", g.order(), opts);
    }
    let started = Instant::now();
    let d = small_davenport(g, opts)?;
    let t0 = crate::sequence::text::parse_sequence(g, &d.witnesses[0])?.terms();
    let cert = lower_bound_certificate_e(g, &t0, opts.state_budget)?;
    let mut notes = d.notes.clone();
    notes.push(format!("lower bound d + |G| from a zero-sum-free sequence of length {} padded with 1", t0.len()));
    if g.heisenberg_prime() == Some(3) {
        notes.push("upper bound: see `fuzz extract27`".into());
    }
    Ok(SearchReport {
        constant: "E".into(),
        value: cert.bound,
        status: Status::LowerBoundOnly,
        witnesses: vec![names(g, &cert.sequence)],
        notes,
        wall: started.elapsed(),
        ..d
    })
}

/// A sequence of length `N - 1` with no product-one subsequence of
/// length `|G|`, proving `E(G) ≥ N`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GaoLowerBound {
    pub base: Vec<ElementId>,
    pub sequence: Vec<ElementId>,
    pub bound: usize,
}

/// `T0 · 1^[|G|-1]` for a zero-sum-free `T0`.
///
/// A length-`|G|` subsequence uses at most `|G| - 1` identities, so it
/// contains a non-empty part of `T0`, and dropping the identities would
/// give a product-one subsequence of `T0`. Both `T0` and the padded
/// sequence are re-checked by DP.
pub fn lower_bound_certificate_e(
    g: &GroupTable,
    t0: &[ElementId],
    budget: u64,
) -> Result<GaoLowerBound, ConstantsError> {
    let base = Sequence::from_terms(g, t0.iter().copied());
    if base.has_product_one_subsequence(budget)? {
        return Err(ConstantsError::WitnessRejected(format!("{base} is not zero-sum-free")));
    }
    let mut padded = base.clone();
    padded.push_n(g.identity(), g.order() as u32 - 1);
    if padded.product_one_witness_of_length(g.order(), budget)?.is_some() {
        return Err(ConstantsError::WitnessRejected(format!("{padded} has a product-one subsequence of length |G|")));
    }
    Ok(GaoLowerBound { base: base.terms(), sequence: padded.terms(), bound: padded.len() + 1 })
}
