//! Orderly enumeration of multisets up to automorphism.
//!
//! Multisets are sorted id vectors; the representative of an
//! `Aut(G)`-orbit is its lexicographically least sorted image. Removing
//! the largest term of a representative leaves a representative, so a
//! depth-first walk that only appends terms `>= last` and drops
//! non-representatives visits every orbit exactly once. Pruning rules are
//! hereditary and automorphism-invariant, so pruned subtrees contain no
//! accepted orbit.
//!
//! The tree below the accepted length-2 nodes is split into shards,
//! processed in parallel and merged by shard index.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::Mutex;

use rayon::prelude::*;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::bitset::words_for;
use crate::group::{Automorphism, ElementId, GroupTable};
use crate::sequence::dp::ReachTable;

use super::ConstantsError;

/// Which multisets the walk keeps.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub(crate) enum Rule {
    /// Every multiset.
    All,
    /// No non-empty product-one subsequence.
    ZeroSumFree,
    /// No product-one subsequence of exactly this length.
    AvoidLength(usize),
}

/// Execution controls shared by every exhaustive search.
#[derive(Clone, Debug)]
pub struct SearchOptions {
    /// Worker threads; `None` uses the available parallelism.
    pub workers: Option<usize>,
    /// Accepted-node cap per shard. Hitting it marks the result partial.
    pub node_limit: Option<u64>,
    /// Process at most this many not-yet-completed shards.
    pub shard_limit: Option<usize>,
    /// Checkpoint file recording completed shards.
    pub checkpoint: Option<PathBuf>,
    /// Load completed shards from `checkpoint` before running.
    pub resume: bool,
    /// Cap on sub-multiset DP states per node.
    pub state_budget: u64,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            workers: None,
            node_limit: None,
            shard_limit: None,
            checkpoint: None,
            resume: false,
            state_budget: crate::sequence::DEFAULT_STATE_BUDGET,
        }
    }
}

/// Per-node callback state. One instance per shard; merged in shard order.
pub(crate) trait Visitor: Clone + Send + Serialize + DeserializeOwned {
    fn visit(&mut self, g: &GroupTable, terms: &[ElementId], table: &ReachTable);
    fn merge(&mut self, other: Self);
}

/// Visitor that records nothing.
#[derive(Clone, Default, Serialize, Deserialize)]
pub(crate) struct NoVisit;

impl Visitor for NoVisit {
    fn visit(&mut self, _: &GroupTable, _: &[ElementId], _: &ReachTable) {}
    fn merge(&mut self, _: Self) {}
}

pub(crate) const WITNESS_CAP: usize = 4;

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub(crate) struct Tally {
    /// Accepted canonical nodes by length.
    pub by_length: Vec<u64>,
    /// Lexicographically first accepted nodes of maximal length.
    pub longest: Vec<Vec<ElementId>>,
    pub truncated: bool,
}

impl Tally {
    fn record(&mut self, terms: &[ElementId]) {
        let len = terms.len();
        if self.by_length.len() <= len {
            self.by_length.resize(len + 1, 0);
        }
        self.by_length[len] += 1;
        let cur = self.longest.first().map_or(0, Vec::len);
        if len > cur || self.longest.is_empty() {
            self.longest = vec![terms.to_vec()];
        } else if len == cur && self.longest.len() < WITNESS_CAP {
            self.longest.push(terms.to_vec());
        }
    }

    fn merge(&mut self, other: &Tally) {
        if self.by_length.len() < other.by_length.len() {
            self.by_length.resize(other.by_length.len(), 0);
        }
        for (a, b) in self.by_length.iter_mut().zip(&other.by_length) {
            *a += b;
        }
        for w in &other.longest {
            self.record_witness(w);
        }
        self.truncated |= other.truncated;
    }

    fn record_witness(&mut self, w: &[ElementId]) {
        let cur = self.longest.first().map_or(0, Vec::len);
        if w.len() > cur || self.longest.is_empty() {
            self.longest = vec![w.to_vec()];
        } else if w.len() == cur && self.longest.len() < WITNESS_CAP {
            self.longest.push(w.to_vec());
        }
    }

    pub fn max_len(&self) -> usize {
        self.longest.first().map_or(0, Vec::len)
    }

    pub fn nodes(&self) -> u64 {
        self.by_length.iter().sum()
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub(crate) struct ShardDone<V> {
    pub prefix: Vec<ElementId>,
    pub tally: Tally,
    pub visitor: V,
}

#[derive(Serialize, Deserialize)]
struct Checkpoint<V> {
    schema: String,
    task: String,
    completed: BTreeMap<usize, ShardDone<V>>,
}

const CHECKPOINT_SCHEMA: &str = "zerosum.checkpoint/v1";

pub(crate) struct Outcome<V> {
    /// Root nodes (lengths 0..=2) merged with every completed shard.
    pub tally: Tally,
    pub visitor: V,
    pub shards_total: usize,
    pub shard_log: Vec<(usize, ShardDone<V>)>,
    /// Every shard finished without truncation.
    pub complete: bool,
}

pub(crate) struct Search<'a> {
    pub g: &'a GroupTable,
    pub auts: &'a [Automorphism],
    pub rule: Rule,
    pub max_len: usize,
    /// Identifies the search in checkpoints.
    pub task: String,
}

/// Whether the sorted multiset `terms` is the least sorted image in its
/// orbit.
pub(crate) fn is_canonical(auts: &[Automorphism], terms: &[ElementId], scratch: &mut Vec<ElementId>) -> bool {
    for phi in auts {
        if phi.is_identity() {
            continue;
        }
        let imgs = phi.images();
        // Cheap reject on the smallest image first.
        let min = terms.iter().map(|t| imgs[t.index()]).min();
        if let Some(m) = min {
            if m > terms[0] {
                continue;
            }
            if m < terms[0] {
                return false;
            }
        }
        scratch.clear();
        scratch.extend(terms.iter().map(|t| imgs[t.index()]));
        scratch.sort_unstable();
        if scratch.as_slice() < terms {
            return false;
        }
    }
    true
}

/// Lexicographically least sorted image of `terms` under `auts`.
pub fn canonical_form(auts: &[Automorphism], terms: &[ElementId]) -> Vec<ElementId> {
    let mut best: Vec<ElementId> = terms.to_vec();
    best.sort_unstable();
    let mut img = Vec::with_capacity(terms.len());
    for phi in auts {
        img.clear();
        img.extend(terms.iter().map(|&t| phi.apply(t)));
        img.sort_unstable();
        if img < best {
            best.clone_from(&img);
        }
    }
    best
}

fn reach_table(g: &GroupTable, terms: &[ElementId], budget: u64) -> Result<ReachTable, ConstantsError> {
    let mut elems: Vec<usize> = Vec::new();
    let mut mults: Vec<u32> = Vec::new();
    for t in terms {
        if elems.last() == Some(&t.index()) {
            *mults.last_mut().expect("paired with elems") += 1;
        } else {
            elems.push(t.index());
            mults.push(1);
        }
    }
    Ok(ReachTable::build(g, &elems, &mults, budget)?)
}

impl Search<'_> {
    /// Inverses of elements in this mask cannot be appended.
    fn blocked(&self, table: &ReachTable) -> Vec<u64> {
        let words = words_for(self.g.order());
        match self.rule {
            Rule::All => vec![0; words],
            Rule::ZeroSumFree => {
                let mut out = vec![0; words];
                for s in 0..table.states() {
                    for (o, w) in out.iter_mut().zip(table.set(s)) {
                        *o |= w;
                    }
                }
                out
            }
            Rule::AvoidLength(k) => {
                let by_len = table.unions_by_length();
                by_len.get(k - 1).cloned().unwrap_or_else(|| vec![0; words])
            }
        }
    }

    fn may_append(&self, blocked: &[u64], g: ElementId) -> bool {
        let inv = self.g.inv(g).index();
        blocked[inv >> 6] & (1 << (inv & 63)) == 0
    }

    /// Accepted canonical children of `terms`, in increasing order.
    fn children(&self, terms: &[ElementId], table: &ReachTable, scratch: &mut Vec<ElementId>) -> Vec<ElementId> {
        if terms.len() >= self.max_len {
            return Vec::new();
        }
        let blocked = self.blocked(table);
        let start = terms.last().map_or(0, |t| t.index());
        let mut child = terms.to_vec();
        child.push(ElementId(0));
        (start..self.g.order())
            .map(ElementId::from_index)
            .filter(|&c| {
                if !self.may_append(&blocked, c) {
                    return false;
                }
                *child.last_mut().expect("non-empty") = c;
                is_canonical(self.auts, &child, scratch)
            })
            .collect()
    }

    #[allow(clippy::too_many_arguments)]
    fn dfs<V: Visitor>(
        &self,
        terms: &mut Vec<ElementId>,
        table: &ReachTable,
        budget: u64,
        limit: Option<u64>,
        tally: &mut Tally,
        visitor: &mut V,
        scratch: &mut Vec<ElementId>,
    ) -> Result<(), ConstantsError> {
        for c in self.children(terms, table, scratch) {
            if limit.is_some_and(|l| tally.nodes() >= l) {
                tally.truncated = true;
                return Ok(());
            }
            terms.push(c);
            let t = reach_table(self.g, terms, budget)?;
            tally.record(terms);
            visitor.visit(self.g, terms, &t);
            self.dfs(terms, &t, budget, limit, tally, visitor, scratch)?;
            terms.pop();
        }
        Ok(())
    }

    pub(crate) fn run<V: Visitor>(
        &self,
        opts: &SearchOptions,
        make: &(dyn Fn() -> V + Sync),
    ) -> Result<Outcome<V>, ConstantsError> {
        let budget = opts.state_budget;
        let mut scratch = Vec::new();
        let mut root_tally = Tally::default();
        let mut root_visitor = make();

        // Lengths 0..=2 are walked here; length-2 nodes become shards.
        let empty = reach_table(self.g, &[], budget)?;
        root_tally.record(&[]);
        root_visitor.visit(self.g, &[], &empty);
        let mut shards: Vec<Vec<ElementId>> = Vec::new();
        for a in self.children(&[], &empty, &mut scratch) {
            let ta = reach_table(self.g, &[a], budget)?;
            root_tally.record(&[a]);
            root_visitor.visit(self.g, &[a], &ta);
            for b in self.children(&[a], &ta, &mut scratch) {
                shards.push(vec![a, b]);
            }
        }

        let mut completed: BTreeMap<usize, ShardDone<V>> = BTreeMap::new();
        if opts.resume {
            let path = opts.checkpoint.as_ref().ok_or(ConstantsError::ResumeWithoutCheckpoint)?;
            if path.exists() {
                let cp: Checkpoint<V> = read_checkpoint(path)?;
                if cp.task != self.task {
                    return Err(ConstantsError::CheckpointMismatch { expected: self.task.clone(), found: cp.task });
                }
                completed = cp.completed;
            }
        }

        let pending: Vec<usize> = (0..shards.len())
            .filter(|i| !completed.contains_key(i))
            .take(opts.shard_limit.unwrap_or(usize::MAX))
            .collect();

        let shared = Mutex::new(completed);
        let work = |i: usize| -> Result<(), ConstantsError> {
            let prefix = &shards[i];
            let mut tally = Tally::default();
            let mut visitor = make();
            let mut terms = prefix.clone();
            let table = reach_table(self.g, &terms, budget)?;
            tally.record(&terms);
            visitor.visit(self.g, &terms, &table);
            let mut scratch = Vec::new();
            self.dfs(&mut terms, &table, budget, opts.node_limit, &mut tally, &mut visitor, &mut scratch)?;
            let mut done = shared.lock().expect("no worker panicked");
            done.insert(i, ShardDone { prefix: prefix.clone(), tally, visitor });
            if let Some(path) = &opts.checkpoint {
                write_checkpoint(path, &self.task, &done)?;
            }
            Ok(())
        };

        let workers = opts.workers.unwrap_or_else(default_workers).max(1);
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .map_err(|e| ConstantsError::Pool(e.to_string()))?;
        pool.install(|| pending.par_iter().map(|&i| work(i)).collect::<Result<Vec<()>, _>>())?;

        let completed = shared.into_inner().expect("no worker panicked");
        let mut tally = root_tally;
        let mut visitor = root_visitor;
        let mut complete = completed.len() == shards.len();
        let mut shard_log = Vec::with_capacity(completed.len());
        for (i, done) in completed {
            tally.merge(&done.tally);
            visitor.merge(done.visitor.clone());
            complete &= !done.tally.truncated;
            shard_log.push((i, done));
        }
        Ok(Outcome { tally, visitor, shards_total: shards.len(), shard_log, complete })
    }
}

/// `ZEROSUM_WORKERS`, else the available parallelism.
pub fn default_workers() -> usize {
    std::env::var("ZEROSUM_WORKERS")
        .ok()
        .and_then(|v| v.parse().ok())
        .filter(|&n: &usize| n > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
}

fn read_checkpoint<V: DeserializeOwned>(path: &Path) -> Result<Checkpoint<V>, ConstantsError> {
    let text = std::fs::read_to_string(path).map_err(|e| ConstantsError::Io(format!("{}: {e}", path.display())))?;
    let cp: Checkpoint<V> =
        serde_json::from_str(&text).map_err(|e| ConstantsError::Io(format!("{}: {e}", path.display())))?;
    if cp.schema != CHECKPOINT_SCHEMA {
        return Err(ConstantsError::Io(format!("{}: unknown schema {}", path.display(), cp.schema)));
    }
    Ok(cp)
}

/// Write to a sibling temp file, then rename over the target.
fn write_checkpoint<V: Serialize>(
    path: &Path,
    task: &str,
    completed: &BTreeMap<usize, ShardDone<V>>,
) -> Result<(), ConstantsError> {
    #[derive(Serialize)]
    struct Out<'a, V> {
        schema: &'a str,
        task: &'a str,
        completed: &'a BTreeMap<usize, ShardDone<V>>,
    }
    let body = serde_json::to_string(&Out { schema: CHECKPOINT_SCHEMA, task, completed })
        .map_err(|e| ConstantsError::Io(e.to_string()))?;
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = PathBuf::from(tmp);
    std::fs::write(&tmp, body).map_err(|e| ConstantsError::Io(format!("{}: {e}", tmp.display())))?;
    std::fs::rename(&tmp, path).map_err(|e| ConstantsError::Io(format!("{}: {e}", path.display())))?;
    Ok(())
}
