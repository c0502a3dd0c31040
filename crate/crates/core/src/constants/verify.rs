//! Exhaustive and randomized checks of structural statements about
//! zero-sum-free and product-one sequences.

use std::time::Instant;

use rand::seq::SliceRandom;
use rand::Rng as _;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::extract::{
    central_product_subsequence, in_maximal_subgroup, maximal_subgroup_directions, product_one_from_center,
    product_one_from_maximal,
};
use crate::group::{heisenberg_id, is_prime, make_cyclic, make_heisenberg, ElementId, GroupTable};
use crate::rng::{instance_rng, Rng};
use crate::sequence::dp::ReachTable;
use crate::sequence::{ordered_product, Sequence};

use super::engine::{Rule, SearchOptions, Visitor};
use super::{names, run_search, small_davenport, symmetry, ConstantsError, Verdict, VerificationReport, VIOLATION_CAP};

/// Number of terms in each z-class `K_0..K_{p+1}` of `H_{p³}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZClassProfile {
    pub counts: Vec<usize>,
}

impl ZClassProfile {
    pub fn of(g: &GroupTable, terms: &[ElementId]) -> Result<Self, ConstantsError> {
        let p = g.heisenberg_prime().ok_or(crate::group::GroupError::NotHeisenberg)? as usize;
        let mut counts = vec![0; p + 2];
        for &t in terms {
            counts[g.z_class_index(t)?] += 1;
        }
        Ok(ZClassProfile { counts })
    }

    pub fn total(&self) -> usize {
        self.counts.iter().sum()
    }

    /// Non-central counts, largest first, e.g. `(3,3,1,0)`.
    pub fn shape(&self) -> String {
        let mut nc: Vec<usize> = self.counts[1..].to_vec();
        nc.sort_unstable_by(|a, b| b.cmp(a));
        let parts: Vec<String> = nc.iter().map(usize::to_string).collect();
        format!("({})", parts.join(","))
    }
}

fn has_product_one(g: &GroupTable, table: &ReachTable) -> bool {
    let e = g.identity().index();
    (1..table.states()).any(|s| table.contains(s, e))
}

fn push_violation(v: &mut Vec<String>, msg: String) {
    if v.len() < VIOLATION_CAP {
        v.push(msg);
    }
}

#[derive(Clone, Default, Serialize, Deserialize)]
struct MultiplicityVisitor {
    checked: u64,
    all_equal_checked: u64,
    failures: u64,
    violations: Vec<String>,
}

impl Visitor for MultiplicityVisitor {
    fn visit(&mut self, g: &GroupTable, terms: &[ElementId], _: &ReachTable) {
        let n = g.order();
        let l = terms.len();
        if l == 0 || 2 * l < n + 1 {
            return;
        }
        self.checked += 1;
        let mut best = 0;
        let mut run = 0;
        for (i, t) in terms.iter().enumerate() {
            run = if i > 0 && terms[i - 1] == *t { run + 1 } else { 1 };
            best = best.max(run);
        }
        if best + n < 2 * l + 1 {
            self.failures += 1;
            push_violation(&mut self.violations, format!("{}: max multiplicity {best}", names(g, terms)));
        }
        if is_prime(n as u32) && l == n - 1 {
            self.all_equal_checked += 1;
            if best != l {
                self.failures += 1;
                push_violation(&mut self.violations, format!("{}: terms not all equal", names(g, terms)));
            }
        }
    }

    fn merge(&mut self, other: Self) {
        self.checked += other.checked;
        self.all_equal_checked += other.all_equal_checked;
        self.failures += other.failures;
        for v in other.violations {
            push_violation(&mut self.violations, v);
        }
    }
}

fn finish(report: &mut VerificationReport, complete: bool, failures: u64, violations: Vec<String>, started: Instant) {
    if failures > 0 {
        report.verdict = Verdict::Violated;
        report.bump("violations", failures);
        report.violations = violations;
    } else if !complete {
        report.verdict = Verdict::Incomplete;
    }
    report.wall = started.elapsed();
}

/// Every zero-sum-free sequence over `C_n` of length `ℓ ≥ (n+1)/2` has a
/// term of multiplicity at least `2ℓ - n + 1`; for prime `n` and
/// `ℓ = n - 1` all terms coincide. Exhaustive over orbit
/// representatives (automorphisms preserve multiplicities).
pub fn verify_cyclic_multiplicity_bound(n: u32, opts: &SearchOptions) -> Result<VerificationReport, ConstantsError> {
    let started = Instant::now();
    let g = make_cyclic(n)?;
    let mut report = VerificationReport::new("cyclic-multiplicity-bound", g.family().to_string());
    let auts = symmetry(&g, &mut report.notes);
    let out = run_search(&g, &auts, Rule::ZeroSumFree, g.order(), opts, &MultiplicityVisitor::default)?;
    report.cases = out.visitor.checked;
    report.bump("zero-sum-free orbits", out.tally.nodes());
    report.bump("long orbits checked", out.visitor.checked);
    report.bump("prime all-equal checks", out.visitor.all_equal_checked);
    finish(&mut report, out.complete, out.visitor.failures, out.visitor.violations, started);
    Ok(report)
}

#[derive(Clone, Default, Serialize, Deserialize)]
struct CoverageVisitor {
    target: usize,
    checked: u64,
    failures: u64,
    violations: Vec<String>,
}

impl Visitor for CoverageVisitor {
    fn visit(&mut self, g: &GroupTable, terms: &[ElementId], table: &ReachTable) {
        if terms.is_empty() || terms.len() != self.target {
            return;
        }
        self.checked += 1;
        let mut covered = 0usize;
        let mut seen = vec![false; g.order()];
        for s in 1..table.states() {
            for e in crate::bitset::iter_bits(table.set(s)) {
                if !seen[e] {
                    seen[e] = true;
                    covered += 1;
                }
            }
        }
        if seen[g.identity().index()] || covered != g.order() - 1 {
            self.failures += 1;
            push_violation(&mut self.violations, format!("{}: |Π(S)| = {covered}", names(g, terms)));
        }
    }

    fn merge(&mut self, other: Self) {
        self.target = self.target.max(other.target);
        self.checked += other.checked;
        self.failures += other.failures;
        for v in other.violations {
            push_violation(&mut self.violations, v);
        }
    }
}

/// Every zero-sum-free sequence of length `d(G)` has `Π(S) = G \ {1}`.
pub fn verify_extremal_coverage(g: &GroupTable, opts: &SearchOptions) -> Result<VerificationReport, ConstantsError> {
    let started = Instant::now();
    let d = small_davenport(g, opts)?;
    let mut report = VerificationReport::new("extremal-coverage", g.family().to_string());
    report.notes.push(format!("d(G) = {} ({:?})", d.value, d.status));
    let auts = symmetry(g, &mut report.notes);
    let make = || CoverageVisitor { target: d.value, ..Default::default() };
    let out = run_search(g, &auts, Rule::ZeroSumFree, d.value, opts, &make)?;
    report.cases = out.visitor.checked;
    report.bump("extremal orbits", out.visitor.checked);
    finish(
        &mut report,
        out.complete && d.status == super::Status::Exact,
        out.visitor.failures,
        out.visitor.violations,
        started,
    );
    Ok(report)
}

#[derive(Clone, Default, Serialize, Deserialize)]
struct StructuredVisitor {
    length: usize,
    sequences: u64,
    with_product_one: u64,
    central_hyp: u64,
    fat_class_hyp: u64,
    conjugate_class_hyp: u64,
    failures: u64,
    violations: Vec<String>,
}

impl Visitor for StructuredVisitor {
    fn visit(&mut self, g: &GroupTable, terms: &[ElementId], table: &ReachTable) {
        if terms.len() != self.length {
            return;
        }
        let p = g.heisenberg_prime().expect("Heisenberg group") as usize;
        let prof = ZClassProfile::of(g, terms).expect("Heisenberg group");
        let ok = has_product_one(g, table);
        self.sequences += 1;
        self.with_product_one += ok as u64;
        let fail = |name: &str, v: &mut Self| {
            if !ok {
                v.failures += 1;
                push_violation(&mut v.violations, format!("{name}: {} profile {:?}", names(g, terms), prof.counts));
            }
        };
        if prof.counts[0] + 2 >= p {
            self.central_hyp += 1;
            fail("central terms", self);
        }
        if prof.counts[0] == 0 && prof.counts[1..].iter().any(|&c| c + 2 >= 2 * p) {
            self.fat_class_hyp += 1;
            fail("fat class", self);
        }
        if prof.counts[0] == 0 {
            let conj_class = (1..=p + 1).any(|j| {
                prof.counts[j] == p && {
                    let mut in_class = terms.iter().filter(|&&t| g.z_class_index(t) == Ok(j));
                    let first = *in_class.next().expect("p terms");
                    in_class.all(|&t| g.are_conjugate(first, t))
                }
            });
            if conj_class {
                self.conjugate_class_hyp += 1;
                fail("conjugate class", self);
            }
        }
    }

    fn merge(&mut self, o: Self) {
        self.sequences += o.sequences;
        self.with_product_one += o.with_product_one;
        self.central_hyp += o.central_hyp;
        self.fat_class_hyp += o.fat_class_hyp;
        self.conjugate_class_hyp += o.conjugate_class_hyp;
        self.failures += o.failures;
        for v in o.violations {
            push_violation(&mut self.violations, v);
        }
    }
}

/// For every orbit of length-`(3p - 2)` sequences over `H_{p³}` at
/// `p = 3`: at least `p - 2` central terms, or no central term and a
/// z-class with `2p - 2` terms, or no central term and a z-class with
/// exactly `p` pairwise conjugate terms, each force a product-one
/// subsequence. All three hypotheses are automorphism-invariant.
pub fn verify_structured_theorems(opts: &SearchOptions) -> Result<VerificationReport, ConstantsError> {
    let started = Instant::now();
    let g = make_heisenberg(3)?;
    let n = 3 * 3 - 2;
    let mut report = VerificationReport::new("structured-length-7", g.family().to_string());
    let auts = symmetry(&g, &mut report.notes);
    let make = || StructuredVisitor { length: n, ..Default::default() };
    let out = run_search(&g, &auts, Rule::All, n, opts, &make)?;
    let v = out.visitor;
    report.cases = v.sequences;
    report.bump("length-7 orbits", v.sequences);
    report.bump("orbits with product-one subsequence", v.with_product_one);
    report.bump("hypothesis: >= p-2 central", v.central_hyp);
    report.bump("hypothesis: class of size >= 2p-2", v.fat_class_hyp);
    report.bump("hypothesis: p conjugate terms in a class", v.conjugate_class_hyp);
    finish(&mut report, out.complete, v.failures, v.violations, started);
    Ok(report)
}

/// How a random length-33 input for the bulk-extraction checks is drawn.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LongSequenceFamily {
    Uniform,
    /// At least 29 central terms.
    CentralHeavy,
    /// At least 31 terms in one maximal subgroup.
    MaximalHeavy,
}

impl LongSequenceFamily {
    pub const ALL: [LongSequenceFamily; 3] =
        [LongSequenceFamily::Uniform, LongSequenceFamily::CentralHeavy, LongSequenceFamily::MaximalHeavy];

    pub fn sample(self, g: &GroupTable, rng: &mut crate::rng::Rng, len: usize) -> Vec<ElementId> {
        let p = g.heisenberg_prime().expect("Heisenberg group") as usize;
        let n = g.order() as u16;
        let uniform = |rng: &mut crate::rng::Rng| ElementId(rng.gen_range(0..n));
        let mut terms: Vec<ElementId> = match self {
            LongSequenceFamily::Uniform => (0..len).map(|_| uniform(rng)).collect(),
            LongSequenceFamily::CentralHeavy => {
                let c = rng.gen_range(len - 4..=len);
                let mut t: Vec<ElementId> = (0..c).map(|_| heisenberg_id(p, 0, 0, rng.gen_range(0..p))).collect();
                t.extend((c..len).map(|_| uniform(rng)));
                t
            }
            LongSequenceFamily::MaximalHeavy => {
                let dirs = maximal_subgroup_directions(p);
                let dir = dirs[rng.gen_range(0..dirs.len())];
                let m = rng.gen_range(len - 2..=len);
                let mut t: Vec<ElementId> = (0..m)
                    .map(|_| {
                        let s = rng.gen_range(0..p);
                        heisenberg_id(p, s * dir.0, s * dir.1, rng.gen_range(0..p))
                    })
                    .collect();
                t.extend((m..len).map(|_| uniform(rng)));
                t
            }
        };
        terms.shuffle(rng);
        terms
    }
}

#[derive(Default)]
struct LongOutcome {
    central_ok: bool,
    center_hyp: bool,
    center_ok: bool,
    maximal_hyp: bool,
    maximal_ok: bool,
}

fn long_trial(g: &GroupTable, terms: &[ElementId]) -> LongOutcome {
    let p = g.heisenberg_prime().expect("Heisenberg group") as usize;
    let p3 = p * p * p;
    let mut o = LongOutcome::default();
    if let Some(pos) = central_product_subsequence(g, terms) {
        let mut sorted = pos.clone();
        sorted.sort_unstable();
        sorted.dedup();
        let prod = ordered_product(g, &pos.iter().map(|&i| terms[i]).collect::<Vec<_>>());
        o.central_ok = pos.len() == p3 && sorted.len() == p3 && g.is_central(prod);
    }
    let seq = Sequence::from_terms(g, terms.iter().copied());
    let verified = |w: &crate::sequence::Witness| w.len() == p3 && w.verify(&seq).is_ok();
    let central = terms.iter().filter(|&&t| g.is_central(t)).count();
    if central > p3 + p - 2 {
        o.center_hyp = true;
        o.center_ok = product_one_from_center(g, terms).is_some_and(|w| verified(&w));
    }
    let max_in_m = maximal_subgroup_directions(p)
        .into_iter()
        .map(|d| terms.iter().filter(|&&t| in_maximal_subgroup(p, d, t)).count())
        .max()
        .unwrap_or(0);
    if max_in_m > p3 + 2 * p - 3 {
        o.maximal_hyp = true;
        o.maximal_ok = product_one_from_maximal(g, terms).is_some_and(|w| verified(&w));
    }
    o
}

/// Randomized check over `H_27` of the three bulk statements for
/// length-33 sequences: a central-product subsequence of length 27
/// always exists, and more than 29 central terms or more than 30 terms in
/// a maximal subgroup yield a product-one subsequence of length 27. Each
/// is constructed and verified. Trial `i` uses stream `i` of `seed` and
/// family `i mod 3`.
pub fn verify_long_subsequences(
    trials: u64,
    seed: u64,
    workers: Option<usize>,
) -> Result<VerificationReport, ConstantsError> {
    let started = Instant::now();
    let g = make_heisenberg(3)?;
    let len = 27 + 3 * 3 - 3;
    let mut report = VerificationReport::new("long-subsequences", g.family().to_string());
    report.seed = Some(seed);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.unwrap_or_else(super::default_workers).max(1))
        .build()
        .map_err(|e| ConstantsError::Pool(e.to_string()))?;
    let outcomes: Vec<(usize, LongOutcome, Vec<ElementId>)> = pool.install(|| {
        (0..trials)
            .into_par_iter()
            .map(|i| {
                let fam = (i % 3) as usize;
                let mut rng = instance_rng(seed, i);
                let terms = LongSequenceFamily::ALL[fam].sample(&g, &mut rng, len);
                let o = long_trial(&g, &terms);
                (fam, o, terms)
            })
            .collect()
    });
    for (fam, o, terms) in outcomes {
        report.cases += 1;
        let fam_name = ["uniform", "central-heavy", "maximal-heavy"][fam];
        report.bump(&format!("trials {fam_name}"), 1);
        report.bump("(i) central-product 27", o.central_ok as u64);
        if !o.central_ok {
            report.violation(format!("(i) {}", names(&g, &terms)));
        }
        if o.center_hyp {
            report.bump("(ii) hypothesis", 1);
            report.bump("(ii) product-one 27", o.center_ok as u64);
            if !o.center_ok {
                report.violation(format!("(ii) {}", names(&g, &terms)));
            }
        }
        if o.maximal_hyp {
            report.bump("(iii) hypothesis", 1);
            report.bump("(iii) product-one 27", o.maximal_ok as u64);
            if !o.maximal_ok {
                report.violation(format!("(iii) {}", names(&g, &terms)));
            }
        }
    }
    report.wall = started.elapsed();
    Ok(report)
}

/// Append random terms, favouring repeats, keeping the sequence
/// zero-sum-free until it has `target` terms or no term fits.
pub fn greedy_zero_sum_free<'g>(
    g: &'g GroupTable,
    rng: &mut Rng,
    target: usize,
    budget: u64,
) -> Result<Sequence<'g>, ConstantsError> {
    let mut order: Vec<ElementId> = g.elements().collect();
    let mut s = Sequence::new(g);
    while s.len() < target {
        // c closes a product-one subsequence iff c⁻¹ ∈ Π(S).
        let blocked = s.subsequence_products(budget)?;
        order.shuffle(rng);
        // Repeating a term keeps Π(S) small, so prefer repeats most of the time.
        if rng.gen_bool(0.7) {
            order.sort_by_key(|&c| s.multiplicity(c) == 0);
        }
        match order.iter().copied().find(|&c| c != g.identity() && !blocked.contains(g.inv(c))) {
            Some(c) => s.push(c),
            None => break,
        }
    }
    Ok(s)
}

/// Randomized greedy search over `H_{p³}` for a zero-sum-free sequence of
/// length `3p - 3`: append random admissible terms until stuck, restart
/// with the next stream. Returns the first sequence found, re-verified.
pub fn random_zero_sum_free(
    p: u32,
    seed: u64,
    attempts: u64,
    budget: u64,
) -> Result<(VerificationReport, Option<Vec<ElementId>>), ConstantsError> {
    let started = Instant::now();
    let g = make_heisenberg(p)?;
    let target = 3 * p as usize - 3;
    let mut report = VerificationReport::new("zero-sum-free-search", g.family().to_string());
    report.seed = Some(seed);
    let mut found = None;
    for a in 0..attempts {
        let mut rng = instance_rng(seed, a);
        report.cases += 1;
        let s = greedy_zero_sum_free(&g, &mut rng, target, budget)?;
        report.bump(&format!("reached length {}", s.len()), 1);
        if s.len() == target && !s.has_product_one_subsequence(budget)? {
            found = Some(s.terms());
            report.notes.push(format!("zero-sum-free length {target}: {s}"));
            break;
        }
    }
    if found.is_none() {
        report.verdict = Verdict::Incomplete;
    }
    report.wall = started.elapsed();
    Ok((report, found))
}
