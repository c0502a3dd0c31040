//! Seeded fuzz campaigns for the extractor and the EGZ reordering.
//!
//! Instance `i` draws from stream `i` of the master seed, so results do
//! not depend on the worker count.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use rand::Rng as _;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::h27::{extract_product_one_27, ExtractPolicy, Extraction, INPUT_LEN};
use super::{ExtractError, FailureDump};
use crate::constants::{default_workers, greedy_zero_sum_free, VerificationReport};
use crate::egz::{certify_egz, egz_reorder_to_one, EgzCertificate};
use crate::group::{heisenberg_coords, heisenberg_id, make_heisenberg, ElementId, GroupTable};
use crate::rng::{instance_rng, Rng};
use crate::sequence::Sequence;

pub const EXTRACT_FUZZ_SCHEMA: &str = "zerosum.extract-fuzz/v1";

/// Input generators for length-33 sequences over `H_27`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Family {
    Uniform,
    /// Terms from two non-central z-classes and the center.
    TwoClasses,
    /// Exactly three central terms.
    ThreeCentral,
    /// Many pairwise conjugate terms, a few other non-central terms, the
    /// rest central: every non-central block tends to be thick type A.
    ThickA,
    /// A zero-sum-free `T_0` of length 6, 26 identities and one random
    /// term: the length-32 extremal shape plus one.
    ExtremalPlusOne,
}

impl Family {
    pub const ALL: [Family; 5] =
        [Family::Uniform, Family::TwoClasses, Family::ThreeCentral, Family::ThickA, Family::ExtremalPlusOne];
    pub const ADVERSARIAL: [Family; 4] =
        [Family::TwoClasses, Family::ThreeCentral, Family::ThickA, Family::ExtremalPlusOne];

    pub fn label(self) -> &'static str {
        match self {
            Family::Uniform => "uniform",
            Family::TwoClasses => "two-classes",
            Family::ThreeCentral => "three-central",
            Family::ThickA => "thick-a",
            Family::ExtremalPlusOne => "extremal-plus-one",
        }
    }

    pub fn parse(s: &str) -> Option<Family> {
        Self::ALL.into_iter().find(|f| f.label() == s)
    }

    /// A length-33 sequence over `H_27`.
    pub fn sample(self, rng: &mut Rng) -> Vec<ElementId> {
        let central = |rng: &mut Rng| heisenberg_id(3, 0, 0, rng.gen_range(0..3));
        let non_central = |rng: &mut Rng| loop {
            let e = ElementId(rng.gen_range(0..27));
            let (i, j, _) = heisenberg_coords(3, e);
            if (i, j) != (0, 0) {
                return e;
            }
        };
        let mut t: Vec<ElementId> = match self {
            Family::Uniform => (0..INPUT_LEN).map(|_| ElementId(rng.gen_range(0..27))).collect(),
            Family::TwoClasses => {
                let dirs = [(1, 0), (0, 1), (1, 1), (1, 2)];
                let a = rng.gen_range(0..4);
                let b = (a + rng.gen_range(1..4)) % 4;
                (0..INPUT_LEN)
                    .map(|_| match rng.gen_range(0..5) {
                        0 => central(rng),
                        k => {
                            let (i, j) = dirs[if k <= 2 { a } else { b }];
                            let s = rng.gen_range(1..3);
                            heisenberg_id(3, i * s, j * s, rng.gen_range(0..3))
                        }
                    })
                    .collect()
            }
            Family::ThreeCentral => {
                let mut t: Vec<ElementId> = (0..3).map(|_| central(rng)).collect();
                t.extend((0..INPUT_LEN - 3).map(|_| non_central(rng)));
                t
            }
            Family::ThickA => {
                let g = non_central(rng);
                let (i, j, _) = heisenberg_coords(3, g);
                let k = rng.gen_range(3..=30);
                let mut t: Vec<ElementId> = (0..k).map(|_| heisenberg_id(3, i, j, rng.gen_range(0..3))).collect();
                t.extend((0..3).map(|_| non_central(rng)));
                t.extend((0..INPUT_LEN - k - 3).map(|_| central(rng)));
                t
            }
            Family::ExtremalPlusOne => {
                let g = make_heisenberg(3).expect("H_27");
                let mut t0 = Vec::new();
                while t0.len() < 6 {
                    t0 = greedy_zero_sum_free(&g, rng, 6, 1 << 12).expect("six terms fit the budget").terms();
                }
                t0.extend([g.identity(); 26]);
                t0.push(ElementId(rng.gen_range(0..27)));
                t0
            }
        };
        shuffle(&mut t, rng);
        t
    }
}

fn shuffle(t: &mut [ElementId], rng: &mut Rng) {
    use rand::seq::SliceRandom;
    t.shuffle(rng);
}

/// Summary of an extraction campaign. Timings are not serialized so
/// that reports are reproducible.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ExtractFuzzSummary {
    pub schema: String,
    pub master_seed: u64,
    pub trials: u64,
    pub by_family: BTreeMap<String, u64>,
    pub by_layer: BTreeMap<String, u64>,
    pub by_method: BTreeMap<String, u64>,
    pub heuristic_region: u64,
    pub failures: Vec<FailureDump>,
    #[serde(skip)]
    pub median_time: Duration,
    #[serde(skip)]
    pub max_time: Duration,
    #[serde(skip)]
    pub wall: Duration,
}

impl ExtractFuzzSummary {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    /// Share of instances resolved by the first layer.
    pub fn first_layer_fraction(&self) -> f64 {
        let l1 = self.by_layer.get("L1").copied().unwrap_or(0);
        if self.trials == 0 {
            0.0
        } else {
            l1 as f64 / self.trials as f64
        }
    }
}

/// Run `trials` extractions; instance `i` draws from `families[i mod n]`.
pub fn fuzz_extract27(
    trials: u64,
    seed: u64,
    families: &[Family],
    workers: Option<usize>,
) -> Result<ExtractFuzzSummary, ExtractError> {
    if families.is_empty() {
        return Err(ExtractError::Precondition("no input families".into()));
    }
    let started = Instant::now();
    let g = make_heisenberg(3).expect("H_27");
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.unwrap_or_else(default_workers).max(1))
        .build()
        .map_err(|e| ExtractError::Internal(e.to_string()))?;
    type Outcome = (Family, Result<Extraction, ExtractError>, Duration);
    let outcomes: Vec<Outcome> = pool.install(|| {
        (0..trials)
            .into_par_iter()
            .map(|i| {
                let fam = families[(i % families.len() as u64) as usize];
                let mut rng = instance_rng(seed, i);
                let terms = fam.sample(&mut rng);
                let policy = ExtractPolicy { seed: seed ^ i, ..Default::default() };
                let t0 = Instant::now();
                let r = extract_product_one_27(&g, &terms, &policy);
                (fam, r, t0.elapsed())
            })
            .collect()
    });
    let mut s = ExtractFuzzSummary {
        schema: EXTRACT_FUZZ_SCHEMA.into(),
        master_seed: seed,
        trials,
        by_family: BTreeMap::new(),
        by_layer: BTreeMap::new(),
        by_method: BTreeMap::new(),
        heuristic_region: 0,
        failures: Vec::new(),
        median_time: Duration::ZERO,
        max_time: Duration::ZERO,
        wall: Duration::ZERO,
    };
    let mut times = Vec::with_capacity(outcomes.len());
    for (fam, r, t) in outcomes {
        *s.by_family.entry(fam.label().into()).or_insert(0) += 1;
        times.push(t);
        match r {
            Ok(x) => {
                *s.by_layer.entry(x.layer.label().into()).or_insert(0) += 1;
                *s.by_method.entry(x.method.clone()).or_insert(0) += 1;
                s.heuristic_region += x.heuristic_region as u64;
            }
            Err(ExtractError::ExtractionFailed(d)) => s.failures.push(*d),
            Err(e) => return Err(e),
        }
    }
    times.sort_unstable();
    s.median_time = times.get(times.len() / 2).copied().unwrap_or_default();
    s.max_time = times.last().copied().unwrap_or_default();
    s.wall = started.elapsed();
    Ok(s)
}

/// A random sequence over `H_{p³}` of length `len` with central product.
pub fn random_central_sequence(g: &GroupTable, rng: &mut Rng, len: usize) -> Vec<ElementId> {
    let p = g.heisenberg_prime().expect("Heisenberg group") as usize;
    let mut t: Vec<ElementId> = (0..len - 1).map(|_| ElementId(rng.gen_range(0..g.order() as u16))).collect();
    let (si, sj) = t.iter().fold((0, 0), |(a, b), &e| {
        let (i, j, _) = heisenberg_coords(p, e);
        (a + i, b + j)
    });
    t.push(heisenberg_id(p, (p - si % p) % p, (p - sj % p) % p, rng.gen_range(0..p)));
    t
}

/// A random certified EGZ sequence of length `len`, drawing up to
/// `attempts` central-product sequences.
pub fn random_egz_sequence(g: &GroupTable, rng: &mut Rng, len: usize, attempts: u32) -> Option<EgzCertificate> {
    (0..attempts).find_map(|_| certify_egz(g, &random_central_sequence(g, rng, len)))
}

/// Lengths for [`fuzz_egz`]: `p + 1 ..= 3p + 1`.
fn egz_len(p: usize, rng: &mut Rng) -> usize {
    rng.gen_range(p + 1..=3 * p + 1)
}

/// Reorder random certified EGZ sequences over `H_{p³}` to product 1.
/// Every ordering is re-multiplied; for lengths up to 8 the exact
/// `π(S)` agrees that 1 is reachable.
pub fn fuzz_egz(p: u32, trials: u64, seed: u64, workers: Option<usize>) -> Result<VerificationReport, ExtractError> {
    let started = Instant::now();
    let g = make_heisenberg(p).map_err(|e| ExtractError::Precondition(e.to_string()))?;
    let mut report = VerificationReport::new("egz-reorder", g.family().to_string());
    report.seed = Some(seed);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.unwrap_or_else(default_workers).max(1))
        .build()
        .map_err(|e| ExtractError::Internal(e.to_string()))?;
    let results: Vec<Result<(usize, bool), String>> = pool.install(|| {
        (0..trials)
            .into_par_iter()
            .map(|i| {
                let mut rng = instance_rng(seed, i);
                let len = egz_len(p as usize, &mut rng);
                let cert = random_egz_sequence(&g, &mut rng, len, 1000).ok_or(format!("no EGZ sequence at {i}"))?;
                let w = std::panic::catch_unwind(|| egz_reorder_to_one(&g, &cert))
                    .map_err(|_| format!("reorder failed on {:?}", cert.ambient))?;
                let seq = Sequence::from_terms(&g, cert.ambient.iter().copied());
                w.verify(&seq).map_err(|e| e.to_string())?;
                let oracle = if len <= 8 {
                    let pi = seq.pi_set(1 << 20).map_err(|e| e.to_string())?;
                    if !pi.contains(g.identity()) {
                        return Err(format!("oracle disagrees on {:?}", cert.ambient));
                    }
                    true
                } else {
                    false
                };
                Ok((len, oracle))
            })
            .collect()
    });
    for r in results {
        report.cases += 1;
        match r {
            Ok((len, oracle)) => {
                report.bump("reordered to 1", 1);
                report.bump("oracle checked", oracle as u64);
                report.bump(&format!("length {len:02}"), 1);
            }
            Err(e) => report.violation(e),
        }
    }
    report.wall = started.elapsed();
    Ok(report)
}
