//! Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any
//! criterion fails. Tolerances are fixed below.

use std::time::{Duration, Instant};

use rand::Rng as _;

use zerosum::constants::{
    egz_constant_s, gao_constant_e, lower_bound_certificate_e, olson_formula, small_davenport,
    verify_cyclic_multiplicity_bound, verify_extremal_coverage, verify_structured_theorems, SearchOptions,
    SearchReport, Status, VerificationReport,
};
use zerosum::extract::{fuzz_egz, fuzz_extract27, validate_seven_term_tables, verify_c3_selection, Family};
use zerosum::group::{automorphisms, make_abelian_p_group, make_cyclic, make_heisenberg};
use zerosum::rng::instance_rng;
use zerosum::sequence::text::parse_sequence;
use zerosum::sequence::DEFAULT_STATE_BUDGET;
use zerosum::{ElementId, GroupTable};

const UNIFORM_TRIALS: u64 = 100_000;
const ADVERSARIAL_TRIALS: u64 = 10_000;
const MEDIAN_LIMIT: Duration = Duration::from_millis(50);
const EGZ_TRIALS_H27: u64 = 10_000;
const EGZ_TRIALS_H125: u64 = 1_000;
const EXHAUSTIVE_SUITE_LIMIT: Duration = Duration::from_secs(600);
const DAVENPORT_LIMIT: Duration = Duration::from_secs(1800);
const SEED: u64 = 20_241_016;

type Check = fn() -> (bool, String);

struct Line {
    id: u32,
    name: &'static str,
    pass: bool,
    detail: String,
    wall: Duration,
}

fn opts() -> SearchOptions {
    SearchOptions::default()
}

/// Products of all orderings of every non-empty subset of positions,
/// by bitmask. Independent of the library's multiplicity DP.
fn brute_has_product_one(g: &GroupTable, t: &[ElementId], len: Option<usize>) -> bool {
    let n = t.len();
    assert!(n <= 12);
    let mut reach: Vec<Vec<bool>> = vec![vec![false; g.order()]; 1 << n];
    reach[0][g.identity().0 as usize] = true;
    for mask in 1usize..1 << n {
        for i in (0..n).filter(|i| mask >> i & 1 == 1) {
            let prev = mask ^ (1 << i);
            for a in 0..g.order() {
                if reach[prev][a] {
                    let p = g.mul(ElementId(a as u16), t[i]);
                    reach[mask][p.0 as usize] = true;
                }
            }
        }
    }
    (1usize..1 << n)
        .filter(|m| len.is_none_or(|k| m.count_ones() as usize == k))
        .any(|m| reach[m][g.identity().0 as usize])
}

fn witness_terms(g: &GroupTable, r: &SearchReport) -> Vec<ElementId> {
    parse_sequence(g, &r.witnesses[0]).expect("witness parses").terms()
}

fn timed(id: u32, name: &'static str, f: impl FnOnce() -> (bool, String)) -> Line {
    let started = Instant::now();
    let (pass, detail) = f();
    Line { id, name, pass, detail, wall: started.elapsed() }
}

fn report_ok(r: &VerificationReport) -> bool {
    r.passed() && r.violations.is_empty()
}

fn davenport_h27() -> (bool, String) {
    let started = Instant::now();
    let g = make_heisenberg(3).unwrap();
    let r = small_davenport(&g, &opts()).unwrap();
    let w = witness_terms(&g, &r);
    let witness_ok = w.len() == 6 && !brute_has_product_one(&g, &w, None);
    let no_seven = r.canonical_by_length.get(7).copied().unwrap_or(0) == 0;
    // Spot check the other half against the oracle.
    let mut rng = instance_rng(SEED, 1);
    let sampled = (0..2_000).all(|_| {
        let t: Vec<ElementId> = (0..7).map(|_| ElementId(rng.gen_range(0..27))).collect();
        brute_has_product_one(&g, &t, None)
    });
    let pass = r.value == 6
        && r.status == Status::Exact
        && witness_ok
        && no_seven
        && sampled
        && started.elapsed() < DAVENPORT_LIMIT;
    (
        pass,
        format!(
            "d = {} ({:?}), witness {}, oracle-checked witness {witness_ok}, 2000 random length-7 oracle {sampled}",
            r.value, r.status, r.witnesses[0]
        ),
    )
}

fn olson_agreement() -> (bool, String) {
    let cases: [(u32, &[u32]); 6] = [(3, &[1]), (3, &[2]), (3, &[1, 1]), (2, &[1, 1]), (2, &[1, 1, 1]), (3, &[1, 2])];
    let mut pass = true;
    let mut parts = Vec::new();
    for (p, exps) in cases {
        let g = make_abelian_p_group(p, exps).unwrap();
        let r = small_davenport(&g, &opts()).unwrap();
        let want = olson_formula(p as u64, exps) - 1;
        let ok = r.value as u64 == want && r.status == Status::Exact;
        pass &= ok;
        parts.push(format!("{}: {}/{}", g.family(), r.value, want));
    }
    (pass, parts.join(", "))
}

fn small_gao() -> (bool, String) {
    let g = make_abelian_p_group(3, &[1, 1]).unwrap();
    let s = egz_constant_s(&g, &opts()).unwrap();
    let e = gao_constant_e(&g, &opts()).unwrap();
    // Oracle on the extremal witnesses: no subsequence of the forbidden length.
    let sw = witness_terms(&g, &s);
    let ew = witness_terms(&g, &e);
    let s_oracle = sw.len() == 8 && !brute_has_product_one(&g, &sw, Some(3));
    let e_oracle = ew.len() == 12 && !brute_has_product_one(&g, &ew, Some(9));
    let pass =
        s.value == 9 && e.value == 13 && s.status == Status::Exact && e.status == Status::Exact && s_oracle && e_oracle;
    (pass, format!("s = {}, E = {}, witnesses oracle-checked {s_oracle}/{e_oracle}", s.value, e.value))
}

fn gao_lower_bound() -> (bool, String) {
    let g = make_heisenberg(3).unwrap();
    let d = small_davenport(&g, &opts()).unwrap();
    let t0 = witness_terms(&g, &d);
    let cert = lower_bound_certificate_e(&g, &t0, DEFAULT_STATE_BUDGET).unwrap();
    let identities = cert.sequence.iter().filter(|&&t| t == g.identity()).count();
    let base_free = !brute_has_product_one(&g, &cert.base, None);
    let pass = cert.sequence.len() == 32 && cert.bound == 33 && identities == 26 && base_free;
    (pass, format!("length {}, E >= {}, base zero-sum-free by oracle {base_free}", cert.sequence.len(), cert.bound))
}

fn extractor() -> (bool, String) {
    let u = fuzz_extract27(UNIFORM_TRIALS, SEED, &[Family::Uniform], None).unwrap();
    let a = fuzz_extract27(ADVERSARIAL_TRIALS, SEED + 1, &Family::ADVERSARIAL, None).unwrap();
    let median = u.median_time.max(a.median_time);
    let pass = u.passed()
        && a.passed()
        && u.trials == UNIFORM_TRIALS
        && a.trials == ADVERSARIAL_TRIALS
        && median < MEDIAN_LIMIT;
    (
        pass,
        format!(
            "uniform {} ({} failures, L1 share {:.3}), adversarial {} ({} failures, layers {:?}), median {:.3}ms < {}ms, max {:.3}ms",
            u.trials,
            u.failures.len(),
            u.first_layer_fraction(),
            a.trials,
            a.failures.len(),
            a.by_layer,
            median.as_secs_f64() * 1e3,
            MEDIAN_LIMIT.as_millis(),
            u.max_time.max(a.max_time).as_secs_f64() * 1e3
        ),
    )
}

fn egz_reordering() -> (bool, String) {
    let r3 = fuzz_egz(3, EGZ_TRIALS_H27, SEED, None).unwrap();
    let r5 = fuzz_egz(5, EGZ_TRIALS_H125, SEED, None).unwrap();
    let count = |r: &VerificationReport, k: &str| r.counters.get(k).copied().unwrap_or(0);
    let pass = report_ok(&r3)
        && report_ok(&r5)
        && count(&r3, "reordered to 1") == EGZ_TRIALS_H27
        && count(&r5, "reordered to 1") == EGZ_TRIALS_H125
        && count(&r3, "oracle checked") > 0
        && count(&r5, "oracle checked") > 0;
    (
        pass,
        format!(
            "H_27 {}/{} (oracle {}), H_125 {}/{} (oracle {})",
            count(&r3, "reordered to 1"),
            EGZ_TRIALS_H27,
            count(&r3, "oracle checked"),
            count(&r5, "reordered to 1"),
            EGZ_TRIALS_H125,
            count(&r5, "oracle checked")
        ),
    )
}

fn exhaustive_suites() -> (bool, String) {
    let started = Instant::now();
    let mut reports = Vec::new();
    for n in [3, 5, 7, 9, 11, 13] {
        reports.push(verify_cyclic_multiplicity_bound(n, &opts()).unwrap());
    }
    for g in [make_cyclic(9).unwrap(), make_abelian_p_group(3, &[1, 1]).unwrap(), make_heisenberg(3).unwrap()] {
        reports.push(verify_extremal_coverage(&g, &opts()).unwrap());
    }
    reports.push(verify_c3_selection());
    reports.push(validate_seven_term_tables());
    reports.push(verify_structured_theorems(&opts()).unwrap());
    let wall = started.elapsed();
    let bad: Vec<String> =
        reports.iter().filter(|r| !report_ok(r)).map(|r| format!("{} on {}", r.check, r.group)).collect();
    let cases: u64 = reports.iter().map(|r| r.cases).sum();
    let pass = bad.is_empty() && wall < EXHAUSTIVE_SUITE_LIMIT;
    (
        pass,
        format!(
            "{} suites, {cases} cases, failing {bad:?}, {:.1}s < {}s",
            reports.len(),
            wall.as_secs_f64(),
            EXHAUSTIVE_SUITE_LIMIT.as_secs()
        ),
    )
}

fn structure() -> (bool, String) {
    let g = make_heisenberg(3).unwrap();
    let auts = automorphisms(&g).unwrap().len();
    let got = (g.order(), g.exponent(), g.center().len(), g.conjugacy_classes().len(), g.z_classes().len(), auts);
    (got == (27, 3, 3, 11, 5, 432), format!("(order, exponent, |Z|, classes, z-classes, |Aut|) = {got:?}"))
}

fn json<T: serde::Serialize>(v: &T) -> String {
    serde_json::to_string(v).expect("serializable report")
}

fn determinism() -> (bool, String) {
    let a = fuzz_extract27(2_000, SEED, &Family::ALL, Some(1)).unwrap();
    let b = fuzz_extract27(2_000, SEED, &Family::ALL, Some(4)).unwrap();
    let c = fuzz_extract27(2_000, SEED, &Family::ALL, Some(4)).unwrap();
    let extract_same = json(&a) == json(&b) && json(&b) == json(&c);
    let g = make_heisenberg(3).unwrap();
    let d1 = small_davenport(&g, &SearchOptions { workers: Some(1), ..opts() }).unwrap();
    let d2 = small_davenport(&g, &SearchOptions { workers: Some(3), ..opts() }).unwrap();
    let search_same = json(&d1) == json(&d2);
    let e1 = fuzz_egz(3, 500, SEED, Some(2)).unwrap();
    let e2 = fuzz_egz(3, 500, SEED, Some(2)).unwrap();
    let egz_same = json(&e1) == json(&e2);
    (
        extract_same && search_same && egz_same,
        format!("extract fuzz {extract_same}, search {search_same}, egz fuzz {egz_same}"),
    )
}

fn main() {
    let started = Instant::now();
    let checks: Vec<(u32, &'static str, Check)> = vec![
        (1, "d(H_27) = 6 by exhaustive search, with witness", davenport_h27),
        (2, "searched d matches the Olson formula on abelian p-groups", olson_agreement),
        (3, "s(C_3^2) = 9 and E(C_3^2) = 13", small_gao),
        (4, "verified length-32 sequence over H_27 without a product-one subsequence of length 27", gao_lower_bound),
        (5, "length-27 extraction over H_27 never fails", extractor),
        (6, "EGZ sequences over H_27 and H_125 reorder to 1", egz_reordering),
        (7, "exhaustive suites hold within the time limit", exhaustive_suites),
        (8, "structural counts of H_27", structure),
        (9, "seeded reports are byte-identical", determinism),
    ];
    let mut failed = 0;
    for (id, name, f) in checks {
        let line = timed(id, name, f);
        let mark = if line.pass { "PASS" } else { "FAIL" };
        failed += !line.pass as u32;
        println!("[{mark}] {}. {} :: {} ({:.1}s)", line.id, line.name, line.detail, line.wall.as_secs_f64());
    }
    println!("acceptance: {} failed, {:.1}s total", failed, started.elapsed().as_secs_f64());
    if failed > 0 {
        std::process::exit(1);
    }
}
