//! Exhaustive check of the explicit product-one and EGZ constructions
//! used for seven non-central terms over `H_27`.

use crate::constants::VerificationReport;
use crate::egz::{egz_reorder_to_one, is_principal_part, EgzCertificate};
use crate::group::{heisenberg_id, make_heisenberg, ElementId, GroupTable};
use crate::sequence::ordered_product;

/// `(u2, u3)`, `(w5, w6)` as exponents of `v`, required `[g4, g1]` if
/// any, and the 1-based term indices of the product-one sequence.
type ThreeThreeRow = ((u32, u32), (u32, u32), Option<u32>, &'static [usize]);

const THREE_THREE_ONE: &[ThreeThreeRow] = &[
    ((1, 1), (0, 1), None, &[2, 3, 4, 6]),
    ((1, 1), (0, 2), None, &[1, 3, 4, 6]),
    ((1, 1), (1, 1), None, &[1, 3, 5, 6]),
    ((1, 1), (2, 2), None, &[2, 3, 5, 6]),
    ((2, 2), (0, 1), None, &[1, 3, 4, 6]),
    ((2, 2), (0, 2), None, &[2, 3, 4, 6]),
    ((2, 2), (1, 1), None, &[1, 3, 4, 6]),
    ((2, 2), (2, 2), None, &[1, 3, 5, 6]),
    ((0, 1), (0, 2), None, &[1, 3, 4, 6]),
    ((0, 1), (0, 1), Some(2), &[1, 4, 3, 6]),
    ((0, 1), (0, 1), Some(1), &[4, 1, 6, 3]),
    ((0, 2), (0, 1), None, &[1, 3, 4, 6]),
    ((0, 2), (0, 2), Some(2), &[4, 1, 6, 3]),
    ((0, 2), (0, 2), Some(1), &[1, 4, 3, 6]),
];

/// Conditions on `(u2, u3, v7, [g6, g1])` for the `(3,2,2,0)` table,
/// and the 1-based indices of the product-one sequence.
#[derive(Clone, Copy)]
enum TwoTwoCond {
    U3NeV7,
    U2EqV7,
    U2EqV7Sq,
    U2OneCommU3,
    U2OneCommU3Sq,
}

const THREE_TWO_TWO: &[(TwoTwoCond, &[usize])] = &[
    (TwoTwoCond::U3NeV7, &[1, 3, 6, 7]),
    (TwoTwoCond::U2EqV7, &[2, 3, 6, 7]),
    (TwoTwoCond::U2EqV7Sq, &[2, 3]),
    (TwoTwoCond::U2OneCommU3, &[3, 6, 1, 7]),
    (TwoTwoCond::U2OneCommU3Sq, &[1, 6, 3, 7]),
];

fn non_central_by_class(g: &GroupTable) -> Vec<Vec<ElementId>> {
    let mut by = vec![Vec::new(); 5];
    for e in g.elements() {
        by[g.z_class_index(e).expect("Heisenberg group")].push(e);
    }
    by
}

fn pick(g: &[ElementId], idx: &[usize]) -> Vec<ElementId> {
    idx.iter().map(|&i| g[i - 1]).collect()
}

fn names(g: &GroupTable, t: &[ElementId]) -> String {
    t.iter().map(|&e| g.name(e).to_string()).collect::<Vec<_>>().join("*")
}

fn check_three_three_one(g: &GroupTable, classes: &[Vec<ElementId>], report: &mut VerificationReport) {
    let z = |k: u32| heisenberg_id(3, 0, 0, k as usize);
    for v in [z(1), z(2)] {
        for j1 in 1..5 {
            for j2 in (1..5).filter(|&j| j != j1) {
                for &g1 in &classes[j1] {
                    for &g4 in &classes[j2] {
                        for &((u2, u3), (w5, w6), comm, seq) in THREE_THREE_ONE {
                            let c = g.commutator(g4, g1);
                            if comm.is_some_and(|k| c != g.pow(v, k as u64)) {
                                continue;
                            }
                            let vp = |k: u32| g.pow(v, k as u64);
                            let terms = [
                                g1,
                                g.mul(g1, vp(u2)),
                                g.mul(g.pow(g1, 2), vp(u3)),
                                g4,
                                g.mul(g4, vp(w5)),
                                g.mul(g.pow(g4, 2), vp(w6)),
                            ];
                            report.cases += 1;
                            report.bump("(3,3,1,0) table rows", 1);
                            let t = pick(&terms, seq);
                            if ordered_product(g, &t) != g.identity() {
                                report.violation(format!(
                                    "(3,3,1,0) v={} g1={} g4={} row {:?}: {} != 1",
                                    g.name(v),
                                    g.name(g1),
                                    g.name(g4),
                                    ((u2, u3), (w5, w6), comm),
                                    names(g, &t)
                                ));
                            }
                        }
                    }
                }
            }
        }
    }
}

fn check_three_two_two(g: &GroupTable, classes: &[Vec<ElementId>], report: &mut VerificationReport) {
    let z = |k: usize| heisenberg_id(3, 0, 0, k);
    for j1 in 1..5 {
        for j3 in (1..5).filter(|&j| j != j1) {
            for &g1 in &classes[j1] {
                for &g6 in &classes[j3] {
                    for u2 in (0..3).map(z) {
                        for u3 in (1..3).map(z) {
                            for v7 in (1..3).map(z) {
                                let c = g.commutator(g6, g1);
                                for &(cond, seq) in THREE_TWO_TWO {
                                    let holds = match cond {
                                        TwoTwoCond::U3NeV7 => u3 != v7,
                                        TwoTwoCond::U2EqV7 => u3 == v7 && u2 == v7,
                                        TwoTwoCond::U2EqV7Sq => u3 == v7 && u2 == g.pow(v7, 2),
                                        TwoTwoCond::U2OneCommU3 => u3 == v7 && u2 == g.identity() && c == u3,
                                        TwoTwoCond::U2OneCommU3Sq => {
                                            u3 == v7 && u2 == g.identity() && c == g.pow(u3, 2)
                                        }
                                    };
                                    if !holds {
                                        continue;
                                    }
                                    // g4, g5 play no part in these rows.
                                    let terms = [
                                        g1,
                                        g.mul(g1, u2),
                                        g.mul(g.pow(g1, 2), u3),
                                        g.identity(),
                                        g.identity(),
                                        g6,
                                        g.mul(g.pow(g6, 2), v7),
                                    ];
                                    report.cases += 1;
                                    report.bump("(3,2,2,0) table rows", 1);
                                    let t = pick(&terms, seq);
                                    if ordered_product(g, &t) != g.identity() {
                                        report.violation(format!(
                                            "(3,2,2,0) g1={} g6={} u2={} u3={} v7={}: {} != 1",
                                            g.name(g1),
                                            g.name(g6),
                                            g.name(u2),
                                            g.name(u3),
                                            g.name(v7),
                                            names(g, &t)
                                        ));
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }
}

/// Check that `seq` (1-based indices into `terms`) has central product,
/// that `principal` is a principal part, and that the reordering reaches 1.
fn check_egz(
    g: &GroupTable,
    terms: &[ElementId],
    seq: &[usize],
    principal: [usize; 3],
    what: &str,
    report: &mut VerificationReport,
) {
    report.cases += 1;
    report.bump(what, 1);
    let t = pick(terms, seq);
    let pr: Vec<usize> =
        principal.iter().map(|p| seq.iter().position(|s| s == p).expect("principal in sequence")).collect();
    let ok = g.is_central(ordered_product(g, &t))
        && is_principal_part(g, &pick(terms, &principal))
        && EgzCertificate::new(g, t.clone(), pr).map(|c| egz_reorder_to_one(g, &c)).is_ok();
    if !ok {
        report.violation(format!("{what}: terms {} sequence {:?} is not EGZ", names(g, terms), seq));
    }
}

fn check_three_two_one_one(g: &GroupTable, classes: &[Vec<ElementId>], report: &mut VerificationReport) {
    let z = |k: usize| heisenberg_id(3, 0, 0, k);
    let central = |x: ElementId| g.is_central(x);
    for j1 in 1..5 {
        let others: Vec<usize> = (1..5).filter(|&j| j != j1).collect();
        for &j2 in &others {
            let rest: Vec<usize> = others.iter().copied().filter(|&j| j != j2).collect();
            for (j3, j4) in [(rest[0], rest[1]), (rest[1], rest[0])] {
                for &g1 in &classes[j1] {
                    for u2 in (0..3).map(z) {
                        for u3 in (1..3).map(z) {
                            if g.mul(u2, u3) == g.identity() {
                                continue;
                            }
                            let g2 = g.mul(g1, u2);
                            let g3 = g.mul(g.pow(g1, 2), u3);
                            for &g4 in &classes[j2] {
                                for &g5 in &classes[j2] {
                                    for &g6 in &classes[j3] {
                                        for &g7 in &classes[j4] {
                                            let t = [g1, g2, g3, g4, g5, g6, g7];
                                            let g67 = g.mul(g6, g7);
                                            let k67 = g.z_class_index(g67).expect("Heisenberg group");
                                            if k67 == j2 {
                                                if central(g.mul(g4, g67)) {
                                                    check_egz(
                                                        g,
                                                        &t,
                                                        &[6, 7, 1, 3, 4],
                                                        [6, 7, 1],
                                                        "(3,2,1,1) g4g6g7 central",
                                                        report,
                                                    );
                                                } else if central(g.mul(g5, g67)) {
                                                    check_egz(
                                                        g,
                                                        &t,
                                                        &[6, 7, 1, 3, 5],
                                                        [6, 7, 1],
                                                        "(3,2,1,1) g5g6g7 central",
                                                        report,
                                                    );
                                                } else {
                                                    check_egz(
                                                        g,
                                                        &t,
                                                        &[4, 5, 1, 3, 6, 7],
                                                        [4, 5, 1],
                                                        "(3,2,1,1) g4g5g6g7 central",
                                                        report,
                                                    );
                                                }
                                            } else if k67 == j1 {
                                                if central(g.mul(g.inv(g1), g67)) {
                                                    check_egz(
                                                        g,
                                                        &t,
                                                        &[1, 2, 6, 7],
                                                        [1, 2, 6],
                                                        "(3,2,1,1) g6g7 ~ g1",
                                                        report,
                                                    );
                                                } else {
                                                    check_egz(
                                                        g,
                                                        &t,
                                                        &[1, 2, 6, 7, 3],
                                                        [1, 2, 6],
                                                        "(3,2,1,1) g6g7 ~ g1^2",
                                                        report,
                                                    );
                                                }
                                            } else {
                                                report.violation(format!(
                                                    "(3,2,1,1): g6g7 outside the first two classes for {}",
                                                    names(g, &t)
                                                ));
                                            }
                                        }
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }
}

/// Multiply out every table row and EGZ claim of the seven-term case
/// analysis over `H_27` for all parameter values meeting its conditions.
pub fn validate_seven_term_tables() -> VerificationReport {
    let started = std::time::Instant::now();
    let g = make_heisenberg(3).expect("H_27");
    let mut report = VerificationReport::new("seven-term case tables", g.family().to_string());
    let classes = non_central_by_class(&g);
    check_three_three_one(&g, &classes, &mut report);
    check_three_two_two(&g, &classes, &mut report);
    check_three_two_one_one(&g, &classes, &mut report);
    report.wall = started.elapsed();
    report
}
