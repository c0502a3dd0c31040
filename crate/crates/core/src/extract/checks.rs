//! Exhaustive checks of the C3 selection solver and of the twin short
//! 3-sequence certificates, as verification reports.

use std::collections::BTreeSet;
use std::time::Instant;

use super::c3::{solve_c3_selection, C3Selection, ResidualForm};
use crate::constants::VerificationReport;
use crate::egz::{classify_short3, combine_twin_short3, egz_reorder_to_one, Short3Class};
use crate::group::{make_heisenberg, ElementId, GroupTable};
use crate::sequence::Sequence;

fn c3_sum(t: &[u8], pos: &[usize]) -> u8 {
    (pos.iter().map(|&i| t[i] as usize).sum::<usize>() % 3) as u8
}

fn distinct_in_range(pos: &[usize], n: usize) -> bool {
    let mut seen = vec![false; n];
    pos.iter().all(|&i| i < n && !std::mem::replace(&mut seen[i], true))
}

/// Every multiset of `len` exponents mod 3, sorted.
pub(crate) fn c3_multisets(len: usize) -> Vec<Vec<u8>> {
    let mut out = Vec::new();
    for a in 0..=len {
        for b in 0..=len - a {
            out.push([vec![0u8; a], vec![1u8; b], vec![2u8; len - a - b]].concat());
        }
    }
    out
}

fn check_selection(t: &[u8], report: &mut VerificationReport, forms: &mut BTreeSet<[u8; 3]>) -> Result<(), String> {
    let n = t.len();
    let total = c3_sum(t, &(0..n).collect::<Vec<_>>());
    let sel = solve_c3_selection(t, 27).map_err(|e| e.to_string())?.ok_or("no selection")?;
    match (n, sel) {
        (_, C3Selection::ZeroSum(p)) => {
            if p.len() != 27 || !distinct_in_range(&p, n) || c3_sum(t, &p) != 0 {
                return Err(format!("bad zero-sum selection {p:?}"));
            }
            report.bump(&format!("length {n} zero-sum"), 1);
        }
        (28, C3Selection::TwoSums { sum_u, sum_u2 }) => {
            // With no term equal to the total, no single removal sums to 0.
            if t.contains(&total) {
                return Err("two sums returned although a zero-sum selection exists".into());
            }
            for (p, s) in [(&sum_u, 1), (&sum_u2, 2)] {
                if p.len() != 27 || !distinct_in_range(p, n) || c3_sum(t, p) != s {
                    return Err(format!("bad selection with sum {s}: {p:?}"));
                }
            }
            report.bump("length 28 two sums", 1);
        }
        (27, C3Selection::Blocks { triples, residual, form }) => {
            if total == 0 || triples.len() != 8 {
                return Err("block decomposition of a zero-sum or wrong shape".into());
            }
            if triples.iter().any(|tr| t[tr[0]] != t[tr[1]] || t[tr[1]] != t[tr[2]]) {
                return Err("triple of unequal terms".into());
            }
            let mut all: Vec<usize> = triples.iter().flatten().copied().collect();
            all.extend(residual);
            if !distinct_in_range(&all, 27) || all.len() != 27 {
                return Err("blocks do not partition the sequence".into());
            }
            if ResidualForm::of(residual.map(|i| t[i])) != Some(form) {
                return Err(format!("residual does not have form {form:?}"));
            }
            forms.insert(form.exponents());
            report.bump(&format!("residual {:?}", form.exponents()), 1);
        }
        (_, other) => return Err(format!("unexpected outcome {other:?}")),
    }
    Ok(())
}

/// Run the C3 selection solver on every multiset of length 27 and 28 and
/// check each outcome directly.
pub fn verify_c3_selection() -> VerificationReport {
    let started = Instant::now();
    let mut report = VerificationReport::new("c3-selection", "cyclic 3".into());
    let mut forms = BTreeSet::new();
    for len in [28, 27] {
        for t in c3_multisets(len) {
            report.cases += 1;
            if let Err(e) = check_selection(&t, &mut report, &mut forms) {
                report.violation(format!("{t:?}: {e}"));
            }
        }
    }
    report.notes.push(format!("residual forms seen: {}", forms.len()));
    report.wall = started.elapsed();
    report
}

/// Non-central short 3-sequences of `H_27`, as sorted triples.
fn noncentral_short3(g: &GroupTable) -> Vec<[ElementId; 3]> {
    let mut out = Vec::new();
    for a in g.elements() {
        for b in g.elements().filter(|&b| b >= a) {
            for c in g.elements().filter(|&c| c >= b) {
                if matches!(classify_short3(g, [a, b, c]), Ok(k) if k != Short3Class::Central) {
                    out.push([a, b, c]);
                }
            }
        }
    }
    out
}

/// For every ordered pair of non-central short 3-sequences over `H_27`
/// meeting the hypothesis (four distinct non-central z-classes, or two
/// with a thick sequence), build the EGZ certificate, check it and
/// reorder the six terms to 1.
pub fn verify_twin_short3() -> VerificationReport {
    let started = Instant::now();
    let g = make_heisenberg(3).expect("H_27");
    let mut report = VerificationReport::new("twin-short3", g.family().to_string());
    let all = noncentral_short3(&g);
    for &u1 in &all {
        let k1 = classify_short3(&g, u1).expect("short 3-sequence");
        for &u2 in &all {
            let k2 = classify_short3(&g, u2).expect("short 3-sequence");
            let terms: Vec<ElementId> = u1.iter().chain(&u2).copied().collect();
            let classes: BTreeSet<usize> =
                terms.iter().filter(|&&t| !g.is_central(t)).map(|&t| g.z_class_of(t)).collect();
            let four = classes.len() >= 4;
            let thick = classes.len() >= 2 && (k1.is_thick() || k2.is_thick());
            if !(four || thick) {
                continue;
            }
            report.cases += 1;
            report.bump(if four { "four classes" } else { "thick, two or three classes" }, 1);
            let ok = combine_twin_short3(&g, u1, u2).is_some_and(|cert| {
                let seq = Sequence::from_terms(&g, cert.ambient.iter().copied());
                let w = egz_reorder_to_one(&g, &cert);
                w.len() == 6 && w.target == g.identity() && w.verify(&seq).is_ok()
            });
            if !ok {
                let names: Vec<&str> = terms.iter().map(|&t| g.name(t)).collect();
                report.violation(format!("no EGZ certificate for {}", names.join(" ")));
            }
        }
    }
    report.wall = started.elapsed();
    report
}
