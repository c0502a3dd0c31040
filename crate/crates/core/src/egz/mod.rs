//! EGZ sequences over `H_{p³}` and the constructive reordering to 1.
//!
//! A sequence with central product is EGZ when it contains a principal
//! part `g_1 ⋯ g_{p-1} · g_p`: `g_p` commutes with no consecutive product
//! `g_α ⋯ g_β`. The commutators `w_i = [g_p, g_i ⋯ g_{p-1}]` are then the
//! `p - 1` distinct non-trivial central elements, so moving `g_p` in front
//! of `g_i` for the right `i` cancels any central value of the whole
//! product.
//!
//! All positions are indices into the caller's term list, so repeated
//! elements are never ambiguous.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::group::{ElementId, GroupTable};
use crate::sequence::{ordered_product, Sequence, Witness};

#[cfg(test)]
mod tests;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EgzError {
    #[error("operation requires a Heisenberg group")]
    NotHeisenberg,
    #[error("operation requires the Heisenberg group of order 27")]
    NotH27,
    #[error("product of the terms is not central")]
    NotCentral,
    #[error("precondition violated: {0}")]
    Precondition(String),
}

fn prime_of(g: &GroupTable) -> Result<usize, EgzError> {
    g.heisenberg_prime().map(|p| p as usize).ok_or(EgzError::NotHeisenberg)
}

/// Whether `parts[..p-1] · parts[p-1]` (ordered) is a principal part.
pub fn is_principal_part(g: &GroupTable, parts: &[ElementId]) -> bool {
    let Some(p) = g.heisenberg_prime() else {
        return false;
    };
    let p = p as usize;
    if parts.len() != p {
        return false;
    }
    let last = parts[p - 1];
    (0..p - 1).all(|a| {
        let mut acc = g.identity();
        (a..p - 1).all(|b| {
            acc = g.mul(acc, parts[b]);
            !g.commutes(last, acc)
        })
    })
}

/// A principal part of `terms`, as `p` distinct positions in the order
/// `g_1, …, g_{p-1}, g_p`.
///
/// Among all principal parts, the one with the most distinct z-classes
/// wins, ties broken by the lexicographically smallest element ids.
pub fn find_principal_part(g: &GroupTable, terms: &[ElementId]) -> Option<Vec<usize>> {
    let p = g.heisenberg_prime()? as usize;
    if terms.len() < p {
        return None;
    }
    // Work on distinct non-central values with multiplicities.
    let mut values: Vec<ElementId> = terms.iter().copied().filter(|&t| !g.is_central(t)).collect();
    values.sort();
    values.dedup();
    let mult: Vec<usize> = values.iter().map(|v| terms.iter().filter(|&&t| t == *v).count()).collect();
    struct Search<'a> {
        g: &'a GroupTable,
        p: usize,
        values: &'a [ElementId],
        used: Vec<usize>,
        chosen: Vec<usize>,
        best: Option<(usize, Vec<usize>)>,
    }

    impl Search<'_> {
        fn classes(&self, picks: &[usize]) -> usize {
            let mut c: Vec<usize> = picks.iter().map(|&k| self.g.z_class_of(self.values[k])).collect();
            c.sort();
            c.dedup();
            c.len()
        }

        // Choose the last term, then g_1.. with suffix checks against it.
        fn run(&mut self, mult: &[usize]) {
            for last in 0..self.values.len() {
                self.used[last] += 1;
                self.chosen.clear();
                self.extend(mult, last);
                self.used[last] -= 1;
            }
        }

        fn extend(&mut self, mult: &[usize], last: usize) {
            let k = self.chosen.len();
            if k == self.p - 1 {
                let mut picks = self.chosen.clone();
                picks.push(last);
                let score = self.classes(&picks);
                let better = match &self.best {
                    None => true,
                    Some((s, b)) => score > *s || (score == *s && picks < *b),
                };
                if better {
                    self.best = Some((score, picks));
                }
                return;
            }
            let gl = self.values[last];
            for c in 0..self.values.len() {
                if self.used[c] >= mult[c] {
                    continue;
                }
                // Suffix products ending at the new term.
                let mut acc = self.values[c];
                let mut ok = !self.g.commutes(gl, acc);
                for a in (0..k).rev() {
                    if !ok {
                        break;
                    }
                    acc = self.g.mul(self.values[self.chosen[a]], acc);
                    ok = !self.g.commutes(gl, acc);
                }
                if !ok {
                    continue;
                }
                self.used[c] += 1;
                self.chosen.push(c);
                self.extend(mult, last);
                self.chosen.pop();
                self.used[c] -= 1;
            }
        }
    }

    let mut s = Search { g, p, values: &values, used: vec![0; values.len()], chosen: Vec::new(), best: None };
    s.run(&mult);
    let (_, picks) = s.best?;
    // Map value picks back to distinct positions.
    let mut taken = vec![false; terms.len()];
    let positions = picks
        .iter()
        .map(|&k| {
            let pos = (0..terms.len()).find(|&i| !taken[i] && terms[i] == values[k]).expect("multiplicity respected");
            taken[pos] = true;
            pos
        })
        .collect();
    Some(positions)
}

/// Evidence that a central-product sequence contains an EGZ subsequence.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EgzCertificate {
    pub p: usize,
    /// Every term of the ambient sequence.
    pub ambient: Vec<ElementId>,
    /// Positions of `g_1, …, g_{p-1}, g_p` in `ambient`.
    pub principal: Vec<usize>,
    /// Central value of `g_1 ⋯ g_p` followed by the other terms in
    /// ambient order.
    pub w: ElementId,
    /// `w_i = [g_p, g_i ⋯ g_{p-1}]` for `i = 1..p-1`.
    pub w_i: Vec<ElementId>,
}

impl EgzCertificate {
    /// Build and check a certificate for a given principal part.
    pub fn new(g: &GroupTable, ambient: Vec<ElementId>, principal: Vec<usize>) -> Result<Self, EgzError> {
        let p = prime_of(g)?;
        let mut seen = vec![false; ambient.len()];
        for &i in &principal {
            if i >= ambient.len() || std::mem::replace(&mut seen[i], true) {
                return Err(EgzError::Precondition("principal positions must be distinct and in range".into()));
            }
        }
        let block_first: Vec<ElementId> =
            principal.iter().copied().chain((0..ambient.len()).filter(|&i| !seen[i])).map(|i| ambient[i]).collect();
        let w = ordered_product(g, &block_first);
        if !g.is_central(w) {
            return Err(EgzError::NotCentral);
        }
        let parts: Vec<ElementId> = principal.iter().map(|&i| ambient[i]).collect();
        if !is_principal_part(g, &parts) {
            return Err(EgzError::Precondition("not a principal part".into()));
        }
        let gp = parts[p - 1];
        let w_i = (0..p - 1).map(|i| g.commutator(gp, ordered_product(g, &parts[i..p - 1]))).collect();
        let cert = EgzCertificate { p, ambient, principal, w, w_i };
        cert.check_commutators(g);
        Ok(cert)
    }

    fn check_commutators(&self, g: &GroupTable) {
        let mut sorted = self.w_i.clone();
        sorted.sort();
        sorted.dedup();
        assert!(
            sorted.len() == self.p - 1 && self.w_i.iter().all(|&c| c != g.identity() && g.is_central(c)),
            "principal part commutators must be distinct non-trivial central elements"
        );
    }

    pub fn principal_elements(&self) -> Vec<ElementId> {
        self.principal.iter().map(|&i| self.ambient[i]).collect()
    }

    /// One audit line: sequence, principal positions, `w`, `w_i`, final
    /// ordering.
    pub fn record(&self, g: &GroupTable, witness: &Witness) -> String {
        let names = |v: &[ElementId]| v.iter().map(|&e| g.name(e).to_string()).collect::<Vec<_>>().join(",");
        let principal: Vec<String> = self.principal.iter().map(usize::to_string).collect();
        format!(
            "egz p={} seq={} principal={} w={} w_i={} order={}",
            self.p,
            names(&self.ambient),
            principal.join(","),
            g.name(self.w),
            names(&self.w_i),
            names(&witness.elements())
        )
    }
}

/// Certificate for `terms` when it has central product and a principal
/// part.
pub fn certify_egz(g: &GroupTable, terms: &[ElementId]) -> Option<EgzCertificate> {
    let p = g.heisenberg_prime()? as usize;
    if terms.len() <= p || !g.is_central(ordered_product(g, terms)) {
        return None;
    }
    let principal = find_principal_part(g, terms)?;
    EgzCertificate::new(g, terms.to_vec(), principal).ok()
}

/// Ordering of all ambient positions whose product is 1.
pub fn egz_reorder_positions(g: &GroupTable, cert: &EgzCertificate) -> Vec<usize> {
    let p = cert.p;
    let pr = &cert.principal;
    let rest = (0..cert.ambient.len()).filter(|i| !pr.contains(i));
    let target = g.inv(cert.w);
    let mut order: Vec<usize> = if cert.w == g.identity() {
        pr.clone()
    } else {
        let i =
            cert.w_i.iter().position(|&c| c == target).expect("w_1..w_{p-1} cover every non-trivial central element");
        pr[..i].iter().chain(std::iter::once(&pr[p - 1])).chain(&pr[i..p - 1]).copied().collect()
    };
    order.extend(rest);
    order
}

/// A permutation of all ambient terms with product 1, verified.
pub fn egz_reorder_to_one(g: &GroupTable, cert: &EgzCertificate) -> Witness {
    let order = egz_reorder_positions(g, cert);
    let w = Witness::from_positions(&cert.ambient, &order, g.identity());
    let seq = Sequence::from_terms(g, cert.ambient.iter().copied());
    w.verify(&seq).expect("reordered EGZ sequence multiplies to 1");
    w
}

/// Type of a short 3-sequence (three terms with central product).
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Short3Class {
    Central,
    Thin,
    ThickA,
    ThickB,
}

impl Short3Class {
    pub fn is_thick(self) -> bool {
        matches!(self, Short3Class::ThickA | Short3Class::ThickB)
    }
}

pub fn classify_short3(g: &GroupTable, u: [ElementId; 3]) -> Result<Short3Class, EgzError> {
    prime_of(g)?;
    if !g.is_central(ordered_product(g, &u)) {
        return Err(EgzError::NotCentral);
    }
    let nc: Vec<ElementId> = u.iter().copied().filter(|&t| !g.is_central(t)).collect();
    Ok(match nc.len() {
        0 => Short3Class::Central,
        2 => Short3Class::Thin,
        3 if g.are_conjugate(nc[0], nc[1]) && g.are_conjugate(nc[1], nc[2]) => Short3Class::ThickA,
        3 => Short3Class::ThickB,
        _ => unreachable!("one non-central term cannot give a central product"),
    })
}

/// EGZ certificate for `U1·U2` from the case analysis for two
/// non-central short 3-sequences over `H_27`: four distinct non-central
/// z-classes, or at least two together with a thick term sequence.
/// Returns `None` outside those cases.
pub fn combine_twin_short3(g: &GroupTable, u1: [ElementId; 3], u2: [ElementId; 3]) -> Option<EgzCertificate> {
    if g.heisenberg_prime() != Some(3) {
        return None;
    }
    let c1 = classify_short3(g, u1).ok()?;
    let c2 = classify_short3(g, u2).ok()?;
    if c1 == Short3Class::Central || c2 == Short3Class::Central {
        return None;
    }
    let ambient: Vec<ElementId> = u1.iter().chain(&u2).copied().collect();
    let zc = |pos: usize| g.z_class_of(ambient[pos]);
    let noncentral: Vec<usize> = (0..6).filter(|&i| !g.is_central(ambient[i])).collect();

    // Four distinct classes: y1·y2 lands in the class of y3 or y4.
    let mut reps: Vec<usize> = Vec::new();
    for &i in &noncentral {
        if reps.iter().all(|&r| zc(r) != zc(i)) {
            reps.push(i);
        }
    }
    let principal = if reps.len() >= 4 {
        let (y1, y2, y3, y4) = (reps[0], reps[1], reps[2], reps[3]);
        let prod = g.mul(ambient[y1], ambient[y2]);
        if g.z_class_of(prod) == zc(y3) {
            vec![y1, y2, y4]
        } else {
            vec![y1, y2, y3]
        }
    } else if reps.len() >= 2 && (c1.is_thick() || c2.is_thick()) {
        // Put a thick-B sequence first when there is one, else a thick one.
        let (a, b, ca, cb) = if c1 == Short3Class::ThickB || (c2 != Short3Class::ThickB && c1.is_thick()) {
            ([0, 1, 2], [3, 4, 5], c1, c2)
        } else {
            ([3, 4, 5], [0, 1, 2], c2, c1)
        };
        twin_thick(g, &ambient, a, b, ca, cb)?
    } else {
        return None;
    };
    EgzCertificate::new(g, ambient, principal).ok()
}

/// Principal part when `a` is thick (thick B if either is).
fn twin_thick(
    g: &GroupTable,
    amb: &[ElementId],
    a: [usize; 3],
    b: [usize; 3],
    ca: Short3Class,
    cb: Short3Class,
) -> Option<Vec<usize>> {
    let zc = |pos: usize| g.z_class_of(amb[pos]);
    let conj = |x: usize, y: usize| g.are_conjugate(amb[x], amb[y]);
    let b_nc: Vec<usize> = b.iter().copied().filter(|&i| !g.is_central(amb[i])).collect();
    match ca {
        Short3Class::ThickB => {
            // The three terms of a lie in three distinct classes. With at
            // most three classes overall, b's classes are among them.
            let k = b_nc[0];
            let g11 = *a.iter().find(|&&x| zc(x) == zc(k))?;
            let g13 = *a.iter().find(|&&x| x != g11).expect("three terms");
            match cb {
                Short3Class::Thin | Short3Class::ThickA => {
                    let same: Vec<usize> = b_nc.iter().copied().filter(|&y| zc(y) == zc(g11)).collect();
                    if let Some(&g21) = same.iter().find(|&&y| conj(g11, y)) {
                        Some(vec![g11, g21, g13])
                    } else if cb == Short3Class::ThickA {
                        // g11·g21 is central; g21, g22 are conjugate.
                        Some(vec![same[0], same[1], g13])
                    } else {
                        None
                    }
                }
                Short3Class::ThickB => {
                    let partner = |x: usize| *b.iter().find(|&&y| zc(y) == zc(x)).expect("same three classes");
                    let g21 = partner(g11);
                    if conj(g11, g21) {
                        Some(vec![g11, g21, g13])
                    } else {
                        let g12 = *a.iter().find(|&&x| x != g11 && x != g13).expect("three terms");
                        Some(vec![g11, partner(g12), g13])
                    }
                }
                Short3Class::Central => None,
            }
        }
        Short3Class::ThickA => {
            // a's terms are pairwise conjugate, so g11·g12 stays in their
            // class; any b term from another class finishes the part.
            let v = *b_nc.iter().find(|&&y| zc(y) != zc(a[0]))?;
            Some(vec![a[0], a[1], v])
        }
        _ => None,
    }
}

/// Order `σ` of four non-central terms with `g_σ1 g_σ2 g_σ3 g_σ4 u = 1`,
/// where `g1·g2` and `g3·g4` are central, `u` is central and `g1`, `g3`
/// lie in distinct z-classes of `H_27`.
pub fn four_term_center_fix(g: &GroupTable, t: [ElementId; 4], u: ElementId) -> Result<[usize; 4], EgzError> {
    if g.heisenberg_prime() != Some(3) {
        return Err(EgzError::NotH27);
    }
    let bad = |m: &str| Err(EgzError::Precondition(m.into()));
    if t.iter().any(|&x| g.is_central(x)) {
        return bad("terms must be non-central");
    }
    if !g.is_central(g.mul(t[0], t[1])) || !g.is_central(g.mul(t[2], t[3])) || !g.is_central(u) {
        return bad("g1·g2, g3·g4 and u must be central");
    }
    if g.z_class_of(t[0]) == g.z_class_of(t[2]) {
        return bad("g1 and g3 must lie in distinct z-classes");
    }
    let r = g.mul(ordered_product(g, &t), u);
    let sigma = if r == g.identity() {
        [0, 1, 2, 3]
    } else if g.commutator(t[1], t[2]) == r {
        [0, 2, 1, 3]
    } else {
        [1, 2, 0, 3]
    };
    let ordered: Vec<ElementId> = sigma.iter().map(|&i| t[i]).collect();
    assert_eq!(g.mul(ordered_product(g, &ordered), u), g.identity(), "commutator case split is exhaustive");
    Ok(sigma)
}
