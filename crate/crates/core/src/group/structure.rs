use std::collections::HashMap;

use super::{ElementId, GroupTable};
use crate::bitset::ElementSet;

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub(super) fn precompute(g: &mut GroupTable) {
    let n = g.order;
    let e = g.identity.index();

    g.element_orders = (0..n)
        .map(|a| {
            let mut k = 1;
            let mut x = a;
            while x != e {
                x = g.mul_idx(x, a);
                k += 1;
            }
            k
        })
        .collect();
    g.exponent = g.element_orders.iter().fold(1u64, |acc, &o| acc / gcd(acc, o as u64) * o as u64);

    let centralizers: Vec<ElementSet> = g.elements().map(|a| g.centralizer(a)).collect();
    g.center = ElementSet::from_ids(n, g.elements().filter(|a| centralizers[a.index()].len() == n));

    let commutators = ElementSet::from_ids(
        n,
        g.elements().flat_map(|a| g.elements().map(move |b| (a, b))).map(|(a, b)| g.commutator(a, b)),
    );
    g.commutator_subgroup = generated_subgroup(g, &commutators.to_vec());

    // Conjugacy classes: orbits under x ↦ y⁻¹xy.
    let mut class_of = vec![u32::MAX; n];
    let mut classes = Vec::new();
    for a in 0..n {
        if class_of[a] != u32::MAX {
            continue;
        }
        let id = classes.len() as u32;
        let mut class = ElementSet::empty(n);
        for y in 0..n {
            let c = g.mul_idx(g.mul_idx(g.inv[y].index(), a), y);
            class.insert_index(c);
        }
        for c in class.iter() {
            class_of[c.index()] = id;
        }
        classes.push(class.to_vec());
    }
    g.conjugacy_classes = classes;
    g.conjugacy_class_of = class_of;

    let (zc, zc_of) = z_partition(g, &centralizers);
    g.z_classes = zc;
    g.z_class_of = zc_of;
}

/// Smallest subgroup containing `gens`.
pub(super) fn generated_subgroup(g: &GroupTable, gens: &[ElementId]) -> ElementSet {
    let n = g.order;
    let mut set = ElementSet::empty(n);
    set.insert(g.identity);
    let mut frontier = vec![g.identity];
    while let Some(a) = frontier.pop() {
        for &s in gens {
            let b = g.mul(a, s);
            if !set.contains(b) {
                set.insert(b);
                frontier.push(b);
            }
        }
    }
    set
}

/// z-equivalence: `a ~ b` iff some conjugate of `C(a)` equals `C(b)`.
fn z_partition(g: &GroupTable, centralizers: &[ElementSet]) -> (Vec<Vec<ElementId>>, Vec<u32>) {
    let n = g.order;
    let mut distinct: HashMap<&ElementSet, usize> = HashMap::new();
    let mut reps: Vec<&ElementSet> = Vec::new();
    let mut cent_id = vec![0usize; n];
    for a in 0..n {
        let c = &centralizers[a];
        let id = *distinct.entry(c).or_insert_with(|| {
            reps.push(c);
            reps.len() - 1
        });
        cent_id[a] = id;
    }
    let mut parent: Vec<usize> = (0..reps.len()).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for (ci, c) in reps.iter().enumerate() {
        for y in g.elements() {
            let yi = g.inv(y);
            let conj = ElementSet::from_ids(n, c.iter().map(|h| g.mul(g.mul(yi, h), y)));
            if let Some(&cj) = distinct.get(&conj) {
                let (ra, rb) = (find(&mut parent, ci), find(&mut parent, cj));
                if ra != rb {
                    parent[ra.max(rb)] = ra.min(rb);
                }
            }
        }
    }
    let mut root_to_class: HashMap<usize, u32> = HashMap::new();
    let mut classes: Vec<Vec<ElementId>> = Vec::new();
    let mut class_of = vec![0u32; n];
    // Elements are visited in id order, so classes come out sorted by
    // smallest member.
    for a in 0..n {
        let r = find(&mut parent, cent_id[a]);
        let next = classes.len() as u32;
        let cls = *root_to_class.entry(r).or_insert(next);
        if cls == next {
            classes.push(Vec::new());
        }
        classes[cls as usize].push(ElementId::from_index(a));
        class_of[a] = cls;
    }
    // Put the center (class of the identity) first.
    let zc = class_of[g.identity.index()] as usize;
    if zc != 0 {
        classes.swap(0, zc);
        for c in class_of.iter_mut() {
            if *c as usize == zc {
                *c = 0;
            } else if *c == 0 {
                *c = zc as u32;
            }
        }
    }
    (classes, class_of)
}
