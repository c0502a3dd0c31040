use super::structure::generated_subgroup;
use super::{ElementId, GroupError, GroupFamily, GroupTable};
use crate::bitset::ElementSet;

fn check_subgroup(g: &GroupTable, set: &ElementSet) -> Result<(), GroupError> {
    if !set.contains(g.identity()) {
        return Err(GroupError::NotSubgroup);
    }
    let ids = set.to_vec();
    if generated_subgroup(g, &ids).len() != ids.len() {
        return Err(GroupError::NotSubgroup);
    }
    Ok(())
}

/// The factor group `G/N` together with the projection `G -> G/N`.
///
/// Cosets are numbered by their smallest member and named after it in
/// brackets.
pub fn quotient(g: &GroupTable, normal: &ElementSet) -> Result<(GroupTable, Vec<ElementId>), GroupError> {
    check_subgroup(g, normal)?;
    for y in g.elements() {
        for h in normal.iter() {
            if !normal.contains(g.mul(g.mul(g.inv(y), h), y)) {
                return Err(GroupError::NotNormal);
            }
        }
    }
    let n = g.order();
    let mut coset_of = vec![usize::MAX; n];
    let mut reps: Vec<ElementId> = Vec::new();
    for a in g.elements() {
        if coset_of[a.index()] != usize::MAX {
            continue;
        }
        for h in normal.iter() {
            coset_of[g.mul(a, h).index()] = reps.len();
        }
        reps.push(a);
    }
    let names = reps.iter().map(|&r| format!("[{}]", g.name(r))).collect();
    let rows = reps.iter().map(|&a| reps.iter().map(|&b| coset_of[g.mul(a, b).index()]).collect()).collect();
    let label = format!("quotient of {} by a normal subgroup of order {}", g.family(), normal.len());
    let q = GroupTable::from_table(names, rows, GroupFamily::Custom { label })?;
    Ok((q, coset_of.into_iter().map(ElementId::from_index).collect()))
}

/// The subgroup `H` as a group of its own, keeping element names.
/// Returns the table and the embedding `H -> G`.
pub fn subgroup_table(g: &GroupTable, h: &ElementSet) -> Result<(GroupTable, Vec<ElementId>), GroupError> {
    check_subgroup(g, h)?;
    let members = h.to_vec();
    let mut local = vec![usize::MAX; g.order()];
    for (i, m) in members.iter().enumerate() {
        local[m.index()] = i;
    }
    let names = members.iter().map(|&m| g.name(m).to_string()).collect();
    let rows = members.iter().map(|&a| members.iter().map(|&b| local[g.mul(a, b).index()]).collect()).collect();
    let label = format!("subgroup of order {} of {}", members.len(), g.family());
    let t = GroupTable::from_table(names, rows, GroupFamily::Custom { label })?;
    Ok((t, members))
}
