//! Versioned text format for group tables.
//!
//! ```text
//! zerosum-group v1
//! family heisenberg 3
//! order 27
//! names x^0y^0v^0 x^0y^0v^1 ...
//! row 0 1 2 ...
//! ...
//! ```
//!
//! One `row` line per element, in id order, holding `a·b` for every `b`.
//! Blank lines and lines starting with `#` are ignored. The `family`
//! line is optional; when it names a built-in family whose table matches
//! exactly, the loaded group keeps that family (so Heisenberg-only
//! queries keep working). The loader always re-validates the axioms.

use std::fmt::Write as _;

use super::{make_abelian_p_group, make_cyclic, make_heisenberg, GroupError, GroupFamily, GroupTable};

pub const GROUP_FORMAT_HEADER: &str = "zerosum-group v1";

pub fn write_group(g: &GroupTable) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{GROUP_FORMAT_HEADER}");
    let _ = writeln!(out, "family {}", g.family());
    let _ = writeln!(out, "order {}", g.order());
    let _ = writeln!(out, "names {}", g.names().join(" "));
    for a in g.elements() {
        let row: Vec<String> = g.elements().map(|b| g.mul(a, b).0.to_string()).collect();
        let _ = writeln!(out, "row {}", row.join(" "));
    }
    out
}

fn builtin(family: &str) -> Option<Result<GroupTable, GroupError>> {
    let parts: Vec<&str> = family.split_whitespace().collect();
    match parts.as_slice() {
        ["cyclic", n] => Some(make_cyclic(n.parse().ok()?)),
        ["heisenberg", p] => Some(make_heisenberg(p.parse().ok()?)),
        ["abelian", p, exps] => {
            let exps: Vec<u32> = exps.split(',').map(str::parse).collect::<Result<_, _>>().ok()?;
            Some(make_abelian_p_group(p.parse().ok()?, &exps))
        }
        _ => None,
    }
}

pub fn read_group(text: &str) -> Result<GroupTable, GroupError> {
    let perr = |m: &str| GroupError::Parse(m.to_string());
    let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
    if lines.next() != Some(GROUP_FORMAT_HEADER) {
        return Err(perr("missing `zerosum-group v1` header"));
    }
    let mut family: Option<String> = None;
    let mut order: Option<usize> = None;
    let mut names: Option<Vec<String>> = None;
    let mut rows: Vec<Vec<usize>> = Vec::new();
    for line in lines {
        let (key, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        let rest = rest.trim();
        match key {
            "family" => family = Some(rest.to_string()),
            "order" => order = Some(rest.parse().map_err(|_| perr("bad order"))?),
            "names" => names = Some(rest.split_whitespace().map(String::from).collect()),
            "row" => rows.push(
                rest.split_whitespace()
                    .map(|t| t.parse::<usize>())
                    .collect::<Result<_, _>>()
                    .map_err(|_| perr("bad row entry"))?,
            ),
            other => return Err(GroupError::Parse(format!("unknown record `{other}`"))),
        }
    }
    let order = order.ok_or_else(|| perr("missing order"))?;
    let names = names.ok_or_else(|| perr("missing names"))?;
    if rows.len() != order || names.len() != order {
        return Err(perr("row or name count does not match order"));
    }
    let label = family.clone().unwrap_or_else(|| "loaded".to_string());
    let loaded = GroupTable::from_table(names, rows, GroupFamily::Custom { label })?;
    if let Some(Ok(b)) = family.as_deref().and_then(builtin) {
        let same = b.order() == loaded.order()
            && b.names() == loaded.names()
            && b.elements().all(|x| b.elements().all(|y| b.mul(x, y) == loaded.mul(x, y)));
        if same {
            return Ok(b);
        }
    }
    Ok(loaded)
}
