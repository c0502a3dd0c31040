use super::{heisenberg_coords, heisenberg_id, ElementId, GroupError, GroupFamily, GroupTable};

/// Largest prime accepted by [`make_heisenberg`] (keeps tables at most 343²).
pub const HEISENBERG_MAX_PRIME: u32 = 7;

pub fn is_prime(n: u32) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

/// The cyclic group `C_n` with generator id 1; element `k` is named `c^k`.
pub fn make_cyclic(n: u32) -> Result<GroupTable, GroupError> {
    if n == 0 {
        return Err(GroupError::EmptyGroup);
    }
    let n = n as usize;
    let names = (0..n).map(|k| format!("c^{k}")).collect();
    let rows = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
    GroupTable::from_table(names, rows, GroupFamily::Cyclic { n: n as u32 })
}

/// `C_{p^{e_1}} × … × C_{p^{e_r}}`. Elements are coordinate tuples with
/// the last coordinate least significant in the id.
pub fn make_abelian_p_group(p: u32, exps: &[u32]) -> Result<GroupTable, GroupError> {
    if !is_prime(p) {
        return Err(GroupError::NotPrime(p));
    }
    if exps.is_empty() || exps.contains(&0) || exps.windows(2).any(|w| w[0] > w[1]) {
        return Err(GroupError::BadExponents);
    }
    let moduli: Vec<usize> = exps
        .iter()
        .map(|&e| (p as usize).checked_pow(e).ok_or(GroupError::TooLarge(usize::MAX)))
        .collect::<Result<_, _>>()?;
    let n = moduli.iter().try_fold(1usize, |acc, &m| acc.checked_mul(m)).ok_or(GroupError::TooLarge(usize::MAX))?;
    if n > super::MAX_ORDER {
        return Err(GroupError::TooLarge(n));
    }
    let decode = |mut id: usize| -> Vec<usize> {
        let mut c = vec![0; moduli.len()];
        for (slot, &m) in c.iter_mut().zip(&moduli).rev() {
            *slot = id % m;
            id /= m;
        }
        c
    };
    let encode = |c: &[usize]| c.iter().zip(&moduli).fold(0, |acc, (&x, &m)| acc * m + x);
    let coords: Vec<Vec<usize>> = (0..n).map(decode).collect();
    let names = coords
        .iter()
        .map(|c| {
            let parts: Vec<String> = c.iter().map(usize::to_string).collect();
            format!("({})", parts.join(","))
        })
        .collect();
    let rows = (0..n)
        .map(|a| {
            (0..n)
                .map(|b| {
                    let s: Vec<usize> =
                        coords[a].iter().zip(&coords[b]).zip(&moduli).map(|((x, y), m)| (x + y) % m).collect();
                    encode(&s)
                })
                .collect()
        })
        .collect();
    GroupTable::from_table(names, rows, GroupFamily::Abelian { p, exps: exps.to_vec() })
}

/// The non-abelian group of order `p³` and exponent `p`, realized as
/// upper unitriangular 3×3 matrices over `F_p`.
///
/// A matrix is stored as `(a, b, c)` for `[[1,a,c],[0,1,b],[0,0,1]]`, so
/// `(a,b,c)(a',b',c') = (a+a', b+b', c+c'+ab')`. With `x = (1,0,0)`,
/// `y = (0,1,0)` and `v = [y,x] = (0,0,-1)` the normal form
/// `x^i y^j v^k` is the matrix `(i, j, ij - k)`.
pub fn make_heisenberg(p: u32) -> Result<GroupTable, GroupError> {
    if p.is_multiple_of(2) || !is_prime(p) || p > HEISENBERG_MAX_PRIME {
        return Err(GroupError::UnsupportedHeisenbergPrime { p, max: HEISENBERG_MAX_PRIME });
    }
    let pu = p as usize;
    let n = pu * pu * pu;
    let to_matrix = |id: usize| {
        let (i, j, k) = heisenberg_coords(pu, ElementId::from_index(id));
        (i, j, (i * j + pu - k) % pu)
    };
    let from_matrix = |(a, b, c): (usize, usize, usize)| heisenberg_id(pu, a, b, (a * b + pu - c) % pu).index();
    let names = (0..n)
        .map(|id| {
            let (i, j, k) = heisenberg_coords(pu, ElementId::from_index(id));
            format!("x^{i}y^{j}v^{k}")
        })
        .collect();
    let rows = (0..n)
        .map(|l| {
            let (a, b, c) = to_matrix(l);
            (0..n)
                .map(|r| {
                    let (a2, b2, c2) = to_matrix(r);
                    from_matrix(((a + a2) % pu, (b + b2) % pu, (c + c2 + a * b2) % pu))
                })
                .collect()
        })
        .collect();
    let g = GroupTable::from_table(names, rows, GroupFamily::Heisenberg { p })?;
    verify_heisenberg_presentation(&g, pu)?;
    Ok(g)
}

fn verify_heisenberg_presentation(g: &GroupTable, p: usize) -> Result<(), GroupError> {
    let x = heisenberg_id(p, 1, 0, 0);
    let y = heisenberg_id(p, 0, 1, 0);
    let v = heisenberg_id(p, 0, 0, 1);
    let e = g.identity();
    let fail = |what: &str| Err(GroupError::InvalidTable(format!("Heisenberg relation failed: {what}")));
    if e != ElementId(0) {
        return fail("identity is not x^0y^0v^0");
    }
    if g.commutator(y, x) != v {
        return fail("[y,x] != v");
    }
    if g.pow(x, p as u64) != e || g.pow(y, p as u64) != e {
        return fail("x^p or y^p");
    }
    if g.commutator(v, y) != e || g.commutator(v, x) != e {
        return fail("[y,x,y] or [y,x,x]");
    }
    for id in 0..g.order() {
        let (i, j, k) = heisenberg_coords(p, ElementId::from_index(id));
        let nf = g.mul(g.mul(g.pow(x, i as u64), g.pow(y, j as u64)), g.pow(v, k as u64));
        if nf.index() != id {
            return fail("normal form ids");
        }
    }
    Ok(())
}

/// Words such as `x^2yv` (Heisenberg) or `c^5` (cyclic); `1` is the identity.
pub(super) fn parse_word(g: &GroupTable, s: &str) -> Option<ElementId> {
    let letter = |c: char| -> Option<ElementId> {
        match (g.family(), c) {
            (GroupFamily::Heisenberg { p }, 'x') => Some(heisenberg_id(*p as usize, 1, 0, 0)),
            (GroupFamily::Heisenberg { p }, 'y') => Some(heisenberg_id(*p as usize, 0, 1, 0)),
            (GroupFamily::Heisenberg { p }, 'v') => Some(heisenberg_id(*p as usize, 0, 0, 1)),
            (GroupFamily::Cyclic { n }, 'c') if *n > 1 => Some(ElementId(1)),
            (GroupFamily::Cyclic { .. }, 'c') => Some(ElementId(0)),
            _ => None,
        }
    };
    if s == "1" || s == "e" {
        return matches!(g.family(), GroupFamily::Heisenberg { .. } | GroupFamily::Cyclic { .. }).then(|| g.identity());
    }
    if s.is_empty() {
        return None;
    }
    let mut acc = g.identity();
    let mut chars = s.chars().peekable();
    while let Some(c) = chars.next() {
        let base = letter(c)?;
        let mut exp = 1u64;
        if chars.peek() == Some(&'^') {
            chars.next();
            let mut digits = String::new();
            while let Some(d) = chars.peek().filter(|d| d.is_ascii_digit()) {
                digits.push(*d);
                chars.next();
            }
            exp = digits.parse().ok()?;
        }
        let e = exp % g.element_order(base) as u64;
        acc = g.mul(acc, g.pow(base, e));
    }
    Some(acc)
}
