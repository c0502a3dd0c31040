//! Finite groups as explicit multiplication tables.
//!
//! A [`GroupTable`] is immutable once built. Construction validates the
//! group axioms and precomputes the structural data consumed elsewhere:
//! inverses, element orders, exponent, center, commutator subgroup,
//! conjugacy classes and z-classes.

mod automorphism;
mod construct;
mod quotient;
mod structure;
pub mod text;

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bitset::ElementSet;

pub use automorphism::{automorphisms, Automorphism, AUTOMORPHISM_ORDER_LIMIT};
pub use construct::{is_prime, make_abelian_p_group, make_cyclic, make_heisenberg, HEISENBERG_MAX_PRIME};
pub use quotient::{quotient, subgroup_table};

/// Index of an element inside its [`GroupTable`].
///
/// For Heisenberg groups the id of `x^i y^j v^k` is `i·p² + j·p + k`.
#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default, Serialize, Deserialize)]
pub struct ElementId(pub u16);

impl ElementId {
    #[inline]
    pub const fn index(self) -> usize {
        self.0 as usize
    }

    #[inline]
    pub const fn from_index(i: usize) -> Self {
        ElementId(i as u16)
    }
}

impl fmt::Display for ElementId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// How a table was produced. Drives naming and family-specific queries.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum GroupFamily {
    Cyclic { n: u32 },
    Abelian { p: u32, exps: Vec<u32> },
    Heisenberg { p: u32 },
    Custom { label: String },
}

impl fmt::Display for GroupFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupFamily::Cyclic { n } => write!(f, "cyclic {n}"),
            GroupFamily::Abelian { p, exps } => {
                let e: Vec<String> = exps.iter().map(u32::to_string).collect();
                write!(f, "abelian {p} {}", e.join(","))
            }
            GroupFamily::Heisenberg { p } => write!(f, "heisenberg {p}"),
            GroupFamily::Custom { label } => write!(f, "custom {label}"),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("group order must be positive")]
    EmptyGroup,
    #[error("{0} is not a prime")]
    NotPrime(u32),
    #[error("Heisenberg groups need an odd prime p <= {max}, got {p}")]
    UnsupportedHeisenbergPrime { p: u32, max: u32 },
    #[error("exponent list must be non-empty, positive and non-decreasing")]
    BadExponents,
    #[error("group too large: {0} elements")]
    TooLarge(usize),
    #[error("invalid multiplication table: {0}")]
    InvalidTable(String),
    #[error("subset is not a normal subgroup")]
    NotNormal,
    #[error("subset is not a subgroup")]
    NotSubgroup,
    #[error("operation requires a Heisenberg group")]
    NotHeisenberg,
    #[error("automorphism search budget exceeded ({candidates} candidate generator images)")]
    AutomorphismBudget { candidates: u128 },
    #[error("unknown element name `{0}`")]
    UnknownElement(String),
    #[error("malformed group description: {0}")]
    Parse(String),
}

/// Largest table accepted by the generic constructor.
pub const MAX_ORDER: usize = 10_000;

/// A finite group given by its full multiplication table.
#[derive(Clone)]
pub struct GroupTable {
    order: usize,
    mul: Vec<u16>,
    identity: ElementId,
    inv: Vec<ElementId>,
    names: Vec<String>,
    name_index: HashMap<String, ElementId>,
    family: GroupFamily,
    element_orders: Vec<u32>,
    exponent: u64,
    center: ElementSet,
    commutator_subgroup: ElementSet,
    conjugacy_classes: Vec<Vec<ElementId>>,
    conjugacy_class_of: Vec<u32>,
    z_classes: Vec<Vec<ElementId>>,
    z_class_of: Vec<u32>,
}

impl fmt::Debug for GroupTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GroupTable").field("family", &self.family).field("order", &self.order).finish_non_exhaustive()
    }
}

impl GroupTable {
    /// Build a group from a row-major table `mul[a][b] = a·b`.
    ///
    /// The axioms are checked exhaustively (associativity is `O(n³)`).
    pub fn from_table(names: Vec<String>, rows: Vec<Vec<usize>>, family: GroupFamily) -> Result<Self, GroupError> {
        let n = rows.len();
        if n == 0 {
            return Err(GroupError::EmptyGroup);
        }
        if n > MAX_ORDER {
            return Err(GroupError::TooLarge(n));
        }
        if names.len() != n {
            return Err(GroupError::InvalidTable(format!("{} names for {} elements", names.len(), n)));
        }
        let mut mul = Vec::with_capacity(n * n);
        for (a, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(GroupError::InvalidTable(format!("row {a} has {} entries", row.len())));
            }
            for &c in row {
                if c >= n {
                    return Err(GroupError::InvalidTable(format!("entry {c} out of range in row {a}")));
                }
                mul.push(c as u16);
            }
        }
        let mut name_index = HashMap::with_capacity(n);
        for (i, name) in names.iter().enumerate() {
            if name.is_empty() || name.chars().any(|c| c.is_whitespace() || c == '*') {
                return Err(GroupError::InvalidTable(format!("bad element name `{name}`")));
            }
            if name_index.insert(name.clone(), ElementId::from_index(i)).is_some() {
                return Err(GroupError::InvalidTable(format!("duplicate element name `{name}`")));
            }
        }

        let at = |a: usize, b: usize| mul[a * n + b] as usize;
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| at(e, x) == x && at(x, e) == x))
            .ok_or_else(|| GroupError::InvalidTable("no two-sided identity".into()))?;
        let mut inv = Vec::with_capacity(n);
        for a in 0..n {
            let b = (0..n)
                .find(|&b| at(a, b) == identity)
                .ok_or_else(|| GroupError::InvalidTable(format!("element {a} has no inverse")))?;
            if at(b, a) != identity {
                return Err(GroupError::InvalidTable(format!("inverse of {a} is one-sided")));
            }
            inv.push(ElementId::from_index(b));
        }
        for a in 0..n {
            for b in 0..n {
                let ab = at(a, b);
                for c in 0..n {
                    if at(ab, c) != at(a, at(b, c)) {
                        return Err(GroupError::InvalidTable(format!("associativity fails at ({a},{b},{c})")));
                    }
                }
            }
        }

        let mut g = GroupTable {
            order: n,
            mul,
            identity: ElementId::from_index(identity),
            inv,
            names,
            name_index,
            family,
            element_orders: Vec::new(),
            exponent: 1,
            center: ElementSet::empty(n),
            commutator_subgroup: ElementSet::empty(n),
            conjugacy_classes: Vec::new(),
            conjugacy_class_of: Vec::new(),
            z_classes: Vec::new(),
            z_class_of: Vec::new(),
        };
        structure::precompute(&mut g);
        Ok(g)
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn mul(&self, a: ElementId, b: ElementId) -> ElementId {
        ElementId(self.mul[a.index() * self.order + b.index()])
    }

    #[inline]
    pub(crate) fn mul_idx(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.order + b] as usize
    }

    #[inline]
    pub fn identity(&self) -> ElementId {
        self.identity
    }

    #[inline]
    pub fn inv(&self, a: ElementId) -> ElementId {
        self.inv[a.index()]
    }

    /// `[a,b] = a⁻¹b⁻¹ab`.
    pub fn commutator(&self, a: ElementId, b: ElementId) -> ElementId {
        let t = self.mul(self.inv(a), self.inv(b));
        self.mul(self.mul(t, a), b)
    }

    pub fn pow(&self, a: ElementId, k: u64) -> ElementId {
        let mut r = self.identity;
        for _ in 0..k {
            r = self.mul(r, a);
        }
        r
    }

    pub fn commutes(&self, a: ElementId, b: ElementId) -> bool {
        self.mul(a, b) == self.mul(b, a)
    }

    pub fn elements(&self) -> impl Iterator<Item = ElementId> + '_ {
        (0..self.order).map(ElementId::from_index)
    }

    pub fn name(&self, a: ElementId) -> &str {
        &self.names[a.index()]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn family(&self) -> &GroupFamily {
        &self.family
    }

    /// `Some(p)` when the table was built by [`make_heisenberg`].
    pub fn heisenberg_prime(&self) -> Option<u32> {
        match self.family {
            GroupFamily::Heisenberg { p } => Some(p),
            _ => None,
        }
    }

    pub fn element_order(&self, a: ElementId) -> u32 {
        self.element_orders[a.index()]
    }

    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    pub fn center(&self) -> &ElementSet {
        &self.center
    }

    #[inline]
    pub fn is_central(&self, a: ElementId) -> bool {
        self.center.contains(a)
    }

    pub fn commutator_subgroup(&self) -> &ElementSet {
        &self.commutator_subgroup
    }

    pub fn is_abelian(&self) -> bool {
        self.center.len() == self.order
    }

    pub fn conjugacy_classes(&self) -> &[Vec<ElementId>] {
        &self.conjugacy_classes
    }

    pub fn conjugacy_class_of(&self, a: ElementId) -> usize {
        self.conjugacy_class_of[a.index()] as usize
    }

    pub fn are_conjugate(&self, a: ElementId, b: ElementId) -> bool {
        self.conjugacy_class_of[a.index()] == self.conjugacy_class_of[b.index()]
    }

    /// The z-class partition, ordered by smallest member. The class of
    /// the identity (the center) comes first.
    pub fn z_classes(&self) -> &[Vec<ElementId>] {
        &self.z_classes
    }

    pub fn z_class_of(&self, a: ElementId) -> usize {
        self.z_class_of[a.index()] as usize
    }

    /// Centralizer of `a` as a membership mask.
    pub fn centralizer(&self, a: ElementId) -> ElementSet {
        ElementSet::from_ids(self.order, self.elements().filter(|&b| self.commutes(a, b)))
    }

    /// Look up an element by display name, falling back to the family's
    /// word syntax (`x^2yv`, `c^5`).
    pub fn parse_element(&self, s: &str) -> Result<ElementId, GroupError> {
        if let Some(&g) = self.name_index.get(s) {
            return Ok(g);
        }
        construct::parse_word(self, s).ok_or_else(|| GroupError::UnknownElement(s.to_string()))
    }

    /// Ordered product of a list of terms; the empty product is the identity.
    pub fn product<I: IntoIterator<Item = ElementId>>(&self, terms: I) -> ElementId {
        terms.into_iter().fold(self.identity, |acc, g| self.mul(acc, g))
    }

    /// Index of `g` among the `p + 2` z-classes `K_0..K_{p+1}` of a
    /// Heisenberg group: 0 for central elements, 1 for `K[x]`, `i` for
    /// `K[x^{i-1}y]` with `2 <= i <= p`, and `p + 1` for `K[y]`.
    pub fn z_class_index(&self, g: ElementId) -> Result<usize, GroupError> {
        let p = self.heisenberg_prime().ok_or(GroupError::NotHeisenberg)? as usize;
        let (i, j, _) = heisenberg_coords(p, g);
        Ok(match (i, j) {
            (0, 0) => 0,
            (_, 0) => 1,
            (0, _) => p + 1,
            _ => {
                let j_inv = (1..p).find(|t| (t * j) % p == 1).expect("p is prime");
                1 + (i * j_inv) % p
            }
        })
    }
}

/// Exponents `(i, j, k)` of the normal form `x^i y^j v^k` of `g`.
#[inline]
pub fn heisenberg_coords(p: usize, g: ElementId) -> (usize, usize, usize) {
    let id = g.index();
    (id / (p * p), (id / p) % p, id % p)
}

/// Element id of `x^i y^j v^k` (exponents reduced mod `p`).
#[inline]
pub fn heisenberg_id(p: usize, i: usize, j: usize, k: usize) -> ElementId {
    ElementId::from_index((i % p) * p * p + (j % p) * p + k % p)
}
