//! Finite groups from multiplication tables, `(Z_n)^D`, and the lattice `Z^D`.
//!
//! Finite groups number their elements `0..order` with the identity at 0.
//! `(Z_n)^D` elements are coordinate vectors in `[0, n)`; their index is the
//! mixed-radix number with the first coordinate least significant. Lattice
//! groups are never enumerated.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest table validated exhaustively.
pub const MAX_VALIDATED_ORDER: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GroupElement {
    Index(usize),
    Vector(Vec<i64>),
}

impl GroupElement {
    pub fn coords(&self) -> Option<&[i64]> {
        match self {
            GroupElement::Vector(v) => Some(v),
            GroupElement::Index(_) => None,
        }
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupElement::Index(i) => write!(f, "#{i}"),
            GroupElement::Vector(v) => {
                write!(f, "(")?;
                for (k, c) in v.iter().enumerate() {
                    if k > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{c}")?;
                }
                write!(f, ")")
            }
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GroupError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("table is not square: row {row} has {len} entries, expected {expected}")]
    NotSquare {
        row: usize,
        len: usize,
        expected: usize,
    },
    #[error("table entry [{row}][{col}] = {value} is out of range for order {order}")]
    EntryOutOfRange {
        row: usize,
        col: usize,
        value: usize,
        order: usize,
    },
    #[error("element 0 is not an identity: {0}")]
    MissingIdentity(String),
    #[error("element {element} has no two-sided inverse")]
    MissingInverse { element: String },
    #[error("element {element} has more than one two-sided inverse")]
    AmbiguousInverse { element: String },
    #[error("associativity fails on ({a}, {b}, {c}): (ab)c = {left}, a(bc) = {right}")]
    NonAssociative {
        a: String,
        b: String,
        c: String,
        left: String,
        right: String,
    },
    #[error("order {order} exceeds the validation limit {MAX_VALIDATED_ORDER}; pass skip_validation to accept it unchecked")]
    TooLarge { order: usize },
    #[error("{element} is not an element of {group}")]
    NotAnElement { element: String, group: String },
    #[error("operation requires {required}, got {group}")]
    Unsupported { required: String, group: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GroupKind {
    Table,
    CyclicPower { n: u64, d: usize },
    Lattice { d: usize },
}

#[derive(Debug, Clone, PartialEq)]
struct TableGroup {
    names: Vec<String>,
    table: Vec<Vec<usize>>,
    inverse: Vec<usize>,
    abelian: bool,
}

/// An immutable group.
#[derive(Debug, Clone, PartialEq)]
pub struct Group {
    repr: Repr,
}

#[derive(Debug, Clone, PartialEq)]
enum Repr {
    Table(TableGroup),
    CyclicPower { n: u64, d: usize },
    Lattice { d: usize },
}

/// `(Z_n)^D` with componentwise addition mod `n`.
pub fn make_cyclic_power(n: u64, d: usize) -> Result<Group, GroupError> {
    if n == 0 || d == 0 {
        return Err(GroupError::InvalidParameter(format!(
            "cyclic power needs n >= 1 and D >= 1, got n = {n}, D = {d}"
        )));
    }
    let order = (n as u128).checked_pow(d as u32);
    if order.is_none_or(|o| o > usize::MAX as u128) {
        return Err(GroupError::InvalidParameter(format!(
            "order {n}^{d} does not fit in memory indices"
        )));
    }
    Ok(Group {
        repr: Repr::CyclicPower { n, d },
    })
}

/// The lattice `Z^D`.
pub fn make_lattice(d: usize) -> Result<Group, GroupError> {
    if d == 0 {
        return Err(GroupError::InvalidParameter(
            "lattice needs D >= 1".to_string(),
        ));
    }
    Ok(Group {
        repr: Repr::Lattice { d },
    })
}

/// Validated finite group with elements named by their index.
pub fn make_finite_from_table(table: Vec<Vec<usize>>) -> Result<Group, GroupError> {
    make_finite_from_table_with(table, None, false)
}

/// Finite group from a multiplication table, `table[a][b] = ab`.
///
/// Validation checks the identity row and column, two-sided inverses and,
/// unless `skip_validation` is set, associativity over all triples. Tables
/// larger than [`MAX_VALIDATED_ORDER`] require `skip_validation`.
pub fn make_finite_from_table_with(
    table: Vec<Vec<usize>>,
    names: Option<Vec<String>>,
    skip_validation: bool,
) -> Result<Group, GroupError> {
    let order = table.len();
    if order == 0 {
        return Err(GroupError::InvalidParameter("empty table".to_string()));
    }
    if order > MAX_VALIDATED_ORDER && !skip_validation {
        return Err(GroupError::TooLarge { order });
    }
    let names = match names {
        Some(names) if names.len() != order => {
            return Err(GroupError::InvalidParameter(format!(
                "{} element names for a table of order {order}",
                names.len()
            )))
        }
        Some(names) => names,
        None => (0..order).map(|i| i.to_string()).collect(),
    };
    for (row, entries) in table.iter().enumerate() {
        if entries.len() != order {
            return Err(GroupError::NotSquare {
                row,
                len: entries.len(),
                expected: order,
            });
        }
        if let Some((col, &value)) = entries.iter().enumerate().find(|(_, &v)| v >= order) {
            return Err(GroupError::EntryOutOfRange {
                row,
                col,
                value,
                order,
            });
        }
    }
    for a in 0..order {
        if table[0][a] != a || table[a][0] != a {
            return Err(GroupError::MissingIdentity(format!(
                "{0}·{1} = {2}, {1}·{0} = {3}",
                names[0], names[a], names[table[0][a]], names[table[a][0]]
            )));
        }
    }
    let mut inverse = Vec::with_capacity(order);
    for a in 0..order {
        let mut candidates = (0..order).filter(|&b| table[a][b] == 0 && table[b][a] == 0);
        match (candidates.next(), candidates.next()) {
            (Some(b), None) => inverse.push(b),
            (None, _) => {
                return Err(GroupError::MissingInverse {
                    element: names[a].clone(),
                })
            }
            (Some(_), Some(_)) => {
                return Err(GroupError::AmbiguousInverse {
                    element: names[a].clone(),
                })
            }
        }
    }
    if !skip_validation {
        for a in 0..order {
            for b in 0..order {
                let ab = table[a][b];
                for c in 0..order {
                    let left = table[ab][c];
                    let right = table[a][table[b][c]];
                    if left != right {
                        return Err(GroupError::NonAssociative {
                            a: names[a].clone(),
                            b: names[b].clone(),
                            c: names[c].clone(),
                            left: names[left].clone(),
                            right: names[right].clone(),
                        });
                    }
                }
            }
        }
    }
    let abelian = (0..order).all(|a| (0..a).all(|b| table[a][b] == table[b][a]));
    Ok(Group {
        repr: Repr::Table(TableGroup {
            names,
            table,
            inverse,
            abelian,
        }),
    })
}

/// The symmetric group on `k` symbols, `1 <= k <= 4`.
///
/// Elements are the permutations in lexicographic order of their one-line
/// notation (identity first); the product is composition, `(pq)(i) = p(q(i))`.
pub fn make_symmetric(k: usize) -> Result<Group, GroupError> {
    if !(1..=4).contains(&k) {
        return Err(GroupError::InvalidParameter(format!(
            "symmetric group supported for 1 <= k <= 4, got {k}"
        )));
    }
    let perms = permutations(k);
    let index = |p: &[usize]| perms.iter().position(|q| q == p).expect("closed");
    let table = perms
        .iter()
        .map(|p| {
            perms
                .iter()
                .map(|q| index(&q.iter().map(|&i| p[i]).collect::<Vec<_>>()))
                .collect()
        })
        .collect();
    let names = perms
        .iter()
        .map(|p| p.iter().map(|i| (i + 1).to_string()).collect::<String>())
        .collect();
    make_finite_from_table_with(table, Some(names), false)
}

fn permutations(k: usize) -> Vec<Vec<usize>> {
    fn extend(prefix: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == k {
            out.push(prefix.clone());
            return;
        }
        for i in 0..k {
            if !prefix.contains(&i) {
                prefix.push(i);
                extend(prefix, k, out);
                prefix.pop();
            }
        }
    }
    let mut out = Vec::new();
    extend(&mut Vec::new(), k, &mut out);
    out
}

impl Group {
    pub fn kind(&self) -> GroupKind {
        match &self.repr {
            Repr::Table(_) => GroupKind::Table,
            Repr::CyclicPower { n, d } => GroupKind::CyclicPower { n: *n, d: *d },
            Repr::Lattice { d } => GroupKind::Lattice { d: *d },
        }
    }

    /// Number of elements, `None` for lattices.
    pub fn order(&self) -> Option<usize> {
        match &self.repr {
            Repr::Table(t) => Some(t.table.len()),
            Repr::CyclicPower { n, d } => Some((*n as usize).pow(*d as u32)),
            Repr::Lattice { .. } => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.order().is_some()
    }

    pub fn is_lattice(&self) -> bool {
        matches!(self.repr, Repr::Lattice { .. })
    }

    pub fn is_abelian(&self) -> bool {
        match &self.repr {
            Repr::Table(t) => t.abelian,
            _ => true,
        }
    }

    /// Coordinate count `D` of vector groups, 0 for table groups.
    pub fn rank(&self) -> usize {
        match &self.repr {
            Repr::Table(_) => 0,
            Repr::CyclicPower { d, .. } | Repr::Lattice { d } => *d,
        }
    }

    /// The modulus `n` of `(Z_n)^D`.
    pub fn modulus(&self) -> Option<u64> {
        match &self.repr {
            Repr::CyclicPower { n, .. } => Some(*n),
            _ => None,
        }
    }

    pub fn identity(&self) -> GroupElement {
        match &self.repr {
            Repr::Table(_) => GroupElement::Index(0),
            Repr::CyclicPower { d, .. } | Repr::Lattice { d } => GroupElement::Vector(vec![0; *d]),
        }
    }

    pub fn contains(&self, a: &GroupElement) -> bool {
        match (&self.repr, a) {
            (Repr::Table(t), GroupElement::Index(i)) => *i < t.table.len(),
            (Repr::CyclicPower { n, d }, GroupElement::Vector(v)) => {
                v.len() == *d && v.iter().all(|&c| c >= 0 && (c as u64) < *n)
            }
            (Repr::Lattice { d }, GroupElement::Vector(v)) => v.len() == *d,
            _ => false,
        }
    }

    pub fn check_element(&self, a: &GroupElement) -> Result<(), GroupError> {
        if self.contains(a) {
            Ok(())
        } else {
            Err(GroupError::NotAnElement {
                element: a.to_string(),
                group: self.describe(),
            })
        }
    }

    /// Group product. Both arguments must be elements of this group.
    pub fn op(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        match (&self.repr, a, b) {
            (Repr::Table(t), GroupElement::Index(i), GroupElement::Index(j)) => {
                GroupElement::Index(t.table[*i][*j])
            }
            (Repr::CyclicPower { n, .. }, GroupElement::Vector(x), GroupElement::Vector(y)) => {
                let n = *n as i64;
                GroupElement::Vector(
                    x.iter()
                        .zip(y)
                        .map(|(p, q)| (p + q).rem_euclid(n))
                        .collect(),
                )
            }
            (Repr::Lattice { .. }, GroupElement::Vector(x), GroupElement::Vector(y)) => {
                GroupElement::Vector(x.iter().zip(y).map(|(p, q)| p + q).collect())
            }
            _ => panic!("{a} or {b} is not an element of {}", self.describe()),
        }
    }

    pub fn inverse(&self, a: &GroupElement) -> GroupElement {
        match (&self.repr, a) {
            (Repr::Table(t), GroupElement::Index(i)) => GroupElement::Index(t.inverse[*i]),
            (Repr::CyclicPower { n, .. }, GroupElement::Vector(x)) => {
                let n = *n as i64;
                GroupElement::Vector(x.iter().map(|p| (-p).rem_euclid(n)).collect())
            }
            (Repr::Lattice { .. }, GroupElement::Vector(x)) => {
                GroupElement::Vector(x.iter().map(|p| -p).collect())
            }
            _ => panic!("{a} is not an element of {}", self.describe()),
        }
    }

    /// Index of a finite-group element.
    pub fn index_of(&self, a: &GroupElement) -> Option<usize> {
        if !self.contains(a) {
            return None;
        }
        match (&self.repr, a) {
            (Repr::Table(_), GroupElement::Index(i)) => Some(*i),
            (Repr::CyclicPower { n, .. }, GroupElement::Vector(x)) => Some(
                x.iter()
                    .rev()
                    .fold(0usize, |acc, &c| acc * (*n as usize) + c as usize),
            ),
            _ => None,
        }
    }

    /// The element with index `i` of a finite group.
    pub fn element(&self, i: usize) -> GroupElement {
        match &self.repr {
            Repr::Table(t) => {
                assert!(i < t.table.len(), "index {i} out of range");
                GroupElement::Index(i)
            }
            Repr::CyclicPower { n, d } => {
                let n = *n as usize;
                let mut rest = i;
                let coords = (0..*d)
                    .map(|_| {
                        let c = rest % n;
                        rest /= n;
                        c as i64
                    })
                    .collect();
                assert!(rest == 0, "index {i} out of range");
                GroupElement::Vector(coords)
            }
            Repr::Lattice { .. } => panic!("lattice elements are not enumerable"),
        }
    }

    /// All elements of a finite group in index order; empty for lattices.
    pub fn elements(&self) -> Vec<GroupElement> {
        match self.order() {
            Some(n) => (0..n).map(|i| self.element(i)).collect(),
            None => Vec::new(),
        }
    }

    /// Index-level product table access for finite groups.
    pub fn op_index(&self, i: usize, j: usize) -> usize {
        match &self.repr {
            Repr::Table(t) => t.table[i][j],
            _ => {
                let p = self.op(&self.element(i), &self.element(j));
                self.index_of(&p).expect("closed")
            }
        }
    }

    pub fn inverse_index(&self, i: usize) -> usize {
        match &self.repr {
            Repr::Table(t) => t.inverse[i],
            _ => self
                .index_of(&self.inverse(&self.element(i)))
                .expect("closed"),
        }
    }

    /// Human-readable element label.
    pub fn label(&self, a: &GroupElement) -> String {
        match (&self.repr, a) {
            (Repr::Table(t), GroupElement::Index(i)) if *i < t.names.len() => t.names[*i].clone(),
            _ => a.to_string(),
        }
    }

    pub fn names(&self) -> Option<&[String]> {
        match &self.repr {
            Repr::Table(t) => Some(&t.names),
            _ => None,
        }
    }

    pub fn describe(&self) -> String {
        match &self.repr {
            Repr::Table(t) => format!("table group of order {}", t.table.len()),
            Repr::CyclicPower { n, d } => format!("(Z_{n})^{d}"),
            Repr::Lattice { d } => format!("Z^{d}"),
        }
    }
}
