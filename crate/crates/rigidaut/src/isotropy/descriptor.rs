//! Symbolic group descriptions.

use std::fmt;

use serde::ser::{SerializeMap, Serializer};
use serde::Serialize;

/// An expression tree over a few atomic groups.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroupDescriptor {
    Cyclic(u64),
    /// Rank of an algebraic torus `(K*)^j`.
    Torus(u32),
    /// Additive group of the named kernel.
    Unipotent(String),
    /// Product of symmetric groups on blocks of the given sizes.
    Perm(Vec<u32>),
    Direct(Box<GroupDescriptor>, Box<GroupDescriptor>),
    Semidirect {
        normal: Box<GroupDescriptor>,
        factor: Box<GroupDescriptor>,
    },
}

impl GroupDescriptor {
    pub fn direct(a: GroupDescriptor, b: GroupDescriptor) -> Self {
        GroupDescriptor::Direct(Box::new(a), Box::new(b))
    }

    pub fn semidirect(normal: GroupDescriptor, factor: GroupDescriptor) -> Self {
        GroupDescriptor::Semidirect {
            normal: Box::new(normal),
            factor: Box::new(factor),
        }
    }

    /// Whether the group is trivial as written.
    pub fn is_trivial(&self) -> bool {
        match self {
            GroupDescriptor::Cyclic(n) => *n == 1,
            GroupDescriptor::Torus(j) => *j == 0,
            GroupDescriptor::Unipotent(_) => false,
            GroupDescriptor::Perm(blocks) => blocks.iter().all(|&b| b <= 1),
            GroupDescriptor::Direct(a, b) => a.is_trivial() && b.is_trivial(),
            GroupDescriptor::Semidirect { normal, factor } => {
                normal.is_trivial() && factor.is_trivial()
            }
        }
    }

    /// Drop trivial factors.
    pub fn simplify(self) -> Self {
        match self {
            GroupDescriptor::Direct(a, b) => {
                let (a, b) = (a.simplify(), b.simplify());
                match (a.is_trivial(), b.is_trivial()) {
                    (true, _) => b,
                    (_, true) => a,
                    _ => GroupDescriptor::direct(a, b),
                }
            }
            GroupDescriptor::Semidirect { normal, factor } => {
                let (n, f) = (normal.simplify(), factor.simplify());
                match (n.is_trivial(), f.is_trivial()) {
                    (true, _) => f,
                    (_, true) => n,
                    _ => GroupDescriptor::semidirect(n, f),
                }
            }
            other => other,
        }
    }
}

impl Serialize for GroupDescriptor {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(None)?;
        match self {
            GroupDescriptor::Cyclic(n) => map.serialize_entry("cyclic", n)?,
            GroupDescriptor::Torus(j) => map.serialize_entry("torus", j)?,
            GroupDescriptor::Unipotent(k) => map.serialize_entry("unipotent", k)?,
            GroupDescriptor::Perm(b) => map.serialize_entry("perm", b)?,
            GroupDescriptor::Direct(a, b) => {
                map.serialize_entry("op", "direct")?;
                map.serialize_entry("normal", a)?;
                map.serialize_entry("factor", b)?;
            }
            GroupDescriptor::Semidirect { normal, factor } => {
                map.serialize_entry("op", "semidirect")?;
                map.serialize_entry("normal", normal)?;
                map.serialize_entry("factor", factor)?;
            }
        }
        map.end()
    }
}

impl fmt::Display for GroupDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupDescriptor::Cyclic(n) => write!(f, "Z{n}"),
            GroupDescriptor::Torus(j) => write!(f, "(K*)^{j}"),
            GroupDescriptor::Unipotent(k) => write!(f, "({k}, +)"),
            GroupDescriptor::Perm(blocks) => {
                let parts: Vec<String> = blocks
                    .iter()
                    .filter(|&&b| b > 1)
                    .map(|b| format!("S{b}"))
                    .collect();
                if parts.is_empty() {
                    f.write_str("1")
                } else {
                    f.write_str(&parts.join(" x "))
                }
            }
            GroupDescriptor::Direct(a, b) => write!(f, "({a} x {b})"),
            GroupDescriptor::Semidirect { normal, factor } => write!(f, "({factor} ⋉ {normal})"),
        }
    }
}
