use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use super::GroupError;

/// Names a group in the catalog grammar:
/// `cyclic:n`, `abelian:n1xn2x..`, `dihedral:n`, `sym:n`, `alt:n`, `quaternion:8`,
/// `product(D1,D2,..)`.
///
/// `Derived` labels groups built from other groups (subgroups, quotients); it has
/// no textual grammar and cannot be parsed back.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum GroupDescriptor {
    Cyclic(usize),
    Abelian(Vec<usize>),
    /// Dihedral group of order `2n`.
    Dihedral(usize),
    Symmetric(usize),
    Alternating(usize),
    Quaternion,
    Product(Vec<GroupDescriptor>),
    Derived(String),
}

impl GroupDescriptor {
    /// Order of the described group, saturating on overflow.
    pub fn order(&self) -> usize {
        match self {
            GroupDescriptor::Cyclic(n) => *n,
            GroupDescriptor::Abelian(ns) => ns.iter().fold(1usize, |a, &n| a.saturating_mul(n)),
            GroupDescriptor::Dihedral(n) => n.saturating_mul(2),
            GroupDescriptor::Symmetric(n) => (1..=*n).fold(1usize, |a, k| a.saturating_mul(k)),
            GroupDescriptor::Alternating(n) => {
                let f = (1..=*n).fold(1usize, |a, k| a.saturating_mul(k));
                if *n >= 2 {
                    f / 2
                } else {
                    f
                }
            }
            GroupDescriptor::Quaternion => 8,
            GroupDescriptor::Product(fs) => fs.iter().fold(1usize, |a, f| a.saturating_mul(f.order())),
            GroupDescriptor::Derived(_) => 0,
        }
    }

    pub fn validate(&self) -> Result<(), GroupError> {
        let bad = |msg: String| Err(GroupError::BadParameter(msg));
        match self {
            GroupDescriptor::Cyclic(0) => bad("cyclic:0 has no elements".into()),
            GroupDescriptor::Abelian(ns) if ns.is_empty() || ns.contains(&0) => {
                bad(format!("abelian factors must be positive: {self}"))
            }
            GroupDescriptor::Dihedral(0) => bad("dihedral:n needs n >= 1".into()),
            GroupDescriptor::Symmetric(n) | GroupDescriptor::Alternating(n) if !(1..=4).contains(n) => {
                bad(format!("{self}: degree must be in 1..=4"))
            }
            GroupDescriptor::Product(fs) => {
                if fs.is_empty() {
                    return bad("product() needs at least one factor".into());
                }
                fs.iter().try_for_each(|f| f.validate())
            }
            _ => Ok(()),
        }
    }
}

impl fmt::Display for GroupDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupDescriptor::Cyclic(n) => write!(f, "cyclic:{n}"),
            GroupDescriptor::Abelian(ns) => {
                let parts: Vec<String> = ns.iter().map(|n| n.to_string()).collect();
                write!(f, "abelian:{}", parts.join("x"))
            }
            GroupDescriptor::Dihedral(n) => write!(f, "dihedral:{n}"),
            GroupDescriptor::Symmetric(n) => write!(f, "sym:{n}"),
            GroupDescriptor::Alternating(n) => write!(f, "alt:{n}"),
            GroupDescriptor::Quaternion => write!(f, "quaternion:8"),
            GroupDescriptor::Product(fs) => {
                let parts: Vec<String> = fs.iter().map(|d| d.to_string()).collect();
                write!(f, "product({})", parts.join(","))
            }
            GroupDescriptor::Derived(label) => write!(f, "{label}"),
        }
    }
}

impl Serialize for GroupDescriptor {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// Splits on commas that are not nested inside parentheses or braces.
pub(crate) fn split_top_level(s: &str) -> Vec<&str> {
    let mut parts = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in s.char_indices() {
        match c {
            '(' | '{' => depth += 1,
            ')' | '}' => depth -= 1,
            ',' if depth == 0 => {
                parts.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    parts.push(&s[start..]);
    parts
}

fn parse_usize(s: &str, ctx: &str) -> Result<usize, GroupError> {
    s.trim()
        .parse()
        .map_err(|_| GroupError::BadParameter(format!("{ctx}: expected a positive integer, got `{s}`")))
}

impl FromStr for GroupDescriptor {
    type Err = GroupError;

    fn from_str(s: &str) -> Result<Self, GroupError> {
        let s = s.trim();
        let desc = if let Some(inner) = s.strip_prefix("product(") {
            let inner = inner
                .strip_suffix(')')
                .ok_or_else(|| GroupError::BadParameter(format!("unbalanced parentheses in `{s}`")))?;
            let factors = split_top_level(inner)
                .into_iter()
                .map(str::parse)
                .collect::<Result<Vec<_>, _>>()?;
            GroupDescriptor::Product(factors)
        } else {
            let (kind, arg) = s
                .split_once(':')
                .ok_or_else(|| GroupError::UnknownKind(s.to_string()))?;
            match kind {
                "cyclic" => GroupDescriptor::Cyclic(parse_usize(arg, s)?),
                "abelian" => GroupDescriptor::Abelian(
                    arg.split('x')
                        .map(|p| parse_usize(p, s))
                        .collect::<Result<Vec<_>, _>>()?,
                ),
                "dihedral" => GroupDescriptor::Dihedral(parse_usize(arg, s)?),
                "sym" => GroupDescriptor::Symmetric(parse_usize(arg, s)?),
                "alt" => GroupDescriptor::Alternating(parse_usize(arg, s)?),
                "quaternion" => {
                    if parse_usize(arg, s)? != 8 {
                        return Err(GroupError::BadParameter(format!("only quaternion:8 is supported, got `{s}`")));
                    }
                    GroupDescriptor::Quaternion
                }
                _ => return Err(GroupError::UnknownKind(kind.to_string())),
            }
        };
        desc.validate()?;
        Ok(desc)
    }
}
