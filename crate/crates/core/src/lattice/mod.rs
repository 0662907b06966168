//! The complete subgroup lattice of a finite group and the subgroup algebra built on it.
//!
//! Subgroups are identified by their canonical index: the position in the array of all
//! subgroups sorted by order, then by the ascending list of member ids. Index 0 is the
//! trivial subgroup and the last index is the whole group.

mod auto;
mod cover;

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, OnceLock};

use fixedbitset::FixedBitSet;
use serde::Serialize;
use thiserror::Error;

use crate::bits::{ElementId, ElementSet};
use crate::group::FiniteGroup;

pub use auto::{AutomorphismSet, DEFAULT_AUTOMORPHISM_CAP};
pub use cover::{minimal_cover, Cover, EXACT_COVER_LIMIT};

/// Tables are precomputed lazily only below this many subgroups.
const TABLE_LIMIT: usize = 512;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LatticeError {
    #[error("group order {order} exceeds cap {cap}")]
    OrderCapExceeded { order: usize, cap: usize },
    #[error("{0} is not a subgroup of this lattice's group")]
    NotASubgroup(ElementSet),
    #[error("subgroup index #{index} out of range (lattice has {len} subgroups)")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("element {element} out of range for a group of order {order}")]
    ElementOutOfRange { element: ElementId, order: usize },
    #[error("unsupported variety `{0}` (supported: abelian, exponent-n for n in 2,3,4,6)")]
    UnsupportedVariety(String),
    #[error("subgroups belong to different lattices")]
    ParentMismatch,
    #[error("bad subgroup literal `{0}` (expected gen{{e1,e2,..}} or #k)")]
    BadLiteral(String),
}

/// A subgroup together with its canonical index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Subgroup {
    pub index: usize,
    pub order: usize,
    pub members: ElementSet,
}

/// Varieties whose verbal residual is supported.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Variety {
    Abelian,
    Exponent(usize),
}

impl fmt::Display for Variety {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Variety::Abelian => write!(f, "abelian"),
            Variety::Exponent(n) => write!(f, "exponent-{n}"),
        }
    }
}

impl FromStr for Variety {
    type Err = LatticeError;

    fn from_str(s: &str) -> Result<Self, LatticeError> {
        if s == "abelian" {
            return Ok(Variety::Abelian);
        }
        let n = s
            .strip_prefix("exponent-")
            .or_else(|| s.strip_prefix("exponent:"))
            .and_then(|n| n.parse::<usize>().ok())
            .ok_or_else(|| LatticeError::UnsupportedVariety(s.to_string()))?;
        if [2, 3, 4, 6].contains(&n) {
            Ok(Variety::Exponent(n))
        } else {
            Err(LatticeError::UnsupportedVariety(s.to_string()))
        }
    }
}

/// A subgroup named on the command line: `gen{e1,e2,..}` or `#k`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum SubgroupLiteral {
    Generators(Vec<ElementId>),
    Index(usize),
}

impl fmt::Display for SubgroupLiteral {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SubgroupLiteral::Generators(gs) => {
                let parts: Vec<String> = gs.iter().map(|g| g.to_string()).collect();
                write!(f, "gen{{{}}}", parts.join(","))
            }
            SubgroupLiteral::Index(k) => write!(f, "#{k}"),
        }
    }
}

impl FromStr for SubgroupLiteral {
    type Err = LatticeError;

    fn from_str(s: &str) -> Result<Self, LatticeError> {
        let s = s.trim();
        let bad = || LatticeError::BadLiteral(s.to_string());
        if let Some(k) = s.strip_prefix('#') {
            return k.parse().map(SubgroupLiteral::Index).map_err(|_| bad());
        }
        let inner = s
            .strip_prefix("gen{")
            .and_then(|r| r.strip_suffix('}'))
            .ok_or_else(bad)?;
        if inner.trim().is_empty() {
            return Ok(SubgroupLiteral::Generators(Vec::new()));
        }
        inner
            .split(',')
            .map(|e| e.trim().parse().map_err(|_| bad()))
            .collect::<Result<Vec<_>, _>>()
            .map(SubgroupLiteral::Generators)
    }
}

/// Every subgroup of a finite group, in canonical order.
pub struct SubgroupLattice {
    group: Arc<FiniteGroup>,
    subgroups: Vec<ElementSet>,
    index: HashMap<ElementSet, usize>,
    join_table: OnceLock<Option<Vec<u32>>>,
    covers: OnceLock<Vec<Vec<usize>>>,
}

impl fmt::Debug for SubgroupLattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SubgroupLattice")
            .field("group", &self.group.descriptor().to_string())
            .field("len", &self.subgroups.len())
            .finish()
    }
}

impl SubgroupLattice {
    /// Enumerates every subgroup: seed with the cyclic subgroups, then close under
    /// joins with cyclic subgroups until no new subgroup appears.
    ///
    /// Every subgroup is the join of the cyclic subgroups it contains, so joining with
    /// cyclics alone reaches the same fixpoint as closing under all pairwise joins.
    pub fn enumerate(group: Arc<FiniteGroup>) -> Self {
        let n = group.order();
        let mut cyclic: Vec<ElementSet> = Vec::new();
        let mut seen: HashSet<ElementSet> = HashSet::new();
        for x in 0..n {
            let c = group.cyclic_subgroup(x);
            if seen.insert(c) {
                cyclic.push(c);
            }
        }
        let mut queue = cyclic.clone();
        while let Some(h) = queue.pop() {
            for &c in &cyclic {
                if c.is_subset(h) {
                    continue;
                }
                let j = group.subgroup_generated(h.union(c));
                if seen.insert(j) {
                    queue.push(j);
                }
            }
        }
        let mut subgroups: Vec<ElementSet> = seen.into_iter().collect();
        subgroups.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.iter().cmp(b.iter())));
        let index = subgroups.iter().enumerate().map(|(i, &s)| (s, i)).collect();
        SubgroupLattice {
            group,
            subgroups,
            index,
            join_table: OnceLock::new(),
            covers: OnceLock::new(),
        }
    }

    /// [`enumerate`](Self::enumerate) behind an explicit order cap.
    pub fn enumerate_with_cap(group: Arc<FiniteGroup>, cap: usize) -> Result<Self, LatticeError> {
        if group.order() > cap {
            return Err(LatticeError::OrderCapExceeded { order: group.order(), cap });
        }
        Ok(Self::enumerate(group))
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn len(&self) -> usize {
        self.subgroups.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subgroups.is_empty()
    }

    pub fn trivial(&self) -> usize {
        0
    }

    pub fn top(&self) -> usize {
        self.subgroups.len() - 1
    }

    #[inline]
    pub fn members(&self, i: usize) -> ElementSet {
        self.subgroups[i]
    }

    pub fn get(&self, i: usize) -> Subgroup {
        Subgroup { index: i, order: self.subgroups[i].len(), members: self.subgroups[i] }
    }

    pub fn all(&self) -> &[ElementSet] {
        &self.subgroups
    }

    pub fn subgroup_order(&self, i: usize) -> usize {
        self.subgroups[i].len()
    }

    pub fn index_of(&self, set: ElementSet) -> Option<usize> {
        self.index.get(&set).copied()
    }

    pub(crate) fn index_of_subgroup(&self, set: ElementSet) -> usize {
        self.index[&set]
    }

    pub fn check_index(&self, i: usize) -> Result<usize, LatticeError> {
        if i < self.len() {
            Ok(i)
        } else {
            Err(LatticeError::IndexOutOfRange { index: i, len: self.len() })
        }
    }

    /// Index of the subgroup generated by `gens`.
    pub fn generated(&self, gens: ElementSet) -> Result<usize, LatticeError> {
        if let Some(x) = gens.iter().find(|&x| x >= self.group.order()) {
            return Err(LatticeError::ElementOutOfRange { element: x, order: self.group.order() });
        }
        Ok(self.index_of_subgroup(self.group.subgroup_generated(gens)))
    }

    pub fn cyclic(&self, x: ElementId) -> usize {
        self.index_of_subgroup(self.group.cyclic_subgroup(x))
    }

    pub fn resolve(&self, literal: &SubgroupLiteral) -> Result<usize, LatticeError> {
        match literal {
            SubgroupLiteral::Index(k) => self.check_index(*k),
            SubgroupLiteral::Generators(gs) => self.generated(gs.iter().copied().collect()),
        }
    }

    /// `a ⊆ b`.
    #[inline]
    pub fn le(&self, a: usize, b: usize) -> bool {
        self.subgroups[a].is_subset(self.subgroups[b])
    }

    #[inline]
    pub fn meet(&self, a: usize, b: usize) -> usize {
        self.index_of_subgroup(self.subgroups[a].intersection(self.subgroups[b]))
    }

    pub fn join(&self, a: usize, b: usize) -> usize {
        let n = self.len();
        if let Some(table) = self.join_table.get_or_init(|| self.build_join_table()) {
            return table[a * n + b] as usize;
        }
        self.compute_join(a, b)
    }

    fn compute_join(&self, a: usize, b: usize) -> usize {
        let (sa, sb) = (self.subgroups[a], self.subgroups[b]);
        if sa.is_subset(sb) {
            b
        } else if sb.is_subset(sa) {
            a
        } else {
            self.index_of_subgroup(self.group.subgroup_generated(sa.union(sb)))
        }
    }

    fn build_join_table(&self) -> Option<Vec<u32>> {
        let n = self.len();
        if n > TABLE_LIMIT {
            return None;
        }
        let mut table = vec![0u32; n * n];
        for a in 0..n {
            for b in a..n {
                let j = self.compute_join(a, b) as u32;
                table[a * n + b] = j;
                table[b * n + a] = j;
            }
        }
        Some(table)
    }

    pub fn meet_all(&self, items: impl IntoIterator<Item = usize>) -> usize {
        let set = items
            .into_iter()
            .fold(self.group.elements(), |acc, i| acc.intersection(self.subgroups[i]));
        self.index_of_subgroup(set)
    }

    pub fn join_all(&self, items: impl IntoIterator<Item = usize>) -> usize {
        let set = items.into_iter().fold(ElementSet::EMPTY, |acc, i| acc.union(self.subgroups[i]));
        self.index_of_subgroup(self.group.subgroup_generated(set))
    }

    /// Upper covers in the Hasse diagram: `covers()[a]` lists every `b` with `a < b`
    /// and nothing strictly between.
    pub fn covers(&self) -> &[Vec<usize>] {
        self.covers.get_or_init(|| {
            let n = self.len();
            (0..n)
                .map(|a| {
                    let above: Vec<usize> = (a + 1..n).filter(|&b| self.le(a, b) && a != b).collect();
                    above
                        .iter()
                        .copied()
                        .filter(|&b| !above.iter().any(|&k| k != b && self.le(k, b)))
                        .collect()
                })
                .collect()
        })
    }

    /// Intersection of all conjugates of `x`.
    pub fn core(&self, x: usize) -> usize {
        let g = &self.group;
        let set = (0..g.order()).fold(self.subgroups[x], |acc, h| acc.intersection(g.conjugate_set(self.subgroups[x], h)));
        self.index_of_subgroup(set)
    }

    pub fn normalizer(&self, a: usize) -> usize {
        let g = &self.group;
        let set = (0..g.order())
            .filter(|&h| g.conjugate_set(self.subgroups[a], h) == self.subgroups[a])
            .collect();
        self.index_of_subgroup(set)
    }

    pub fn is_normal(&self, a: usize) -> bool {
        let g = &self.group;
        (0..g.order()).all(|h| g.conjugate_set(self.subgroups[a], h) == self.subgroups[a])
    }

    /// `⟨a b a^-1 b^-1 : a ∈ A, b ∈ B⟩`.
    pub fn commutator(&self, a: usize, b: usize) -> usize {
        let g = &self.group;
        let gens: ElementSet = self.subgroups[a]
            .iter()
            .flat_map(|x| self.subgroups[b].iter().map(move |y| g.commutator(x, y)))
            .collect();
        self.index_of_subgroup(g.subgroup_generated(gens))
    }

    /// The smallest normal subgroup with quotient in `variety`.
    pub fn verbal_residual(&self, variety: Variety) -> usize {
        let g = &self.group;
        match variety {
            Variety::Abelian => self.commutator(self.top(), self.top()),
            Variety::Exponent(n) => {
                let gens = (0..g.order()).map(|x| g.pow(x, n)).collect();
                self.index_of_subgroup(g.subgroup_generated(gens))
            }
        }
    }

    pub fn automorphisms(&self, cap: usize) -> Result<AutomorphismSet, LatticeError> {
        AutomorphismSet::compute(self.group.clone(), cap)
    }

    /// Indices of the subgroups of the lattice that lie inside `h`.
    pub fn below(&self, h: usize) -> FixedBitSet {
        let mut out = FixedBitSet::with_capacity(self.len());
        for i in 0..=h {
            if self.le(i, h) {
                out.insert(i);
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{build_group, DEFAULT_ORDER_CAP};

    fn lat(s: &str) -> SubgroupLattice {
        let g = build_group(&s.parse().unwrap(), DEFAULT_ORDER_CAP).unwrap();
        SubgroupLattice::enumerate(Arc::new(g))
    }

    fn find(l: &SubgroupLattice, members: &[usize]) -> usize {
        l.index_of(members.iter().copied().collect()).unwrap()
    }

    #[test]
    fn counts() {
        assert_eq!(lat("cyclic:1").len(), 1);
        assert_eq!(lat("cyclic:4").len(), 3);
        assert_eq!(lat("abelian:2x2").len(), 5);
        assert_eq!(lat("sym:3").len(), 6);
        assert_eq!(lat("quaternion:8").len(), 6);
        assert_eq!(lat("sym:4").len(), 30);
        assert_eq!(lat("alt:4").len(), 10);
        assert_eq!(lat("dihedral:4").len(), 10);
    }

    #[test]
    fn canonical_order_of_s3() {
        let l = lat("sym:3");
        let expect: Vec<Vec<usize>> = vec![vec![0], vec![0, 1], vec![0, 2], vec![0, 5], vec![0, 3, 4], (0..6).collect()];
        let got: Vec<Vec<usize>> = l.all().iter().map(|s| s.to_vec()).collect();
        assert_eq!(got, expect);
    }

    #[test]
    fn meet_join_examples() {
        let l = lat("sym:3");
        let (t1, t2, a3, top) = (1, 2, 4, 5);
        assert_eq!(l.join(t1, t2), top);
        assert_eq!(l.meet(a3, top), a3);
        assert_eq!(l.join(a3, 0), a3);
        let v = lat("abelian:2x2");
        assert_eq!(v.meet(1, 2), 0);
        assert_eq!(v.join(1, 2), 4);
    }

    #[test]
    fn core_normalizer_commutator() {
        let l = lat("sym:3");
        assert_eq!(l.core(l.top()), l.top());
        assert_eq!(l.core(1), 0);
        assert_eq!(l.normalizer(1), 1);
        assert_eq!(l.normalizer(l.top()), l.top());
        assert!(l.is_normal(4));
        assert!(!l.is_normal(2));
        assert_eq!(l.commutator(5, 5), 4);
        assert_eq!(l.commutator(3, 0), 0);

        let q = lat("quaternion:8");
        let i_sub = find(&q, &[0, 1, 2, 3]);
        assert_eq!(q.core(i_sub), i_sub);
        assert_eq!(q.commutator(q.top(), q.top()), find(&q, &[0, 1]));
    }

    #[test]
    fn residuals() {
        assert_eq!(lat("abelian:2x4").verbal_residual(Variety::Abelian), 0);
        let s3 = lat("sym:3");
        assert_eq!(s3.verbal_residual(Variety::Abelian), 4);
        let c4 = lat("cyclic:4");
        assert_eq!(c4.members(c4.verbal_residual(Variety::Exponent(2))).to_vec(), vec![0, 2]);
        assert!("exponent-5".parse::<Variety>().is_err());
        assert_eq!("exponent-6".parse::<Variety>().unwrap(), Variety::Exponent(6));
    }

    #[test]
    fn hasse_covers_of_v4() {
        let v = lat("abelian:2x2");
        assert_eq!(v.covers()[0], vec![1, 2, 3]);
        assert_eq!(v.covers()[1], vec![4]);
        assert!(v.covers()[4].is_empty());
    }

    #[test]
    fn literals() {
        assert_eq!("gen{1,2}".parse::<SubgroupLiteral>().unwrap(), SubgroupLiteral::Generators(vec![1, 2]));
        assert_eq!("#3".parse::<SubgroupLiteral>().unwrap(), SubgroupLiteral::Index(3));
        assert_eq!("gen{}".parse::<SubgroupLiteral>().unwrap(), SubgroupLiteral::Generators(vec![]));
        assert!("gen(1)".parse::<SubgroupLiteral>().is_err());
        let l = lat("sym:3");
        assert_eq!(l.resolve(&"gen{1,2}".parse().unwrap()).unwrap(), 5);
        assert!(l.resolve(&"#9".parse().unwrap()).is_err());
        assert!(l.resolve(&"gen{7}".parse().unwrap()).is_err());
    }
}
