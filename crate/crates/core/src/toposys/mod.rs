//! Topo-systems: sets of subgroups containing `1` and `G`, closed under joins of
//! arbitrary subfamilies and under pairwise intersection.
//!
//! On a finite lattice every family of members is finite, so closure under arbitrary
//! joins is the same as closure under pairwise joins (induct on the family size; the
//! empty family generates `1`). [`verify_toposys`] and [`generate_toposys`] rely on this.

mod calculus;
mod derived;
mod star;

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use fixedbitset::FixedBitSet;
use serde::Serialize;
use thiserror::Error;

use crate::bits::{indices, ElementId, ElementSet};
use crate::group::{split_top_level, GroupError};
use crate::lattice::{LatticeError, SubgroupLattice, SubgroupLiteral, Variety, DEFAULT_AUTOMORPHISM_CAP};

pub use calculus::{
    is_topomorphism, Continuity, HausdorffReport, SeparationWitness, SubcoverCertificate, TClosedReport,
};
pub use derived::{induced_members, InducedSystem, QuotientProbe};
pub use star::StarReport;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ToposysError {
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("bad topo-system parameter: {0}")]
    BadParameter(String),
    #[error("unknown topo-system kind `{0}`")]
    UnknownKind(String),
    #[error("not a topo-system: {0}")]
    Violation(ToposysViolation),
    #[error("subgroup #{0} is not topen")]
    NotTopen(usize),
    #[error("operands live on different groups")]
    LatticeMismatch,
}

/// First axiom failure found by [`verify_toposys`].
#[derive(Debug, Error, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "axiom", rename_all = "snake_case")]
pub enum ToposysViolation {
    #[error("index #{index} is out of range")]
    IndexOutOfRange { index: usize },
    #[error("the trivial subgroup is missing")]
    MissingTrivial,
    #[error("the whole group is missing")]
    MissingWhole,
    #[error("join of #{a} and #{b} is #{join}, which is missing")]
    JoinNotClosed { a: usize, b: usize, join: usize },
    #[error("meet of #{a} and #{b} is #{meet}, which is missing")]
    MeetNotClosed { a: usize, b: usize, meet: usize },
}

/// How a topo-system was (or is to be) built.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum TopoDescriptor {
    Discrete,
    Trivial,
    /// Subgroups containing `B`, plus `1`.
    Principal(SubgroupLiteral),
    /// Finite-index subgroups plus `1`; all subgroups on a finite group.
    Cofinite,
    Normal,
    Characteristic,
    /// Normal `A` with `G/A` in the variety, plus `1`.
    Variety(Variety),
    /// `{A : [A,K] ⊆ H} ∪ {G}` for `H ≤ K`.
    Thk { h: SubgroupLiteral, k: SubgroupLiteral },
    /// `{A : H ⊆ N_G(A)}`.
    Conj(SubgroupLiteral),
    /// Least topo-system containing the listed subgroups.
    Generated(Vec<SubgroupLiteral>),
    /// Systems produced by other constructions (induced, quotient, product).
    Derived(String),
}

impl TopoDescriptor {
    /// Family name as used in reports: the part before the first `:`.
    pub fn family(&self) -> &'static str {
        match self {
            TopoDescriptor::Discrete => "discrete",
            TopoDescriptor::Trivial => "trivial",
            TopoDescriptor::Principal(_) => "principal",
            TopoDescriptor::Cofinite => "cofinite",
            TopoDescriptor::Normal => "normal",
            TopoDescriptor::Characteristic => "characteristic",
            TopoDescriptor::Variety(_) => "variety",
            TopoDescriptor::Thk { .. } => "thk",
            TopoDescriptor::Conj(_) => "conj",
            TopoDescriptor::Generated(_) => "generated",
            TopoDescriptor::Derived(_) => "derived",
        }
    }
}

impl fmt::Display for TopoDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TopoDescriptor::Discrete => write!(f, "discrete"),
            TopoDescriptor::Trivial => write!(f, "trivial"),
            TopoDescriptor::Principal(b) => write!(f, "principal:{b}"),
            TopoDescriptor::Cofinite => write!(f, "cofinite"),
            TopoDescriptor::Normal => write!(f, "normal"),
            TopoDescriptor::Characteristic => write!(f, "characteristic"),
            TopoDescriptor::Variety(v) => write!(f, "variety:{v}"),
            TopoDescriptor::Thk { h, k } => write!(f, "thk:{h}:{k}"),
            TopoDescriptor::Conj(h) => write!(f, "conj:{h}"),
            TopoDescriptor::Generated(seed) => {
                let parts: Vec<String> = seed.iter().map(|s| s.to_string()).collect();
                write!(f, "generated:{}", parts.join(","))
            }
            TopoDescriptor::Derived(label) => write!(f, "{label}"),
        }
    }
}

impl Serialize for TopoDescriptor {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// Splits `a:b` at the first `:` outside braces.
fn split_colon(s: &str) -> Option<(&str, &str)> {
    let mut depth = 0i32;
    for (i, c) in s.char_indices() {
        match c {
            '{' => depth += 1,
            '}' => depth -= 1,
            ':' if depth == 0 => return Some((&s[..i], &s[i + 1..])),
            _ => {}
        }
    }
    None
}

impl FromStr for TopoDescriptor {
    type Err = ToposysError;

    fn from_str(s: &str) -> Result<Self, ToposysError> {
        let s = s.trim();
        let (kind, arg) = match split_colon(s) {
            Some((k, a)) => (k, Some(a)),
            None => (s, None),
        };
        fn need<'a>(a: Option<&'a str>, kind: &str) -> Result<&'a str, ToposysError> {
            a.ok_or_else(|| ToposysError::BadParameter(format!("`{kind}` needs a parameter")))
        }
        let no_arg = |d: TopoDescriptor| match arg {
            None => Ok(d),
            Some(_) => Err(ToposysError::BadParameter(format!("`{kind}` takes no parameter"))),
        };
        match kind {
            "discrete" => no_arg(TopoDescriptor::Discrete),
            "trivial" => no_arg(TopoDescriptor::Trivial),
            "cofinite" => no_arg(TopoDescriptor::Cofinite),
            "normal" => no_arg(TopoDescriptor::Normal),
            "characteristic" => no_arg(TopoDescriptor::Characteristic),
            "principal" => Ok(TopoDescriptor::Principal(need(arg, kind)?.parse()?)),
            "conj" => Ok(TopoDescriptor::Conj(need(arg, kind)?.parse()?)),
            "variety" => Ok(TopoDescriptor::Variety(need(arg, kind)?.parse()?)),
            "thk" => {
                let (h, k) = split_colon(need(arg, kind)?)
                    .ok_or_else(|| ToposysError::BadParameter("thk needs two subgroups `thk:H:K`".into()))?;
                Ok(TopoDescriptor::Thk { h: h.parse()?, k: k.parse()? })
            }
            "generated" => {
                let a = need(arg, kind)?;
                let seed = if a.trim().is_empty() {
                    Vec::new()
                } else {
                    split_top_level(a).into_iter().map(str::parse).collect::<Result<_, _>>()?
                };
                Ok(TopoDescriptor::Generated(seed))
            }
            _ => Err(ToposysError::UnknownKind(kind.to_string())),
        }
    }
}

/// A verified topo-system on a lattice.
#[derive(Clone)]
pub struct TopoSystem {
    lattice: Arc<SubgroupLattice>,
    members: FixedBitSet,
    descriptor: TopoDescriptor,
    notes: Vec<String>,
}

impl fmt::Debug for TopoSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TopoSystem")
            .field("group", &self.lattice.group().descriptor().to_string())
            .field("descriptor", &self.descriptor.to_string())
            .field("members", &indices(&self.members))
            .finish()
    }
}

impl PartialEq for TopoSystem {
    fn eq(&self, other: &Self) -> bool {
        self.lattice.group() == other.lattice.group() && self.members == other.members
    }
}

/// Checks the three axioms on a candidate index set; pairwise joins suffice on a
/// finite lattice.
pub fn verify_toposys(lattice: &SubgroupLattice, members: &FixedBitSet) -> Result<(), ToposysViolation> {
    if let Some(index) = members.ones().find(|&i| i >= lattice.len()) {
        return Err(ToposysViolation::IndexOutOfRange { index });
    }
    if !members.contains(lattice.trivial()) {
        return Err(ToposysViolation::MissingTrivial);
    }
    let list = indices(members);
    for (i, &a) in list.iter().enumerate() {
        for &b in &list[i + 1..] {
            let join = lattice.join(a, b);
            if !members.contains(join) {
                return Err(ToposysViolation::JoinNotClosed { a, b, join });
            }
            let meet = lattice.meet(a, b);
            if !members.contains(meet) {
                return Err(ToposysViolation::MeetNotClosed { a, b, meet });
            }
        }
    }
    if !members.contains(lattice.top()) {
        return Err(ToposysViolation::MissingWhole);
    }
    Ok(())
}

/// Closes `seed` under pairwise joins and meets, round by round. Returns the closure and
/// the number of rounds that added something.
pub(crate) fn close_join_meet(lattice: &SubgroupLattice, seed: &FixedBitSet) -> (FixedBitSet, usize) {
    let mut current = seed.clone();
    let mut rounds = 0;
    loop {
        let list = indices(&current);
        let mut next = current.clone();
        for (i, &a) in list.iter().enumerate() {
            for &b in &list[i + 1..] {
                next.insert(lattice.join(a, b));
                next.insert(lattice.meet(a, b));
            }
        }
        if next == current {
            return (current, rounds);
        }
        current = next;
        rounds += 1;
    }
}

/// Least topo-system containing `seed`.
pub fn generate_toposys(lattice: &Arc<SubgroupLattice>, seed: &[usize]) -> Result<TopoSystem, ToposysError> {
    let mut set = FixedBitSet::with_capacity(lattice.len());
    for &i in seed {
        set.insert(lattice.check_index(i)?);
    }
    set.insert(lattice.trivial());
    set.insert(lattice.top());
    let (members, rounds) = close_join_meet(lattice, &set);
    debug_assert!(rounds <= lattice.len());
    let descriptor = TopoDescriptor::Generated(seed.iter().map(|&i| SubgroupLiteral::Index(i)).collect());
    let mut t = TopoSystem::from_members(lattice.clone(), members, descriptor)?;
    t.notes.push(format!("fixpoint reached after {rounds} round(s)"));
    Ok(t)
}

/// Builds a catalog topo-system and verifies it.
pub fn build_toposys(lattice: &Arc<SubgroupLattice>, descriptor: &TopoDescriptor) -> Result<TopoSystem, ToposysError> {
    let n = lattice.len();
    let top = lattice.top();
    let select = |pred: &dyn Fn(usize) -> bool| -> FixedBitSet {
        let mut set = FixedBitSet::with_capacity(n);
        set.extend((0..n).filter(|&i| pred(i)));
        set
    };
    let mut notes = Vec::new();
    let members = match descriptor {
        TopoDescriptor::Discrete => select(&|_| true),
        TopoDescriptor::Trivial => select(&|i| i == 0 || i == top),
        TopoDescriptor::Cofinite => {
            notes.push("every subgroup of a finite group has finite index: cofinite equals discrete".to_string());
            select(&|_| true)
        }
        TopoDescriptor::Principal(b) => {
            let b = lattice.resolve(b)?;
            select(&|i| i == 0 || lattice.le(b, i))
        }
        TopoDescriptor::Normal => select(&|i| lattice.is_normal(i)),
        TopoDescriptor::Characteristic => {
            let auts = lattice.automorphisms(DEFAULT_AUTOMORPHISM_CAP)?;
            select(&|i| auts.is_characteristic(lattice.members(i)))
        }
        TopoDescriptor::Variety(v) => {
            let residual = lattice.verbal_residual(*v);
            notes.push(format!("residual is #{residual}"));
            select(&|i| i == 0 || (lattice.le(residual, i) && lattice.is_normal(i)))
        }
        TopoDescriptor::Thk { h, k } => {
            let (h, k) = (lattice.resolve(h)?, lattice.resolve(k)?);
            if !lattice.le(h, k) {
                return Err(ToposysError::BadParameter(format!("thk needs H <= K, got #{h} and #{k}")));
            }
            select(&|i| i == top || lattice.le(lattice.commutator(i, k), h))
        }
        TopoDescriptor::Conj(h) => {
            let h = lattice.resolve(h)?;
            select(&|i| lattice.le(h, lattice.normalizer(i)))
        }
        TopoDescriptor::Generated(seed) => {
            let seed = seed.iter().map(|s| lattice.resolve(s)).collect::<Result<Vec<_>, _>>()?;
            let mut t = generate_toposys(lattice, &seed)?;
            t.descriptor = descriptor.clone();
            return Ok(t);
        }
        TopoDescriptor::Derived(label) => {
            return Err(ToposysError::BadParameter(format!("`{label}` cannot be built from a descriptor")))
        }
    };
    let mut t = TopoSystem::from_members(lattice.clone(), members, descriptor.clone())?;
    t.notes = notes;
    Ok(t)
}

impl TopoSystem {
    /// Wraps a member set after verifying the axioms.
    pub fn from_members(
        lattice: Arc<SubgroupLattice>,
        members: FixedBitSet,
        descriptor: TopoDescriptor,
    ) -> Result<Self, ToposysError> {
        let mut members = members;
        members.grow(lattice.len());
        verify_toposys(&lattice, &members).map_err(ToposysError::Violation)?;
        Ok(TopoSystem { lattice, members, descriptor, notes: Vec::new() })
    }

    pub fn lattice(&self) -> &Arc<SubgroupLattice> {
        &self.lattice
    }

    pub fn descriptor(&self) -> &TopoDescriptor {
        &self.descriptor
    }

    pub fn notes(&self) -> &[String] {
        &self.notes
    }

    pub fn members(&self) -> &FixedBitSet {
        &self.members
    }

    pub fn topens(&self) -> Vec<usize> {
        indices(&self.members)
    }

    #[inline]
    pub fn contains(&self, i: usize) -> bool {
        self.members.contains(i)
    }

    pub fn len(&self) -> usize {
        self.members.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn is_discrete(&self) -> bool {
        self.len() == self.lattice.len()
    }

    pub fn topens_containing(&self, x: ElementId) -> impl Iterator<Item = usize> + '_ {
        self.members.ones().filter(move |&i| self.lattice.members(i).contains(x))
    }

    /// Meet of all topens containing `x`, itself a topen.
    pub fn smallest_topen_containing(&self, x: ElementId) -> usize {
        self.lattice.meet_all(self.topens_containing(x))
    }

    pub(crate) fn members_as_sets(&self) -> Vec<ElementSet> {
        self.members.ones().map(|i| self.lattice.members(i)).collect()
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::group::{build_group, DEFAULT_ORDER_CAP};

    pub(crate) fn lat(s: &str) -> Arc<SubgroupLattice> {
        let g = build_group(&s.parse().unwrap(), DEFAULT_ORDER_CAP).unwrap();
        Arc::new(SubgroupLattice::enumerate(Arc::new(g)))
    }

    pub(crate) fn sys(l: &Arc<SubgroupLattice>, d: &str) -> TopoSystem {
        build_toposys(l, &d.parse().unwrap()).unwrap()
    }

    fn set(n: usize, xs: &[usize]) -> FixedBitSet {
        let mut s = FixedBitSet::with_capacity(n);
        s.extend(xs.iter().copied());
        s
    }

    #[test]
    fn descriptor_round_trip() {
        for s in [
            "discrete",
            "trivial",
            "normal",
            "characteristic",
            "cofinite",
            "principal:gen{1,2}",
            "variety:abelian",
            "variety:exponent-4",
            "thk:gen{}:#5",
            "conj:#4",
            "generated:#1,#2",
            "generated:gen{1},#3",
        ] {
            let d: TopoDescriptor = s.parse().unwrap();
            assert_eq!(d.to_string(), s);
        }
        assert!(matches!("open".parse::<TopoDescriptor>(), Err(ToposysError::UnknownKind(_))));
        assert!("principal".parse::<TopoDescriptor>().is_err());
        assert!("discrete:1".parse::<TopoDescriptor>().is_err());
        assert!("variety:exponent-5".parse::<TopoDescriptor>().is_err());
        assert!("thk:#1".parse::<TopoDescriptor>().is_err());
    }

    #[test]
    fn verify_examples() {
        let l = lat("sym:3");
        assert!(verify_toposys(&l, &set(6, &[0, 5])).is_ok());
        assert!(verify_toposys(&l, &set(6, &[0, 1, 2, 3, 4, 5])).is_ok());
        assert_eq!(
            verify_toposys(&l, &set(6, &[0, 1, 2])),
            Err(ToposysViolation::JoinNotClosed { a: 1, b: 2, join: 5 })
        );
        assert!(verify_toposys(&l, &set(6, &[0, 1, 2, 5])).is_ok());
        assert!(verify_toposys(&l, &set(6, &[0, 1, 4, 5])).is_ok());
        assert_eq!(verify_toposys(&l, &set(6, &[1, 5])), Err(ToposysViolation::MissingTrivial));
        assert_eq!(verify_toposys(&l, &set(6, &[0, 4])), Err(ToposysViolation::MissingWhole));
        assert_eq!(
            verify_toposys(&l, &set(6, &[0, 9])),
            Err(ToposysViolation::IndexOutOfRange { index: 9 })
        );
    }

    #[test]
    fn missing_join_reports_pair() {
        let l = lat("dihedral:4");
        // reflections s and rs generate all of D4
        let (s, rs) = (l.cyclic(4), l.cyclic(5));
        let err = verify_toposys(&l, &set(l.len(), &[0, s, rs])).unwrap_err();
        assert_eq!(err, ToposysViolation::JoinNotClosed { a: s.min(rs), b: s.max(rs), join: l.top() });
        // s and r^2 s commute: their join has order 4 and is missing
        let (a, b) = (l.cyclic(4), l.cyclic(6));
        match verify_toposys(&l, &set(l.len(), &[0, a, b, l.top()])).unwrap_err() {
            ToposysViolation::JoinNotClosed { join, .. } => assert_eq!(l.subgroup_order(join), 4),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn family_examples() {
        let s3 = lat("sym:3");
        assert_eq!(sys(&s3, "normal").topens(), vec![0, 4, 5]);
        assert_eq!(sys(&s3, "conj:#4").topens(), vec![0, 4, 5]);
        assert_eq!(sys(&s3, "variety:abelian").topens(), vec![0, 4, 5]);
        assert_eq!(sys(&s3, "generated:#1,#2").topens(), vec![0, 1, 2, 5]);
        assert_eq!(sys(&s3, "generated:").topens(), vec![0, 5]);
        assert_eq!(sys(&s3, "principal:gen{1}").topens(), vec![0, 1, 5]);
        assert!(sys(&s3, "cofinite").is_discrete());
        assert!(!sys(&s3, "cofinite").notes().is_empty());

        let v = lat("abelian:2x2");
        assert_eq!(sys(&v, "characteristic").topens(), vec![0, 4]);

        let q = lat("quaternion:8");
        let centre = q.index_of([0, 1].into_iter().collect()).unwrap();
        assert_eq!(sys(&q, "thk:gen{}:#5").topens(), vec![0, centre, q.top()]);

        assert!(matches!(
            build_toposys(&s3, &"thk:#4:#1".parse().unwrap()),
            Err(ToposysError::BadParameter(_))
        ));
    }

    #[test]
    fn variety_system_is_principal_meet_normal() {
        for g in ["sym:3", "dihedral:4", "alt:4", "cyclic:12", "quaternion:8"] {
            let l = lat(g);
            for v in ["abelian", "exponent-2", "exponent-3"] {
                let variety: Variety = v.parse().unwrap();
                let residual = l.verbal_residual(variety);
                let tx = sys(&l, &format!("variety:{v}"));
                let th = sys(&l, &format!("principal:#{residual}"));
                let tn = sys(&l, "normal");
                let mut meet = th.members().clone();
                meet.intersect_with(tn.members());
                assert_eq!(tx.members(), &meet, "{g} {v}");
            }
        }
    }

    #[test]
    fn generated_is_least() {
        let l = lat("sym:3");
        let t = generate_toposys(&l, &[1, 2]).unwrap();
        // every verified system containing {1,2} contains t
        for mask in 0u32..64 {
            let cand = set(6, &(0..6).filter(|i| mask >> i & 1 == 1).collect::<Vec<_>>());
            if cand.contains(1) && cand.contains(2) && verify_toposys(&l, &cand).is_ok() {
                assert!(t.members().is_subset(&cand));
            }
        }
        let all = generate_toposys(&l, &[0, 1, 2, 3, 4, 5]).unwrap();
        assert!(all.is_discrete());
    }
}
