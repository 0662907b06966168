//! Filters of subgroups: families of non-trivial subgroups containing `G`, closed
//! upwards and under intersection.
//!
//! On a finite lattice every filter is the up-set of the meet of its members (its
//! kernel), and every ultrafilter is principal: `F_x` for some `x ≠ 1`, with kernel
//! `⟨x⟩`. The second fact is a lemma derived here, not taken from the literature; the
//! enumeration below cross-checks it against brute force on small lattices.

pub mod exhaustive;
mod ordinary;
mod theorems;

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use fixedbitset::FixedBitSet;
use serde::Serialize;
use thiserror::Error;

use crate::bits::{indices, ElementId, ElementSet};
use crate::group::{split_top_level, Homomorphism};
use crate::lattice::{LatticeError, SubgroupLattice, SubgroupLiteral};
use crate::toposys::TopoSystem;

pub use ordinary::OrdinaryFilter;
pub use theorems::{standard_maps, theorem_checks, MapTarget, TheoremReport};

/// Lattices up to this size get the exhaustive cross-check in [`enumerate_ultrafilters`].
pub const EXHAUSTIVE_CHECK_LIMIT: usize = 6;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FilterError {
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error("no finite intersection property: the meet of {subfamily:?} is trivial")]
    NoFip { subfamily: Vec<usize> },
    #[error("the principal filter at the identity would need the trivial subgroup")]
    IdentityNotAllowed,
    #[error("the trivial group has no subgroup filters")]
    TrivialGroup,
    #[error("not a subgroup filter: {0}")]
    Violation(FilterViolation),
    #[error("pushforward is not a subgroup filter ({violation}); kernel in filter: {kernel_in_filter}")]
    NotAFilter { violation: FilterViolation, kernel_in_filter: bool },
    #[error("ordinary filter base is empty or contains the empty set")]
    DegenerateBase,
    #[error("operands live on different groups")]
    LatticeMismatch,
    #[error("ultrafilter enumeration disagrees with {0}")]
    LemmaViolated(String),
}

/// First failing filter axiom.
#[derive(Debug, Error, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "axiom", rename_all = "snake_case")]
pub enum FilterViolation {
    #[error("index #{index} is out of range")]
    IndexOutOfRange { index: usize },
    #[error("contains the trivial subgroup")]
    ContainsTrivial,
    #[error("the whole group is missing")]
    MissingWhole,
    #[error("#{a} is a member but #{b} above it is not")]
    NotUpwardClosed { a: usize, b: usize },
    #[error("meet of #{a} and #{b} is #{meet}, which is missing")]
    NotMeetClosed { a: usize, b: usize, meet: usize },
}

pub fn verify_filter(lattice: &SubgroupLattice, members: &FixedBitSet) -> Result<(), FilterViolation> {
    if let Some(index) = members.ones().find(|&i| i >= lattice.len()) {
        return Err(FilterViolation::IndexOutOfRange { index });
    }
    if members.contains(0) {
        return Err(FilterViolation::ContainsTrivial);
    }
    if !members.contains(lattice.top()) {
        return Err(FilterViolation::MissingWhole);
    }
    let list = indices(members);
    for &a in &list {
        if let Some(b) = (a + 1..lattice.len()).find(|&b| lattice.le(a, b) && !members.contains(b)) {
            return Err(FilterViolation::NotUpwardClosed { a, b });
        }
    }
    for (i, &a) in list.iter().enumerate() {
        for &b in &list[i + 1..] {
            let meet = lattice.meet(a, b);
            if !members.contains(meet) {
                return Err(FilterViolation::NotMeetClosed { a, b, meet });
            }
        }
    }
    Ok(())
}

#[derive(Clone)]
pub struct SubgroupFilter {
    lattice: Arc<SubgroupLattice>,
    members: FixedBitSet,
}

impl fmt::Debug for SubgroupFilter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SubgroupFilter")
            .field("group", &self.lattice.group().descriptor().to_string())
            .field("members", &indices(&self.members))
            .finish()
    }
}

impl PartialEq for SubgroupFilter {
    fn eq(&self, other: &Self) -> bool {
        self.lattice.group() == other.lattice.group() && self.members == other.members
    }
}

impl Eq for SubgroupFilter {}

impl SubgroupFilter {
    pub fn new(lattice: Arc<SubgroupLattice>, members: FixedBitSet) -> Result<Self, FilterError> {
        let mut members = members;
        members.grow(lattice.len());
        verify_filter(&lattice, &members).map_err(FilterError::Violation)?;
        Ok(SubgroupFilter { lattice, members })
    }

    /// Up-set of a non-trivial subgroup.
    pub(crate) fn up_set(lattice: &Arc<SubgroupLattice>, k: usize) -> Self {
        debug_assert!(k != 0);
        let mut members = FixedBitSet::with_capacity(lattice.len());
        members.extend((k..lattice.len()).filter(|&b| lattice.le(k, b)));
        SubgroupFilter { lattice: lattice.clone(), members }
    }

    pub fn lattice(&self) -> &Arc<SubgroupLattice> {
        &self.lattice
    }

    pub fn members(&self) -> &FixedBitSet {
        &self.members
    }

    pub fn indices(&self) -> Vec<usize> {
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

    /// Meet of all members; a member itself and never trivial.
    pub fn kernel(&self) -> usize {
        self.lattice.meet_all(self.members.ones())
    }

    pub fn is_subset(&self, other: &SubgroupFilter) -> bool {
        self.members.is_subset(&other.members)
    }

    /// For every member `C`, the non-members below `C` must not cover `C`.
    ///
    /// A failing finite family `A_1..A_n` with union `C ∈ F` consists of non-members
    /// lying below `C`, so the union of all non-members below `C` is `C` too; conversely
    /// that family is itself a failing family. Returns the coverable `C` on failure.
    pub fn is_ultrafilter(&self) -> Result<(), usize> {
        let l = &self.lattice;
        for c in self.members.ones() {
            let covered = (0..=c)
                .filter(|&a| !self.members.contains(a) && l.le(a, c))
                .fold(ElementSet::EMPTY, |acc, a| acc.union(l.members(a)));
            if covered == l.members(c) {
                return Err(c);
            }
        }
        Ok(())
    }

    /// Least `x` with `F = F_x`, when the kernel is cyclic.
    pub fn principal_generator(&self) -> Option<ElementId> {
        let k = self.kernel();
        self.lattice.members(k).iter().find(|&x| x != 0 && self.lattice.cyclic(x) == k)
    }

    /// `F_x` for the least non-identity `x` in the kernel.
    pub fn extend_to_ultrafilter(&self) -> SubgroupFilter {
        let k = self.lattice.members(self.kernel());
        let x = k.difference(ElementSet::identity()).first().expect("kernel is non-trivial");
        SubgroupFilter::up_set(&self.lattice, self.lattice.cyclic(x))
    }
}

/// Filter generated by `seed`: finite meets of the seed, then everything above them.
pub fn generate_filter(lattice: &Arc<SubgroupLattice>, seed: &[usize]) -> Result<SubgroupFilter, FilterError> {
    for &s in seed {
        lattice.check_index(s)?;
    }
    let mut finite_meets = FixedBitSet::with_capacity(lattice.len());
    finite_meets.extend(seed.iter().copied());
    loop {
        let list = indices(&finite_meets);
        let mut next = finite_meets.clone();
        for (i, &a) in list.iter().enumerate() {
            for &b in &list[i + 1..] {
                next.insert(lattice.meet(a, b));
            }
        }
        if next == finite_meets {
            break;
        }
        finite_meets = next;
    }
    if finite_meets.contains(0) {
        // shortest prefix of the seed whose meet is trivial
        let mut acc = lattice.top();
        let mut subfamily = Vec::new();
        for &s in seed {
            subfamily.push(s);
            acc = lattice.meet(acc, s);
            if acc == 0 {
                break;
            }
        }
        return Err(FilterError::NoFip { subfamily });
    }
    let mut members = FixedBitSet::with_capacity(lattice.len());
    members.insert(lattice.top());
    for b in 1..lattice.len() {
        if finite_meets.ones().any(|a| lattice.le(a, b)) {
            members.insert(b);
        }
    }
    SubgroupFilter::new(lattice.clone(), members)
}

/// `F_x`: all non-trivial subgroups containing `x`.
pub fn principal_filter(lattice: &Arc<SubgroupLattice>, x: ElementId) -> Result<SubgroupFilter, FilterError> {
    let order = lattice.group().order();
    if x >= order {
        return Err(LatticeError::ElementOutOfRange { element: x, order }.into());
    }
    if x == 0 {
        return Err(FilterError::IdentityNotAllowed);
    }
    Ok(SubgroupFilter::up_set(lattice, lattice.cyclic(x)))
}

/// All ultrafilters, one per cyclic subgroup `⟨x⟩ ≠ 1`, ordered by least generator.
///
/// Each result is re-checked with [`SubgroupFilter::is_ultrafilter`]; on lattices with
/// at most [`EXHAUSTIVE_CHECK_LIMIT`] subgroups the list is also compared with the
/// ultrafilters found among all families of subgroups.
pub fn enumerate_ultrafilters(lattice: &Arc<SubgroupLattice>) -> Result<Vec<SubgroupFilter>, FilterError> {
    let n = lattice.group().order();
    if n < 2 {
        return Err(FilterError::TrivialGroup);
    }
    let mut seen = FixedBitSet::with_capacity(lattice.len());
    let mut out = Vec::new();
    for x in 1..n {
        let c = lattice.cyclic(x);
        if seen.put(c) {
            continue;
        }
        let f = SubgroupFilter::up_set(lattice, c);
        if let Err(c) = f.is_ultrafilter() {
            return Err(FilterError::LemmaViolated(format!("is_ultrafilter: F_{x} coverable at #{c}")));
        }
        out.push(f);
    }
    if lattice.len() <= EXHAUSTIVE_CHECK_LIMIT {
        let mut brute: Vec<FixedBitSet> = exhaustive::all_filters(lattice)
            .into_iter()
            .filter(|f| exhaustive::is_ultrafilter_by_families(lattice, f))
            .collect();
        let mut ours: Vec<FixedBitSet> = out.iter().map(|f| f.members.clone()).collect();
        brute.sort_by_key(indices);
        ours.sort_by_key(indices);
        if brute != ours {
            return Err(FilterError::LemmaViolated("exhaustive family enumeration".into()));
        }
    }
    Ok(out)
}

fn check_map(f: &Homomorphism, filter: &SubgroupFilter, target: &SubgroupLattice) -> Result<(), FilterError> {
    if f.source().as_ref() != filter.lattice.group().as_ref() || f.target().as_ref() != target.group().as_ref() {
        return Err(FilterError::LatticeMismatch);
    }
    Ok(())
}

fn nontrivial_pushforward(f: &Homomorphism, filter: &SubgroupFilter, target: &SubgroupLattice) -> FixedBitSet {
    let source = &filter.lattice;
    let mut members = FixedBitSet::with_capacity(target.len());
    for a in 1..target.len() {
        if filter.contains(source.index_of_subgroup(f.preimage(target.members(a)))) {
            members.insert(a);
        }
    }
    members
}

/// `{A ≤ H non-trivial : f^-1(A) ∈ F}`.
///
/// When `ker f ∉ F` this is always a filter, and an ultrafilter when `F` is one (`F_z`
/// maps to `F_{f(z)}`). When `ker f ∈ F` it is all of `Sub*(H)`, which is a filter only
/// if `H` has a unique minimal subgroup; otherwise the violation is returned.
pub fn pushforward(
    f: &Homomorphism,
    filter: &SubgroupFilter,
    target: &Arc<SubgroupLattice>,
) -> Result<SubgroupFilter, FilterError> {
    check_map(f, filter, target)?;
    let members = nontrivial_pushforward(f, filter, target);
    match verify_filter(target, &members) {
        Ok(()) => Ok(SubgroupFilter { lattice: target.clone(), members }),
        Err(violation) => {
            let kernel_in_filter = filter.contains(filter.lattice.index_of_subgroup(f.kernel()));
            Err(FilterError::NotAFilter { violation, kernel_in_filter })
        }
    }
}

/// Pushforward over the whole target lattice, trivial subgroup included.
#[derive(Clone, Debug)]
pub enum Pushforward {
    Filter(SubgroupFilter),
    /// `ker f ∈ F`: every subgroup of the target, the trivial one included, has its
    /// preimage in `F`, so the family converges to every point.
    Improper { lattice: Arc<SubgroupLattice>, kernel: usize },
}

impl Pushforward {
    pub fn contains(&self, i: usize) -> bool {
        match self {
            Pushforward::Filter(f) => f.contains(i),
            Pushforward::Improper { .. } => true,
        }
    }

    pub fn lattice(&self) -> &Arc<SubgroupLattice> {
        match self {
            Pushforward::Filter(f) => f.lattice(),
            Pushforward::Improper { lattice, .. } => lattice,
        }
    }

    pub fn as_filter(&self) -> Option<&SubgroupFilter> {
        match self {
            Pushforward::Filter(f) => Some(f),
            Pushforward::Improper { .. } => None,
        }
    }

    pub fn is_improper(&self) -> bool {
        matches!(self, Pushforward::Improper { .. })
    }
}

/// `{A ≤ H : f^-1(A) ∈ F}` without dropping the trivial subgroup.
pub fn pushforward_family(
    f: &Homomorphism,
    filter: &SubgroupFilter,
    target: &Arc<SubgroupLattice>,
) -> Result<Pushforward, FilterError> {
    check_map(f, filter, target)?;
    let kernel = filter.lattice.index_of_subgroup(f.kernel());
    if filter.contains(kernel) {
        return Ok(Pushforward::Improper { lattice: target.clone(), kernel });
    }
    let members = nontrivial_pushforward(f, filter, target);
    Ok(Pushforward::Filter(SubgroupFilter::new(target.clone(), members)?))
}

/// Every topen containing `target` that was checked, and whether all lie in the family.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConvergenceCertificate {
    pub target: ElementId,
    pub checked_topens: Vec<usize>,
    pub converges: bool,
    /// First topen containing `target` that is missing from the family.
    pub failing_topen: Option<usize>,
}

/// Points a family converges to, split into classes with equal cyclic subgroups.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConvergenceSet {
    pub points: ElementSet,
    pub classes: Vec<ElementSet>,
}

impl ConvergenceSet {
    /// First pair of limits with `⟨x⟩ ∩ ⟨y⟩ = 1`.
    pub fn cyclically_distinct_pair(&self, lattice: &SubgroupLattice) -> Option<(ElementId, ElementId)> {
        let g = lattice.group();
        let pts = self.points.to_vec();
        pts.iter().enumerate().find_map(|(i, &x)| {
            pts[i + 1..]
                .iter()
                .find(|&&y| g.cyclic_subgroup(x).intersection(g.cyclic_subgroup(y)) == ElementSet::identity())
                .map(|&y| (x, y))
        })
    }
}

fn certificate(contains: impl Fn(usize) -> bool, t: &TopoSystem, y: ElementId) -> ConvergenceCertificate {
    let checked_topens: Vec<usize> = t.topens_containing(y).collect();
    let failing_topen = checked_topens.iter().copied().find(|&a| !contains(a));
    ConvergenceCertificate { target: y, checked_topens, converges: failing_topen.is_none(), failing_topen }
}

fn limits(contains: impl Fn(usize) -> bool + Copy, t: &TopoSystem) -> ConvergenceSet {
    let g = t.lattice().group();
    let points: ElementSet = (0..g.order()).filter(|&y| certificate(contains, t, y).converges).collect();
    let mut classes: Vec<ElementSet> = Vec::new();
    for y in points.iter() {
        let c = g.cyclic_subgroup(y);
        match classes.iter_mut().find(|cls| g.cyclic_subgroup(cls.first().unwrap()) == c) {
            Some(cls) => cls.insert(y),
            None => classes.push(ElementSet::singleton(y)),
        }
    }
    ConvergenceSet { points, classes }
}

impl SubgroupFilter {
    /// Every topen containing `y` is a member. The identity never qualifies: the trivial
    /// subgroup is topen and never a member.
    pub fn converges_to(&self, t: &TopoSystem, y: ElementId) -> Result<ConvergenceCertificate, FilterError> {
        self.check_system(t)?;
        Ok(certificate(|a| self.contains(a), t, y))
    }

    pub fn convergence_set(&self, t: &TopoSystem) -> Result<ConvergenceSet, FilterError> {
        self.check_system(t)?;
        Ok(limits(|a| self.contains(a), t))
    }

    fn check_system(&self, t: &TopoSystem) -> Result<(), FilterError> {
        if t.lattice().group() != self.lattice.group() {
            return Err(FilterError::LatticeMismatch);
        }
        Ok(())
    }
}

impl Pushforward {
    pub fn converges_to(&self, t: &TopoSystem, y: ElementId) -> ConvergenceCertificate {
        certificate(|a| self.contains(a), t, y)
    }

    pub fn convergence_set(&self, t: &TopoSystem) -> ConvergenceSet {
        limits(|a| self.contains(a), t)
    }
}

/// A filter named on the command line: `principal:x`, `generated:#i,#j,..` or `cofinite`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FilterLiteral {
    Principal(ElementId),
    Generated(Vec<SubgroupLiteral>),
    /// The finite-index subgroups: all of `Sub*(G)` on a finite group.
    Cofinite,
}

impl fmt::Display for FilterLiteral {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FilterLiteral::Principal(x) => write!(f, "principal:{x}"),
            FilterLiteral::Generated(seed) => {
                let parts: Vec<String> = seed.iter().map(ToString::to_string).collect();
                write!(f, "generated:{}", parts.join(","))
            }
            FilterLiteral::Cofinite => write!(f, "cofinite"),
        }
    }
}

impl FromStr for FilterLiteral {
    type Err = FilterError;

    fn from_str(s: &str) -> Result<Self, FilterError> {
        let s = s.trim();
        let bad = || FilterError::Lattice(LatticeError::BadLiteral(s.to_string()));
        if s == "cofinite" {
            return Ok(FilterLiteral::Cofinite);
        }
        if let Some(x) = s.strip_prefix("principal:") {
            return x.trim().parse().map(FilterLiteral::Principal).map_err(|_| bad());
        }
        if let Some(rest) = s.strip_prefix("generated:") {
            let seed = split_top_level(rest).into_iter().map(str::parse).collect::<Result<Vec<_>, _>>()?;
            return Ok(FilterLiteral::Generated(seed));
        }
        Err(bad())
    }
}

impl FilterLiteral {
    /// `cofinite` is generated by every non-trivial subgroup, so it is a filter only when
    /// all non-trivial subgroups meet non-trivially; otherwise this reports [`FilterError::NoFip`].
    pub fn resolve(&self, lattice: &Arc<SubgroupLattice>) -> Result<SubgroupFilter, FilterError> {
        match self {
            FilterLiteral::Principal(x) => principal_filter(lattice, *x),
            FilterLiteral::Generated(seed) => {
                let seed = seed.iter().map(|s| lattice.resolve(s)).collect::<Result<Vec<_>, _>>()?;
                generate_filter(lattice, &seed)
            }
            FilterLiteral::Cofinite => {
                if lattice.len() < 2 {
                    return Err(FilterError::TrivialGroup);
                }
                let seed: Vec<usize> = (1..lattice.len()).collect();
                generate_filter(lattice, &seed)
            }
        }
    }
}
