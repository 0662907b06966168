//! Filters on the underlying set of `G`, given by a base closed under intersection.

use std::sync::Arc;

use fixedbitset::FixedBitSet;
use serde::Serialize;

use super::{FilterError, SubgroupFilter};
use crate::bits::{ElementId, ElementSet};
use crate::lattice::{LatticeError, SubgroupLattice};

/// `X ∈ F₁` iff some base element is contained in `X`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrdinaryFilter {
    order: usize,
    base: Vec<ElementSet>,
}

impl OrdinaryFilter {
    /// Closes `base` under pairwise intersection so the membership test describes a
    /// filter. Fails when the base is empty or an intersection becomes empty.
    pub fn new(order: usize, base: Vec<ElementSet>) -> Result<Self, FilterError> {
        if base.is_empty() {
            return Err(FilterError::DegenerateBase);
        }
        let full = ElementSet::full(order);
        if let Some(&x) = base.iter().find(|b| !b.is_subset(full)) {
            let element = x.difference(full).first().unwrap();
            return Err(LatticeError::ElementOutOfRange { element, order }.into());
        }
        let mut closed = base;
        loop {
            let mut added = Vec::new();
            for (i, a) in closed.iter().enumerate() {
                for b in &closed[i + 1..] {
                    let m = a.intersection(*b);
                    if !closed.iter().chain(&added).any(|c| c.is_subset(m)) {
                        added.push(m);
                    }
                }
            }
            if added.is_empty() {
                break;
            }
            closed.extend(added);
        }
        if closed.iter().any(|b| b.is_empty()) {
            return Err(FilterError::DegenerateBase);
        }
        // keep only the minimal base elements
        let mut minimal: Vec<ElementSet> = Vec::new();
        for &b in &closed {
            if !closed.iter().any(|&c| c != b && c.is_subset(b)) && !minimal.contains(&b) {
                minimal.push(b);
            }
        }
        minimal.sort_by_key(|b| (b.len(), b.bits()));
        Ok(OrdinaryFilter { order, base: minimal })
    }

    /// The ultrafilter of all sets containing `x`.
    pub fn principal(order: usize, x: ElementId) -> Result<Self, FilterError> {
        OrdinaryFilter::new(order, vec![ElementSet::singleton(x)])
    }

    pub fn base(&self) -> &[ElementSet] {
        &self.base
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn contains(&self, set: ElementSet) -> bool {
        self.base.iter().any(|b| b.is_subset(set))
    }

    /// Subgroups of `G` that are members, minus the trivial one.
    ///
    /// The result is upward closed and contains `G`; it is meet-closed unless `{1}` is
    /// itself a member, in which case two members may meet trivially and the pair is
    /// returned as a [`FilterError::NoFip`] witness.
    pub fn restrict(&self, lattice: &Arc<SubgroupLattice>) -> Result<SubgroupFilter, FilterError> {
        if lattice.group().order() != self.order {
            return Err(FilterError::LatticeMismatch);
        }
        let mut members = FixedBitSet::with_capacity(lattice.len());
        members.extend((1..lattice.len()).filter(|&a| self.contains(lattice.members(a))));
        let list: Vec<usize> = members.ones().collect();
        for (i, &a) in list.iter().enumerate() {
            if let Some(&b) = list[i + 1..].iter().find(|&&b| lattice.meet(a, b) == 0) {
                return Err(FilterError::NoFip { subfamily: vec![a, b] });
            }
        }
        SubgroupFilter::new(lattice.clone(), members)
    }
}

impl SubgroupFilter {
    /// `F₁ = {X ⊆ G : A ⊆ X for some A ∈ F}`, with the members of `F` as base.
    pub fn ordinary_bridge(&self) -> OrdinaryFilter {
        let base = self.members.ones().map(|a| self.lattice.members(a)).collect();
        OrdinaryFilter { order: self.lattice.group().order(), base }
    }
}
