use std::fmt;
use std::sync::Arc;

use super::{FiniteGroup, GroupError};
use crate::bits::{ElementId, ElementSet};

/// A validated group homomorphism between two finite groups.
#[derive(Clone)]
pub struct Homomorphism {
    source: Arc<FiniteGroup>,
    target: Arc<FiniteGroup>,
    map: Vec<ElementId>,
}

impl fmt::Debug for Homomorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Homomorphism")
            .field("source", &self.source.descriptor().to_string())
            .field("target", &self.target.descriptor().to_string())
            .field("map", &self.map)
            .finish()
    }
}

impl Homomorphism {
    /// Checks `map(x*y) = map(x)*map(y)` for every pair; the first failing pair is the witness.
    pub fn new(source: Arc<FiniteGroup>, target: Arc<FiniteGroup>, map: Vec<ElementId>) -> Result<Self, GroupError> {
        if map.len() != source.order() {
            return Err(GroupError::MapLength { expected: source.order(), got: map.len() });
        }
        if let Some((x, &image)) = map.iter().enumerate().find(|(_, &y)| y >= target.order()) {
            return Err(GroupError::MapOutOfRange { x, image, target_order: target.order() });
        }
        for x in 0..source.order() {
            for y in 0..source.order() {
                if map[source.mul(x, y)] != target.mul(map[x], map[y]) {
                    return Err(GroupError::NotAHomomorphism { x, y });
                }
            }
        }
        Ok(Homomorphism { source, target, map })
    }

    pub(crate) fn new_unchecked(source: Arc<FiniteGroup>, target: Arc<FiniteGroup>, map: Vec<ElementId>) -> Self {
        debug_assert!(Self::new(source.clone(), target.clone(), map.clone()).is_ok());
        Homomorphism { source, target, map }
    }

    pub fn identity(group: Arc<FiniteGroup>) -> Self {
        let map = (0..group.order()).collect();
        Homomorphism { source: group.clone(), target: group, map }
    }

    pub fn source(&self) -> &Arc<FiniteGroup> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FiniteGroup> {
        &self.target
    }

    pub fn map(&self) -> &[ElementId] {
        &self.map
    }

    #[inline]
    pub fn apply(&self, x: ElementId) -> ElementId {
        self.map[x]
    }

    /// `{x : f(x) in set}`; a subgroup whenever `set` is one.
    pub fn preimage(&self, set: ElementSet) -> ElementSet {
        (0..self.source.order()).filter(|&x| set.contains(self.map[x])).collect()
    }

    pub fn image(&self, set: ElementSet) -> ElementSet {
        set.iter().map(|x| self.map[x]).collect()
    }

    pub fn kernel(&self) -> ElementSet {
        self.preimage(ElementSet::identity())
    }

    pub fn is_bijective(&self) -> bool {
        self.source.order() == self.target.order() && self.image(self.source.elements()).len() == self.target.order()
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &Homomorphism) -> Result<Homomorphism, GroupError> {
        if *other.source != *self.target {
            return Err(GroupError::BadParameter("composition of non-matching homomorphisms".into()));
        }
        let map = self.map.iter().map(|&y| other.map[y]).collect();
        Ok(Homomorphism { source: self.source.clone(), target: other.target.clone(), map })
    }
}
