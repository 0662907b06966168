//! Element sets over a group of order at most [`MAX_ORDER`], one bit per element.

use std::fmt;

use fixedbitset::FixedBitSet;
use serde::{Serialize, Serializer};

/// Hard ceiling on group order: element sets are single machine words.
pub const MAX_ORDER: usize = 64;

/// Element indices are positions in the Cayley table; `0` is always the identity.
pub type ElementId = usize;

/// A set of elements of a group, stored as a 64-bit mask.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct ElementSet(u64);

impl ElementSet {
    pub const EMPTY: ElementSet = ElementSet(0);

    pub fn from_bits(bits: u64) -> Self {
        ElementSet(bits)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn singleton(x: ElementId) -> Self {
        debug_assert!(x < MAX_ORDER);
        ElementSet(1u64 << x)
    }

    /// `{0, 1, .., n-1}`.
    pub fn full(n: usize) -> Self {
        debug_assert!(n <= MAX_ORDER);
        if n == MAX_ORDER {
            ElementSet(u64::MAX)
        } else {
            ElementSet((1u64 << n) - 1)
        }
    }

    pub fn identity() -> Self {
        ElementSet(1)
    }

    #[inline]
    pub fn contains(self, x: ElementId) -> bool {
        x < MAX_ORDER && self.0 >> x & 1 == 1
    }

    #[inline]
    pub fn insert(&mut self, x: ElementId) {
        self.0 |= 1u64 << x;
    }

    #[inline]
    pub fn remove(&mut self, x: ElementId) {
        self.0 &= !(1u64 << x);
    }

    #[inline]
    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    #[inline]
    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    #[inline]
    pub fn union(self, other: Self) -> Self {
        ElementSet(self.0 | other.0)
    }

    #[inline]
    pub fn intersection(self, other: Self) -> Self {
        ElementSet(self.0 & other.0)
    }

    #[inline]
    pub fn difference(self, other: Self) -> Self {
        ElementSet(self.0 & !other.0)
    }

    #[inline]
    pub fn is_subset(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn first(self) -> Option<ElementId> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }

    pub fn iter(self) -> Elements {
        Elements(self.0)
    }

    pub fn to_vec(self) -> Vec<ElementId> {
        self.iter().collect()
    }
}

impl FromIterator<ElementId> for ElementSet {
    fn from_iter<I: IntoIterator<Item = ElementId>>(iter: I) -> Self {
        let mut s = ElementSet::EMPTY;
        for x in iter {
            s.insert(x);
        }
        s
    }
}

/// Ascending iterator over the members of an [`ElementSet`].
pub struct Elements(u64);

impl Iterator for Elements {
    type Item = ElementId;

    #[inline]
    fn next(&mut self) -> Option<ElementId> {
        if self.0 == 0 {
            return None;
        }
        let x = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(x)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.0.count_ones() as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for Elements {}

impl fmt::Debug for ElementSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl fmt::Display for ElementSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, x) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, "}}")
    }
}

impl Serialize for ElementSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_seq(self.iter())
    }
}

/// Members of a subgroup-index set, ascending.
pub fn indices(set: &FixedBitSet) -> Vec<usize> {
    set.ones().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_and_iter() {
        assert_eq!(ElementSet::full(4).to_vec(), vec![0, 1, 2, 3]);
        assert_eq!(ElementSet::full(64).len(), 64);
        let s: ElementSet = [5, 1, 63].into_iter().collect();
        assert_eq!(s.to_vec(), vec![1, 5, 63]);
        assert_eq!(s.first(), Some(1));
        assert_eq!(s.to_string(), "{1,5,63}");
    }

    #[test]
    fn subset_ops() {
        let a: ElementSet = [0, 2].into_iter().collect();
        let b = ElementSet::full(4);
        assert!(a.is_subset(b));
        assert!(!b.is_subset(a));
        assert_eq!(b.difference(a).to_vec(), vec![1, 3]);
    }
}
