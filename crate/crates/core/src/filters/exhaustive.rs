//! Brute-force enumeration of subgroup families, for cross-checking on small lattices.

use fixedbitset::FixedBitSet;

use super::verify_filter;
use crate::bits::ElementSet;
use crate::lattice::SubgroupLattice;

/// Families are enumerated as bitmasks, so the lattice must stay small.
pub const MAX_LATTICE: usize = 20;

fn family(mask: u64, offset: usize, len: usize) -> FixedBitSet {
    let mut f = FixedBitSet::with_capacity(len);
    f.extend((0..64).filter(|b| mask >> b & 1 == 1).map(|b| b + offset));
    f
}

/// Every subgroup filter, found by testing each family of non-trivial subgroups.
pub fn all_filters(lattice: &SubgroupLattice) -> Vec<FixedBitSet> {
    let n = lattice.len();
    assert!(n <= MAX_LATTICE, "lattice with {n} subgroups is too large for exhaustive enumeration");
    (0..1u64 << (n - 1))
        .map(|mask| family(mask, 1, n))
        .filter(|f| verify_filter(lattice, f).is_ok())
        .collect()
}

/// Literal ultrafilter test: every family of subgroups whose union is a member `C`
/// has a constituent in the filter.
pub fn is_ultrafilter_by_families(lattice: &SubgroupLattice, members: &FixedBitSet) -> bool {
    let n = lattice.len();
    assert!(n <= MAX_LATTICE, "lattice with {n} subgroups is too large for exhaustive enumeration");
    (1..1u64 << n).all(|mask| {
        let fam = family(mask, 0, n);
        let union = fam.ones().fold(ElementSet::EMPTY, |acc, a| acc.union(lattice.members(a)));
        match lattice.index_of(union) {
            Some(c) if members.contains(c) => fam.ones().any(|a| members.contains(a)),
            _ => true,
        }
    })
}
