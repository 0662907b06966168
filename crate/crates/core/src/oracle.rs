//! Brute-force references used by the completeness suite.

use crate::bits::ElementSet;
use crate::group::FiniteGroup;

/// Orders above this make subset enumeration too slow to be useful.
pub const BRUTE_FORCE_MAX_ORDER: usize = 16;

/// Every subset containing the identity that is closed under `a b^-1`, in canonical
/// lattice order (size, then member list).
pub fn brute_force_subgroups(g: &FiniteGroup) -> Vec<ElementSet> {
    let n = g.order();
    assert!(n <= BRUTE_FORCE_MAX_ORDER, "order {n} is too large for subset enumeration");
    let mut out: Vec<ElementSet> = (0..1u64 << (n - 1))
        .map(|rest| ElementSet::from_bits(rest << 1 | 1))
        .filter(|s| s.iter().all(|a| s.iter().all(|b| s.contains(g.mul(a, g.inv(b))))))
        .collect();
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.iter().cmp(b.iter())));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{build_group, DEFAULT_ORDER_CAP};

    #[test]
    fn known_counts() {
        for (d, count) in [("cyclic:4", 3), ("abelian:2x2", 5), ("sym:3", 6), ("quaternion:8", 6), ("dihedral:4", 10)] {
            let g = build_group(&d.parse().unwrap(), DEFAULT_ORDER_CAP).unwrap();
            assert_eq!(brute_force_subgroups(&g).len(), count, "{d}");
        }
    }
}
