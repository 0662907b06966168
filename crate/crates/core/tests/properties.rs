use std::sync::Arc;

use proptest::prelude::*;
use topogroup::filters::{generate_filter, verify_filter};
use topogroup::group::{build_group, DEFAULT_ORDER_CAP};
use topogroup::lattice::SubgroupLattice;
use topogroup::toposys::{generate_toposys, verify_toposys};

const GROUPS: [&str; 6] = ["cyclic:12", "abelian:2x4", "dihedral:4", "quaternion:8", "sym:4", "product(cyclic:3,sym:3)"];

fn lattice(i: usize) -> Arc<SubgroupLattice> {
    let g = build_group(&GROUPS[i].parse().unwrap(), DEFAULT_ORDER_CAP).unwrap();
    Arc::new(SubgroupLattice::enumerate(Arc::new(g)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn lattice_ops_are_consistent(g in 0..GROUPS.len(), a in any::<prop::sample::Index>(), b in any::<prop::sample::Index>()) {
        let l = lattice(g);
        let (a, b) = (a.index(l.len()), b.index(l.len()));
        let m = l.meet(a, b);
        let j = l.join(a, b);
        prop_assert_eq!(l.members(m), l.members(a).intersection(l.members(b)));
        prop_assert!(l.le(a, j) && l.le(b, j) && l.le(m, a) && l.le(m, b));
        prop_assert_eq!(l.join(a, m), a);
        prop_assert_eq!(l.meet(a, j), a);
    }

    #[test]
    fn generated_systems_verify(g in 0..GROUPS.len(), seed in prop::collection::vec(any::<prop::sample::Index>(), 0..4)) {
        let l = lattice(g);
        let seed: Vec<usize> = seed.iter().map(|i| i.index(l.len())).collect();
        let t = generate_toposys(&l, &seed).unwrap();
        prop_assert!(verify_toposys(&l, t.members()).is_ok());
        for &s in &seed {
            prop_assert!(t.contains(s));
        }
    }

    #[test]
    fn interior_is_largest_topen_below(g in 0..GROUPS.len(), seed in prop::collection::vec(any::<prop::sample::Index>(), 0..3), x in any::<prop::sample::Index>()) {
        let l = lattice(g);
        let seed: Vec<usize> = seed.iter().map(|i| i.index(l.len())).collect();
        let t = generate_toposys(&l, &seed).unwrap();
        let x = x.index(l.len());
        let i = t.interior(x);
        prop_assert!(t.contains(i) && l.le(i, x));
        prop_assert!(t.topens().into_iter().filter(|&a| l.le(a, x)).all(|a| l.le(a, i)));
    }

    #[test]
    fn generated_filters_verify(g in 0..GROUPS.len(), seed in prop::collection::vec(any::<prop::sample::Index>(), 1..4)) {
        let l = lattice(g);
        let seed: Vec<usize> = seed.iter().map(|i| 1 + i.index(l.len() - 1)).collect();
        match generate_filter(&l, &seed) {
            Ok(f) => {
                prop_assert!(verify_filter(&l, f.members()).is_ok());
                let ext = f.extend_to_ultrafilter();
                prop_assert!(f.is_subset(&ext) && ext.is_ultrafilter().is_ok());
            }
            // no fip: some meet of seed members is trivial
            Err(_) => prop_assert_eq!(l.meet_all(seed.iter().copied()), l.trivial()),
        }
    }
}
