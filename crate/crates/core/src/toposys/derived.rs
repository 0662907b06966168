//! Induced topo-systems on subgroups and the quotient construction.

use std::sync::Arc;

use fixedbitset::FixedBitSet;

use super::{close_join_meet, verify_toposys, ToposysError, ToposysViolation, TopoDescriptor, TopoSystem};
use crate::bits::indices;
use crate::group::{GroupError, Homomorphism};
use crate::lattice::SubgroupLattice;

/// The induced system on `H`, carried on `H`'s own lattice, with the inclusion map.
#[derive(Clone, Debug)]
pub struct InducedSystem {
    pub system: TopoSystem,
    pub inclusion: Homomorphism,
}

/// Induced members of `T` on `h`, as indices of the parent lattice: the traces
/// `A ∩ H` together with `1` and `H`, closed under pairwise join and meet.
///
/// The transfinite stage recursion stabilises after finitely many join/meet rounds on a
/// finite lattice, and joins of subgroups of `H` computed in `G` stay inside `H`.
pub fn induced_members(t: &TopoSystem, h: usize) -> FixedBitSet {
    let l = t.lattice();
    let mut seed = FixedBitSet::with_capacity(l.len());
    seed.insert(0);
    seed.insert(h);
    for a in t.members().ones() {
        seed.insert(l.meet(a, h));
    }
    close_join_meet(l, &seed).0
}

/// Quotient candidate `{AN/N : A ∈ T}` and the result of checking the axioms on it.
#[derive(Clone, Debug)]
pub struct QuotientProbe {
    pub lattice: Arc<SubgroupLattice>,
    pub map: Homomorphism,
    pub candidate: FixedBitSet,
    pub verification: Result<(), ToposysViolation>,
    descriptor: TopoDescriptor,
}

impl QuotientProbe {
    /// The candidate as a topo-system, when it passed verification.
    pub fn system(&self) -> Option<TopoSystem> {
        self.verification.is_ok().then(|| {
            TopoSystem::from_members(self.lattice.clone(), self.candidate.clone(), self.descriptor.clone())
                .expect("verified")
        })
    }

    pub fn candidate_indices(&self) -> Vec<usize> {
        indices(&self.candidate)
    }
}

impl TopoSystem {
    pub fn induced_toposys(&self, h: usize) -> Result<InducedSystem, ToposysError> {
        let l = self.lattice();
        let h = l.check_index(h)?;
        let members_g = induced_members(self, h);
        let (sub, inclusion) = l.group().subgroup_as_group(l.members(h));
        let sub_lattice = Arc::new(SubgroupLattice::enumerate(sub));
        let mut members = FixedBitSet::with_capacity(sub_lattice.len());
        for a in members_g.ones() {
            let local = inclusion.preimage(l.members(a));
            members.insert(sub_lattice.index_of_subgroup(local));
        }
        let descriptor = TopoDescriptor::Derived(format!("induced({};#{h})", self.descriptor()));
        let system = TopoSystem::from_members(sub_lattice, members, descriptor)?;
        Ok(InducedSystem { system, inclusion })
    }

    /// Builds `G/N`, maps every topen to `AN/N` and verifies the axioms on the result.
    /// The verification outcome is reported rather than assumed.
    pub fn quotient_toposys(&self, n: usize) -> Result<QuotientProbe, ToposysError> {
        let l = self.lattice();
        let n = l.check_index(n)?;
        if !l.is_normal(n) {
            return Err(ToposysError::Group(GroupError::NotNormal(l.members(n))));
        }
        let (q, map) = l.group().quotient(l.members(n))?;
        let ql = Arc::new(SubgroupLattice::enumerate(q));
        let mut candidate = FixedBitSet::with_capacity(ql.len());
        for a in self.members().ones() {
            candidate.insert(ql.index_of_subgroup(map.image(l.members(a))));
        }
        let verification = verify_toposys(&ql, &candidate);
        let descriptor = TopoDescriptor::Derived(format!("quotient({};#{n})", self.descriptor()));
        Ok(QuotientProbe { lattice: ql, map, candidate, verification, descriptor })
    }
}

#[cfg(test)]
mod tests {
    use crate::toposys::tests::{lat, sys};

    #[test]
    fn induced_on_whole_group_is_identity() {
        let l = lat("dihedral:4");
        for d in ["normal", "characteristic", "generated:#1,#5"] {
            let t = sys(&l, d);
            let ind = t.induced_toposys(l.top()).unwrap();
            assert_eq!(ind.system.topens(), t.topens(), "{d}");
        }
    }

    #[test]
    fn induced_examples() {
        let l = lat("sym:3");
        let ind = sys(&l, "normal").induced_toposys(1).unwrap();
        assert!(ind.system.is_discrete());
        assert_eq!(ind.system.lattice().len(), 2);

        let q = lat("quaternion:8");
        let i_sub = q.index_of([0, 1, 2, 3].into_iter().collect()).unwrap();
        let t = sys(&q, "thk:gen{}:#5");
        let ind = t.induced_toposys(i_sub).unwrap();
        let sub_l = ind.system.lattice();
        let orders: Vec<usize> = ind.system.topens().iter().map(|&a| sub_l.subgroup_order(a)).collect();
        assert_eq!(orders, vec![1, 2, 4]);
    }

    #[test]
    fn quotient_examples() {
        let l = lat("sym:3");
        let p = sys(&l, "discrete").quotient_toposys(4).unwrap();
        assert!(p.verification.is_ok());
        assert_eq!(p.lattice.group().order(), 2);
        assert!(p.system().unwrap().is_discrete());

        let p = sys(&l, "normal").quotient_toposys(4).unwrap();
        assert_eq!(p.candidate_indices(), vec![0, 1]);

        let p = sys(&l, "normal").quotient_toposys(l.top()).unwrap();
        assert_eq!(p.lattice.group().order(), 1);
        assert_eq!(p.candidate_indices(), vec![0]);

        assert!(sys(&l, "normal").quotient_toposys(1).is_err());
    }
}
