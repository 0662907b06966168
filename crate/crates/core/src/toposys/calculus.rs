//! Interior, boundary, limit points, closure, separation, covers and continuity.

use serde::Serialize;

use super::{ToposysError, TopoSystem};
use crate::bits::{ElementId, ElementSet};
use crate::group::Homomorphism;
use crate::lattice::{minimal_cover, LatticeError};

/// Outcome of the T-closed and weak T-closed tests for one subgroup.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TClosedReport {
    pub t_closed: bool,
    /// Least `x ∉ A` with no topen `B ∋ x` meeting `A` trivially.
    pub t_closed_witness: Option<ElementId>,
    pub weak_t_closed: bool,
    /// Least `x` with `⟨x⟩ ∩ A = 1` and no topen `B ∋ x` meeting `A` trivially.
    pub weak_witness: Option<ElementId>,
}

/// A pair of cyclically distinct elements, with separating topens when they exist.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SeparationWitness {
    pub x: ElementId,
    pub y: ElementId,
    pub separating: Option<(usize, usize)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HausdorffReport {
    pub hausdorff: bool,
    /// The first inseparable pair in `(x, y)` order, when not Hausdorff.
    pub witness: Option<SeparationWitness>,
    pub pairs_checked: usize,
}

/// Minimal topen subcover of a subgroup.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SubcoverCertificate {
    pub target: usize,
    /// Chosen topen indices, ascending.
    pub subcover: Vec<usize>,
    pub exact: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Continuity {
    Continuous,
    /// Topen `b` of the target whose preimage is not topen in the source.
    Discontinuous { b: usize, preimage: ElementSet },
}

impl TopoSystem {
    fn check(&self, x: usize) -> Result<usize, ToposysError> {
        Ok(self.lattice.check_index(x)?)
    }

    /// Join of the topens inside `x`: the largest topen contained in `x`.
    pub fn interior(&self, x: usize) -> usize {
        let inside = self.members.ones().filter(|&a| self.lattice.le(a, x));
        self.lattice.join_all(inside)
    }

    /// `(X°, X ∖ X°)`.
    pub fn interior_boundary(&self, x: usize) -> Result<(usize, ElementSet), ToposysError> {
        let x = self.check(x)?;
        let int = self.interior(x);
        Ok((int, self.lattice.members(x).difference(self.lattice.members(int))))
    }

    /// Elements every topen neighbourhood of which meets `x` in at least two elements.
    pub fn limit_points(&self, x: usize) -> ElementSet {
        let xs = self.lattice.members(x);
        (0..self.lattice.group().order())
            .filter(|&p| {
                self.topens_containing(p)
                    .all(|a| self.lattice.members(a).intersection(xs).len() >= 2)
            })
            .collect()
    }

    /// `(limit points, closure)` where the closure is generated by `x` and its limit points.
    pub fn closure_and_limits(&self, x: usize) -> Result<(ElementSet, usize), ToposysError> {
        let x = self.check(x)?;
        let limits = self.limit_points(x);
        let closure = self.lattice.generated(self.lattice.members(x).union(limits))?;
        Ok((limits, closure))
    }

    pub fn t_closed_checks(&self, a: usize) -> Result<TClosedReport, ToposysError> {
        let a = self.check(a)?;
        let g = self.lattice.group();
        let am = self.lattice.members(a);
        // some topen B ∋ x meets A trivially iff the smallest one does
        let separable = |x: ElementId| {
            self.lattice
                .members(self.smallest_topen_containing(x))
                .intersection(am)
                == ElementSet::identity()
        };
        let t_closed_witness = (0..g.order()).find(|&x| !am.contains(x) && !separable(x));
        let weak_witness = (0..g.order()).find(|&x| {
            g.cyclic_subgroup(x).intersection(am) == ElementSet::identity() && !separable(x)
        });
        Ok(TClosedReport {
            t_closed: t_closed_witness.is_none(),
            t_closed_witness,
            weak_t_closed: weak_witness.is_none(),
            weak_witness,
        })
    }

    /// Topens `A ∋ x`, `B ∋ y` with `A ∩ B = 1`, if any: the smallest neighbourhoods
    /// separate whenever anything does.
    pub fn separate(&self, x: ElementId, y: ElementId) -> Option<(usize, usize)> {
        let (ux, uy) = (self.smallest_topen_containing(x), self.smallest_topen_containing(y));
        (self.lattice.meet(ux, uy) == 0).then_some((ux, uy))
    }

    pub fn is_hausdorff(&self) -> HausdorffReport {
        let g = self.lattice.group();
        let n = g.order();
        let cyclic: Vec<ElementSet> = (0..n).map(|x| g.cyclic_subgroup(x)).collect();
        let smallest: Vec<usize> = (0..n).map(|x| self.smallest_topen_containing(x)).collect();
        let mut pairs_checked = 0;
        for x in 0..n {
            for y in x + 1..n {
                if cyclic[x].intersection(cyclic[y]) != ElementSet::identity() {
                    continue;
                }
                pairs_checked += 1;
                if self.lattice.meet(smallest[x], smallest[y]) != 0 {
                    return HausdorffReport {
                        hausdorff: false,
                        witness: Some(SeparationWitness { x, y, separating: None }),
                        pairs_checked,
                    };
                }
            }
        }
        HausdorffReport { hausdorff: true, witness: None, pairs_checked }
    }

    /// Minimal subcover of `x` drawn from `cover`, which must consist of topens.
    /// `None` when `cover` does not cover `x`.
    pub fn find_finite_subcover(&self, x: usize, cover: &[usize]) -> Result<Option<SubcoverCertificate>, ToposysError> {
        let x = self.check(x)?;
        for &c in cover {
            self.check(c)?;
            if !self.contains(c) {
                return Err(ToposysError::NotTopen(c));
            }
        }
        let family: Vec<ElementSet> = cover.iter().map(|&c| self.lattice.members(c)).collect();
        Ok(minimal_cover(self.lattice.members(x), &family).map(|c| {
            let mut subcover: Vec<usize> = c.members.iter().map(|&i| cover[i]).collect();
            subcover.sort_unstable();
            subcover.dedup();
            SubcoverCertificate { target: x, subcover, exact: c.exact }
        }))
    }

    /// True when the set is a union of topens, i.e. open in the topology with basis T.
    pub fn is_star_open(&self, set: ElementSet) -> bool {
        let covered = self
            .members
            .ones()
            .map(|a| self.lattice.members(a))
            .filter(|m| m.is_subset(set))
            .fold(ElementSet::EMPTY, ElementSet::union);
        covered == set
    }
}

/// Whether every topen of `target` pulls back along `f` to a topen of `source`.
pub fn is_topomorphism(f: &Homomorphism, source: &TopoSystem, target: &TopoSystem) -> Result<Continuity, ToposysError> {
    if f.source().as_ref() != source.lattice.group().as_ref() || f.target().as_ref() != target.lattice.group().as_ref() {
        return Err(ToposysError::LatticeMismatch);
    }
    for b in target.members.ones() {
        let preimage = f.preimage(target.lattice.members(b));
        let idx = source
            .lattice
            .index_of(preimage)
            .ok_or(ToposysError::Lattice(LatticeError::NotASubgroup(preimage)))?;
        if !source.contains(idx) {
            return Ok(Continuity::Discontinuous { b, preimage });
        }
    }
    Ok(Continuity::Continuous)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::toposys::tests::{lat, sys};

    #[test]
    fn interior_examples() {
        let l = lat("sym:3");
        let d = sys(&l, "discrete");
        for x in 0..l.len() {
            assert_eq!(d.interior_boundary(x).unwrap(), (x, ElementSet::EMPTY));
        }
        let n = sys(&l, "normal");
        assert_eq!(n.interior_boundary(1).unwrap(), (0, ElementSet::singleton(1)));
        assert_eq!(l.core(1), 0);
        assert_eq!(n.interior_boundary(4).unwrap().0, 4);
        assert!(n.interior_boundary(17).is_err());
    }

    #[test]
    fn interior_matches_elementwise_definition() {
        for g in ["sym:3", "dihedral:4", "alt:4", "quaternion:8"] {
            let l = lat(g);
            for d in ["normal", "trivial", "characteristic", "generated:#1,#2"] {
                let t = sys(&l, d);
                for x in 0..l.len() {
                    let xs = l.members(x);
                    let elementwise: ElementSet = xs
                        .iter()
                        .filter(|&e| t.topens_containing(e).any(|a| l.members(a).is_subset(xs)))
                        .collect();
                    assert_eq!(l.members(t.interior(x)), elementwise, "{g} {d} #{x}");
                }
            }
        }
    }

    #[test]
    fn limits_and_closure() {
        let l = lat("sym:3");
        let d = sys(&l, "discrete");
        assert_eq!(d.closure_and_limits(0).unwrap(), (ElementSet::EMPTY, 0));
        let n = sys(&l, "normal");
        let (limits, closure) = n.closure_and_limits(4).unwrap();
        for t in [1, 2, 5] {
            assert!(limits.contains(t));
        }
        assert_eq!(closure, 5);
        assert_eq!(n.closure_and_limits(0).unwrap(), (ElementSet::EMPTY, 0));
    }

    #[test]
    fn t_closed_examples() {
        let l = lat("sym:3");
        let d = sys(&l, "discrete");
        let r = d.t_closed_checks(l.top()).unwrap();
        assert!(r.t_closed && r.weak_t_closed);
        assert!(d.t_closed_checks(4).unwrap().weak_t_closed);

        let c8 = lat("cyclic:8");
        let d8 = sys(&c8, "discrete");
        let two = c8.cyclic(2);
        let r = d8.t_closed_checks(two).unwrap();
        assert!(!r.t_closed);
        assert_eq!(r.t_closed_witness, Some(1));
    }

    #[test]
    fn hausdorff_examples() {
        let l = lat("sym:3");
        assert!(sys(&l, "discrete").is_hausdorff().hausdorff);
        let r = sys(&l, "normal").is_hausdorff();
        assert!(!r.hausdorff);
        let w = r.witness.unwrap();
        assert_eq!((l.group().element_order(w.x), l.group().element_order(w.y)), (2, 2));
        assert_eq!((w.x, w.y), (1, 2));
        let c4 = lat("cyclic:4");
        assert!(sys(&c4, "trivial").is_hausdorff().hausdorff);
    }

    #[test]
    fn subcover_examples() {
        let l = lat("sym:3");
        let d = sys(&l, "discrete");
        let c = d.find_finite_subcover(l.top(), &[l.top()]).unwrap().unwrap();
        assert_eq!(c.subcover, vec![l.top()]);
        let c = d.find_finite_subcover(l.top(), &[1, 2, 3, 4]).unwrap().unwrap();
        assert_eq!(c.subcover.len(), 4);
        assert!(d.find_finite_subcover(l.top(), &[4]).unwrap().is_none());
        let n = sys(&l, "normal");
        assert_eq!(n.find_finite_subcover(l.top(), &[1]), Err(ToposysError::NotTopen(1)));
    }

    #[test]
    fn topomorphism_examples() {
        let l = lat("sym:3");
        let g = l.group().clone();
        let id = Homomorphism::identity(g.clone());
        let n = sys(&l, "normal");
        let d = sys(&l, "discrete");
        assert_eq!(is_topomorphism(&id, &n, &n).unwrap(), Continuity::Continuous);
        match is_topomorphism(&id, &n, &d).unwrap() {
            Continuity::Discontinuous { b, .. } => assert_eq!(b, 1),
            c => panic!("{c:?}"),
        }
        let (q, map) = g.quotient(l.members(4)).unwrap();
        let ql = std::sync::Arc::new(crate::lattice::SubgroupLattice::enumerate(q));
        let qd = sys(&ql, "discrete");
        assert_eq!(is_topomorphism(&map, &n, &qd).unwrap(), Continuity::Continuous);
        assert_eq!(is_topomorphism(&map, &qd, &n), Err(ToposysError::LatticeMismatch));
    }

    #[test]
    fn star_open_sets() {
        let l = lat("sym:3");
        let n = sys(&l, "normal");
        assert!(n.is_star_open(l.members(4)));
        assert!(!n.is_star_open(l.members(4).union(ElementSet::singleton(2))));
        assert!(n.is_star_open(ElementSet::EMPTY));
    }
}
