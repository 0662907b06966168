//! Checks on the topology `T*` on the underlying set of `G` with basis `T`.

use std::collections::HashSet;

use serde::Serialize;

use super::{induced_members, TopoSystem};
use crate::bits::ElementSet;

/// Star-open families larger than this are not materialised.
const STAR_ENUMERATION_LIMIT: usize = 4096;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StarReport {
    /// Every two non-empty star-open sets intersect.
    pub never_hausdorff: bool,
    /// Number of non-empty star-open sets when they were enumerated pairwise.
    pub star_open_sets: Option<usize>,
    /// `(T*)_ind ⊆ (T_ind)*` for every subgroup.
    pub induced_inclusion: bool,
    /// `(h, a)`: the trace of topen `a` on subgroup `h` is not open in `(T_ind)*`.
    pub induced_witness: Option<(usize, usize)>,
}

impl TopoSystem {
    /// Never-Hausdorff: enumerates all non-empty unions of topens and checks pairwise
    /// intersections when there are at most 4096 of them; otherwise checks that every
    /// basis element contains the identity, which every non-empty union then inherits.
    ///
    /// Induced inclusion: a star-open `U` is a union of topens, so `U ∩ H` is the union
    /// of the traces `A ∩ H`; checking each trace against `(T_ind)*` covers every `U`.
    pub fn star_topology_checks(&self) -> StarReport {
        let l = self.lattice();
        let basis = self.members_as_sets();

        let mut opens: HashSet<ElementSet> = HashSet::new();
        let mut frontier: Vec<ElementSet> = Vec::new();
        for &b in &basis {
            if opens.insert(b) {
                frontier.push(b);
            }
        }
        let mut overflow = false;
        while let Some(u) = frontier.pop() {
            for &b in &basis {
                let v = u.union(b);
                if opens.insert(v) {
                    if opens.len() > STAR_ENUMERATION_LIMIT {
                        overflow = true;
                        break;
                    }
                    frontier.push(v);
                }
            }
            if overflow {
                break;
            }
        }
        let (never_hausdorff, star_open_sets) = if overflow {
            (basis.iter().all(|b| b.contains(0)), None)
        } else {
            let list: Vec<ElementSet> = opens.into_iter().filter(|u| !u.is_empty()).collect();
            let ok = list
                .iter()
                .enumerate()
                .all(|(i, u)| list[i..].iter().all(|v| !u.intersection(*v).is_empty()));
            (ok, Some(list.len()))
        };

        let mut induced_witness = None;
        'outer: for h in 0..l.len() {
            let ind: Vec<ElementSet> = induced_members(self, h).ones().map(|a| l.members(a)).collect();
            for a in self.members().ones() {
                let trace = l.members(a).intersection(l.members(h));
                let covered = ind
                    .iter()
                    .filter(|m| m.is_subset(trace))
                    .fold(ElementSet::EMPTY, |acc, m| acc.union(*m));
                if covered != trace {
                    induced_witness = Some((h, a));
                    break 'outer;
                }
            }
        }

        StarReport {
            never_hausdorff,
            star_open_sets,
            induced_inclusion: induced_witness.is_none(),
            induced_witness,
        }
    }
}
