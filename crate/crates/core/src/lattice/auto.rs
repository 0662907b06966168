use std::sync::Arc;

use super::LatticeError;
use crate::bits::{ElementId, ElementSet};
use crate::group::{FiniteGroup, Homomorphism};

pub const DEFAULT_AUTOMORPHISM_CAP: usize = 24;

/// All automorphisms of a group.
#[derive(Clone, Debug)]
pub struct AutomorphismSet {
    group: Arc<FiniteGroup>,
    maps: Vec<Vec<u8>>,
}

/// Greedy generating set: repeatedly add the highest-order element outside the current
/// span, least id on ties.
pub(crate) fn greedy_generators(g: &FiniteGroup) -> Vec<ElementId> {
    let mut gens = Vec::new();
    let mut span = ElementSet::identity();
    while span.len() < g.order() {
        let next = (0..g.order())
            .filter(|&x| !span.contains(x))
            .max_by(|&a, &b| g.element_order(a).cmp(&g.element_order(b)).then(b.cmp(&a)))
            .expect("span is proper");
        gens.push(next);
        span = g.subgroup_generated(span.union(ElementSet::singleton(next)));
    }
    gens
}

/// Extends `gens -> images` to the subgroup they generate, walking the Cayley graph.
/// Fails if some edge is inconsistent or two elements collide.
fn extend(g: &FiniteGroup, gens: &[ElementId], images: &[ElementId]) -> Option<Vec<Option<ElementId>>> {
    let mut map = vec![None; g.order()];
    map[0] = Some(0);
    let mut used = ElementSet::identity();
    let mut queue = vec![0];
    while let Some(x) = queue.pop() {
        let fx = map[x].expect("queued elements are mapped");
        for (&s, &t) in gens.iter().zip(images) {
            let y = g.mul(x, s);
            let fy = g.mul(fx, t);
            match map[y] {
                Some(prev) if prev != fy => return None,
                Some(_) => {}
                None => {
                    if used.contains(fy) {
                        return None;
                    }
                    used.insert(fy);
                    map[y] = Some(fy);
                    queue.push(y);
                }
            }
        }
    }
    Some(map)
}

impl AutomorphismSet {
    /// Backtracking over images of a greedy generating set, pruning on element order
    /// and on injectivity of each partial extension.
    pub fn compute(group: Arc<FiniteGroup>, cap: usize) -> Result<Self, LatticeError> {
        if group.order() > cap {
            return Err(LatticeError::OrderCapExceeded { order: group.order(), cap });
        }
        let gens = greedy_generators(&group);
        let mut maps = Vec::new();
        let mut images = Vec::with_capacity(gens.len());
        Self::search(&group, &gens, &mut images, &mut maps);
        maps.sort();
        Ok(AutomorphismSet { group, maps })
    }

    fn search(g: &FiniteGroup, gens: &[ElementId], images: &mut Vec<ElementId>, out: &mut Vec<Vec<u8>>) {
        let depth = images.len();
        if depth == gens.len() {
            let map = extend(g, gens, images).expect("checked at previous depth");
            if map.iter().all(Option::is_some) {
                out.push(map.into_iter().map(|y| y.unwrap() as u8).collect());
            }
            return;
        }
        let target_order = g.element_order(gens[depth]);
        let covered: ElementSet = match extend(g, &gens[..depth], images) {
            Some(m) => m.iter().flatten().copied().collect(),
            None => return,
        };
        for candidate in 0..g.order() {
            if g.element_order(candidate) != target_order || covered.contains(candidate) {
                continue;
            }
            images.push(candidate);
            if extend(g, &gens[..=depth], images).is_some() {
                Self::search(g, gens, images, out);
            }
            images.pop();
        }
    }

    pub fn len(&self) -> usize {
        self.maps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.maps.is_empty()
    }

    pub fn apply(&self, k: usize, set: ElementSet) -> ElementSet {
        set.iter().map(|x| self.maps[k][x] as usize).collect()
    }

    /// Fixed setwise by every automorphism.
    pub fn is_characteristic(&self, set: ElementSet) -> bool {
        (0..self.maps.len()).all(|k| self.apply(k, set) == set)
    }

    pub fn homomorphisms(&self) -> impl Iterator<Item = Homomorphism> + '_ {
        self.maps.iter().map(|m| {
            Homomorphism::new_unchecked(
                self.group.clone(),
                self.group.clone(),
                m.iter().map(|&y| y as usize).collect(),
            )
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{build_group, DEFAULT_ORDER_CAP};

    fn auts(s: &str) -> AutomorphismSet {
        let g = build_group(&s.parse().unwrap(), DEFAULT_ORDER_CAP).unwrap();
        AutomorphismSet::compute(Arc::new(g), 64).unwrap()
    }

    #[test]
    fn known_sizes() {
        assert_eq!(auts("cyclic:1").len(), 1);
        assert_eq!(auts("cyclic:4").len(), 2);
        assert_eq!(auts("cyclic:7").len(), 6);
        assert_eq!(auts("abelian:2x2").len(), 6);
        assert_eq!(auts("sym:3").len(), 6);
        assert_eq!(auts("quaternion:8").len(), 24);
        assert_eq!(auts("dihedral:4").len(), 8);
        assert_eq!(auts("sym:4").len(), 24);
        assert_eq!(auts("abelian:2x2x2").len(), 168);
    }

    #[test]
    fn closed_under_composition() {
        let a = auts("dihedral:4");
        let homs: Vec<Homomorphism> = a.homomorphisms().collect();
        for f in &homs {
            assert!(f.is_bijective());
            for h in &homs {
                let c = f.then(h).unwrap();
                assert!(homs.iter().any(|k| k.map() == c.map()));
            }
        }
        assert!(homs.iter().any(|f| f.map().iter().enumerate().all(|(i, &y)| i == y)));
    }

    #[test]
    fn characteristic_subgroups_of_v4() {
        let a = auts("abelian:2x2");
        assert!(!a.is_characteristic([0, 1].into_iter().collect()));
        assert!(a.is_characteristic(ElementSet::identity()));
        assert!(a.is_characteristic(ElementSet::full(4)));
    }

    #[test]
    fn cap_enforced() {
        let g = build_group(&"sym:4".parse().unwrap(), DEFAULT_ORDER_CAP).unwrap();
        assert!(matches!(
            AutomorphismSet::compute(Arc::new(g), DEFAULT_AUTOMORPHISM_CAP - 1),
            Err(LatticeError::OrderCapExceeded { .. })
        ));
    }
}
