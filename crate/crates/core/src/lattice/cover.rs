use serde::Serialize;

use crate::bits::ElementSet;

/// Families up to this size are solved exactly; larger ones greedily.
pub const EXACT_COVER_LIMIT: usize = 20;

/// A subfamily covering the target set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Cover {
    /// Positions in the input family, ascending.
    pub members: Vec<usize>,
    /// False when the greedy fallback produced the cover.
    pub exact: bool,
}

/// Minimum-cardinality subfamily of `family` whose union contains `target`, or `None`
/// when the whole family does not cover it.
pub fn minimal_cover(target: ElementSet, family: &[ElementSet]) -> Option<Cover> {
    let all = family.iter().fold(ElementSet::EMPTY, |acc, &s| acc.union(s));
    if !target.is_subset(all) {
        return None;
    }
    if family.len() <= EXACT_COVER_LIMIT {
        let mut best = greedy(target, family);
        let mut chosen = Vec::new();
        branch(target, family, &mut chosen, &mut best);
        best.sort_unstable();
        Some(Cover { members: best, exact: true })
    } else {
        let mut members = greedy(target, family);
        members.sort_unstable();
        Some(Cover { members, exact: false })
    }
}

fn greedy(target: ElementSet, family: &[ElementSet]) -> Vec<usize> {
    let mut uncovered = target;
    let mut chosen = Vec::new();
    while let Some(x) = uncovered.first() {
        let best = (0..family.len())
            .filter(|&i| family[i].contains(x))
            .max_by(|&a, &b| {
                family[a]
                    .intersection(uncovered)
                    .len()
                    .cmp(&family[b].intersection(uncovered).len())
                    .then(b.cmp(&a))
            })
            .expect("target is covered by the family");
        chosen.push(best);
        uncovered = uncovered.difference(family[best]);
    }
    chosen
}

/// Branch on the least uncovered element: some member containing it must be chosen.
fn branch(uncovered: ElementSet, family: &[ElementSet], chosen: &mut Vec<usize>, best: &mut Vec<usize>) {
    let Some(x) = uncovered.first() else {
        if chosen.len() < best.len() {
            *best = chosen.clone();
        }
        return;
    };
    if chosen.len() + 1 >= best.len() {
        return;
    }
    for i in 0..family.len() {
        if family[i].contains(x) {
            chosen.push(i);
            branch(uncovered.difference(family[i]), family, chosen, best);
            chosen.pop();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(xs: &[usize]) -> ElementSet {
        xs.iter().copied().collect()
    }

    #[test]
    fn identity_target_needs_one() {
        let c = minimal_cover(set(&[0]), &[set(&[0, 1]), set(&[0, 2])]).unwrap();
        assert_eq!(c.members.len(), 1);
        assert!(c.exact);
    }

    #[test]
    fn greedy_is_beaten() {
        // greedy takes the big middle set first and then needs two more
        let family = [set(&[0, 1, 2, 3, 4, 5]), set(&[0, 1, 2, 6]), set(&[3, 4, 5, 7])];
        let c = minimal_cover(set(&[0, 1, 2, 3, 4, 5, 6, 7]), &family).unwrap();
        assert_eq!(c.members, vec![1, 2]);
    }

    #[test]
    fn uncoverable() {
        assert!(minimal_cover(set(&[0, 3, 4]), &[set(&[0, 1])]).is_none());
    }
}
