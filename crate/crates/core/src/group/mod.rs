//! Finite groups given by Cayley tables.
//!
//! Every group stores its full multiplication table with the identity at index 0,
//! an inverse table and element orders. Catalog groups are built from a
//! [`GroupDescriptor`]; element numbering per kind is documented on
//! [`build_group`].

mod catalog;
mod descriptor;
mod hom;

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::bits::{ElementId, ElementSet, MAX_ORDER};

pub use catalog::build_group;
pub(crate) use catalog::direct_product_table;
pub use descriptor::GroupDescriptor;
pub(crate) use descriptor::split_top_level;
pub use hom::Homomorphism;

/// Default order cap applied to catalog construction.
pub const DEFAULT_ORDER_CAP: usize = 64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("unknown group kind `{0}`")]
    UnknownKind(String),
    #[error("bad group parameter: {0}")]
    BadParameter(String),
    #[error("group order {order} exceeds cap {cap}")]
    OrderCapExceeded { order: usize, cap: usize },
    #[error("invalid Cayley table: {0}")]
    InvalidTable(GroupAxiomViolation),
    #[error("map is not a homomorphism: f({x}*{y}) != f({x})*f({y})")]
    NotAHomomorphism { x: ElementId, y: ElementId },
    #[error("map has length {got}, expected {expected}")]
    MapLength { expected: usize, got: usize },
    #[error("map sends element {x} to {image}, outside the target of order {target_order}")]
    MapOutOfRange { x: ElementId, image: ElementId, target_order: usize },
    #[error("subgroup {0} is not normal")]
    NotNormal(ElementSet),
}

/// First failing group axiom found by [`verify_group_axioms`].
#[derive(Debug, Error, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "axiom", rename_all = "snake_case")]
pub enum GroupAxiomViolation {
    #[error("table is empty")]
    Empty,
    #[error("table has {order} rows but more than {max} elements are unsupported")]
    TooLarge { order: usize, max: usize },
    #[error("row {row} has length {len}, expected {expected}")]
    NotSquare { row: usize, len: usize, expected: usize },
    #[error("entry ({row},{col}) = {value} is out of range")]
    OutOfRange { row: usize, col: usize, value: usize },
    #[error("element 0 is not a two-sided identity at {x}")]
    Identity { x: ElementId },
    #[error("element {x} has no two-sided inverse")]
    Inverse { x: ElementId },
    #[error("({a}*{b})*{c} != {a}*({b}*{c})")]
    Associativity { a: ElementId, b: ElementId, c: ElementId },
}

/// Checks identity-at-0, inverses and associativity; on failure returns a witness.
#[allow(clippy::needless_range_loop)] // the axioms read most clearly as table lookups
pub fn verify_group_axioms(table: &[Vec<ElementId>]) -> Result<(), GroupAxiomViolation> {
    let n = table.len();
    if n == 0 {
        return Err(GroupAxiomViolation::Empty);
    }
    if n > MAX_ORDER {
        return Err(GroupAxiomViolation::TooLarge { order: n, max: MAX_ORDER });
    }
    for (row, r) in table.iter().enumerate() {
        if r.len() != n {
            return Err(GroupAxiomViolation::NotSquare { row, len: r.len(), expected: n });
        }
        if let Some((col, &value)) = r.iter().enumerate().find(|(_, &v)| v >= n) {
            return Err(GroupAxiomViolation::OutOfRange { row, col, value });
        }
    }
    for x in 0..n {
        if table[0][x] != x || table[x][0] != x {
            return Err(GroupAxiomViolation::Identity { x });
        }
    }
    for x in 0..n {
        if !(0..n).any(|y| table[x][y] == 0 && table[y][x] == 0) {
            return Err(GroupAxiomViolation::Inverse { x });
        }
    }
    for a in 0..n {
        for b in 0..n {
            let ab = table[a][b];
            for c in 0..n {
                if table[ab][c] != table[a][table[b][c]] {
                    return Err(GroupAxiomViolation::Associativity { a, b, c });
                }
            }
        }
    }
    Ok(())
}

/// A finite group with identity at index 0.
#[derive(Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    descriptor: GroupDescriptor,
    order: usize,
    table: Vec<u8>,
    inverse: Vec<u8>,
    orders: Vec<usize>,
    labels: Vec<String>,
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteGroup")
            .field("descriptor", &self.descriptor.to_string())
            .field("order", &self.order)
            .finish()
    }
}

impl FiniteGroup {
    /// Validates `table` and builds the group. `labels` default to the element indices.
    pub fn from_cayley_table(
        descriptor: GroupDescriptor,
        table: Vec<Vec<ElementId>>,
        labels: Option<Vec<String>>,
    ) -> Result<Self, GroupError> {
        verify_group_axioms(&table).map_err(GroupError::InvalidTable)?;
        let n = table.len();
        let flat: Vec<u8> = table.iter().flatten().map(|&v| v as u8).collect();
        let labels = match labels {
            Some(l) if l.len() == n => l,
            Some(l) => {
                return Err(GroupError::BadParameter(format!(
                    "{} labels supplied for a group of order {n}",
                    l.len()
                )))
            }
            None => (0..n).map(|x| x.to_string()).collect(),
        };
        Ok(Self::from_flat(descriptor, n, flat, labels))
    }

    /// Builds from a flat table that is already known to satisfy the axioms.
    pub(crate) fn from_flat(descriptor: GroupDescriptor, n: usize, table: Vec<u8>, labels: Vec<String>) -> Self {
        let inverse: Vec<u8> = (0..n)
            .map(|x| (0..n).find(|&y| table[x * n + y] == 0).expect("inverse exists") as u8)
            .collect();
        let mut g = FiniteGroup {
            descriptor,
            order: n,
            table,
            inverse,
            orders: Vec::new(),
            labels,
        };
        g.orders = (0..n).map(|x| g.compute_order(x)).collect();
        g
    }

    fn compute_order(&self, x: ElementId) -> usize {
        let mut k = 1;
        let mut p = x;
        while p != 0 {
            p = self.mul(p, x);
            k += 1;
        }
        k
    }

    pub fn descriptor(&self) -> &GroupDescriptor {
        &self.descriptor
    }

    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn mul(&self, a: ElementId, b: ElementId) -> ElementId {
        self.table[a * self.order + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: ElementId) -> ElementId {
        self.inverse[a] as usize
    }

    /// `g x g^-1`.
    #[inline]
    pub fn conjugate(&self, x: ElementId, g: ElementId) -> ElementId {
        self.mul(self.mul(g, x), self.inv(g))
    }

    /// `a b a^-1 b^-1`.
    #[inline]
    pub fn commutator(&self, a: ElementId, b: ElementId) -> ElementId {
        self.mul(self.mul(a, b), self.mul(self.inv(a), self.inv(b)))
    }

    pub fn pow(&self, x: ElementId, k: usize) -> ElementId {
        (0..k % self.orders[x]).fold(0, |acc, _| self.mul(acc, x))
    }

    /// Least `n >= 1` with `x^n = 1`.
    pub fn element_order(&self, x: ElementId) -> usize {
        self.orders[x]
    }

    pub fn elements(&self) -> ElementSet {
        ElementSet::full(self.order)
    }

    pub fn label(&self, x: ElementId) -> &str {
        &self.labels[x]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// The full table as rows, for re-validation and export.
    pub fn cayley_table(&self) -> Vec<Vec<ElementId>> {
        self.table
            .chunks(self.order)
            .map(|row| row.iter().map(|&v| v as usize).collect())
            .collect()
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (0..a).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Smallest subgroup containing `gens`: right-multiplication closure from the identity.
    pub fn subgroup_generated(&self, gens: ElementSet) -> ElementSet {
        let gens = gens.difference(ElementSet::identity());
        let mut members = ElementSet::identity();
        let mut frontier = vec![0];
        while let Some(x) = frontier.pop() {
            for g in gens.iter() {
                let y = self.mul(x, g);
                if !members.contains(y) {
                    members.insert(y);
                    frontier.push(y);
                }
            }
        }
        members
    }

    pub fn cyclic_subgroup(&self, x: ElementId) -> ElementSet {
        self.subgroup_generated(ElementSet::singleton(x))
    }

    /// True when `set` contains the identity and is closed under products and inverses.
    pub fn is_subgroup(&self, set: ElementSet) -> bool {
        set.contains(0)
            && set.iter().all(|a| set.contains(self.inv(a)) && set.iter().all(|b| set.contains(self.mul(a, b))))
    }

    /// `{g x g^-1 : x in set}`.
    pub fn conjugate_set(&self, set: ElementSet, g: ElementId) -> ElementSet {
        set.iter().map(|x| self.conjugate(x, g)).collect()
    }

    /// The subgroup `h` as a group in its own right, with the inclusion map into `self`.
    ///
    /// Elements of `h` are renumbered in increasing order of their ids in `self`, so
    /// the identity stays at 0.
    pub fn subgroup_as_group(self: &std::sync::Arc<Self>, h: ElementSet) -> (std::sync::Arc<FiniteGroup>, Homomorphism) {
        let members = h.to_vec();
        let n = members.len();
        let mut local = vec![usize::MAX; self.order];
        for (i, &x) in members.iter().enumerate() {
            local[x] = i;
        }
        let mut table = Vec::with_capacity(n * n);
        for &a in &members {
            for &b in &members {
                table.push(local[self.mul(a, b)] as u8);
            }
        }
        let labels = members.iter().map(|&x| self.labels[x].clone()).collect();
        let descriptor = GroupDescriptor::Derived(format!("sub({};{})", self.descriptor, h));
        let sub = std::sync::Arc::new(FiniteGroup::from_flat(descriptor, n, table, labels));
        let inclusion = Homomorphism::new_unchecked(sub.clone(), self.clone(), members);
        (sub, inclusion)
    }

    /// The quotient by a normal subgroup and the natural map onto it.
    ///
    /// Cosets are numbered in increasing order of their least element id.
    pub fn quotient(self: &std::sync::Arc<Self>, normal: ElementSet) -> Result<(std::sync::Arc<FiniteGroup>, Homomorphism), GroupError> {
        if !self.is_subgroup(normal) || (0..self.order).any(|g| self.conjugate_set(normal, g) != normal) {
            return Err(GroupError::NotNormal(normal));
        }
        let mut coset_of = vec![usize::MAX; self.order];
        let mut reps = Vec::new();
        for x in 0..self.order {
            if coset_of[x] == usize::MAX {
                let c = reps.len();
                reps.push(x);
                for m in normal.iter() {
                    coset_of[self.mul(x, m)] = c;
                }
            }
        }
        let k = reps.len();
        let mut table = Vec::with_capacity(k * k);
        for &a in &reps {
            for &b in &reps {
                table.push(coset_of[self.mul(a, b)] as u8);
            }
        }
        let labels = reps.iter().map(|&r| format!("[{}]", self.labels[r])).collect();
        let descriptor = GroupDescriptor::Derived(format!("quot({};{})", self.descriptor, normal));
        let q = std::sync::Arc::new(FiniteGroup::from_flat(descriptor, k, table, labels));
        let map = Homomorphism::new_unchecked(self.clone(), q.clone(), coset_of);
        Ok((q, map))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(s: &str) -> FiniteGroup {
        build_group(&s.parse().unwrap(), DEFAULT_ORDER_CAP).unwrap()
    }

    #[test]
    fn verify_rejects_swapped_row() {
        let mut t = g("cyclic:4").cayley_table();
        t.swap(0, 1);
        let err = verify_group_axioms(&t).unwrap_err();
        assert!(matches!(err, GroupAxiomViolation::Identity { .. }), "{err:?}");
    }

    #[test]
    fn verify_rejects_non_associative() {
        // Latin square with identity 0 and inverses, but not associative.
        let t = vec![
            vec![0, 1, 2, 3, 4],
            vec![1, 0, 3, 4, 2],
            vec![2, 4, 0, 1, 3],
            vec![3, 2, 4, 0, 1],
            vec![4, 3, 1, 2, 0],
        ];
        assert!(matches!(
            verify_group_axioms(&t),
            Err(GroupAxiomViolation::Associativity { .. })
        ));
    }

    #[test]
    fn verify_shape_errors() {
        assert_eq!(verify_group_axioms(&[]), Err(GroupAxiomViolation::Empty));
        assert!(matches!(
            verify_group_axioms(&[vec![0, 1], vec![1]]),
            Err(GroupAxiomViolation::NotSquare { row: 1, .. })
        ));
        assert!(matches!(
            verify_group_axioms(&[vec![0, 5], vec![1, 0]]),
            Err(GroupAxiomViolation::OutOfRange { .. })
        ));
    }

    #[test]
    fn generated_subgroups() {
        let c4 = g("cyclic:4");
        assert_eq!(c4.subgroup_generated(ElementSet::EMPTY).to_vec(), vec![0]);
        assert_eq!(c4.subgroup_generated(ElementSet::singleton(2)).to_vec(), vec![0, 2]);
        let s3 = g("sym:3");
        // 1 = (2 3), 2 = (1 2) in 1-based cycle notation
        let both: ElementSet = [1, 2].into_iter().collect();
        assert_eq!(s3.subgroup_generated(both), s3.elements());
    }

    #[test]
    fn element_orders() {
        let c4 = g("cyclic:4");
        assert_eq!(c4.element_order(0), 1);
        assert_eq!(c4.element_order(1), 4);
        assert_eq!(c4.element_order(2), 2);
        let s3 = g("sym:3");
        let three_cycle = (0..6).find(|&x| s3.label(x) == "(1 2 3)").unwrap();
        assert_eq!(s3.element_order(three_cycle), 3);
    }

    #[test]
    fn quotient_of_s3_by_a3() {
        let s3 = std::sync::Arc::new(g("sym:3"));
        let a3 = (0..6).filter(|&x| s3.element_order(x) != 2).collect();
        let (q, map) = s3.quotient(a3).unwrap();
        assert_eq!(q.order(), 2);
        assert_eq!(map.preimage(ElementSet::identity()), a3);
        let t = s3.cyclic_subgroup(1);
        assert!(matches!(s3.quotient(t), Err(GroupError::NotNormal(_))));
    }

    #[test]
    fn subgroup_as_group_keeps_identity() {
        let s3 = std::sync::Arc::new(g("sym:3"));
        let a3: ElementSet = (0..6).filter(|&x| s3.element_order(x) != 2).collect();
        let (h, inc) = s3.subgroup_as_group(a3);
        assert_eq!(h.order(), 3);
        assert_eq!(inc.apply(0), 0);
        assert_eq!(inc.image(h.elements()), a3);
    }
}
