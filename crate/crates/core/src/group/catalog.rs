use super::{FiniteGroup, GroupDescriptor, GroupError};
use crate::bits::MAX_ORDER;

/// Builds a catalog group.
///
/// Element numbering per kind:
/// - `cyclic:n`: `k` is the residue `k mod n`.
/// - `abelian:n1x..xnk`: mixed radix over the residues, factor 0 most significant.
/// - `dihedral:n`: index `k + n*j` is `r^k s^j` with `s r s = r^-1`.
/// - `sym:n` / `alt:n`: permutations of `{0..n-1}` in lexicographic order of their image
///   tuples (alt keeps the even ones in that order); `(a*b)(i) = a(b(i))`.
/// - `quaternion:8`: `1, -1, i, -i, j, -j, k, -k`.
/// - `product(..)`: mixed radix over the factors, factor 0 most significant.
pub fn build_group(descriptor: &GroupDescriptor, cap: usize) -> Result<FiniteGroup, GroupError> {
    if let GroupDescriptor::Derived(label) = descriptor {
        return Err(GroupError::UnknownKind(label.clone()));
    }
    let order = descriptor.order();
    let cap = cap.min(MAX_ORDER);
    if order > cap {
        return Err(GroupError::OrderCapExceeded { order, cap });
    }
    let (table, labels) = match descriptor {
        GroupDescriptor::Cyclic(n) => cyclic(*n),
        GroupDescriptor::Abelian(ns) => {
            let factors: Vec<FiniteGroup> = ns
                .iter()
                .map(|&n| {
                    let (t, l) = cyclic(n);
                    FiniteGroup::from_flat(GroupDescriptor::Cyclic(n), n, t, l)
                })
                .collect();
            let refs: Vec<&FiniteGroup> = factors.iter().collect();
            direct_product_table(&refs)
        }
        GroupDescriptor::Dihedral(n) => dihedral(*n),
        GroupDescriptor::Symmetric(n) => permutations(*n, false),
        GroupDescriptor::Alternating(n) => permutations(*n, true),
        GroupDescriptor::Quaternion => quaternion(),
        GroupDescriptor::Product(fs) => {
            let factors = fs
                .iter()
                .map(|f| build_group(f, cap))
                .collect::<Result<Vec<_>, _>>()?;
            let refs: Vec<&FiniteGroup> = factors.iter().collect();
            direct_product_table(&refs)
        }
        GroupDescriptor::Derived(_) => unreachable!(),
    };
    let group = FiniteGroup::from_flat(descriptor.clone(), order, table, labels);
    debug_assert!(super::verify_group_axioms(&group.cayley_table()).is_ok());
    Ok(group)
}

fn cyclic(n: usize) -> (Vec<u8>, Vec<String>) {
    let table = (0..n * n).map(|i| ((i / n + i % n) % n) as u8).collect();
    (table, (0..n).map(|k| k.to_string()).collect())
}

fn dihedral(n: usize) -> (Vec<u8>, Vec<String>) {
    let order = 2 * n;
    let mut table = Vec::with_capacity(order * order);
    for x in 0..order {
        let (a, b) = (x % n, x / n);
        for y in 0..order {
            let (c, d) = (y % n, y / n);
            let rot = if b == 0 { (a + c) % n } else { (a + n - c) % n };
            table.push((rot + n * ((b + d) % 2)) as u8);
        }
    }
    let labels = (0..order)
        .map(|x| {
            let (k, j) = (x % n, x / n);
            match (k, j) {
                (0, 0) => "e".to_string(),
                (k, 0) => format!("r^{k}"),
                (0, _) => "s".to_string(),
                (k, _) => format!("r^{k} s"),
            }
        })
        .collect();
    (table, labels)
}

fn lex_permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for v in 0..used.len() {
            if !used[v] {
                used[v] = true;
                prefix.push(v);
                rec(prefix, used, out);
                prefix.pop();
                used[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::with_capacity(n), &mut vec![false; n], &mut out);
    out
}

fn is_even(p: &[usize]) -> bool {
    let inversions = (0..p.len())
        .flat_map(|i| (i + 1..p.len()).map(move |j| (i, j)))
        .filter(|&(i, j)| p[i] > p[j])
        .count();
    inversions % 2 == 0
}

/// Cycle notation on `{1..n}`, identity as `()`.
fn cycle_label(p: &[usize]) -> String {
    let mut seen = vec![false; p.len()];
    let mut out = String::new();
    for start in 0..p.len() {
        if seen[start] || p[start] == start {
            continue;
        }
        let mut cycle = Vec::new();
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            cycle.push((i + 1).to_string());
            i = p[i];
        }
        out.push('(');
        out.push_str(&cycle.join(" "));
        out.push(')');
    }
    if out.is_empty() {
        "()".to_string()
    } else {
        out
    }
}

fn permutations(n: usize, even_only: bool) -> (Vec<u8>, Vec<String>) {
    let perms: Vec<Vec<usize>> = lex_permutations(n)
        .into_iter()
        .filter(|p| !even_only || is_even(p))
        .collect();
    let index_of = |p: &[usize]| perms.iter().position(|q| q == p).expect("closed under composition");
    let m = perms.len();
    let mut table = Vec::with_capacity(m * m);
    for a in &perms {
        for b in &perms {
            let ab: Vec<usize> = (0..n).map(|i| a[b[i]]).collect();
            table.push(index_of(&ab) as u8);
        }
    }
    (table, perms.iter().map(|p| cycle_label(p)).collect())
}

fn quaternion() -> (Vec<u8>, Vec<String>) {
    // unit products on {1, i, j, k} as (negated, unit)
    const UNIT: [[(bool, usize); 4]; 4] = [
        [(false, 0), (false, 1), (false, 2), (false, 3)],
        [(false, 1), (true, 0), (false, 3), (true, 2)],
        [(false, 2), (true, 3), (true, 0), (false, 1)],
        [(false, 3), (false, 2), (true, 1), (true, 0)],
    ];
    let mut table = Vec::with_capacity(64);
    for x in 0..8 {
        for y in 0..8 {
            let (neg, unit) = UNIT[x / 2][y / 2];
            let sign = (x % 2 == 1) ^ (y % 2 == 1) ^ neg;
            table.push((2 * unit + usize::from(sign)) as u8);
        }
    }
    let labels = ["1", "-1", "i", "-i", "j", "-j", "k", "-k"].map(String::from).to_vec();
    (table, labels)
}

/// Mixed-radix product table, factor 0 most significant.
pub(crate) fn direct_product_table(factors: &[&FiniteGroup]) -> (Vec<u8>, Vec<String>) {
    let orders: Vec<usize> = factors.iter().map(|f| f.order()).collect();
    let n: usize = orders.iter().product();
    let decode = |mut x: usize| {
        let mut digits = vec![0; orders.len()];
        for i in (0..orders.len()).rev() {
            digits[i] = x % orders[i];
            x /= orders[i];
        }
        digits
    };
    let encode = |digits: &[usize]| digits.iter().zip(&orders).fold(0, |acc, (&d, &o)| acc * o + d);
    let decoded: Vec<Vec<usize>> = (0..n).map(decode).collect();
    let mut table = Vec::with_capacity(n * n);
    for a in &decoded {
        for b in &decoded {
            let ab: Vec<usize> = factors
                .iter()
                .enumerate()
                .map(|(i, f)| f.mul(a[i], b[i]))
                .collect();
            table.push(encode(&ab) as u8);
        }
    }
    let labels = decoded
        .iter()
        .map(|d| {
            let parts: Vec<&str> = d.iter().enumerate().map(|(i, &x)| factors[i].label(x)).collect();
            format!("({})", parts.join(","))
        })
        .collect();
    (table, labels)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{verify_group_axioms, DEFAULT_ORDER_CAP};

    fn build(s: &str) -> FiniteGroup {
        build_group(&s.parse().unwrap(), DEFAULT_ORDER_CAP).unwrap()
    }

    #[test]
    fn catalog_groups_satisfy_axioms() {
        for s in [
            "cyclic:1", "cyclic:4", "abelian:2x2", "abelian:2x3x2", "dihedral:1", "dihedral:4", "dihedral:5",
            "sym:1", "sym:3", "sym:4", "alt:3", "alt:4", "quaternion:8", "product(sym:3,cyclic:2)",
        ] {
            let g = build(s);
            assert_eq!(g.order(), g.descriptor().order(), "{s}");
            assert!(verify_group_axioms(&g.cayley_table()).is_ok(), "{s}");
        }
    }

    #[test]
    fn s3_element_orders() {
        let s3 = build("sym:3");
        let count = |k| (0..6).filter(|&x| s3.element_order(x) == k).count();
        assert_eq!((count(1), count(2), count(3)), (1, 3, 2));
        assert_eq!(s3.label(0), "()");
        assert_eq!(s3.label(1), "(2 3)");
        assert_eq!(s3.label(2), "(1 2)");
    }

    #[test]
    fn quaternion_relations() {
        let q = build("quaternion:8");
        let (i, j, k, minus_one) = (2, 4, 6, 1);
        assert_eq!(q.mul(i, i), minus_one);
        assert_eq!(q.mul(i, j), k);
        assert_eq!(q.mul(j, i), 7);
        assert_eq!(q.mul(q.mul(i, j), k), minus_one);
        assert_eq!((0..8).filter(|&x| q.element_order(x) == 4).count(), 6);
    }

    #[test]
    fn cyclic_rule_and_caps() {
        let c4 = build("cyclic:4");
        for a in 0..4 {
            for b in 0..4 {
                assert_eq!(c4.mul(a, b), (a + b) % 4);
            }
        }
        assert_eq!(build("cyclic:1").order(), 1);
        let err = build_group(&"cyclic:30".parse().unwrap(), 24).unwrap_err();
        assert_eq!(err, GroupError::OrderCapExceeded { order: 30, cap: 24 });
        assert!(build_group(&"cyclic:65".parse().unwrap(), 1000).is_err());
    }

    #[test]
    fn dihedral_relation() {
        let d = build("dihedral:5");
        let (r, s) = (1, 5);
        assert_eq!(d.element_order(r), 5);
        assert_eq!(d.element_order(s), 2);
        assert_eq!(d.mul(d.mul(s, r), s), d.inv(r));
    }
}
