//! Small groups: the classical census by construction and an exhaustive
//! enumerator of multiplication tables used to check it.

use super::group::{Elem, FiniteGroup};
use super::iso::are_isomorphic;
use crate::{Error, Result};

/// Largest order covered by [`small_groups`].
pub const CENSUS_MAX_ORDER: usize = 10;

/// One representative per isomorphism class of groups of order `n ≤ 10`.
pub fn small_groups(n: usize) -> Result<Vec<FiniteGroup>> {
    let z = FiniteGroup::cyclic;
    let x = |a: &FiniteGroup, b: &FiniteGroup| FiniteGroup::direct_product(a, b);
    let groups = match n {
        1 | 2 | 3 | 5 | 7 => vec![z(n)],
        4 => vec![z(4), x(&z(2), &z(2))],
        6 => vec![z(6), FiniteGroup::symmetric(3)],
        8 => vec![
            z(8),
            x(&z(4), &z(2)),
            x(&x(&z(2), &z(2)), &z(2)),
            FiniteGroup::dihedral(4),
            FiniteGroup::quaternion(),
        ],
        9 => vec![z(9), x(&z(3), &z(3))],
        10 => vec![z(10), FiniteGroup::dihedral(5)],
        _ => {
            return Err(Error::TooLarge(format!(
                "group census covers orders 1..={CENSUS_MAX_ORDER}, asked for {n}"
            )))
        }
    };
    Ok(groups)
}

/// The census label of the class of `g`, if its order is covered.
pub fn identify(g: &FiniteGroup) -> Option<String> {
    small_groups(g.order())
        .ok()?
        .into_iter()
        .find(|c| are_isomorphic(c, g))
        .and_then(|c| c.label().map(str::to_owned))
}

/// Every group table on `0..n` with identity `0`, by exhaustive
/// backtracking over Latin squares with associativity pruning.
///
/// Exponential; intended for `n ≤ 6`.
pub fn enumerate_group_tables(n: usize) -> Vec<FiniteGroup> {
    const EMPTY: usize = usize::MAX;
    let mut t = vec![EMPTY; n * n];
    for a in 0..n {
        t[a] = a;
        t[a * n] = a;
    }
    let cells: Vec<(usize, usize)> = (1..n).flat_map(|a| (1..n).map(move |b| (a, b))).collect();

    fn consistent(t: &[usize], n: usize) -> bool {
        for a in 0..n {
            for b in 0..n {
                let ab = t[a * n + b];
                if ab == usize::MAX {
                    continue;
                }
                for c in 0..n {
                    let bc = t[b * n + c];
                    if bc == usize::MAX {
                        continue;
                    }
                    let (l, r) = (t[ab * n + c], t[a * n + bc]);
                    if l != usize::MAX && r != usize::MAX && l != r {
                        return false;
                    }
                }
            }
        }
        true
    }

    fn go(i: usize, cells: &[(usize, usize)], t: &mut Vec<usize>, n: usize, out: &mut Vec<Vec<Elem>>) {
        if i == cells.len() {
            out.push(t.clone());
            return;
        }
        let (a, b) = cells[i];
        for x in 0..n {
            let row_clash = (0..n).any(|c| t[a * n + c] == x);
            let col_clash = (0..n).any(|r| t[r * n + b] == x);
            if row_clash || col_clash {
                continue;
            }
            t[a * n + b] = x;
            if consistent(t, n) {
                go(i + 1, cells, t, n, out);
            }
            t[a * n + b] = usize::MAX;
        }
    }

    let mut flat = Vec::new();
    go(0, &cells, &mut t, n, &mut flat);
    flat.into_iter()
        .map(|table| {
            let rows = table.chunks(n).map(<[usize]>::to_vec).collect();
            FiniteGroup::from_rows(rows, None).expect("enumerated table is a group")
        })
        .collect()
}

/// Partitions `groups` into isomorphism classes (indices, in input order).
pub fn isomorphism_classes(groups: &[FiniteGroup]) -> Vec<Vec<usize>> {
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for (i, g) in groups.iter().enumerate() {
        match classes.iter_mut().find(|c| are_isomorphic(&groups[c[0]], g)) {
            Some(c) => c.push(i),
            None => classes.push(vec![i]),
        }
    }
    classes
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_counts_for_orders_up_to_six() {
        // labelings fixing 0 of each class: (n-1)!/|Aut|
        assert_eq!(enumerate_group_tables(1).len(), 1);
        assert_eq!(enumerate_group_tables(2).len(), 1);
        assert_eq!(enumerate_group_tables(3).len(), 1);
        assert_eq!(enumerate_group_tables(4).len(), 3 + 1);
        assert_eq!(enumerate_group_tables(5).len(), 6);
        assert_eq!(enumerate_group_tables(6).len(), 60 + 20);
    }

    #[test]
    fn census_matches_exhaustive_enumeration() {
        for n in 1..=6 {
            let tables = enumerate_group_tables(n);
            let classes = isomorphism_classes(&tables);
            let census = small_groups(n).unwrap();
            assert_eq!(classes.len(), census.len(), "order {n}");
            for g in &census {
                assert!(tables.iter().any(|t| are_isomorphic(t, g)));
            }
        }
    }

    #[test]
    fn census_entries_are_pairwise_non_isomorphic() {
        for n in 1..=CENSUS_MAX_ORDER {
            let groups = small_groups(n).unwrap();
            assert!(groups.iter().all(|g| g.order() == n));
            assert_eq!(isomorphism_classes(&groups).len(), groups.len(), "order {n}");
        }
        assert!(small_groups(11).is_err());
        let s3 = FiniteGroup::symmetric(3).without_label();
        assert_eq!(identify(&s3).as_deref(), Some("S3"));
        let p = FiniteGroup::direct_product(&FiniteGroup::cyclic(2), &FiniteGroup::cyclic(3));
        assert_eq!(identify(&p).as_deref(), Some("Z6"));
    }
}
