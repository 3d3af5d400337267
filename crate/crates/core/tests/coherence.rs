mod common;

use std::sync::Arc;

use gpdcoh::algebra::{FiniteGroup, FiniteGroupoid, GroupFamily};
use gpdcoh::cocycle::{enumerate_cocycles, enumerate_weakly_normalized, validate_cocycle, weak_identity_upgrade};
use gpdcoh::two_groupoid::{
    build_aut, hcompose, two_cell_codomain, two_cell_hinverse, two_cell_vinverse, vcompose, AutTwoGroupoid, TwoCell,
};
use gpdcoh::Budget;

fn aut(groups: Vec<FiniteGroup>) -> AutTwoGroupoid {
    build_aut(Arc::new(GroupFamily::new(groups))).unwrap()
}

/// 2-cells out of the codomain of `c`.
fn after<'a>(a: &'a AutTwoGroupoid, c: &'a TwoCell) -> impl Iterator<Item = &'a TwoCell> + 'a {
    let cod = two_cell_codomain(a.family(), c).unwrap();
    a.two_cells().iter().filter(move |d| d.src == c.src && d.tgt == c.tgt && d.dom == cod)
}

fn families() -> Vec<Vec<FiniteGroup>> {
    vec![vec![FiniteGroup::symmetric(3)], vec![common::z(3), common::z(3)]]
}

#[test]
fn middle_four_interchange() {
    for groups in families() {
        let a = aut(groups);
        let fam = a.family();
        let mut checked = 0usize;
        for alpha in a.two_cells() {
            for beta in after(&a, alpha) {
                let vertical = vcompose(fam, beta, alpha).unwrap();
                for gamma in a.two_cells().iter().filter(|c| c.src == alpha.tgt) {
                    for delta in after(&a, gamma) {
                        let lhs = hcompose(fam, &vcompose(fam, delta, gamma).unwrap(), &vertical).unwrap();
                        let rhs = vcompose(fam, &hcompose(fam, delta, beta).unwrap(), &hcompose(fam, gamma, alpha).unwrap())
                            .unwrap();
                        assert_eq!(lhs, rhs);
                        checked += 1;
                    }
                }
            }
        }
        assert!(checked > 0);
    }
}

#[test]
fn horizontal_composite_matches_the_other_whiskering() {
    for groups in families() {
        let a = aut(groups);
        let fam = a.family();
        for first in a.two_cells() {
            for second in a.two_cells().iter().filter(|c| c.src == first.tgt) {
                let h = hcompose(fam, second, first).unwrap();
                // cod(second)(α)·β
                let k = fam.group(second.tgt);
                let cod = two_cell_codomain(fam, second).unwrap();
                assert_eq!(h.witness, k.mul(cod.apply(first.witness), second.witness));
            }
        }
    }
}

#[test]
fn inverses_of_two_cells() {
    for groups in families() {
        let a = aut(groups);
        let fam = a.family();
        for c in a.two_cells() {
            let v = two_cell_vinverse(fam, c).unwrap();
            assert_eq!(vcompose(fam, &v, c).unwrap(), TwoCell::identity(&c.dom_cell()));
            let h = two_cell_hinverse(fam, c).unwrap();
            let id = a.one_cell(a.identity(c.src));
            assert_eq!(hcompose(fam, &h, c).unwrap(), TwoCell::identity(id));
        }
    }
}

#[test]
fn every_two_cell_is_natural() {
    for groups in families() {
        let a = aut(groups);
        let fam = a.family();
        for c in a.two_cells() {
            let cod = two_cell_codomain(fam, c).unwrap();
            let (s, t) = (fam.group(c.src), fam.group(c.tgt));
            assert!(cod.is_iso(s, t));
            for x in s.elements() {
                assert_eq!(t.mul(cod.apply(x), c.witness), t.mul(c.witness, c.dom.apply(x)));
            }
        }
    }
}

#[test]
fn aut_s3_is_a_two_groupoid() {
    let a = aut(vec![FiniteGroup::symmetric(3)]);
    assert_eq!((a.one_cells().len(), a.two_cells().len()), (6, 36));
    assert!(a.validate().is_ok());
}

#[test]
fn weak_identity_upgrade_on_all_candidates() {
    let cases = [
        (common::bz(2), vec![common::z(3)]),
        (common::bz(2), vec![FiniteGroup::symmetric(3)]),
        (common::bz(3), vec![common::z(3)]),
        (FiniteGroupoid::interval(), vec![common::z(2), common::z(2)]),
    ];
    for (g, ks) in cases {
        let (g, k) = (Arc::new(g), Arc::new(GroupFamily::new(ks)));
        let candidates = enumerate_weakly_normalized(&g, &k, &Budget::default()).unwrap();
        for w in &candidates {
            let up = weak_identity_upgrade(w).unwrap();
            assert!(validate_cocycle(&up).is_ok());
        }
        assert_eq!(candidates, enumerate_cocycles(&g, &k, &Budget::default()).unwrap());
    }
}
