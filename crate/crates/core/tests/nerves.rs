mod common;

use std::collections::BTreeSet;
use std::sync::Arc;

use gpdcoh::algebra::{FiniteGroup, FiniteGroupoid, GroupFamily};
use gpdcoh::cocycle::{cohomologous, enumerate_cocycles, ActionMorphism};
use gpdcoh::nerve::{
    cocycle_to_map, enumerate_simplicial_maps, homotopy_from_morphism, map_to_cocycle, nerve_of_aut,
    nerve_of_groupoid, normalized_homotopic, validate_simplicial_set, NervePair, SimplicialMap,
    TruncatedSimplicialSet,
};
use gpdcoh::two_groupoid::{build_aut, AutTwoGroupoid};
use gpdcoh::{Budget, Error};
use proptest::prelude::*;

fn aut(groups: Vec<FiniteGroup>) -> Arc<AutTwoGroupoid> {
    Arc::new(build_aut(Arc::new(GroupFamily::new(groups))).unwrap())
}

/// Triangles `(g, h, f; α)` computed from the 2-groupoid directly.
fn oracle_triangles(a: &AutTwoGroupoid) -> Vec<[usize; 4]> {
    let fam = a.family();
    let n = a.one_cells().len();
    let mut out = Vec::new();
    for f in 0..n {
        for g in 0..n {
            for h in 0..n {
                let (cf, cg, ch) = (a.one_cell(f), a.one_cell(g), a.one_cell(h));
                if cf.tgt != cg.src || ch.src != cf.src || ch.tgt != cg.tgt {
                    continue;
                }
                let k = fam.group(cg.tgt);
                for alpha in k.elements() {
                    let ok = fam
                        .group(cf.src)
                        .elements()
                        .all(|x| k.mul(k.mul(alpha, ch.iso.apply(x)), k.inv(alpha)) == cg.iso.apply(cf.iso.apply(x)));
                    if ok {
                        out.push([g, h, f, alpha]);
                    }
                }
            }
        }
    }
    out.sort();
    out
}

/// Face-compatible commutative tetrahedra, by filtering all quadruples.
fn oracle_tetrahedra(a: &AutTwoGroupoid, tri: &[[usize; 4]]) -> BTreeSet<[[usize; 4]; 4]> {
    let fam = a.family();
    let mut out = BTreeSet::new();
    for y0 in tri {
        for y1 in tri {
            for y2 in tri {
                for y3 in tri {
                    let [m, l, g, rho] = *y0;
                    let [m1, k, h, phi] = *y1;
                    let [l2, k2, f, lambda] = *y2;
                    let [g3, h3, f3, beta] = *y3;
                    if m != m1 || l != l2 || k != k2 || g != g3 || h != h3 || f != f3 {
                        continue;
                    }
                    let grp = fam.group(a.one_cell(m).tgt);
                    let lhs = grp.mul(a.one_cell(m).iso.apply(beta), phi);
                    if lhs == grp.mul(rho, lambda) {
                        out.insert([*y0, *y1, *y2, *y3]);
                    }
                }
            }
        }
    }
    out
}

fn as_records(n: &TruncatedSimplicialSet) -> BTreeSet<[[usize; 4]; 4]> {
    n.records(3)
        .iter()
        .map(|faces| {
            let r = |y: usize| <[usize; 4]>::try_from(n.record(2, y)).unwrap();
            [r(faces[0]), r(faces[1]), r(faces[2]), r(faces[3])]
        })
        .collect()
}

#[test]
fn nerve_counts() {
    let z2 = nerve_of_groupoid(&Arc::new(common::bz(2)));
    assert_eq!(z2.counts(), [1, 2, 4, 8]);
    let z3 = nerve_of_groupoid(&Arc::new(common::bz(3)));
    assert_eq!(z3.counts(), [1, 3, 9, 27]);
    let a = aut(vec![common::z(3)]);
    assert_eq!(nerve_of_aut(&a).count(2), 12);
}

#[test]
fn aut_tetrahedra_match_brute_force() {
    for groups in [vec![common::z(2)], vec![common::z(3)], vec![common::z(2), common::z(2)]] {
        let a = aut(groups);
        let n = nerve_of_aut(&a);
        let tri = oracle_triangles(&a);
        let ours: Vec<[usize; 4]> = n.records(2).iter().map(|r| r.as_slice().try_into().unwrap()).collect();
        assert_eq!(ours, tri);
        assert_eq!(as_records(&n), oracle_tetrahedra(&a, &tri));
        assert!(validate_simplicial_set(&n).is_ok());
    }
}

#[test]
fn aut_s3_nerve_is_simplicial() {
    let n = nerve_of_aut(&aut(vec![FiniteGroup::symmetric(3)]));
    assert_eq!(n.count(2), 6 * 6 * 6);
    assert!(validate_simplicial_set(&n).is_ok());
}

fn fuzz_targets() -> Vec<TruncatedSimplicialSet> {
    vec![
        nerve_of_groupoid(&Arc::new(common::bz(2))),
        nerve_of_groupoid(&Arc::new(common::bz(3))),
        nerve_of_groupoid(&Arc::new(FiniteGroupoid::interval())),
        nerve_of_aut(&aut(vec![common::z(2)])),
        nerve_of_aut(&aut(vec![common::z(3)])),
        nerve_of_aut(&aut(vec![common::z(2), common::z(2)])),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn any_single_cell_mutation_is_detected(
        which in 0usize..6,
        faces in any::<bool>(),
        dim in any::<prop::sample::Index>(),
        cell in any::<prop::sample::Index>(),
        shift in 1usize..1000,
    ) {
        let targets = fuzz_targets();
        let s = &targets[which];
        let (r, mut f, mut d, c, src) = s.clone().into_parts();
        if faces {
            let n = 1 + dim.index(3);
            let width = n + 1;
            let i = cell.index(f[n].len() * width);
            let range = r[n - 1].len();
            prop_assume!(range > 1);
            let slot = &mut f[n][i / width][i % width];
            *slot = (*slot + 1 + shift % (range - 1)) % range;
        } else {
            let n = dim.index(3);
            let width = n + 1;
            let i = cell.index(d[n].len() * width);
            let range = r[n + 1].len();
            prop_assume!(range > 1);
            let slot = &mut d[n][i / width][i % width];
            *slot = (*slot + 1 + shift % (range - 1)) % range;
        }
        let mutated = TruncatedSimplicialSet::from_parts(r, f, d, c, src).unwrap();
        prop_assert!(!validate_simplicial_set(&mutated).is_ok());
    }
}

#[test]
fn maps_and_cocycles_are_in_bijection() {
    for i in common::instances() {
        let pair = NervePair::new(&i.base, &i.family).unwrap();
        let ws = enumerate_cocycles(&i.base, &i.family, &Budget::default()).unwrap();
        let maps: Vec<SimplicialMap> = ws.iter().map(|w| cocycle_to_map(w, &pair).unwrap()).collect();
        for (w, m) in ws.iter().zip(&maps) {
            assert_eq!(&map_to_cocycle(m, &pair).unwrap(), w);
        }
        let distinct: BTreeSet<&Vec<Vec<usize>>> = maps.iter().map(|m| &m.levels).collect();
        assert_eq!(distinct.len(), maps.len());
        let raw = enumerate_simplicial_maps(&pair.source, &pair.target, &pair.indexing(), &Budget::default()).unwrap();
        let raw: BTreeSet<&Vec<Vec<usize>>> = raw.iter().map(|m| &m.levels).collect();
        assert_eq!(raw, distinct, "{}", i.name);
    }
}

#[test]
fn trivial_cocycle_lands_on_identity_witnesses() {
    let i = &common::instances()[0];
    let pair = NervePair::new(&i.base, &i.family).unwrap();
    let w = gpdcoh::cocycle::WeakAction::trivial(i.base.clone(), i.family.clone()).unwrap();
    let m = cocycle_to_map(&w, &pair).unwrap();
    assert!(m.levels[2].iter().all(|&y| pair.target.record(2, y)[3] == 0));
}

#[test]
fn broken_map_is_rejected() {
    let i = &common::instances()[1];
    let pair = NervePair::new(&i.base, &i.family).unwrap();
    let ws = enumerate_cocycles(&i.base, &i.family, &Budget::default()).unwrap();
    let mut m = cocycle_to_map(&ws[0], &pair).unwrap();
    let x = pair.source.find(2, &[1, 1]).unwrap();
    m.levels[2][x] = (m.levels[2][x] + 1) % pair.target.count(2);
    assert!(matches!(map_to_cocycle(&m, &pair), Err(Error::Invalid { .. })));
}

#[test]
fn identity_morphism_gives_a_degenerate_homotopy() {
    for i in common::instances() {
        let pair = NervePair::new(&i.base, &i.family).unwrap();
        for w in enumerate_cocycles(&i.base, &i.family, &Budget::default()).unwrap() {
            let h = homotopy_from_morphism(&ActionMorphism::identity(&w), &pair).unwrap();
            for (q, cq) in h.components.iter().enumerate() {
                for hj in cq {
                    assert!(hj.iter().all(|&y| pair.target.is_degenerate(q + 1, y)));
                }
            }
        }
    }
}

#[test]
fn homotopy_is_an_equivalence_matching_cohomology() {
    for i in common::instances() {
        let pair = NervePair::new(&i.base, &i.family).unwrap();
        let ws = enumerate_cocycles(&i.base, &i.family, &Budget::default()).unwrap();
        let maps: Vec<SimplicialMap> = ws.iter().map(|w| cocycle_to_map(w, &pair).unwrap()).collect();
        let b = Budget::default();
        let n = maps.len();
        let rel: Vec<Vec<bool>> = (0..n)
            .map(|x| (0..n).map(|y| normalized_homotopic(&maps[x], &maps[y], &b).unwrap().is_some()).collect())
            .collect();
        for x in 0..n {
            assert!(rel[x][x]);
            for y in 0..n {
                assert_eq!(rel[x][y], rel[y][x]);
                assert_eq!(rel[x][y], cohomologous(&ws[x], &ws[y], &b).unwrap().is_some(), "{}", i.name);
                for z in 0..n {
                    assert!(!(rel[x][y] && rel[y][z]) || rel[x][z]);
                }
            }
        }
    }
}
