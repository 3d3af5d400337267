use std::sync::Arc;

use rayon::prelude::*;

use super::map::{cocycle_to_map, enumerate_simplicial_maps, NervePair, SimplicialMap};
use super::TruncatedSimplicialSet;
use crate::algebra::{FiniteGroupoid, GroupFamily};
use crate::budget::Budget;
use crate::cocycle::{enumerate_cocycles, partition_cohomologous, validate_morphism, ActionMorphism};
use crate::report::Report;
use crate::{Error, Result};

/// A simplicial homotopy `h_j: X_q → Y_{q+1}` (`0 ≤ j ≤ q ≤ 2`) from `from`
/// to `to`, with `d_0 h_0 = from` and `d_{q+1} h_q = to`.
/// `components[q][j][x]` is `h_j(x)` for `x ∈ X_q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialHomotopy {
    pub from: SimplicialMap,
    pub to: SimplicialMap,
    pub components: Vec<Vec<Vec<usize>>>,
}

impl SimplicialHomotopy {
    pub fn new(from: SimplicialMap, to: SimplicialMap, components: Vec<Vec<Vec<usize>>>) -> Result<Self> {
        if from.source != to.source || from.target != to.target {
            return Err(Error::Mismatch("homotopy between maps of different nerves".into()));
        }
        let (s, t) = (&from.source, &from.target);
        let shaped = components.len() == 3
            && components.iter().enumerate().all(|(q, cq)| {
                cq.len() == q + 1 && cq.iter().all(|h| h.len() == s.count(q) && h.iter().all(|&y| y < t.count(q + 1)))
            });
        if !shaped {
            return Err(Error::Structural("homotopy components are malformed".into()));
        }
        Ok(Self { from, to, components })
    }

    #[inline]
    pub fn h(&self, q: usize, j: usize, x: usize) -> usize {
        self.components[q][j][x]
    }
}

/// Checks the face and degeneracy identities of a homotopy and that it is
/// normalized: `h_0(A) = s_0 f(A)` on vertices.
pub fn validate_homotopy(h: &SimplicialHomotopy) -> Report {
    let (s, t) = (&h.from.source, &h.from.target);
    let (f, g) = (&h.from, &h.to);
    let mut report = Report::new();
    for q in 0..=2 {
        for x in 0..s.count(q) {
            for j in 0..=q {
                let y = h.h(q, j, x);
                for i in 0..=q + 1 {
                    let d = t.face(q + 1, y, i);
                    let expected = if i == 0 && j == 0 {
                        Some(f.at(q, x))
                    } else if i == q + 1 && j == q {
                        Some(g.at(q, x))
                    } else if i < j {
                        Some(h.h(q - 1, j - 1, s.face(q, x, i)))
                    } else if i == j + 1 {
                        Some(t.face(q + 1, h.h(q, j + 1, x), i))
                    } else if i > j + 1 {
                        Some(h.h(q - 1, j, s.face(q, x, i - 1)))
                    } else {
                        None
                    };
                    if expected.is_some_and(|e| e != d) {
                        report.push("face", vec![q, j, x, i], format!("d{i} h{j} identity fails on {q}-simplex {x}"));
                    }
                }
                if q < 2 {
                    for i in 0..=q + 1 {
                        let lhs = t.degeneracy(q + 1, y, i);
                        let rhs = if i <= j {
                            h.h(q + 1, j + 1, s.degeneracy(q, x, i))
                        } else {
                            h.h(q + 1, j, s.degeneracy(q, x, i - 1))
                        };
                        if lhs != rhs {
                            report.push("degeneracy", vec![q, j, x, i], format!("s{i} h{j} identity fails on {q}-simplex {x}"));
                        }
                    }
                }
            }
        }
    }
    for a in 0..s.count(0) {
        if h.h(0, 0, a) != t.degeneracy(0, f.at(0, a), 0) {
            report.push("normalized", vec![a], format!("h0 of vertex {a} is not degenerate"));
        }
    }
    report
}

/// `h_J(s_k z)` as forced by the degeneracy identities.
fn forced(t: &TruncatedSimplicialSet, lower: &[Vec<usize>], q: usize, j: usize, k: usize, z: usize) -> usize {
    if k < j {
        t.degeneracy(q, lower[j - 1][z], k)
    } else {
        t.degeneracy(q, lower[j][z], k + 1)
    }
}

/// The three components `h_0, h_1, h_2` on a non-degenerate 2-simplex,
/// given the components on edges; the least choice of the two interior
/// triangles is taken.
fn fill_triangle(
    s: &TruncatedSimplicialSet,
    t: &TruncatedSimplicialSet,
    f: &SimplicialMap,
    g: &SimplicialMap,
    h1: &[Vec<usize>],
    x: usize,
) -> Option<[usize; 3]> {
    let d = |i: usize| s.face(2, x, i);
    let (fx, gx) = (f.at(2, x), g.at(2, x));
    let y1_faces = [t.face(2, fx, 0), t.face(2, h1[0][d(1)], 1), t.face(2, h1[0][d(2)], 1)];
    let y2_faces = [t.face(2, h1[1][d(0)], 1), t.face(2, h1[1][d(1)], 1), t.face(2, gx, 2)];
    let first = |faces: [usize; 4]| t.fillers(3, &faces).first().copied();
    let y1s: Vec<(usize, usize)> = t
        .fillers(2, &y1_faces)
        .iter()
        .filter_map(|&y1| first([fx, y1, h1[0][d(1)], h1[0][d(2)]]).map(|a| (y1, a)))
        .collect();
    let y2s: Vec<(usize, usize)> = t
        .fillers(2, &y2_faces)
        .iter()
        .filter_map(|&y2| first([h1[1][d(0)], h1[1][d(1)], y2, gx]).map(|c| (y2, c)))
        .collect();
    for &(y1, a) in &y1s {
        for &(y2, c) in &y2s {
            if let Some(b) = first([h1[0][d(0)], y1, y2, h1[1][d(2)]]) {
                return Some([a, b, c]);
            }
        }
    }
    None
}

/// Completes a homotopy from its components on vertices and edges.
fn complete(
    f: &SimplicialMap,
    g: &SimplicialMap,
    h0: Vec<usize>,
    h1: Vec<Vec<usize>>,
) -> Option<SimplicialHomotopy> {
    let (s, t) = (&f.source, &f.target);
    let mut h2 = vec![vec![usize::MAX; s.count(2)]; 3];
    for x in 0..s.count(2) {
        let values = match s.degenerate_as(2, x) {
            Some((k, z)) => [0, 1, 2].map(|j| forced(t, &h1, 2, j, k, z)),
            None => fill_triangle(s, t, f, g, &h1, x)?,
        };
        for j in 0..3 {
            h2[j][x] = values[j];
        }
    }
    let h = SimplicialHomotopy::new(f.clone(), g.clone(), vec![vec![h0], h1, h2]).ok()?;
    validate_homotopy(&h).is_ok().then_some(h)
}

/// The homotopy `F₁ ⇒ F₂` of a morphism of weak actions: on a vertex the
/// degenerate edge, on an arrow `u` the triangle `(id, F₁u, F₂u; τ(u))`.
pub fn homotopy_from_morphism(m: &ActionMorphism, pair: &NervePair) -> Result<SimplicialHomotopy> {
    let report = validate_morphism(m)?;
    if !report.is_ok() {
        return Err(Error::invalid("morphism", report));
    }
    let f = cocycle_to_map(&m.source, pair)?;
    let g = cocycle_to_map(&m.target, pair)?;
    let (base, t) = (&pair.base, &pair.target);
    let h0: Vec<usize> = base.objects().map(|a| t.degeneracy(0, f.at(0, a), 0)).collect();
    let mut h1 = vec![Vec::new(), Vec::new()];
    for u in base.arrows() {
        h1[0].push(t.degeneracy(1, f.at(1, u), 0));
        let id = pair.aut.identity(base.tgt(u));
        let y = t
            .find(2, &[id, f.at(1, u), g.at(1, u), m.tau.value(u)])
            .ok_or_else(|| Error::Theorem(format!("τ({u}) is not a 2-cell F₁({u}) ⇒ F₂({u})")))?;
        h1[1].push(y);
    }
    complete(&f, &g, h0, h1).ok_or_else(|| Error::Theorem("morphism does not extend to a simplicial homotopy".into()))
}

/// Searches for a normalized homotopy `f ⇒ g`, choosing its components on
/// edges by backtracking and completing each triangle as soon as its edges
/// are fixed.
pub fn normalized_homotopic(
    f: &SimplicialMap,
    g: &SimplicialMap,
    budget: &Budget,
) -> Result<Option<SimplicialHomotopy>> {
    if f.source != g.source || f.target != g.target {
        return Err(Error::Mismatch("maps between different nerves".into()));
    }
    if f.levels[0] != g.levels[0] {
        return Ok(None);
    }
    let (s, t) = (&f.source, &f.target);
    let h0: Vec<usize> = (0..s.count(0)).map(|a| t.degeneracy(0, f.at(0, a), 0)).collect();
    let mut h1 = vec![vec![usize::MAX; s.count(1)]; 2];
    let mut free = Vec::new();
    for x in 0..s.count(1) {
        match s.degenerate_as(1, x) {
            Some((k, z)) => {
                let lower = [h0.clone()];
                h1[0][x] = forced(t, &lower, 1, 0, k, z);
                h1[1][x] = forced(t, &lower, 1, 1, k, z);
            }
            None => free.push(x),
        }
    }
    let options: Vec<Vec<(usize, usize)>> = free
        .iter()
        .map(|&x| {
            let (a, b) = (s.face(1, x, 1), s.face(1, x, 0));
            let mut out = Vec::new();
            for y in 0..t.count(1) {
                for &p in t.fillers(2, &[f.at(1, x), y, h0[a]]) {
                    for &q in t.fillers(2, &[h0[b], y, g.at(1, x)]) {
                        out.push((p, q));
                    }
                }
            }
            out.sort_unstable();
            out
        })
        .collect();
    // triangles become checkable once their last free edge is chosen
    let slot: Vec<Option<usize>> = (0..s.count(1)).map(|x| free.iter().position(|&e| e == x)).collect();
    let mut ready: Vec<Vec<usize>> = vec![Vec::new(); free.len() + 1];
    for x in 0..s.count(2) {
        if s.is_degenerate(2, x) {
            continue;
        }
        let last = s.faces_of(2, x).iter().filter_map(|&e| slot[e]).max().map_or(0, |k| k + 1);
        ready[last].push(x);
    }
    for &x in &ready[0] {
        if fill_triangle(s, t, f, g, &h1, x).is_none() {
            return Ok(None);
        }
    }
    if search(s, t, f, g, &free, &options, &ready, 0, &mut h1, budget)? {
        let h = complete(f, g, h0, h1)
            .ok_or_else(|| Error::Theorem("edge components extend on every triangle yet fail validation".into()))?;
        return Ok(Some(h));
    }
    Ok(None)
}

#[allow(clippy::too_many_arguments)]
fn search(
    s: &TruncatedSimplicialSet,
    t: &TruncatedSimplicialSet,
    f: &SimplicialMap,
    g: &SimplicialMap,
    free: &[usize],
    options: &[Vec<(usize, usize)>],
    ready: &[Vec<usize>],
    k: usize,
    h1: &mut Vec<Vec<usize>>,
    budget: &Budget,
) -> Result<bool> {
    if k == free.len() {
        return Ok(true);
    }
    let x = free[k];
    for &(p, q) in &options[k] {
        budget.charge(1)?;
        h1[0][x] = p;
        h1[1][x] = q;
        if ready[k + 1].iter().all(|&tri| fill_triangle(s, t, f, g, h1, tri).is_some())
            && search(s, t, f, g, free, options, ready, k + 1, h1, budget)?
        {
            return Ok(true);
        }
    }
    h1[0][x] = usize::MAX;
    h1[1][x] = usize::MAX;
    Ok(false)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RepresentationRow {
    pub homotopy_class: usize,
    pub h2_class: usize,
    pub size: usize,
    /// Index of the representative cocycle in enumeration order.
    pub representative: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RepresentationReport {
    pub cocycles: usize,
    pub maps: usize,
    pub raw_maps: usize,
    pub h2_classes: usize,
    pub homotopy_classes: usize,
    pub rows: Vec<RepresentationRow>,
}

/// Compares normalized homotopy classes of simplicial maps
/// `ner(𝒢) → ner(Aut(𝒦))` over the indexing with cohomology classes.
///
/// Maps are obtained both from the cocycles and by a direct search; every
/// cohomology witness must yield a homotopy; the two partitions must agree.
pub fn representation_check(
    base: &Arc<FiniteGroupoid>,
    family: &Arc<GroupFamily>,
    budget: &Budget,
) -> Result<RepresentationReport> {
    let pair = NervePair::new(base, family)?;
    let cocycles = enumerate_cocycles(base, family, budget)?;
    let maps: Vec<SimplicialMap> = cocycles.iter().map(|w| cocycle_to_map(w, &pair)).collect::<Result<_>>()?;
    let raw = enumerate_simplicial_maps(&pair.source, &pair.target, &pair.indexing(), budget)?;
    let mut sorted: Vec<&SimplicialMap> = maps.iter().collect();
    sorted.sort_by(|a, b| a.levels.cmp(&b.levels));
    if sorted.len() != raw.len() || sorted.iter().zip(&raw).any(|(a, b)| **a != *b) {
        return Err(Error::Theorem(format!(
            "{} cocycles give maps differing from the {} simplicial maps found directly",
            maps.len(),
            raw.len()
        )));
    }
    let classes = partition_cohomologous(&cocycles, budget)?;
    for class in &classes {
        let rep = &cocycles[class.representative()];
        for (&i, tau) in class.members.iter().zip(&class.witnesses) {
            let m = ActionMorphism { source: rep.clone(), target: cocycles[i].clone(), tau: tau.clone() };
            homotopy_from_morphism(&m, &pair)?;
        }
    }
    let homotopy = partition_homotopic(&maps, budget)?;
    let mut rows = Vec::new();
    for (hi, members) in homotopy.iter().enumerate() {
        let Some(ci) = classes.iter().position(|c| {
            let mut m = c.members.clone();
            m.sort_unstable();
            m == *members
        }) else {
            return Err(Error::Theorem(format!("homotopy class {members:?} is not a cohomology class")));
        };
        rows.push(RepresentationRow { homotopy_class: hi, h2_class: ci, size: members.len(), representative: members[0] });
    }
    if homotopy.len() != classes.len() {
        return Err(Error::Theorem(format!(
            "{} homotopy classes against {} cohomology classes",
            homotopy.len(),
            classes.len()
        )));
    }
    Ok(RepresentationReport {
        cocycles: cocycles.len(),
        maps: maps.len(),
        raw_maps: raw.len(),
        h2_classes: classes.len(),
        homotopy_classes: homotopy.len(),
        rows,
    })
}

/// Classes under normalized homotopy, as sorted index lists led by their
/// least member.
fn partition_homotopic(maps: &[SimplicialMap], budget: &Budget) -> Result<Vec<Vec<usize>>> {
    let mut unassigned: Vec<usize> = (0..maps.len()).collect();
    let mut classes = Vec::new();
    while let Some(&rep) = unassigned.first() {
        let found: Vec<bool> = unassigned[1..]
            .par_iter()
            .map(|&j| normalized_homotopic(&maps[rep], &maps[j], budget).map(|h| h.is_some()))
            .collect::<Result<_>>()?;
        let mut class = vec![rep];
        let mut rest = Vec::new();
        for (&j, hit) in unassigned[1..].iter().zip(found) {
            if hit {
                class.push(j);
            } else {
                rest.push(j);
            }
        }
        classes.push(class);
        unassigned = rest;
    }
    Ok(classes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::FiniteGroup;
    use crate::cocycle::h2;

    fn check(g: FiniteGroupoid, ks: Vec<FiniteGroup>, classes: usize) {
        let (g, k) = (Arc::new(g), Arc::new(GroupFamily::new(ks)));
        let r = representation_check(&g, &k, &Budget::default()).unwrap();
        assert_eq!((r.h2_classes, r.homotopy_classes), (classes, classes));
        assert_eq!(r.maps, r.raw_maps);
    }

    #[test]
    fn representation_small() {
        check(FiniteGroupoid::from_group(&FiniteGroup::cyclic(2)), vec![FiniteGroup::cyclic(2)], 2);
        check(FiniteGroupoid::from_group(&FiniteGroup::cyclic(2)), vec![FiniteGroup::cyclic(3)], 2);
        check(FiniteGroupoid::interval(), vec![FiniteGroup::cyclic(2); 2], 1);
    }

    #[test]
    fn morphisms_give_homotopies() {
        let g = Arc::new(FiniteGroupoid::from_group(&FiniteGroup::cyclic(3)));
        let k = Arc::new(GroupFamily::new(vec![FiniteGroup::cyclic(3)]));
        let pair = NervePair::new(&g, &k).unwrap();
        let h = h2(&g, &k, &Budget::default()).unwrap();
        for class in &h.classes {
            let rep = &h.cocycles[class.representative()];
            for (&i, tau) in class.members.iter().zip(&class.witnesses) {
                let m = ActionMorphism { source: rep.clone(), target: h.cocycles[i].clone(), tau: tau.clone() };
                let hom = homotopy_from_morphism(&m, &pair).unwrap();
                assert!(validate_homotopy(&hom).is_ok());
            }
        }
        let maps: Vec<SimplicialMap> = h.cocycles.iter().map(|w| cocycle_to_map(w, &pair).unwrap()).collect();
        let identity = normalized_homotopic(&maps[0], &maps[0], &Budget::default()).unwrap().unwrap();
        assert!(validate_homotopy(&identity).is_ok());
    }
}
