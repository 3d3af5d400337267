use std::sync::Arc;

use super::{nerve_of_aut, nerve_of_groupoid, NerveSource, TruncatedSimplicialSet, TOP_DIM};
use crate::algebra::{FiniteGroupoid, GroupFamily};
use crate::budget::Budget;
use crate::cocycle::{validate_cocycle, WeakAction};
use crate::report::Report;
use crate::two_groupoid::{build_aut, AutTwoGroupoid};
use crate::{Error, Result};

/// The nerve of a base groupoid together with the nerve of `Aut(𝒦)` for a
/// family over it.
#[derive(Clone, Debug)]
pub struct NervePair {
    pub base: Arc<FiniteGroupoid>,
    pub family: Arc<GroupFamily>,
    pub aut: Arc<AutTwoGroupoid>,
    pub source: Arc<TruncatedSimplicialSet>,
    pub target: Arc<TruncatedSimplicialSet>,
}

impl NervePair {
    pub fn new(base: &Arc<FiniteGroupoid>, family: &Arc<GroupFamily>) -> Result<Self> {
        family.check_indexes(base)?;
        let aut = Arc::new(build_aut(family.clone())?);
        Ok(Self {
            base: base.clone(),
            family: family.clone(),
            source: Arc::new(nerve_of_groupoid(base)),
            target: Arc::new(nerve_of_aut(&aut)),
            aut,
        })
    }

    /// The level-0 map sending each object to itself.
    pub fn indexing(&self) -> Vec<usize> {
        self.base.objects().collect()
    }
}

/// A simplicial map, one table per dimension.
#[derive(Clone, Debug)]
pub struct SimplicialMap {
    pub source: Arc<TruncatedSimplicialSet>,
    pub target: Arc<TruncatedSimplicialSet>,
    pub levels: Vec<Vec<usize>>,
}

impl PartialEq for SimplicialMap {
    fn eq(&self, other: &Self) -> bool {
        self.levels == other.levels
            && (Arc::ptr_eq(&self.source, &other.source) || self.source == other.source)
            && (Arc::ptr_eq(&self.target, &other.target) || self.target == other.target)
    }
}

impl Eq for SimplicialMap {}

impl SimplicialMap {
    pub fn new(
        source: Arc<TruncatedSimplicialSet>,
        target: Arc<TruncatedSimplicialSet>,
        levels: Vec<Vec<usize>>,
    ) -> Result<Self> {
        if levels.len() != TOP_DIM + 1 {
            return Err(Error::Structural("a simplicial map has one table per dimension 0..=3".into()));
        }
        for (n, level) in levels.iter().enumerate() {
            if level.len() != source.count(n) || level.iter().any(|&y| y >= target.count(n)) {
                return Err(Error::Structural(format!("map table of dimension {n} is malformed")));
            }
        }
        Ok(Self { source, target, levels })
    }

    #[inline]
    pub fn at(&self, n: usize, x: usize) -> usize {
        self.levels[n][x]
    }
}

/// Checks that the map commutes with every face and degeneracy.
pub fn validate_simplicial_map(m: &SimplicialMap) -> Report {
    let (s, t) = (&m.source, &m.target);
    let mut report = Report::new();
    for n in 1..=TOP_DIM {
        for x in 0..s.count(n) {
            for i in 0..=n {
                if m.at(n - 1, s.face(n, x, i)) != t.face(n, m.at(n, x), i) {
                    report.push("face", vec![n, x, i], format!("map does not commute with d{i} on {n}-simplex {x}"));
                }
            }
        }
    }
    for n in 0..TOP_DIM {
        for x in 0..s.count(n) {
            for i in 0..=n {
                if m.at(n + 1, s.degeneracy(n, x, i)) != t.degeneracy(n, m.at(n, x), i) {
                    report.push("degeneracy", vec![n, x, i], format!("map does not commute with s{i} on {n}-simplex {x}"));
                }
            }
        }
    }
    report
}

fn check_pair(w: &WeakAction, pair: &NervePair) -> Result<()> {
    if **w.base() != *pair.base || **w.family() != *pair.family {
        return Err(Error::Mismatch("weak action over a different base or family".into()));
    }
    Ok(())
}

/// The simplicial map `ner(𝒢) → ner(Aut(𝒦))` of a valid weak action:
/// `u ↦ F(u)`, `[u, v] ↦ (F(v), F(vu), F(u); σ_vu)`, and each 3-chain to the
/// tetrahedron with the image faces.
pub fn cocycle_to_map(w: &WeakAction, pair: &NervePair) -> Result<SimplicialMap> {
    check_pair(w, pair)?;
    let report = validate_cocycle(w);
    if !report.is_ok() {
        return Err(Error::invalid("cocycle", report));
    }
    let (g, s, t, aut) = (&pair.base, &pair.source, &pair.target, &pair.aut);
    let cell = |u: usize| {
        aut.find(g.src(u), g.tgt(u), w.f(u))
            .ok_or_else(|| Error::Theorem(format!("F({u}) is not a 1-cell of Aut")))
    };
    let m0 = pair.indexing();
    let m1: Vec<usize> = g.arrows().map(cell).collect::<Result<_>>()?;
    let m2: Vec<usize> = (0..s.count(2))
        .map(|x| {
            let (u, v) = (s.record(2, x)[0], s.record(2, x)[1]);
            let vu = g.comp(v, u);
            t.find(2, &[m1[v], m1[vu], m1[u], w.sigma(v, u)])
                .ok_or_else(|| Error::Theorem(format!("no triangle for the pair ({v},{u})")))
        })
        .collect::<Result<_>>()?;
    let m3: Vec<usize> = (0..s.count(3))
        .map(|x| {
            let faces: Vec<usize> = s.faces_of(3, x).iter().map(|&y| m2[y]).collect();
            match t.fillers(3, &faces) {
                [y] => Ok(*y),
                _ => Err(Error::Theorem(format!("no unique tetrahedron for 3-simplex {x}"))),
            }
        })
        .collect::<Result<_>>()?;
    let m = SimplicialMap::new(s.clone(), t.clone(), vec![m0, m1, m2, m3])?;
    let report = validate_simplicial_map(&m);
    if !report.is_ok() {
        return Err(Error::Theorem(format!("image of a cocycle is not simplicial: {report}")));
    }
    Ok(m)
}

/// Reads a weak action back from a simplicial map whose level 0 is the
/// indexing.
pub fn map_to_cocycle(m: &SimplicialMap, pair: &NervePair) -> Result<WeakAction> {
    if *m.source != *pair.source || *m.target != *pair.target {
        return Err(Error::Mismatch("map between different nerves".into()));
    }
    let report = validate_simplicial_map(m);
    if !report.is_ok() {
        return Err(Error::invalid("simplicial map", report));
    }
    if m.levels[0] != pair.indexing() {
        return Err(Error::Precondition("level 0 of the map is not the indexing of the family".into()));
    }
    let g = &pair.base;
    let f = g.arrows().map(|u| pair.aut.one_cell(m.at(1, u)).iso.clone()).collect();
    let sigma = g
        .pairs()
        .iter()
        .map(|&(v, u)| {
            let x = pair.source.find(2, &[u, v]).expect("composable pair is a 2-chain");
            pair.target.record(2, m.at(2, x))[3]
        })
        .collect();
    let w = WeakAction::new(g.clone(), pair.family.clone(), f, sigma)?;
    let report = validate_cocycle(&w);
    if !report.is_ok() {
        return Err(Error::Theorem(format!("simplicial map gives an invalid cocycle: {report}")));
    }
    Ok(w)
}

/// Every simplicial map `source → target` with the given level 0, found by
/// extending simplex by simplex through the target's boundary index. The
/// result is sorted by its tables.
pub fn enumerate_simplicial_maps(
    source: &Arc<TruncatedSimplicialSet>,
    target: &Arc<TruncatedSimplicialSet>,
    level0: &[usize],
    budget: &Budget,
) -> Result<Vec<SimplicialMap>> {
    if level0.len() != source.count(0) || level0.iter().any(|&y| y >= target.count(0)) {
        return Err(Error::Structural("level 0 does not map vertices to vertices".into()));
    }
    let mut order: Vec<(usize, usize)> = (0..source.count(1)).map(|x| (1, x)).collect();
    let mut by_last_face: Vec<Vec<usize>> = vec![Vec::new(); source.count(2)];
    for x in 0..source.count(3) {
        let last = *source.faces_of(3, x).iter().max().expect("tetrahedra have faces");
        by_last_face[last].push(x);
    }
    for (y, tets) in by_last_face.iter().enumerate() {
        order.push((2, y));
        order.extend(tets.iter().map(|&x| (3, x)));
    }
    let mut levels: Vec<Vec<usize>> = (0..=TOP_DIM).map(|n| vec![usize::MAX; source.count(n)]).collect();
    levels[0] = level0.to_vec();
    let mut out = Vec::new();
    extend(source, target, &order, 0, &mut levels, &mut out, budget)?;
    let mut maps: Vec<SimplicialMap> = out
        .into_iter()
        .map(|l| SimplicialMap::new(source.clone(), target.clone(), l))
        .collect::<Result<_>>()?;
    maps.retain(|m| validate_simplicial_map(m).is_ok());
    maps.sort_by(|a, b| a.levels.cmp(&b.levels));
    Ok(maps)
}

fn extend(
    s: &TruncatedSimplicialSet,
    t: &TruncatedSimplicialSet,
    order: &[(usize, usize)],
    k: usize,
    levels: &mut Vec<Vec<usize>>,
    out: &mut Vec<Vec<Vec<usize>>>,
    budget: &Budget,
) -> Result<()> {
    budget.charge(1)?;
    let Some(&(n, x)) = order.get(k) else {
        out.push(levels.clone());
        return Ok(());
    };
    let faces: Vec<usize> = s.faces_of(n, x).iter().map(|&y| levels[n - 1][y]).collect();
    let candidates: Vec<usize> = match s.degenerate_as(n, x) {
        Some((i, z)) => {
            let y = t.degeneracy(n - 1, levels[n - 1][z], i);
            if t.faces_of(n, y) == faces.as_slice() {
                vec![y]
            } else {
                Vec::new()
            }
        }
        None => t.fillers(n, &faces).to_vec(),
    };
    for y in candidates {
        levels[n][x] = y;
        extend(s, t, order, k + 1, levels, out, budget)?;
    }
    levels[n][x] = usize::MAX;
    Ok(())
}

impl TruncatedSimplicialSet {
    /// A copy with no source attached, as after a round trip through a
    /// document.
    pub fn detached(&self) -> Self {
        let (r, f, d, c, _) = self.clone().into_parts();
        Self::from_parts(r, f, d, c, NerveSource::Plain).expect("tables already checked")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::FiniteGroup;
    use crate::cocycle::enumerate_cocycles;

    fn pair(g: FiniteGroupoid, ks: Vec<FiniteGroup>) -> NervePair {
        NervePair::new(&Arc::new(g), &Arc::new(GroupFamily::new(ks))).unwrap()
    }

    #[test]
    fn cocycles_and_maps_agree() {
        for p in [
            pair(FiniteGroupoid::from_group(&FiniteGroup::cyclic(2)), vec![FiniteGroup::cyclic(2)]),
            pair(FiniteGroupoid::from_group(&FiniteGroup::cyclic(2)), vec![FiniteGroup::cyclic(3)]),
            pair(FiniteGroupoid::interval(), vec![FiniteGroup::cyclic(2); 2]),
        ] {
            let budget = Budget::default();
            let cocycles = enumerate_cocycles(&p.base, &p.family, &budget).unwrap();
            let mut via: Vec<SimplicialMap> = cocycles.iter().map(|w| cocycle_to_map(w, &p).unwrap()).collect();
            via.sort_by(|a, b| a.levels.cmp(&b.levels));
            let raw = enumerate_simplicial_maps(&p.source, &p.target, &p.indexing(), &budget).unwrap();
            assert_eq!(via, raw);
            for w in &cocycles {
                assert_eq!(&map_to_cocycle(&cocycle_to_map(w, &p).unwrap(), &p).unwrap(), w);
            }
        }
    }

    #[test]
    fn level_zero_must_be_the_indexing() {
        let p = pair(FiniteGroupoid::interval(), vec![FiniteGroup::cyclic(2); 2]);
        let swapped = enumerate_simplicial_maps(&p.source, &p.target, &[1, 0], &Budget::default()).unwrap();
        assert!(!swapped.is_empty());
        assert!(matches!(map_to_cocycle(&swapped[0], &p), Err(Error::Precondition(_))));
    }
}
