use std::collections::{BTreeMap, HashMap};

use super::group::{Elem, FiniteGroup};
use crate::report::Report;
use crate::{Error, Result};

pub type ObjId = usize;
pub type ArrowId = usize;

/// Groupoids larger than this are refused: everything downstream enumerates.
pub const MAX_OBJECTS: usize = 64;
pub const MAX_ARROWS: usize = 4096;

/// Raw, possibly invalid, groupoid presentation.
///
/// `compose[(g, f)]` is `g ∘ f`, i.e. `f` first and then `g`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GroupoidData {
    pub objects: Vec<ObjId>,
    /// `(id, src, tgt)`
    pub arrows: Vec<(ArrowId, ObjId, ObjId)>,
    pub identity: BTreeMap<ObjId, ArrowId>,
    pub compose: BTreeMap<(ArrowId, ArrowId), ArrowId>,
    pub inverse: BTreeMap<ArrowId, ArrowId>,
}

/// Checks the groupoid axioms on raw data.
///
/// Non-dense ids, dangling references and oversize inputs are structural
/// errors. Everything else is reported as a violation.
pub fn validate_groupoid(d: &GroupoidData) -> Result<Report> {
    let n_obj = d.objects.len();
    let n_arr = d.arrows.len();
    if n_obj > MAX_OBJECTS || n_arr > MAX_ARROWS {
        return Err(Error::TooLarge(format!(
            "{n_obj} objects / {n_arr} arrows exceeds {MAX_OBJECTS} / {MAX_ARROWS}"
        )));
    }
    if d.objects.iter().enumerate().any(|(i, &o)| i != o) {
        return Err(Error::Structural("object ids must be 0..n in order".into()));
    }
    if d.arrows.iter().enumerate().any(|(i, a)| i != a.0) {
        return Err(Error::Structural("arrow ids must be 0..n in order".into()));
    }
    for &(id, s, t) in &d.arrows {
        if s >= n_obj || t >= n_obj {
            return Err(Error::Structural(format!(
                "arrow {id} has dangling endpoint {s}→{t}"
            )));
        }
    }
    let arrow_ok = |a: ArrowId| a < n_arr;
    for (&o, &a) in &d.identity {
        if o >= n_obj || !arrow_ok(a) {
            return Err(Error::Structural(format!("identity entry {o} ↦ {a} dangles")));
        }
    }
    for (&(g, f), &h) in &d.compose {
        if !arrow_ok(g) || !arrow_ok(f) || !arrow_ok(h) {
            return Err(Error::Structural(format!(
                "composition entry ({g},{f}) ↦ {h} dangles"
            )));
        }
    }
    for (&a, &b) in &d.inverse {
        if !arrow_ok(a) || !arrow_ok(b) {
            return Err(Error::Structural(format!("inverse entry {a} ↦ {b} dangles")));
        }
    }

    let src = |a: ArrowId| d.arrows[a].1;
    let tgt = |a: ArrowId| d.arrows[a].2;
    let mut report = Report::new();

    for o in 0..n_obj {
        match d.identity.get(&o) {
            None => report.push("identity", vec![o], format!("object {o} has no identity")),
            Some(&i) if src(i) != o || tgt(i) != o => {
                report.push("identity", vec![o, i], format!("identity {i} of {o} is not an endo-arrow of {o}"))
            }
            _ => {}
        }
    }

    for g in 0..n_arr {
        for f in 0..n_arr {
            let composable = src(g) == tgt(f);
            match (composable, d.compose.get(&(g, f))) {
                (true, None) => report.push(
                    "composition",
                    vec![g, f],
                    format!("{g}∘{f} undefined although composable"),
                ),
                (false, Some(_)) => report.push(
                    "composition",
                    vec![g, f],
                    format!("{g}∘{f} defined although src({g}) ≠ tgt({f})"),
                ),
                (true, Some(&h)) if src(h) != src(f) || tgt(h) != tgt(g) => report.push(
                    "composition",
                    vec![g, f, h],
                    format!("{g}∘{f} = {h} has wrong endpoints"),
                ),
                _ => {}
            }
        }
    }
    if !report.is_ok() {
        // associativity and inverses are meaningless on a broken table
        return Ok(report);
    }
    let comp = |g: ArrowId, f: ArrowId| d.compose[&(g, f)];

    for a in 0..n_arr {
        let left = d.identity[&tgt(a)];
        let right = d.identity[&src(a)];
        if comp(left, a) != a || comp(a, right) != a {
            report.push("unit", vec![a], format!("identities not neutral on {a}"));
        }
    }

    let mut out_of: Vec<Vec<ArrowId>> = vec![Vec::new(); n_obj];
    for a in 0..n_arr {
        out_of[src(a)].push(a);
    }
    for f in 0..n_arr {
        for &g in &out_of[tgt(f)] {
            let gf = comp(g, f);
            for &h in &out_of[tgt(g)] {
                let lhs = comp(comp(h, g), f);
                let rhs = comp(h, gf);
                if lhs != rhs {
                    report.push(
                        "associativity",
                        vec![h, g, f],
                        format!("({h}∘{g})∘{f} = {lhs} but {h}∘({g}∘{f}) = {rhs}"),
                    );
                }
            }
        }
    }

    for a in 0..n_arr {
        match d.inverse.get(&a) {
            None => report.push("inverse", vec![a], format!("arrow {a} has no inverse")),
            Some(&b) => {
                if src(b) != tgt(a) || tgt(b) != src(a) {
                    report.push("inverse", vec![a, b], format!("inverse {b} of {a} has wrong endpoints"));
                } else {
                    if comp(b, a) != d.identity[&src(a)] {
                        report.push("inverse", vec![a, b], format!("{b}∘{a} is not the identity"));
                    }
                    if comp(a, b) != d.identity[&tgt(a)] {
                        report.push("inverse", vec![a, b], format!("{a}∘{b} is not the identity"));
                    }
                }
            }
        }
    }
    Ok(report)
}

/// A validated finite groupoid with dense object and arrow ids.
#[derive(Clone, Debug)]
pub struct FiniteGroupoid {
    src: Vec<ObjId>,
    tgt: Vec<ObjId>,
    identity: Vec<ArrowId>,
    inverse: Vec<ArrowId>,
    compose: HashMap<(ArrowId, ArrowId), ArrowId>,
    /// Arrows out of each object, ascending.
    out_of: Vec<Vec<ArrowId>>,
    /// Composable pairs `(v, u)` (u first), sorted.
    pairs: Vec<(ArrowId, ArrowId)>,
    pair_index: HashMap<(ArrowId, ArrowId), usize>,
}

impl FiniteGroupoid {
    pub fn new(data: GroupoidData) -> Result<Self> {
        let report = validate_groupoid(&data)?;
        if !report.is_ok() {
            return Err(Error::invalid("groupoid", report));
        }
        let n_arr = data.arrows.len();
        let src: Vec<ObjId> = data.arrows.iter().map(|a| a.1).collect();
        let tgt: Vec<ObjId> = data.arrows.iter().map(|a| a.2).collect();
        let identity = data.identity.values().copied().collect();
        let inverse = (0..n_arr).map(|a| data.inverse[&a]).collect();
        let mut out_of = vec![Vec::new(); data.objects.len()];
        for a in 0..n_arr {
            out_of[src[a]].push(a);
        }
        let pairs: Vec<(ArrowId, ArrowId)> = data.compose.keys().copied().collect();
        let pair_index = pairs.iter().enumerate().map(|(i, &p)| (p, i)).collect();
        Ok(Self {
            src,
            tgt,
            identity,
            inverse,
            compose: data.compose.into_iter().collect(),
            out_of,
            pairs,
            pair_index,
        })
    }

    pub fn data(&self) -> GroupoidData {
        GroupoidData {
            objects: (0..self.num_objects()).collect(),
            arrows: (0..self.num_arrows())
                .map(|a| (a, self.src[a], self.tgt[a]))
                .collect(),
            identity: self.identity.iter().copied().enumerate().collect(),
            compose: self.pairs.iter().map(|&p| (p, self.compose[&p])).collect(),
            inverse: self.inverse.iter().copied().enumerate().collect(),
        }
    }

    pub fn num_objects(&self) -> usize {
        self.identity.len()
    }

    pub fn num_arrows(&self) -> usize {
        self.src.len()
    }

    pub fn objects(&self) -> std::ops::Range<ObjId> {
        0..self.num_objects()
    }

    pub fn arrows(&self) -> std::ops::Range<ArrowId> {
        0..self.num_arrows()
    }

    #[inline]
    pub fn src(&self, a: ArrowId) -> ObjId {
        self.src[a]
    }

    #[inline]
    pub fn tgt(&self, a: ArrowId) -> ObjId {
        self.tgt[a]
    }

    #[inline]
    pub fn identity(&self, o: ObjId) -> ArrowId {
        self.identity[o]
    }

    pub fn is_identity(&self, a: ArrowId) -> bool {
        self.identity[self.src[a]] == a
    }

    #[inline]
    pub fn inverse(&self, a: ArrowId) -> ArrowId {
        self.inverse[a]
    }

    /// `g ∘ f` when `src(g) = tgt(f)`.
    pub fn compose(&self, g: ArrowId, f: ArrowId) -> Option<ArrowId> {
        self.compose.get(&(g, f)).copied()
    }

    /// `g ∘ f`; panics if the pair is not composable.
    #[inline]
    pub fn comp(&self, g: ArrowId, f: ArrowId) -> ArrowId {
        self.compose[&(g, f)]
    }

    pub fn arrows_from(&self, o: ObjId) -> &[ArrowId] {
        &self.out_of[o]
    }

    pub fn hom(&self, a: ObjId, b: ObjId) -> impl Iterator<Item = ArrowId> + '_ {
        self.out_of[a].iter().copied().filter(move |&x| self.tgt[x] == b)
    }

    /// Composable pairs `(v, u)`, meaning `u` then `v`, in sorted order.
    pub fn pairs(&self) -> &[(ArrowId, ArrowId)] {
        &self.pairs
    }

    pub fn pair_index(&self, v: ArrowId, u: ArrowId) -> Option<usize> {
        self.pair_index.get(&(v, u)).copied()
    }

    /// Composable triples `(w, v, u)`: `u`, then `v`, then `w`.
    pub fn triples(&self) -> impl Iterator<Item = (ArrowId, ArrowId, ArrowId)> + '_ {
        self.pairs.iter().flat_map(move |&(v, u)| {
            self.out_of[self.tgt[v]].iter().map(move |&w| (w, v, u))
        })
    }

    /// One-object groupoid whose arrows are the elements of `g`.
    pub fn from_group(g: &FiniteGroup) -> Self {
        let n = g.order();
        let mut compose = BTreeMap::new();
        for a in 0..n {
            for b in 0..n {
                compose.insert((a, b), g.mul(a, b));
            }
        }
        let data = GroupoidData {
            objects: vec![0],
            arrows: (0..n).map(|a| (a, 0, 0)).collect(),
            identity: [(0, 0)].into(),
            compose,
            inverse: (0..n).map(|a| (a, g.inv(a))).collect(),
        };
        Self::new(data).expect("a group is a groupoid")
    }

    /// Codiscrete groupoid on `n` objects: exactly one arrow `i → j` for every
    /// pair, with id `i * n + j`.
    pub fn codiscrete(n: usize) -> Self {
        Self::group_times_codiscrete(&FiniteGroup::trivial(), n)
    }

    /// `0 ⇄ 1`: arrows `0` and `3` are the identities, `1: 0 → 1`, `2: 1 → 0`.
    pub fn interval() -> Self {
        Self::codiscrete(2)
    }

    /// `H × codiscrete(n)`: arrow `(h, i → j)` has id `(i * n + j) * |H| + h`.
    pub fn group_times_codiscrete(h: &FiniteGroup, n: usize) -> Self {
        let k = h.order();
        let id = |x: Elem, i: ObjId, j: ObjId| (i * n + j) * k + x;
        let mut data = GroupoidData {
            objects: (0..n).collect(),
            ..Default::default()
        };
        for i in 0..n {
            for j in 0..n {
                for x in 0..k {
                    data.arrows.push((id(x, i, j), i, j));
                    data.inverse.insert(id(x, i, j), id(h.inv(x), j, i));
                    for l in 0..n {
                        for y in 0..k {
                            data.compose.insert((id(y, j, l), id(x, i, j)), id(h.mul(y, x), i, l));
                        }
                    }
                }
            }
            data.identity.insert(i, id(0, i, i));
        }
        data.arrows.sort();
        Self::new(data).expect("H × codiscrete is a groupoid")
    }

    /// Disjoint union; the parts' objects and arrows are renumbered
    /// consecutively in the given order.
    pub fn disjoint_union(parts: &[&FiniteGroupoid]) -> Self {
        let mut data = GroupoidData::default();
        let (mut obj_off, mut arr_off) = (0, 0);
        for part in parts {
            let d = part.data();
            data.objects.extend(d.objects.iter().map(|o| o + obj_off));
            data.arrows
                .extend(d.arrows.iter().map(|&(a, s, t)| (a + arr_off, s + obj_off, t + obj_off)));
            data.identity
                .extend(d.identity.iter().map(|(&o, &a)| (o + obj_off, a + arr_off)));
            data.compose.extend(
                d.compose
                    .iter()
                    .map(|(&(g, f), &h)| ((g + arr_off, f + arr_off), h + arr_off)),
            );
            data.inverse
                .extend(d.inverse.iter().map(|(&a, &b)| (a + arr_off, b + arr_off)));
            obj_off += part.num_objects();
            arr_off += part.num_arrows();
        }
        Self::new(data).expect("disjoint union of groupoids is a groupoid")
    }
}

impl PartialEq for FiniteGroupoid {
    fn eq(&self, other: &Self) -> bool {
        self.src == other.src
            && self.tgt == other.tgt
            && self.identity == other.identity
            && self.inverse == other.inverse
            && self.pairs == other.pairs
            && self.pairs.iter().all(|p| self.compose[p] == other.compose[p])
    }
}

impl Eq for FiniteGroupoid {}

/// Vertex group at `a`, with `dictionary[element] = arrow`.
///
/// Element `0` is the identity arrow; the remaining endo-arrows follow in
/// ascending id order.
pub fn vertex_group(g: &FiniteGroupoid, a: ObjId) -> Result<(FiniteGroup, Vec<ArrowId>)> {
    if a >= g.num_objects() {
        return Err(Error::UnknownObject(a));
    }
    let id = g.identity(a);
    let mut dictionary = vec![id];
    dictionary.extend(g.hom(a, a).filter(|&x| x != id));
    let group = group_on_arrows(g, &dictionary)?;
    Ok((group, dictionary))
}

/// The group structure on a list of endo-arrows closed under composition,
/// with `arrows[0]` the identity.
pub fn group_on_arrows(g: &FiniteGroupoid, arrows: &[ArrowId]) -> Result<FiniteGroup> {
    let position: HashMap<ArrowId, Elem> = arrows.iter().enumerate().map(|(i, &x)| (x, i)).collect();
    let mut rows = Vec::with_capacity(arrows.len());
    for &x in arrows {
        let mut row = Vec::with_capacity(arrows.len());
        for &y in arrows {
            let xy = g
                .compose(x, y)
                .and_then(|p| position.get(&p).copied())
                .ok_or_else(|| Error::Structural(format!("arrows {x}, {y} do not close up")))?;
            row.push(xy);
        }
        rows.push(row);
    }
    FiniteGroup::from_rows(rows, None)
}

/// Objects grouped by connectivity; blocks sorted by least member.
pub fn connected_components(g: &FiniteGroupoid) -> Vec<Vec<ObjId>> {
    let n = g.num_objects();
    let mut block = vec![usize::MAX; n];
    let mut blocks = Vec::new();
    for start in 0..n {
        if block[start] != usize::MAX {
            continue;
        }
        let b = blocks.len();
        let mut members = vec![start];
        block[start] = b;
        let mut i = 0;
        while i < members.len() {
            let o = members[i];
            for &a in g.arrows_from(o) {
                let t = g.tgt(a);
                if block[t] == usize::MAX {
                    block[t] = b;
                    members.push(t);
                }
            }
            i += 1;
        }
        members.sort();
        blocks.push(members);
    }
    blocks
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::iso::group_iso_search;

    #[test]
    fn one_object_z2_is_valid() {
        let g = FiniteGroupoid::from_group(&FiniteGroup::cyclic(2));
        assert!(validate_groupoid(&g.data()).unwrap().is_ok());
    }

    #[test]
    fn interval_is_valid_and_contractible() {
        let g = FiniteGroupoid::interval();
        assert!(validate_groupoid(&g.data()).unwrap().is_ok());
        assert_eq!(g.num_arrows(), 4);
        assert_eq!(connected_components(&g), vec![vec![0, 1]]);
        assert_eq!(vertex_group(&g, 0).unwrap().0.order(), 1);
    }

    #[test]
    fn dropping_an_inverse_is_a_violation() {
        let mut d = FiniteGroupoid::interval().data();
        d.inverse.remove(&1);
        let report = validate_groupoid(&d).unwrap();
        assert!(report.has("inverse"));
    }

    #[test]
    fn dangling_ids_are_structural() {
        let mut d = FiniteGroupoid::interval().data();
        d.arrows[1].2 = 7;
        assert!(matches!(validate_groupoid(&d), Err(Error::Structural(_))));
        let mut d = FiniteGroupoid::interval().data();
        d.compose.insert((1, 0), 99);
        assert!(matches!(validate_groupoid(&d), Err(Error::Structural(_))));
    }

    #[test]
    fn vertex_group_of_s3() {
        let s3 = FiniteGroup::symmetric(3);
        let (v, dict) = vertex_group(&FiniteGroupoid::from_group(&s3), 0).unwrap();
        assert_eq!(v.order(), 6);
        assert_eq!(dict[0], 0);
        assert!(group_iso_search(&v, &s3).is_some());
    }

    #[test]
    fn disjoint_union_components_and_vertex_groups() {
        let a = FiniteGroupoid::from_group(&FiniteGroup::cyclic(2));
        let b = FiniteGroupoid::from_group(&FiniteGroup::cyclic(3));
        let u = FiniteGroupoid::disjoint_union(&[&a, &b]);
        assert_eq!(connected_components(&u), vec![vec![0], vec![1]]);
        let (v, _) = vertex_group(&u, 1).unwrap();
        assert_eq!(v, FiniteGroup::cyclic(3));
        assert!(matches!(vertex_group(&u, 2), Err(Error::UnknownObject(2))));
    }

    #[test]
    fn group_times_codiscrete_has_vertex_group_h() {
        let s3 = FiniteGroup::symmetric(3);
        let g = FiniteGroupoid::group_times_codiscrete(&s3, 3);
        assert_eq!(g.num_arrows(), 54);
        for o in g.objects() {
            let (v, _) = vertex_group(&g, o).unwrap();
            assert!(group_iso_search(&v, &s3).is_some());
        }
    }

    #[test]
    fn size_guard() {
        let d = GroupoidData {
            objects: (0..65).collect(),
            ..Default::default()
        };
        assert!(matches!(validate_groupoid(&d), Err(Error::TooLarge(_))));
    }
}
