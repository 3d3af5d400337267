use super::group::{Elem, FiniteGroup};
use crate::{Error, Result};

/// A group isomorphism stored as its element map.
///
/// The source and target groups are implied by context (for instance the
/// endpoints of an arrow of the base groupoid); [`GroupIso::checked`] is the
/// way to build one against explicit groups.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupIso {
    map: Vec<Elem>,
}

impl GroupIso {
    pub fn identity(order: usize) -> Self {
        Self {
            map: (0..order).collect(),
        }
    }

    /// Accepts `map` only if it is an isomorphism `source → target`.
    pub fn checked(source: &FiniteGroup, target: &FiniteGroup, map: Vec<Elem>) -> Result<Self> {
        let iso = Self { map };
        if iso.is_iso(source, target) {
            Ok(iso)
        } else {
            Err(Error::Structural(format!(
                "{:?} is not an isomorphism {:?} → {:?}",
                iso.map, source, target
            )))
        }
    }

    pub(crate) fn from_map_unchecked(map: Vec<Elem>) -> Self {
        Self { map }
    }

    pub fn map(&self) -> &[Elem] {
        &self.map
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    #[inline]
    pub fn apply(&self, x: Elem) -> Elem {
        self.map[x]
    }

    pub fn is_identity(&self) -> bool {
        self.map.iter().enumerate().all(|(i, &x)| i == x)
    }

    /// `self ∘ first`: apply `first`, then `self`.
    pub fn after(&self, first: &GroupIso) -> GroupIso {
        GroupIso {
            map: first.map.iter().map(|&x| self.map[x]).collect(),
        }
    }

    pub fn inverse(&self) -> GroupIso {
        let mut map = vec![0; self.map.len()];
        for (x, &y) in self.map.iter().enumerate() {
            map[y] = x;
        }
        GroupIso { map }
    }

    /// Bijection preserving products (hence the identity).
    pub fn is_iso(&self, source: &FiniteGroup, target: &FiniteGroup) -> bool {
        let n = source.order();
        if self.map.len() != n || target.order() != n {
            return false;
        }
        let mut hit = vec![false; n];
        for &y in &self.map {
            if y >= n || hit[y] {
                return false;
            }
            hit[y] = true;
        }
        source.elements().all(|a| {
            source
                .elements()
                .all(|b| self.map[source.mul(a, b)] == target.mul(self.map[a], self.map[b]))
        })
    }
}

/// Extends generator images to a homomorphism, if the assignment is
/// consistent. Every element is reached from `0` by right multiplication
/// with generators, and `φ(x·g) = φ(x)·φ(g)` on all such edges implies `φ`
/// is a homomorphism.
fn extend_from_generators(
    source: &FiniteGroup,
    target: &FiniteGroup,
    gens: &[Elem],
    images: &[Elem],
) -> Option<Vec<Elem>> {
    let mut map = vec![usize::MAX; source.order()];
    map[0] = 0;
    let mut stack = vec![0];
    while let Some(x) = stack.pop() {
        for (&g, &img) in gens.iter().zip(images) {
            let y = source.mul(x, g);
            let fy = target.mul(map[x], img);
            if map[y] == usize::MAX {
                map[y] = fy;
                stack.push(y);
            } else if map[y] != fy {
                return None;
            }
        }
    }
    Some(map)
}

fn search_homs(
    source: &FiniteGroup,
    target: &FiniteGroup,
    bijective: bool,
    first_only: bool,
) -> Vec<Vec<Elem>> {
    let gens = source.greedy_generators();
    let gen_orders: Vec<usize> = gens.iter().map(|&g| source.element_order(g)).collect();
    let target_orders: Vec<usize> = target.elements().map(|t| target.element_order(t)).collect();
    let candidates: Vec<Vec<Elem>> = gen_orders
        .iter()
        .map(|&k| {
            target
                .elements()
                .filter(|&t| {
                    if bijective {
                        target_orders[t] == k
                    } else {
                        k % target_orders[t] == 0
                    }
                })
                .collect()
        })
        .collect();

    let mut out = Vec::new();
    let mut images = Vec::with_capacity(gens.len());
    fn go(
        depth: usize,
        ctx: (&FiniteGroup, &FiniteGroup, &[Elem], &[Vec<Elem>], bool, bool),
        images: &mut Vec<Elem>,
        out: &mut Vec<Vec<Elem>>,
    ) {
        let (source, target, gens, candidates, bijective, first_only) = ctx;
        if first_only && !out.is_empty() {
            return;
        }
        if depth == gens.len() {
            if let Some(map) = extend_from_generators(source, target, gens, images) {
                if !bijective || is_bijection(&map, target.order()) {
                    out.push(map);
                }
            }
            return;
        }
        for &c in &candidates[depth] {
            images.push(c);
            go(depth + 1, ctx, images, out);
            images.pop();
        }
    }
    if bijective && source.order() != target.order() {
        return out;
    }
    go(
        0,
        (source, target, &gens, &candidates, bijective, first_only),
        &mut images,
        &mut out,
    );
    out
}

fn is_bijection(map: &[Elem], n: usize) -> bool {
    if map.len() != n {
        return false;
    }
    let mut hit = vec![false; n];
    map.iter().all(|&y| !std::mem::replace(&mut hit[y], true))
}

/// An isomorphism `a → b` if one exists.
///
/// Backtracks over images of the greedy generators of `a` in increasing
/// order. Entries of the element map before the k-th generator are fixed by
/// the earlier generators, so the first hit is the lexicographically least
/// isomorphism.
pub fn group_iso_search(a: &FiniteGroup, b: &FiniteGroup) -> Option<GroupIso> {
    search_homs(a, b, true, true)
        .into_iter()
        .next()
        .map(GroupIso::from_map_unchecked)
}

/// Every isomorphism `a → b`, sorted lexicographically.
pub fn all_isomorphisms(a: &FiniteGroup, b: &FiniteGroup) -> Vec<GroupIso> {
    let mut isos: Vec<GroupIso> = search_homs(a, b, true, false)
        .into_iter()
        .map(GroupIso::from_map_unchecked)
        .collect();
    isos.sort();
    isos
}

/// Every homomorphism `a → b` as element maps, sorted lexicographically.
pub fn all_homomorphisms(a: &FiniteGroup, b: &FiniteGroup) -> Vec<Vec<Elem>> {
    let mut homs = search_homs(a, b, false, false);
    homs.sort();
    homs
}

pub fn are_isomorphic(a: &FiniteGroup, b: &FiniteGroup) -> bool {
    group_iso_search(a, b).is_some()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v4() -> FiniteGroup {
        FiniteGroup::direct_product(&FiniteGroup::cyclic(2), &FiniteGroup::cyclic(2))
    }

    #[test]
    fn z4_is_not_klein() {
        assert!(group_iso_search(&FiniteGroup::cyclic(4), &v4()).is_none());
    }

    #[test]
    fn z6_is_z2_times_z3() {
        let z6 = FiniteGroup::cyclic(6);
        let p = FiniteGroup::direct_product(&FiniteGroup::cyclic(2), &FiniteGroup::cyclic(3));
        let iso = group_iso_search(&z6, &p).expect("Z6 ≅ Z2×Z3");
        assert!(iso.is_iso(&z6, &p));
    }

    #[test]
    fn self_search_returns_identity() {
        for g in [FiniteGroup::symmetric(3), FiniteGroup::quaternion(), v4()] {
            assert!(group_iso_search(&g, &g).unwrap().is_identity());
        }
    }

    #[test]
    fn automorphism_counts() {
        let count = |g: &FiniteGroup| all_isomorphisms(g, g).len();
        assert_eq!(count(&FiniteGroup::cyclic(2)), 1);
        assert_eq!(count(&FiniteGroup::cyclic(3)), 2);
        assert_eq!(count(&v4()), 6);
        assert_eq!(count(&FiniteGroup::symmetric(3)), 6);
        assert_eq!(count(&FiniteGroup::quaternion()), 24);
        assert_eq!(count(&FiniteGroup::dihedral(4)), 8);
    }

    #[test]
    fn hom_counts() {
        // Hom(Z9, Z3) = 3, Hom(Z3², Z3) = 9, Hom(S3, Z2) = 2
        let z3 = FiniteGroup::cyclic(3);
        assert_eq!(all_homomorphisms(&FiniteGroup::cyclic(9), &z3).len(), 3);
        let z3sq = FiniteGroup::direct_product(&z3, &z3);
        assert_eq!(all_homomorphisms(&z3sq, &z3).len(), 9);
        assert_eq!(
            all_homomorphisms(&FiniteGroup::symmetric(3), &FiniteGroup::cyclic(2)).len(),
            2
        );
    }

    #[test]
    fn inverse_and_composition() {
        let s3 = FiniteGroup::symmetric(3);
        for f in all_isomorphisms(&s3, &s3) {
            assert!(f.after(&f.inverse()).is_identity());
            assert!(f.inverse().is_iso(&s3, &s3));
        }
    }
}
