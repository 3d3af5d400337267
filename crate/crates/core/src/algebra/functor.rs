use std::sync::Arc;

use super::group::{Elem, FiniteGroup};
use super::groupoid::{ArrowId, FiniteGroupoid, ObjId};
use crate::report::Report;
use crate::{Error, Result};

/// A functor between finite groupoids given by its object and arrow maps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupoidFunctor {
    pub domain: Arc<FiniteGroupoid>,
    pub codomain: Arc<FiniteGroupoid>,
    pub object_map: Vec<ObjId>,
    pub arrow_map: Vec<ArrowId>,
}

impl GroupoidFunctor {
    pub fn identity(g: Arc<FiniteGroupoid>) -> Self {
        Self {
            object_map: g.objects().collect(),
            arrow_map: g.arrows().collect(),
            domain: g.clone(),
            codomain: g,
        }
    }

    #[inline]
    pub fn obj(&self, o: ObjId) -> ObjId {
        self.object_map[o]
    }

    #[inline]
    pub fn arrow(&self, a: ArrowId) -> ArrowId {
        self.arrow_map[a]
    }

    /// `self ∘ first`.
    pub fn after(&self, first: &GroupoidFunctor) -> Result<GroupoidFunctor> {
        if first.codomain != self.domain {
            return Err(Error::Mismatch("functor composition: codomain ≠ domain".into()));
        }
        Ok(GroupoidFunctor {
            domain: first.domain.clone(),
            codomain: self.codomain.clone(),
            object_map: first.object_map.iter().map(|&o| self.object_map[o]).collect(),
            arrow_map: first.arrow_map.iter().map(|&a| self.arrow_map[a]).collect(),
        })
    }

    /// The functor of one-object groupoids induced by a homomorphism
    /// `map: g → h`.
    pub fn from_group_hom(g: &FiniteGroup, h: &FiniteGroup, map: Vec<Elem>) -> Result<GroupoidFunctor> {
        let f = GroupoidFunctor {
            domain: Arc::new(FiniteGroupoid::from_group(g)),
            codomain: Arc::new(FiniteGroupoid::from_group(h)),
            object_map: vec![0],
            arrow_map: map,
        };
        let report = validate_functor(&f)?;
        report.into_result("group homomorphism", f)
    }

    pub fn is_bijective_on_objects(&self) -> bool {
        is_bijection(&self.object_map, self.codomain.num_objects())
    }

    /// Bijective on objects and arrows; together with functoriality this
    /// makes it an isomorphism of groupoids.
    pub fn is_isomorphism(&self) -> bool {
        self.is_bijective_on_objects() && is_bijection(&self.arrow_map, self.codomain.num_arrows())
    }

    /// Inverse functor of an isomorphism.
    pub fn inverse(&self) -> Option<GroupoidFunctor> {
        if !self.is_isomorphism() {
            return None;
        }
        let mut object_map = vec![0; self.object_map.len()];
        for (o, &p) in self.object_map.iter().enumerate() {
            object_map[p] = o;
        }
        let mut arrow_map = vec![0; self.arrow_map.len()];
        for (a, &b) in self.arrow_map.iter().enumerate() {
            arrow_map[b] = a;
        }
        Some(GroupoidFunctor {
            domain: self.codomain.clone(),
            codomain: self.domain.clone(),
            object_map,
            arrow_map,
        })
    }
}

fn is_bijection(map: &[usize], n: usize) -> bool {
    if map.len() != n {
        return false;
    }
    let mut hit = vec![false; n];
    map.iter().all(|&x| x < n && !std::mem::replace(&mut hit[x], true))
}

/// Checks that the maps preserve endpoints, identities and composition.
pub fn validate_functor(f: &GroupoidFunctor) -> Result<Report> {
    let (dom, cod) = (&f.domain, &f.codomain);
    if f.object_map.len() != dom.num_objects() || f.arrow_map.len() != dom.num_arrows() {
        return Err(Error::Structural("functor maps do not cover the domain".into()));
    }
    if f.object_map.iter().any(|&o| o >= cod.num_objects())
        || f.arrow_map.iter().any(|&a| a >= cod.num_arrows())
    {
        return Err(Error::Structural("functor maps leave the codomain".into()));
    }
    let mut report = Report::new();
    for a in dom.arrows() {
        let b = f.arrow(a);
        if cod.src(b) != f.obj(dom.src(a)) || cod.tgt(b) != f.obj(dom.tgt(a)) {
            report.push("functor-endpoints", vec![a], format!("arrow {a} ↦ {b} breaks endpoints"));
        }
    }
    for o in dom.objects() {
        if f.arrow(dom.identity(o)) != cod.identity(f.obj(o)) {
            report.push("functor-identity", vec![o], format!("identity of {o} not preserved"));
        }
    }
    if !report.is_ok() {
        return Ok(report);
    }
    for &(g, h) in dom.pairs() {
        let lhs = f.arrow(dom.comp(g, h));
        let rhs = cod.comp(f.arrow(g), f.arrow(h));
        if lhs != rhs {
            report.push("functor-composition", vec![g, h], format!("F({g}∘{h}) = {lhs} ≠ {rhs}"));
        }
    }
    Ok(report)
}
