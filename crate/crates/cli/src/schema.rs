//! JSON documents: `{kind, version, payload}` with one payload shape per
//! domain type. Ids are dense integers; maps keyed by arrows or objects are
//! JSON objects with decimal keys, and maps keyed by composable pairs use
//! `"v,u"` keys.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use clap::ValueEnum;
use gpdcoh::algebra::{FiniteGroup, FiniteGroupoid, GroupFamily, GroupIso, GroupoidData, GroupoidFunctor};
use gpdcoh::cocycle::{ActionMorphism, Cochain1, WeakAction};
use gpdcoh::extensions::Extension;
use gpdcoh::grothendieck::Cleavage;
use gpdcoh::nerve::{NerveSource, TruncatedSimplicialSet};
use gpdcoh::two_groupoid::build_aut;
use gpdcoh::{Error, Report, Result};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::Value;

pub const VERSION: &str = "1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Group,
    Groupoid,
    Family,
    Cocycle,
    Cochain,
    Morphism,
    Extension,
    Nerve,
    Map,
    Report,
    Functor,
    Cleavage,
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v = serde_json::to_value(self).expect("kind serializes");
        f.write_str(v.as_str().expect("kind is a string"))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Document {
    pub kind: Kind,
    pub version: String,
    pub payload: Value,
}

impl Document {
    pub fn new<T: Serialize>(kind: Kind, payload: &T) -> Self {
        Self {
            kind,
            version: VERSION.into(),
            payload: serde_json::to_value(payload).expect("payloads serialize"),
        }
    }

    pub fn payload<T: DeserializeOwned>(&self) -> std::result::Result<T, serde_json::Error> {
        T::deserialize(&self.payload)
    }
}

/// A composable pair key, written `"v,u"`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct PairKey(pub usize, pub usize);

impl Serialize for PairKey {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(&format_args!("{},{}", self.0, self.1))
    }
}

impl FromStr for PairKey {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let (a, b) = s.split_once(',').ok_or_else(|| format!("pair key {s:?} is not of the form \"v,u\""))?;
        let parse = |x: &str| x.trim().parse::<usize>().map_err(|e| format!("pair key {s:?}: {e}"));
        Ok(PairKey(parse(a)?, parse(b)?))
    }
}

impl<'de> Deserialize<'de> for PairKey {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupDoc {
    pub order: usize,
    pub table: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupoidDoc {
    pub objects: Vec<usize>,
    /// `[id, src, tgt]`
    pub arrows: Vec<[usize; 3]>,
    pub identity: BTreeMap<usize, usize>,
    /// `"g,f" ↦ g∘f`
    pub compose: BTreeMap<PairKey, usize>,
    pub inverse: BTreeMap<usize, usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyDoc {
    pub base_objects: Vec<usize>,
    pub groups: BTreeMap<usize, GroupDoc>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CocycleBody {
    #[serde(rename = "F")]
    pub f: BTreeMap<usize, Vec<usize>>,
    pub sigma: BTreeMap<PairKey, usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CocycleDoc {
    pub base: GroupoidDoc,
    pub family: FamilyDoc,
    #[serde(rename = "F")]
    pub f: BTreeMap<usize, Vec<usize>>,
    pub sigma: BTreeMap<PairKey, usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CochainDoc {
    pub base: GroupoidDoc,
    pub family: FamilyDoc,
    pub tau: BTreeMap<usize, usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MorphismDoc {
    pub base: GroupoidDoc,
    pub family: FamilyDoc,
    pub source: CocycleBody,
    pub target: CocycleBody,
    pub tau: BTreeMap<usize, usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctorDoc {
    pub domain: GroupoidDoc,
    pub codomain: GroupoidDoc,
    pub object_map: Vec<usize>,
    pub arrow_map: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExtensionDoc {
    pub projection: FunctorDoc,
    pub family: FamilyDoc,
    /// object ↦ kernel arrow standing for each element of `K_object`
    pub identifications: BTreeMap<usize, Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CleavageDoc {
    pub fibration: FunctorDoc,
    pub lift: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NerveOf {
    Groupoid(GroupoidDoc),
    Aut(FamilyDoc),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NerveDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nerve_of: Option<NerveOf>,
    pub coskeletal: Option<usize>,
    pub simplices: Vec<Vec<Vec<usize>>>,
    pub faces: Vec<Vec<Vec<usize>>>,
    pub degeneracies: Vec<Vec<Vec<usize>>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapDoc {
    pub base: GroupoidDoc,
    pub family: FamilyDoc,
    pub levels: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ViolationDoc {
    pub rule: String,
    pub at: Vec<usize>,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReportDoc {
    pub subject: String,
    pub ok: bool,
    pub violations: Vec<ViolationDoc>,
    #[serde(default, skip_serializing_if = "Value::is_null")]
    pub result: Value,
}

impl ReportDoc {
    pub fn from_report(subject: impl Into<String>, r: &Report) -> Self {
        Self {
            subject: subject.into(),
            ok: r.is_ok(),
            violations: r
                .violations
                .iter()
                .map(|v| ViolationDoc { rule: v.rule.into(), at: v.at.clone(), message: v.message.clone() })
                .collect(),
            result: Value::Null,
        }
    }

    pub fn success(subject: impl Into<String>, result: Value) -> Self {
        Self { subject: subject.into(), ok: true, violations: Vec::new(), result }
    }
}

// conversions

impl From<&FiniteGroup> for GroupDoc {
    fn from(g: &FiniteGroup) -> Self {
        Self { order: g.order(), table: g.rows(), label: g.label().map(str::to_owned) }
    }
}

impl GroupDoc {
    pub fn check_shape(&self) -> Result<()> {
        if self.table.len() != self.order || self.table.iter().any(|r| r.len() != self.order) {
            return Err(Error::Structural(format!("group table is not {0}×{0}", self.order)));
        }
        Ok(())
    }

    pub fn to_group(&self) -> Result<FiniteGroup> {
        self.check_shape()?;
        FiniteGroup::from_rows(self.table.clone(), self.label.clone())
    }
}

impl From<&FiniteGroupoid> for GroupoidDoc {
    fn from(g: &FiniteGroupoid) -> Self {
        let d = g.data();
        Self {
            objects: d.objects,
            arrows: d.arrows.iter().map(|&(a, s, t)| [a, s, t]).collect(),
            identity: d.identity,
            compose: d.compose.iter().map(|(&(x, y), &z)| (PairKey(x, y), z)).collect(),
            inverse: d.inverse,
        }
    }
}

impl GroupoidDoc {
    pub fn data(&self) -> GroupoidData {
        GroupoidData {
            objects: self.objects.clone(),
            arrows: self.arrows.iter().map(|&[a, s, t]| (a, s, t)).collect(),
            identity: self.identity.clone(),
            compose: self.compose.iter().map(|(k, &v)| ((k.0, k.1), v)).collect(),
            inverse: self.inverse.clone(),
        }
    }

    pub fn to_groupoid(&self) -> Result<Arc<FiniteGroupoid>> {
        Ok(Arc::new(FiniteGroupoid::new(self.data())?))
    }
}

impl From<&GroupFamily> for FamilyDoc {
    fn from(k: &GroupFamily) -> Self {
        Self {
            base_objects: (0..k.len()).collect(),
            groups: k.groups().iter().enumerate().map(|(o, g)| (o, GroupDoc::from(g))).collect(),
        }
    }
}

impl FamilyDoc {
    pub fn to_family(&self) -> Result<Arc<GroupFamily>> {
        let dense: Vec<usize> = (0..self.base_objects.len()).collect();
        if self.base_objects != dense || self.groups.keys().copied().collect::<Vec<_>>() != dense {
            return Err(Error::Structural("family must list objects 0..n and one group for each".into()));
        }
        let groups = self.groups.values().map(GroupDoc::to_group).collect::<Result<_>>()?;
        Ok(Arc::new(GroupFamily::new(groups)))
    }
}

fn dense<T: Clone>(map: &BTreeMap<usize, T>, n: usize, what: &str) -> Result<Vec<T>> {
    if map.len() != n || map.keys().enumerate().any(|(i, &k)| i != k) {
        return Err(Error::Structural(format!("{what} must have exactly the keys 0..{n}")));
    }
    Ok(map.values().cloned().collect())
}

impl CocycleBody {
    pub fn of(w: &WeakAction) -> Self {
        let g = w.base();
        Self {
            f: w.f_maps().iter().enumerate().map(|(u, m)| (u, m.map().to_vec())).collect(),
            sigma: g.pairs().iter().zip(w.sigma_values()).map(|(&(v, u), &s)| (PairKey(v, u), s)).collect(),
        }
    }

    pub fn to_action(&self, base: &Arc<FiniteGroupoid>, family: &Arc<GroupFamily>) -> Result<WeakAction> {
        let maps = dense(&self.f, base.num_arrows(), "F")?;
        let mut f = Vec::with_capacity(maps.len());
        for (u, m) in maps.into_iter().enumerate() {
            let (a, b) = (family.group(base.src(u)), family.group(base.tgt(u)));
            if m.len() != a.order() {
                return Err(Error::Structural(format!("F({u}) has {} entries for a group of order {}", m.len(), a.order())));
            }
            f.push(GroupIso::checked(a, b, m).map_err(|_| {
                Error::Structural(format!("F({u}) is not an isomorphism K_{} → K_{}", base.src(u), base.tgt(u)))
            })?);
        }
        let keys: Vec<PairKey> = base.pairs().iter().map(|&(v, u)| PairKey(v, u)).collect();
        if self.sigma.keys().copied().collect::<Vec<_>>() != keys {
            return Err(Error::Structural("σ must have exactly one entry per composable pair".into()));
        }
        WeakAction::new(base.clone(), family.clone(), f, self.sigma.values().copied().collect())
    }
}

impl CocycleDoc {
    pub fn of(w: &WeakAction) -> Self {
        let body = CocycleBody::of(w);
        Self { base: w.base().as_ref().into(), family: w.family().as_ref().into(), f: body.f, sigma: body.sigma }
    }

    pub fn context(&self) -> Result<(Arc<FiniteGroupoid>, Arc<GroupFamily>)> {
        let (g, k) = (self.base.to_groupoid()?, self.family.to_family()?);
        k.check_indexes(&g)?;
        Ok((g, k))
    }

    pub fn to_action(&self) -> Result<WeakAction> {
        let (g, k) = self.context()?;
        CocycleBody { f: self.f.clone(), sigma: self.sigma.clone() }.to_action(&g, &k)
    }
}

fn tau_of(t: &Cochain1) -> BTreeMap<usize, usize> {
    t.values().iter().copied().enumerate().collect()
}

impl CochainDoc {
    pub fn of(t: &Cochain1) -> Self {
        Self { base: t.base().as_ref().into(), family: t.family().as_ref().into(), tau: tau_of(t) }
    }

    pub fn to_cochain(&self) -> Result<Cochain1> {
        let (g, k) = (self.base.to_groupoid()?, self.family.to_family()?);
        let tau = dense(&self.tau, g.num_arrows(), "τ")?;
        Cochain1::new(g, k, tau)
    }
}

impl MorphismDoc {
    pub fn of(m: &ActionMorphism) -> Self {
        Self {
            base: m.source.base().as_ref().into(),
            family: m.source.family().as_ref().into(),
            source: CocycleBody::of(&m.source),
            target: CocycleBody::of(&m.target),
            tau: tau_of(&m.tau),
        }
    }

    pub fn to_morphism(&self) -> Result<ActionMorphism> {
        let (g, k) = (self.base.to_groupoid()?, self.family.to_family()?);
        k.check_indexes(&g)?;
        let tau = dense(&self.tau, g.num_arrows(), "τ")?;
        Ok(ActionMorphism {
            source: self.source.to_action(&g, &k)?,
            target: self.target.to_action(&g, &k)?,
            tau: Cochain1::new(g, k, tau)?,
        })
    }
}

impl From<&GroupoidFunctor> for FunctorDoc {
    fn from(f: &GroupoidFunctor) -> Self {
        Self {
            domain: f.domain.as_ref().into(),
            codomain: f.codomain.as_ref().into(),
            object_map: f.object_map.clone(),
            arrow_map: f.arrow_map.clone(),
        }
    }
}

impl FunctorDoc {
    pub fn to_functor(&self) -> Result<GroupoidFunctor> {
        let (d, c) = (self.domain.to_groupoid()?, self.codomain.to_groupoid()?);
        if self.object_map.len() != d.num_objects() || self.object_map.iter().any(|&o| o >= c.num_objects()) {
            return Err(Error::Structural("object map does not send objects to objects".into()));
        }
        if self.arrow_map.len() != d.num_arrows() || self.arrow_map.iter().any(|&a| a >= c.num_arrows()) {
            return Err(Error::Structural("arrow map does not send arrows to arrows".into()));
        }
        Ok(GroupoidFunctor { domain: d, codomain: c, object_map: self.object_map.clone(), arrow_map: self.arrow_map.clone() })
    }
}

impl ExtensionDoc {
    pub fn of(e: &Extension) -> Self {
        Self {
            projection: (&e.projection).into(),
            family: e.family.as_ref().into(),
            identifications: e.identifications.iter().cloned().enumerate().collect(),
        }
    }

    pub fn to_extension(&self) -> Result<Extension> {
        let projection = self.projection.to_functor()?;
        let identifications = dense(&self.identifications, projection.codomain.num_objects(), "identifications")?;
        Ok(Extension { projection, family: self.family.to_family()?, identifications })
    }
}

impl CleavageDoc {
    pub fn of(c: &Cleavage) -> Self {
        Self { fibration: (&c.fibration).into(), lift: c.lift.clone() }
    }

    pub fn to_cleavage(&self) -> Result<Cleavage> {
        Ok(Cleavage { fibration: self.fibration.to_functor()?, lift: self.lift.clone() })
    }
}

impl NerveDoc {
    pub fn of(s: &TruncatedSimplicialSet) -> Self {
        let nerve_of = match s.source() {
            NerveSource::Groupoid(g) => Some(NerveOf::Groupoid(g.as_ref().into())),
            NerveSource::Aut(a) => Some(NerveOf::Aut(a.family().as_ref().into())),
            NerveSource::Plain => None,
        };
        let (simplices, faces, degeneracies, coskeletal, _) = s.clone().into_parts();
        Self { nerve_of, coskeletal, simplices, faces, degeneracies }
    }

    pub fn to_nerve(&self) -> Result<TruncatedSimplicialSet> {
        let source = match &self.nerve_of {
            None => NerveSource::Plain,
            Some(NerveOf::Groupoid(g)) => NerveSource::Groupoid(g.to_groupoid()?),
            Some(NerveOf::Aut(k)) => NerveSource::Aut(Arc::new(build_aut(k.to_family()?)?)),
        };
        TruncatedSimplicialSet::from_parts(
            self.simplices.clone(),
            self.faces.clone(),
            self.degeneracies.clone(),
            self.coskeletal,
            source,
        )
    }
}
