//! Twisted products of weak actions, fibrations and their fibers, cleavages,
//! the fiber action of a bijective-on-objects fibration and the comparison
//! isomorphism `Γ: ℰ → F*⋉𝒢`.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::algebra::{
    validate_functor, vertex_group, ArrowId, Elem, FiniteGroupoid, GroupFamily, GroupIso, GroupoidData,
    GroupoidFunctor, ObjId, MAX_ARROWS,
};
use crate::budget::Budget;
use crate::cocycle::{cohomologous, validate_cocycle, validate_morphism, ActionMorphism, Cochain1, WeakAction};
use crate::report::Report;
use crate::{Error, Result};

/// `F⋉𝒢`: objects of the base, arrows `(f, λ)` with `λ ∈ K_tgt(f)`,
/// numbered `offset[f] + λ`.
#[derive(Clone, Debug)]
pub struct TwistedGroupoid {
    action: WeakAction,
    groupoid: Arc<FiniteGroupoid>,
    projection: GroupoidFunctor,
    offsets: Vec<usize>,
}

impl TwistedGroupoid {
    pub fn action(&self) -> &WeakAction {
        &self.action
    }

    pub fn groupoid(&self) -> &Arc<FiniteGroupoid> {
        &self.groupoid
    }

    pub fn projection(&self) -> &GroupoidFunctor {
        &self.projection
    }

    #[inline]
    pub fn arrow_id(&self, f: ArrowId, lambda: Elem) -> ArrowId {
        self.offsets[f] + lambda
    }

    /// `(f, λ)` for an arrow id.
    pub fn arrow_pair(&self, e: ArrowId) -> (ArrowId, Elem) {
        let f = self.projection.arrow(e);
        (f, e - self.offsets[f])
    }

    /// Kernel arrows `(1_o, λ)` indexed by `λ ∈ K_o`.
    pub fn kernel_dictionary(&self, o: ObjId) -> Vec<ArrowId> {
        let id = self.action.base().identity(o);
        (0..self.action.k(o).order()).map(|l| self.arrow_id(id, l)).collect()
    }

    pub fn kernel_dictionaries(&self) -> Vec<Vec<ArrowId>> {
        self.action.base().objects().map(|o| self.kernel_dictionary(o)).collect()
    }

    /// Lifts `f ↦ (f, 1)`.
    pub fn canonical_cleavage(&self) -> Cleavage {
        Cleavage {
            fibration: self.projection.clone(),
            lift: self.action.base().arrows().map(|f| self.arrow_id(f, 0)).collect(),
        }
    }
}

/// The twisted product groupoid of a valid weak action, with
/// `(g,μ)(f,λ) = (gf, μ·F(g)(λ)·σ_gf)` and
/// `(f,λ)⁻¹ = (f⁻¹, (F(f⁻¹)(λ)·σ_{f⁻¹f})⁻¹)`.
pub fn twist(w: &WeakAction) -> Result<TwistedGroupoid> {
    let report = validate_cocycle(w);
    if !report.is_ok() {
        return Err(Error::invalid("weak action", report));
    }
    let g = &**w.base();
    for f in g.arrows() {
        let fi = g.inverse(f);
        if w.f(f).apply(w.sigma(fi, f)) != w.sigma(f, fi) {
            return Err(Error::Theorem(format!("F({f})(σ_(f⁻¹,f)) ≠ σ_(f,f⁻¹) for f = {f}")));
        }
    }
    let mut offsets = Vec::with_capacity(g.num_arrows());
    let mut total = 0;
    for f in g.arrows() {
        offsets.push(total);
        total += w.k(g.tgt(f)).order();
    }
    if total > MAX_ARROWS {
        return Err(Error::TooLarge(format!("twisted product would have {total} arrows")));
    }
    let id = |f: ArrowId, l: Elem| offsets[f] + l;
    let mut data = GroupoidData {
        objects: g.objects().collect(),
        ..Default::default()
    };
    let mut arrow_map = Vec::with_capacity(total);
    for f in g.arrows() {
        let k = w.k(g.tgt(f));
        let fi = g.inverse(f);
        for l in k.elements() {
            data.arrows.push((id(f, l), g.src(f), g.tgt(f)));
            arrow_map.push(f);
            let back = w.k(g.src(f));
            let inv = back.inv(back.mul(w.f(fi).apply(l), w.sigma(fi, f)));
            data.inverse.insert(id(f, l), id(fi, inv));
        }
    }
    for o in g.objects() {
        data.identity.insert(o, id(g.identity(o), 0));
    }
    for &(gg, f) in g.pairs() {
        let k = w.k(g.tgt(gg));
        let gf = g.comp(gg, f);
        let s = w.sigma(gg, f);
        for l in w.k(g.tgt(f)).elements() {
            let tail = k.mul(w.f(gg).apply(l), s);
            for m in k.elements() {
                data.compose.insert((id(gg, m), id(f, l)), id(gf, k.mul(m, tail)));
            }
        }
    }
    let groupoid = Arc::new(FiniteGroupoid::new(data)?);
    let projection = GroupoidFunctor {
        domain: groupoid.clone(),
        codomain: w.base().clone(),
        object_map: g.objects().collect(),
        arrow_map,
    };
    Ok(TwistedGroupoid {
        action: w.clone(),
        groupoid,
        projection,
        offsets,
    })
}

/// The functor `F₁⋉𝒢 → F₂⋉𝒢` over `𝒢` induced by a morphism `τ`:
/// `(f, λ) ↦ (f, λ·τ(f)⁻¹)`.
pub fn twist_morphism(m: &ActionMorphism) -> Result<GroupoidFunctor> {
    let t1 = twist(&m.source)?;
    let t2 = twist(&m.target)?;
    twist_morphism_between(m, &t1, &t2)
}

/// [`twist_morphism`] against already built twisted products of the source
/// and target.
pub fn twist_morphism_between(m: &ActionMorphism, t1: &TwistedGroupoid, t2: &TwistedGroupoid) -> Result<GroupoidFunctor> {
    let report = validate_morphism(m)?;
    if !report.is_ok() {
        return Err(Error::invalid("morphism of weak actions", report));
    }
    if t1.action != m.source || t2.action != m.target {
        return Err(Error::Mismatch("twisted products do not match the morphism".into()));
    }
    let g = &**m.source.base();
    let arrow_map = t1
        .groupoid
        .arrows()
        .map(|e| {
            let (f, l) = t1.arrow_pair(e);
            let k = m.source.k(g.tgt(f));
            t2.arrow_id(f, k.mul(l, k.inv(m.tau.value(f))))
        })
        .collect();
    let functor = GroupoidFunctor {
        domain: t1.groupoid.clone(),
        codomain: t2.groupoid.clone(),
        object_map: g.objects().collect(),
        arrow_map,
    };
    let report = validate_functor(&functor)?;
    if !report.is_ok() {
        return Err(Error::Theorem(format!("twisted morphism is not a functor: {report}")));
    }
    Ok(functor)
}

/// Outcome of [`is_opfibration`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Lifting {
    Fibration,
    /// No arrow out of `object` lies over `arrow`.
    NoLift { object: ObjId, arrow: ArrowId },
}

impl Lifting {
    pub fn is_fibration(&self) -> bool {
        matches!(self, Lifting::Fibration)
    }
}

/// Whether every base arrow out of `P(e)` lifts to an arrow out of `e`.
pub fn is_opfibration(p: &GroupoidFunctor) -> Result<Lifting> {
    let report = validate_functor(p)?;
    if !report.is_ok() {
        return Err(Error::invalid("functor", report));
    }
    let (e, b) = (&*p.domain, &*p.codomain);
    for x in e.objects() {
        let over = p.obj(x);
        for &f in b.arrows_from(over) {
            if !e.arrows_from(x).iter().any(|&a| p.arrow(a) == f) {
                return Ok(Lifting::NoLift { object: x, arrow: f });
            }
        }
    }
    Ok(Lifting::Fibration)
}

/// The fiber over `b`, renumbered densely; `objects[i]` and `arrows[j]` give
/// the original ids.
#[derive(Clone, Debug)]
pub struct Fiber {
    pub groupoid: FiniteGroupoid,
    pub objects: Vec<ObjId>,
    pub arrows: Vec<ArrowId>,
}

/// Objects over `b` and arrows over `1_b`.
pub fn fiber_subgroupoid(p: &GroupoidFunctor, b: ObjId) -> Result<Fiber> {
    if b >= p.codomain.num_objects() {
        return Err(Error::UnknownObject(b));
    }
    let e = &*p.domain;
    let id_b = p.codomain.identity(b);
    let objects: Vec<ObjId> = e.objects().filter(|&x| p.obj(x) == b).collect();
    let arrows: Vec<ArrowId> = e.arrows().filter(|&a| p.arrow(a) == id_b).collect();
    let obj_new: BTreeMap<ObjId, ObjId> = objects.iter().enumerate().map(|(i, &o)| (o, i)).collect();
    let arr_new: BTreeMap<ArrowId, ArrowId> = arrows.iter().enumerate().map(|(i, &a)| (a, i)).collect();
    let mut data = GroupoidData {
        objects: (0..objects.len()).collect(),
        ..Default::default()
    };
    for (i, &a) in arrows.iter().enumerate() {
        data.arrows.push((i, obj_new[&e.src(a)], obj_new[&e.tgt(a)]));
        data.inverse.insert(i, arr_new[&e.inverse(a)]);
        for (j, &c) in arrows.iter().enumerate() {
            if let Some(ac) = e.compose(a, c) {
                data.compose.insert((i, j), arr_new[&ac]);
            }
        }
    }
    for (i, &o) in objects.iter().enumerate() {
        data.identity.insert(i, arr_new[&e.identity(o)]);
    }
    Ok(Fiber {
        groupoid: FiniteGroupoid::new(data)?,
        objects,
        arrows,
    })
}

/// A choice of lift `lift[f]` over every base arrow `f` of a
/// bijective-on-objects fibration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cleavage {
    pub fibration: GroupoidFunctor,
    pub lift: Vec<ArrowId>,
}

/// Checks `P(lift f) = f` and `lift(1) = 1`.
pub fn validate_cleavage(c: &Cleavage) -> Result<Report> {
    let (e, b) = (&*c.fibration.domain, &*c.fibration.codomain);
    if c.lift.len() != b.num_arrows() || c.lift.iter().any(|&a| a >= e.num_arrows()) {
        return Err(Error::Structural("cleavage must choose one arrow of ℰ per base arrow".into()));
    }
    let mut report = Report::new();
    for f in b.arrows() {
        if c.fibration.arrow(c.lift[f]) != f {
            report.push("lift", vec![f], format!("lift({f}) = {} does not lie over {f}", c.lift[f]));
        }
    }
    for o in b.objects() {
        let id = b.identity(o);
        if !e.is_identity(c.lift[id]) {
            report.push("normalized", vec![id], format!("lift(1_{o}) is not an identity"));
        }
    }
    Ok(report)
}

/// The inverse object map of a bijective-on-objects fibration, or the
/// reason it is not one.
fn bo_fibration(p: &GroupoidFunctor) -> Result<Vec<ObjId>> {
    if !p.is_bijective_on_objects() {
        return Err(Error::Precondition("the functor is not bijective on objects".into()));
    }
    if let Lifting::NoLift { object, arrow } = is_opfibration(p)? {
        return Err(Error::Precondition(format!(
            "not a fibration: arrow {arrow} has no lift at object {object}"
        )));
    }
    let mut over = vec![0; p.codomain.num_objects()];
    for (x, &o) in p.object_map.iter().enumerate() {
        over[o] = x;
    }
    Ok(over)
}

fn check_cleavage(c: &Cleavage) -> Result<Vec<ObjId>> {
    let over = bo_fibration(&c.fibration)?;
    let report = validate_cleavage(c)?;
    if !report.is_ok() {
        return Err(Error::Precondition(format!("cleavage rejected: {report}")));
    }
    Ok(over)
}

/// The kernel groups of a bijective-on-objects fibration, as vertex groups
/// of arrows over identities, with their arrow dictionaries.
pub fn kernel_family(p: &GroupoidFunctor) -> Result<(GroupFamily, Vec<Vec<ArrowId>>)> {
    let over = bo_fibration(p)?;
    let mut groups = Vec::new();
    let mut dictionaries = Vec::new();
    for (o, &x) in over.iter().enumerate() {
        let fib = fiber_subgroupoid(p, o)?;
        let local = fib.objects.iter().position(|&y| y == x).expect("x lies over o");
        let (group, dict) = vertex_group(&fib.groupoid, local)?;
        groups.push(group);
        dictionaries.push(dict.into_iter().map(|a| fib.arrows[a]).collect());
    }
    Ok((GroupFamily::new(groups), dictionaries))
}

/// The weak action `F(f)(k) = lift(f)·k·lift(f)⁻¹`,
/// `σ_gf = lift(g)·lift(f)·lift(gf)⁻¹`, with kernels identified with
/// vertex groups of arrows over identities.
pub fn fiber_action(c: &Cleavage) -> Result<WeakAction> {
    let (family, dictionaries) = kernel_family(&c.fibration)?;
    fiber_action_with(c, Arc::new(family), &dictionaries)
}

/// [`fiber_action`] with prescribed kernels: `identifications[o][k]` is the
/// kernel arrow standing for `k ∈ K_o`.
pub fn fiber_action_with(c: &Cleavage, family: Arc<GroupFamily>, identifications: &[Vec<ArrowId>]) -> Result<WeakAction> {
    let over = check_cleavage(c)?;
    let (e, b) = (&*c.fibration.domain, c.fibration.codomain.clone());
    family.check_indexes(&b)?;
    let mut element: Vec<Option<Elem>> = vec![None; e.num_arrows()];
    for o in b.objects() {
        let dict = identifications
            .get(o)
            .ok_or_else(|| Error::Structural(format!("no kernel identification at object {o}")))?;
        if dict.len() != family.group(o).order() {
            return Err(Error::Structural(format!("kernel identification at {o} has the wrong size")));
        }
        for (k, &a) in dict.iter().enumerate() {
            if a >= e.num_arrows() || c.fibration.arrow(a) != b.identity(o) || e.src(a) != over[o] {
                return Err(Error::Structural(format!("arrow {a} is not a kernel arrow at {o}")));
            }
            element[a] = Some(k);
        }
    }
    let kernel = |a: ArrowId| -> Result<Elem> {
        element[a].ok_or_else(|| Error::Structural(format!("arrow {a} is not an identified kernel arrow")))
    };
    let lift = &c.lift;
    let mut f = Vec::with_capacity(b.num_arrows());
    for u in b.arrows() {
        let (l, li) = (lift[u], e.inverse(lift[u]));
        let dict = &identifications[b.src(u)];
        let map = dict
            .iter()
            .map(|&k| kernel(e.comp(e.comp(l, k), li)))
            .collect::<Result<Vec<_>>>()?;
        f.push(GroupIso::checked(family.group(b.src(u)), family.group(b.tgt(u)), map)?);
    }
    let sigma = b
        .pairs()
        .iter()
        .map(|&(g, h)| kernel(e.comp(e.comp(lift[g], lift[h]), e.inverse(lift[b.comp(g, h)]))))
        .collect::<Result<Vec<_>>>()?;
    let w = WeakAction::new(b.clone(), family, f, sigma)?;
    let report = validate_cocycle(&w);
    if !report.is_ok() {
        return Err(Error::Theorem(format!("fiber action is not a weak action: {report}")));
    }
    Ok(w)
}

/// `Γ(e) = (P(e), e·lift(P e)⁻¹)`, an isomorphism `ℰ → F*⋉𝒢` over `𝒢`,
/// returned with the twisted product it lands in.
pub fn gamma(c: &Cleavage) -> Result<(TwistedGroupoid, GroupoidFunctor)> {
    let (family, dictionaries) = kernel_family(&c.fibration)?;
    gamma_with(c, Arc::new(family), &dictionaries)
}

/// [`gamma`] with prescribed kernel identifications.
pub fn gamma_with(
    c: &Cleavage,
    family: Arc<GroupFamily>,
    identifications: &[Vec<ArrowId>],
) -> Result<(TwistedGroupoid, GroupoidFunctor)> {
    let w = fiber_action_with(c, family, identifications)?;
    let t = twist(&w)?;
    let p = &c.fibration;
    let e = &*p.domain;
    let mut element = vec![usize::MAX; e.num_arrows()];
    for dict in identifications {
        for (k, &a) in dict.iter().enumerate() {
            element[a] = k;
        }
    }
    let arrow_map = e
        .arrows()
        .map(|a| {
            let f = p.arrow(a);
            t.arrow_id(f, element[e.comp(a, e.inverse(c.lift[f]))])
        })
        .collect();
    let functor = GroupoidFunctor {
        domain: p.domain.clone(),
        codomain: t.groupoid.clone(),
        object_map: p.object_map.clone(),
        arrow_map,
    };
    let report = validate_functor(&functor)?;
    if !report.is_ok() {
        return Err(Error::Theorem(format!("Γ is not a functor: {report}")));
    }
    if !functor.is_isomorphism() {
        return Err(Error::Theorem("Γ is not an isomorphism".into()));
    }
    let over = t.projection.after(&functor)?;
    if over.arrow_map != p.arrow_map || over.object_map != p.object_map {
        return Err(Error::Theorem("Γ does not commute with the projections".into()));
    }
    Ok((t, functor))
}

/// Guard on the number of cleavages [`all_cleavages`] will list.
pub const MAX_CLEAVAGES: usize = 1 << 16;

/// Every normalized cleavage of a bijective-on-objects fibration, in
/// lexicographic order of the lift table.
pub fn all_cleavages(p: &GroupoidFunctor) -> Result<Vec<Cleavage>> {
    let over = bo_fibration(p)?;
    let (e, b) = (&*p.domain, &*p.codomain);
    let choices: Vec<Vec<ArrowId>> = b
        .arrows()
        .map(|f| {
            if b.is_identity(f) {
                vec![e.identity(over[b.src(f)])]
            } else {
                e.arrows_from(over[b.src(f)]).iter().copied().filter(|&a| p.arrow(a) == f).collect()
            }
        })
        .collect();
    let count = choices.iter().try_fold(1usize, |acc, c| acc.checked_mul(c.len()));
    if count.is_none_or(|n| n > MAX_CLEAVAGES) {
        return Err(Error::TooLarge(format!("more than {MAX_CLEAVAGES} cleavages")));
    }
    let mut lifts: Vec<Vec<ArrowId>> = vec![Vec::new()];
    for c in &choices {
        lifts = lifts
            .into_iter()
            .flat_map(|l| {
                c.iter().map(move |&a| {
                    let mut l = l.clone();
                    l.push(a);
                    l
                })
            })
            .collect();
    }
    Ok(lifts
        .into_iter()
        .map(|lift| Cleavage {
            fibration: p.clone(),
            lift,
        })
        .collect())
}

/// Result of [`equivalence_check`] on one fibration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquivalenceSummary {
    pub cleavages: usize,
    /// Cochains carrying the action of the first cleavage to that of each
    /// cleavage, in order.
    pub witnesses: Vec<Cochain1>,
}

/// For every normalized cleavage of a bijective-on-objects fibration: `Γ` is
/// an isomorphism over the base, and the fiber actions are all cohomologous
/// to the one of the first cleavage.
pub fn equivalence_check(p: &GroupoidFunctor, budget: &Budget) -> Result<EquivalenceSummary> {
    let cleavages = all_cleavages(p)?;
    let (family, dictionaries) = kernel_family(p)?;
    let family = Arc::new(family);
    let mut actions = Vec::with_capacity(cleavages.len());
    for c in &cleavages {
        gamma_with(c, family.clone(), &dictionaries)?;
        actions.push(fiber_action_with(c, family.clone(), &dictionaries)?);
    }
    let mut witnesses = Vec::with_capacity(actions.len());
    for (i, w) in actions.iter().enumerate() {
        match cohomologous(&actions[0], w, budget)? {
            Some(t) => witnesses.push(t),
            None => {
                return Err(Error::Theorem(format!(
                    "fiber actions of cleavages 0 and {i} are not cohomologous"
                )))
            }
        }
    }
    Ok(EquivalenceSummary {
        cleavages: cleavages.len(),
        witnesses,
    })
}
