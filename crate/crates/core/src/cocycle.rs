//! Weak actions of a groupoid on a family of groups (non-abelian
//! 2-cocycles), their morphisms, the coboundary action `∇`, exhaustive
//! enumeration and the cohomology set `H²`.
//!
//! A weak action assigns to every arrow `u: A → B` an isomorphism
//! `F(u): K_A → K_B` and to every composable pair `(v, u)` (u first) an
//! element `σ_vu ∈ K_tgt(v)`, subject to
//!
//! 1. `F(1) = id`
//! 2. `σ_11 = 1`
//! 3. `σ_vu · F(vu)(x) = F(v)(F(u)(x)) · σ_vu`
//! 4. `σ_wv · σ_(wv)u = F(w)(σ_vu) · σ_w(vu)`
//!
//! and stored actions are fully normalized: `σ` vanishes on every pair that
//! contains an identity.

use std::collections::HashMap;
use std::sync::Arc;

use rayon::prelude::*;

use crate::algebra::{all_isomorphisms, ArrowId, Elem, FiniteGroupoid, GroupFamily, GroupIso, ObjId};
use crate::budget::Budget;
use crate::report::Report;
use crate::two_groupoid::AUT_MAX_GROUP_ORDER;
use crate::{Error, Result};

fn same<T: PartialEq>(a: &Arc<T>, b: &Arc<T>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeakAction {
    base: Arc<FiniteGroupoid>,
    family: Arc<GroupFamily>,
    f: Vec<GroupIso>,
    sigma: Vec<Elem>,
}

impl WeakAction {
    /// Checks shapes only: `F(u)` must be an isomorphism `K_src → K_tgt` and
    /// `σ_vu` an element of `K_tgt(v)`. The cocycle laws are left to
    /// [`validate_cocycle`].
    ///
    /// `sigma` is aligned with `base.pairs()`.
    pub fn new(
        base: Arc<FiniteGroupoid>,
        family: Arc<GroupFamily>,
        f: Vec<GroupIso>,
        sigma: Vec<Elem>,
    ) -> Result<Self> {
        family.check_indexes(&base)?;
        if f.len() != base.num_arrows() {
            return Err(Error::Structural(format!(
                "F has {} entries for {} arrows",
                f.len(),
                base.num_arrows()
            )));
        }
        for (u, fu) in f.iter().enumerate() {
            let (a, b) = (base.src(u), base.tgt(u));
            if !fu.is_iso(family.group(a), family.group(b)) {
                return Err(Error::Structural(format!(
                    "F({u}) is not an isomorphism K_{a} → K_{b}"
                )));
            }
        }
        if sigma.len() != base.pairs().len() {
            return Err(Error::Structural(format!(
                "σ has {} entries for {} composable pairs",
                sigma.len(),
                base.pairs().len()
            )));
        }
        for (&(v, u), &s) in base.pairs().iter().zip(&sigma) {
            if !family.group(base.tgt(v)).contains(s) {
                return Err(Error::Structural(format!(
                    "σ_({v},{u}) = {s} is not an element of K_{}",
                    base.tgt(v)
                )));
            }
        }
        Ok(Self { base, family, f, sigma })
    }

    fn unchecked(base: Arc<FiniteGroupoid>, family: Arc<GroupFamily>, f: Vec<GroupIso>, sigma: Vec<Elem>) -> Self {
        Self { base, family, f, sigma }
    }

    /// `F ≡ id`, `σ ≡ 1`; needs `K_A = K_B` along every arrow.
    pub fn trivial(base: Arc<FiniteGroupoid>, family: Arc<GroupFamily>) -> Result<Self> {
        family.check_indexes(&base)?;
        if let Some(u) = base.arrows().find(|&u| family.group(base.src(u)) != family.group(base.tgt(u))) {
            return Err(Error::Precondition(format!(
                "the trivial action needs equal groups along arrow {u}"
            )));
        }
        let f = base.arrows().map(|u| GroupIso::identity(family.group(base.src(u)).order())).collect();
        let sigma = vec![0; base.pairs().len()];
        Ok(Self::unchecked(base, family, f, sigma))
    }

    pub fn base(&self) -> &Arc<FiniteGroupoid> {
        &self.base
    }

    pub fn family(&self) -> &Arc<GroupFamily> {
        &self.family
    }

    #[inline]
    pub fn f(&self, u: ArrowId) -> &GroupIso {
        &self.f[u]
    }

    pub fn f_maps(&self) -> &[GroupIso] {
        &self.f
    }

    /// `σ_vu`; panics if `(v, u)` is not composable.
    #[inline]
    pub fn sigma(&self, v: ArrowId, u: ArrowId) -> Elem {
        self.sigma[self.base.pair_index(v, u).expect("composable pair")]
    }

    pub fn sigma_values(&self) -> &[Elem] {
        &self.sigma
    }

    /// The group at object `o`.
    pub fn k(&self, o: ObjId) -> &crate::algebra::FiniteGroup {
        self.family.group(o)
    }

    fn same_context(&self, other: &WeakAction) -> bool {
        same(&self.base, &other.base) && same(&self.family, &other.family)
    }

    /// Lexicographic on `(F maps, σ values)`.
    pub fn canonical_cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.f.cmp(&other.f).then_with(|| self.sigma.cmp(&other.sigma))
    }
}

fn check_conditions(w: &WeakAction, full_normalization: bool) -> Report {
    let g = &*w.base;
    let mut report = Report::new();
    for o in g.objects() {
        let id = g.identity(o);
        if !w.f[id].is_identity() {
            report.push("identity", vec![id], format!("F(1_{o}) is not the identity"));
        }
    }
    for (i, &(v, u)) in g.pairs().iter().enumerate() {
        let s = w.sigma[i];
        let (vi, ui) = (g.is_identity(v), g.is_identity(u));
        if vi && ui && s != 0 {
            report.push("unit", vec![v, u], format!("σ_(1,1) = {s} at object {}", g.src(u)));
        } else if full_normalization && (vi || ui) && s != 0 {
            report.push("normalization", vec![v, u], format!("σ_({v},{u}) = {s} on a pair with an identity"));
        }
        let k = w.k(g.tgt(v));
        let vu = g.comp(v, u);
        let (fv, fu, fvu) = (&w.f[v], &w.f[u], &w.f[vu]);
        if let Some(x) = w
            .k(g.src(u))
            .elements()
            .find(|&x| k.mul(s, fvu.apply(x)) != k.mul(fv.apply(fu.apply(x)), s))
        {
            report.push(
                "naturality",
                vec![v, u, x],
                format!("σ_({v},{u})·F({vu})({x}) ≠ F({v})(F({u})({x}))·σ_({v},{u})"),
            );
        }
    }
    for (w_, v, u) in g.triples() {
        let k = w.k(g.tgt(w_));
        let wv = g.comp(w_, v);
        let vu = g.comp(v, u);
        let lhs = k.mul(w.sigma(w_, v), w.sigma(wv, u));
        let rhs = k.mul(w.f[w_].apply(w.sigma(v, u)), w.sigma(w_, vu));
        if lhs != rhs {
            report.push(
                "cocycle",
                vec![w_, v, u],
                format!("cocycle condition fails on the triple ({w_},{v},{u}): {lhs} ≠ {rhs}"),
            );
        }
    }
    report
}

/// Empty iff the identity, unit, naturality and cocycle laws hold and `σ` is
/// fully normalized.
pub fn validate_cocycle(w: &WeakAction) -> Report {
    check_conditions(w, true)
}

/// Given the identity, naturality and cocycle laws and `σ_11 = 1` everywhere, `σ` vanishes on
/// every pair with an identity. Rejects inputs that miss the hypotheses and
/// reports a theorem violation if the conclusion fails.
pub fn weak_identity_upgrade(w: &WeakAction) -> Result<WeakAction> {
    let hyp = check_conditions(w, false);
    if !hyp.is_ok() {
        return Err(Error::Precondition(format!("not a weakly normalized lax functor: {hyp}")));
    }
    let g = &*w.base;
    for (i, &(v, u)) in g.pairs().iter().enumerate() {
        if (g.is_identity(v) || g.is_identity(u)) && w.sigma[i] != 0 {
            return Err(Error::Theorem(format!(
                "σ_({v},{u}) = {} although σ_11 = 1 everywhere",
                w.sigma[i]
            )));
        }
    }
    Ok(w.clone())
}

/// A normalized 1-cochain `τ(u: A → B) ∈ K_B`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cochain1 {
    base: Arc<FiniteGroupoid>,
    family: Arc<GroupFamily>,
    tau: Vec<Elem>,
}

impl Cochain1 {
    /// Checks shapes; normalization `τ(1) = 1` is checked by
    /// [`validate_morphism`] and [`Cochain1::is_normalized`].
    pub fn new(base: Arc<FiniteGroupoid>, family: Arc<GroupFamily>, tau: Vec<Elem>) -> Result<Self> {
        family.check_indexes(&base)?;
        if tau.len() != base.num_arrows() {
            return Err(Error::Structural(format!(
                "τ has {} entries for {} arrows",
                tau.len(),
                base.num_arrows()
            )));
        }
        if let Some(u) = base.arrows().find(|&u| !family.group(base.tgt(u)).contains(tau[u])) {
            return Err(Error::Structural(format!("τ({u}) is not an element of K_{}", base.tgt(u))));
        }
        Ok(Self { base, family, tau })
    }

    pub fn identity(base: Arc<FiniteGroupoid>, family: Arc<GroupFamily>) -> Self {
        let tau = vec![0; base.num_arrows()];
        Self { base, family, tau }
    }

    pub fn base(&self) -> &Arc<FiniteGroupoid> {
        &self.base
    }

    pub fn family(&self) -> &Arc<GroupFamily> {
        &self.family
    }

    #[inline]
    pub fn value(&self, u: ArrowId) -> Elem {
        self.tau[u]
    }

    pub fn values(&self) -> &[Elem] {
        &self.tau
    }

    pub fn is_identity(&self) -> bool {
        self.tau.iter().all(|&t| t == 0)
    }

    pub fn is_normalized(&self) -> bool {
        self.base.objects().all(|o| self.tau[self.base.identity(o)] == 0)
    }

    /// Elementwise inverse.
    pub fn inverse(&self) -> Cochain1 {
        let tau = self
            .base
            .arrows()
            .map(|u| self.family.group(self.base.tgt(u)).inv(self.tau[u]))
            .collect();
        Cochain1 {
            base: self.base.clone(),
            family: self.family.clone(),
            tau,
        }
    }

    /// Elementwise product `second(u) · first(u)`.
    pub fn then(&self, second: &Cochain1) -> Cochain1 {
        let tau = self
            .base
            .arrows()
            .map(|u| self.family.group(self.base.tgt(u)).mul(second.tau[u], self.tau[u]))
            .collect();
        Cochain1 {
            base: self.base.clone(),
            family: self.family.clone(),
            tau,
        }
    }
}

/// A morphism of weak actions `source → target` with identity object
/// components, given by its cochain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ActionMorphism {
    pub source: WeakAction,
    pub target: WeakAction,
    pub tau: Cochain1,
}

impl ActionMorphism {
    pub fn identity(w: &WeakAction) -> Self {
        Self {
            source: w.clone(),
            target: w.clone(),
            tau: Cochain1::identity(w.base.clone(), w.family.clone()),
        }
    }

    fn check_context(&self) -> Result<()> {
        if !self.source.same_context(&self.target)
            || !same(&self.source.base, &self.tau.base)
            || !same(&self.source.family, &self.tau.family)
        {
            return Err(Error::Mismatch("morphism data over different base or family".into()));
        }
        Ok(())
    }
}

/// Checks naturality, normalization and coherence of a morphism.
pub fn validate_morphism(m: &ActionMorphism) -> Result<Report> {
    m.check_context()?;
    let (w1, w2, t) = (&m.source, &m.target, &m.tau);
    let g = &*w1.base;
    let mut report = Report::new();
    for o in g.objects() {
        let id = g.identity(o);
        if t.tau[id] != 0 {
            report.push("normalization", vec![id], format!("τ(1_{o}) = {} ≠ 1", t.tau[id]));
        }
    }
    for u in g.arrows() {
        let k = w1.k(g.tgt(u));
        let tu = t.tau[u];
        if let Some(x) = w1
            .k(g.src(u))
            .elements()
            .find(|&x| k.mul(tu, w1.f[u].apply(x)) != k.mul(w2.f[u].apply(x), tu))
        {
            report.push(
                "naturality",
                vec![u, x],
                format!("τ({u})·F₁({u})({x}) ≠ F₂({u})({x})·τ({u})"),
            );
        }
    }
    for (i, &(v, u)) in g.pairs().iter().enumerate() {
        let k = w1.k(g.tgt(v));
        let lhs = k.mul(k.mul(w2.f[v].apply(t.tau[u]), t.tau[v]), w1.sigma[i]);
        let rhs = k.mul(w2.sigma[i], t.tau[g.comp(v, u)]);
        if lhs != rhs {
            report.push("coherence", vec![v, u], format!("coherence fails on the pair ({v},{u})"));
        }
    }
    Ok(report)
}

/// `τ∇(F₁, σ¹) = (F₂, σ²)` with `F₂(u) = τ(u)·F₁(u)(−)·τ(u)⁻¹` and
/// `σ²_vu = τ(v)·F₁(v)(τ(u))·σ¹_vu·τ(vu)⁻¹`.
pub fn nabla(t: &Cochain1, w: &WeakAction) -> Result<WeakAction> {
    if !same(&t.base, &w.base) || !same(&t.family, &w.family) {
        return Err(Error::Mismatch("∇: cochain and action over different base or family".into()));
    }
    let g = &*w.base;
    let f = g
        .arrows()
        .map(|u| {
            let k = w.k(g.tgt(u));
            GroupIso::from_map_unchecked(w.f[u].map().iter().map(|&y| k.conj(t.tau[u], y)).collect())
        })
        .collect();
    let sigma = g
        .pairs()
        .iter()
        .enumerate()
        .map(|(i, &(v, u))| {
            let k = w.k(g.tgt(v));
            let head = k.mul(t.tau[v], w.f[v].apply(t.tau[u]));
            k.mul(k.mul(head, w.sigma[i]), k.inv(t.tau[g.comp(v, u)]))
        })
        .collect();
    Ok(WeakAction::unchecked(w.base.clone(), w.family.clone(), f, sigma))
}

/// `(τ_β ∘ τ_α)(u) = τ_β(u)·τ_α(u)`.
pub fn compose_morphisms(second: &ActionMorphism, first: &ActionMorphism) -> Result<ActionMorphism> {
    first.check_context()?;
    second.check_context()?;
    if first.target != second.source {
        return Err(Error::Mismatch("morphism composite: target(first) ≠ source(second)".into()));
    }
    Ok(ActionMorphism {
        source: first.source.clone(),
        target: second.target.clone(),
        tau: first.tau.then(&second.tau),
    })
}

/// The inverse morphism `target → source`, with cochain `τ(u)⁻¹`.
pub fn invert_morphism(m: &ActionMorphism) -> ActionMorphism {
    ActionMorphism {
        source: m.target.clone(),
        target: m.source.clone(),
        tau: m.tau.inverse(),
    }
}

/// For each object, conjugation maps `x ↦ s x s⁻¹` keyed by their element
/// map, with all `s` inducing them (ascending).
fn inner_automorphisms(family: &GroupFamily) -> Vec<HashMap<Vec<Elem>, Vec<Elem>>> {
    family
        .groups()
        .iter()
        .map(|k| {
            let mut inner: HashMap<Vec<Elem>, Vec<Elem>> = HashMap::new();
            for s in k.elements() {
                let key = k.elements().map(|x| k.conj(s, x)).collect();
                inner.entry(key).or_default().push(s);
            }
            inner
        })
        .collect()
}

/// Largest arrow among `v`, `u`, `vu`: the point in an arrow-ordered search
/// at which a pair condition becomes checkable.
fn pair_completion(g: &FiniteGroupoid) -> Vec<Vec<usize>> {
    let mut at = vec![Vec::new(); g.num_arrows()];
    for (i, &(v, u)) in g.pairs().iter().enumerate() {
        at[v.max(u).max(g.comp(v, u))].push(i);
    }
    at
}

struct Triple {
    w: ArrowId,
    wv: usize,
    wv_u: usize,
    vu: usize,
    w_vu: usize,
}

/// Composable triples with the indices of the four pairs in the cocycle law,
/// grouped by the largest of those indices.
fn triple_completion(g: &FiniteGroupoid) -> Vec<Vec<Triple>> {
    let mut at: Vec<Vec<Triple>> = (0..g.pairs().len()).map(|_| Vec::new()).collect();
    let idx = |v, u| g.pair_index(v, u).expect("composable");
    for (w, v, u) in g.triples() {
        let t = Triple {
            w,
            wv: idx(w, v),
            wv_u: idx(g.comp(w, v), u),
            vu: idx(v, u),
            w_vu: idx(w, g.comp(v, u)),
        };
        let last = t.wv.max(t.wv_u).max(t.vu).max(t.w_vu);
        at[last].push(t);
    }
    at
}

struct CocycleSearch<'a> {
    base: &'a Arc<FiniteGroupoid>,
    family: &'a Arc<GroupFamily>,
    full_normalization: bool,
    candidates: Vec<Arc<Vec<GroupIso>>>,
    inner: Vec<HashMap<Vec<Elem>, Vec<Elem>>>,
    pairs_at: Vec<Vec<usize>>,
    triples_at: Vec<Vec<Triple>>,
    budget: &'a Budget,
}

impl<'a> CocycleSearch<'a> {
    fn new(
        base: &'a Arc<FiniteGroupoid>,
        family: &'a Arc<GroupFamily>,
        full_normalization: bool,
        budget: &'a Budget,
    ) -> Result<Self> {
        family.check_indexes(base)?;
        if family.max_order() > AUT_MAX_GROUP_ORDER {
            return Err(Error::TooLarge(format!(
                "cocycle enumeration needs groups of order ≤ {AUT_MAX_GROUP_ORDER}"
            )));
        }
        let mut cache: HashMap<(ObjId, ObjId), Arc<Vec<GroupIso>>> = HashMap::new();
        let candidates = base
            .arrows()
            .map(|u| {
                let (a, b) = (base.src(u), base.tgt(u));
                if base.is_identity(u) {
                    return Arc::new(vec![GroupIso::identity(family.group(a).order())]);
                }
                cache
                    .entry((a, b))
                    .or_insert_with(|| Arc::new(all_isomorphisms(family.group(a), family.group(b))))
                    .clone()
            })
            .collect();
        Ok(Self {
            base,
            family,
            full_normalization,
            candidates,
            inner: inner_automorphisms(family),
            pairs_at: pair_completion(base),
            triples_at: triple_completion(base),
            budget,
        })
    }

    /// `F(v)∘F(u)∘F(vu)⁻¹` as an element map of `K_tgt(v)`.
    fn defect(&self, f: &[GroupIso], v: ArrowId, u: ArrowId) -> Vec<Elem> {
        let vu = self.base.comp(v, u);
        f[v].after(&f[u]).after(&f[vu].inverse()).map().to_vec()
    }

    fn f_assignments(&self) -> Result<Vec<Vec<GroupIso>>> {
        let mut out = Vec::new();
        let mut f: Vec<GroupIso> = Vec::with_capacity(self.base.num_arrows());
        self.assign_f(&mut f, &mut out)?;
        Ok(out)
    }

    fn assign_f(&self, f: &mut Vec<GroupIso>, out: &mut Vec<Vec<GroupIso>>) -> Result<()> {
        let a = f.len();
        if a == self.base.num_arrows() {
            out.push(f.clone());
            return Ok(());
        }
        for iso in self.candidates[a].iter() {
            self.budget.charge(1)?;
            f.push(iso.clone());
            let ok = self.pairs_at[a].iter().all(|&i| {
                let (v, u) = self.base.pairs()[i];
                self.inner[self.base.tgt(v)].contains_key(&self.defect(f, v, u))
            });
            if ok {
                self.assign_f(f, out)?;
            }
            f.pop();
        }
        Ok(())
    }

    fn sigma_candidates(&self, f: &[GroupIso]) -> Vec<Vec<Elem>> {
        let g = &**self.base;
        g.pairs()
            .iter()
            .map(|&(v, u)| {
                let (vi, ui) = (g.is_identity(v), g.is_identity(u));
                if (vi && ui) || (self.full_normalization && (vi || ui)) {
                    return vec![0];
                }
                self.inner[g.tgt(v)].get(&self.defect(f, v, u)).cloned().unwrap_or_default()
            })
            .collect()
    }

    fn cocycles_over(&self, f: &[GroupIso]) -> Result<Vec<WeakAction>> {
        let cands = self.sigma_candidates(f);
        let mut out = Vec::new();
        let mut sigma = Vec::with_capacity(cands.len());
        self.assign_sigma(f, &cands, &mut sigma, &mut out)?;
        Ok(out)
    }

    fn assign_sigma(
        &self,
        f: &[GroupIso],
        cands: &[Vec<Elem>],
        sigma: &mut Vec<Elem>,
        out: &mut Vec<WeakAction>,
    ) -> Result<()> {
        let p = sigma.len();
        if p == cands.len() {
            out.push(WeakAction::unchecked(
                self.base.clone(),
                self.family.clone(),
                f.to_vec(),
                sigma.clone(),
            ));
            return Ok(());
        }
        for &s in &cands[p] {
            self.budget.charge(1)?;
            sigma.push(s);
            let ok = self.triples_at[p].iter().all(|t| {
                let k = self.family.group(self.base.tgt(t.w));
                k.mul(sigma[t.wv], sigma[t.wv_u]) == k.mul(f[t.w].apply(sigma[t.vu]), sigma[t.w_vu])
            });
            if ok {
                self.assign_sigma(f, cands, sigma, out)?;
            }
            sigma.pop();
        }
        Ok(())
    }

    fn run(&self) -> Result<Vec<WeakAction>> {
        let fs = self.f_assignments()?;
        let per_f: Vec<Vec<WeakAction>> = fs
            .par_iter()
            .map(|f| self.cocycles_over(f))
            .collect::<Result<_>>()?;
        let mut all: Vec<WeakAction> = per_f.into_iter().flatten().collect();
        all.sort_by(WeakAction::canonical_cmp);
        Ok(all)
    }
}

/// Every valid (fully normalized) weak action, in canonical order.
pub fn enumerate_cocycles(
    base: &Arc<FiniteGroupoid>,
    family: &Arc<GroupFamily>,
    budget: &Budget,
) -> Result<Vec<WeakAction>> {
    CocycleSearch::new(base, family, true, budget)?.run()
}

/// Every `(F, σ)` satisfying the identity, unit, naturality and cocycle laws where only `σ_11 = 1` is
/// imposed among the normalizations, in canonical order.
pub fn enumerate_weakly_normalized(
    base: &Arc<FiniteGroupoid>,
    family: &Arc<GroupFamily>,
    budget: &Budget,
) -> Result<Vec<WeakAction>> {
    CocycleSearch::new(base, family, false, budget)?.run()
}

/// Every normalized 1-cochain, in lexicographic order of `τ`.
pub fn all_cochains(
    base: &Arc<FiniteGroupoid>,
    family: &Arc<GroupFamily>,
    budget: &Budget,
) -> Result<Vec<Cochain1>> {
    family.check_indexes(base)?;
    let mut out = vec![Vec::with_capacity(base.num_arrows())];
    for u in base.arrows() {
        let range = if base.is_identity(u) { 1 } else { family.group(base.tgt(u)).order() };
        budget.charge((out.len() * range) as u64)?;
        out = out
            .into_iter()
            .flat_map(|t: Vec<Elem>| {
                (0..range).map(move |x| {
                    let mut t = t.clone();
                    t.push(x);
                    t
                })
            })
            .collect();
    }
    Ok(out
        .into_iter()
        .map(|tau| Cochain1 {
            base: base.clone(),
            family: family.clone(),
            tau,
        })
        .collect())
}

/// The lexicographically least `τ` with `τ∇w1 = w2`, if any.
///
/// Searches all of `C¹` arrow by arrow; partial assignments are cut as soon
/// as a naturality or coherence equation among assigned arrows fails.
pub fn cohomologous(w1: &WeakAction, w2: &WeakAction, budget: &Budget) -> Result<Option<Cochain1>> {
    if !w1.same_context(w2) {
        return Err(Error::Mismatch("cohomologous: actions over different base or family".into()));
    }
    let g = &**w1.base();
    let cands: Vec<Vec<Elem>> = g
        .arrows()
        .map(|u| {
            if g.is_identity(u) {
                return vec![0];
            }
            let k = w1.k(g.tgt(u));
            k.elements()
                .filter(|&t| {
                    w1.f[u]
                        .map()
                        .iter()
                        .zip(w2.f[u].map())
                        .all(|(&y1, &y2)| k.conj(t, y1) == y2)
                })
                .collect()
        })
        .collect();
    let pairs_at = pair_completion(g);

    fn go(
        w1: &WeakAction,
        w2: &WeakAction,
        cands: &[Vec<Elem>],
        pairs_at: &[Vec<usize>],
        tau: &mut Vec<Elem>,
        budget: &Budget,
    ) -> Result<bool> {
        let g = &**w1.base();
        let a = tau.len();
        if a == cands.len() {
            return Ok(true);
        }
        for &t in &cands[a] {
            budget.charge(1)?;
            tau.push(t);
            let ok = pairs_at[a].iter().all(|&i| {
                let (v, u) = g.pairs()[i];
                let k = w1.k(g.tgt(v));
                let lhs = k.mul(k.mul(w2.f[v].apply(tau[u]), tau[v]), w1.sigma[i]);
                lhs == k.mul(w2.sigma[i], tau[g.comp(v, u)])
            });
            if ok && go(w1, w2, cands, pairs_at, tau, budget)? {
                return Ok(true);
            }
            tau.pop();
        }
        Ok(false)
    }

    let mut tau = Vec::with_capacity(g.num_arrows());
    if go(w1, w2, &cands, &pairs_at, &mut tau, budget)? {
        Ok(Some(Cochain1 {
            base: w1.base.clone(),
            family: w1.family.clone(),
            tau,
        }))
    } else {
        Ok(None)
    }
}

/// One cohomology class: indices into [`H2::cocycles`], the least index
/// being the representative, with `witnesses[i]` a cochain carrying the
/// representative to `members[i]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct H2Class {
    pub members: Vec<usize>,
    pub witnesses: Vec<Cochain1>,
}

impl H2Class {
    pub fn representative(&self) -> usize {
        self.members[0]
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct H2 {
    pub cocycles: Vec<WeakAction>,
    pub classes: Vec<H2Class>,
}

impl H2 {
    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn representatives(&self) -> impl Iterator<Item = &WeakAction> {
        self.classes.iter().map(|c| &self.cocycles[c.representative()])
    }

    /// The class index of cocycle `i`.
    pub fn class_of(&self, i: usize) -> Option<usize> {
        self.classes.iter().position(|c| c.members.contains(&i))
    }
}

/// Partitions the enumerated cocycles into cohomology classes.
pub fn h2(base: &Arc<FiniteGroupoid>, family: &Arc<GroupFamily>, budget: &Budget) -> Result<H2> {
    let cocycles = enumerate_cocycles(base, family, budget)?;
    let classes = partition_cohomologous(&cocycles, budget)?;
    Ok(H2 { cocycles, classes })
}

/// Classes of `cocycles` under `cohomologous`, each led by its least index.
pub fn partition_cohomologous(cocycles: &[WeakAction], budget: &Budget) -> Result<Vec<H2Class>> {
    let mut unassigned: Vec<usize> = (0..cocycles.len()).collect();
    let mut classes = Vec::new();
    while let Some(&rep) = unassigned.first() {
        let found: Vec<Option<Cochain1>> = unassigned[1..]
            .par_iter()
            .map(|&j| cohomologous(&cocycles[rep], &cocycles[j], budget))
            .collect::<Result<_>>()?;
        let mut class = H2Class {
            members: vec![rep],
            witnesses: vec![Cochain1::identity(
                cocycles[rep].base.clone(),
                cocycles[rep].family.clone(),
            )],
        };
        let mut rest = Vec::new();
        for (&j, tau) in unassigned[1..].iter().zip(found) {
            match tau {
                Some(t) => {
                    class.members.push(j);
                    class.witnesses.push(t);
                }
                None => rest.push(j),
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

    fn z2() -> Arc<FiniteGroupoid> {
        Arc::new(FiniteGroupoid::from_group(&FiniteGroup::cyclic(2)))
    }

    fn fam(k: FiniteGroup) -> Arc<GroupFamily> {
        Arc::new(GroupFamily::new(vec![k]))
    }

    /// One-object ℤ/2 acting on `k` with `F(u) = fu`, `σ_uu = s`.
    fn z2_action(k: FiniteGroup, fu: Vec<Elem>, s: Elem) -> WeakAction {
        let base = z2();
        let n = k.order();
        let sigma = base.pairs().iter().map(|&p| if p == (1, 1) { s } else { 0 }).collect();
        WeakAction::new(
            base,
            fam(k),
            vec![GroupIso::identity(n), GroupIso::from_map_unchecked(fu)],
            sigma,
        )
        .unwrap()
    }

    #[test]
    fn validate_examples() {
        assert!(validate_cocycle(&z2_action(FiniteGroup::cyclic(2), vec![0, 1], 0)).is_ok());
        assert!(validate_cocycle(&z2_action(FiniteGroup::cyclic(2), vec![0, 1], 1)).is_ok());
        let bad = validate_cocycle(&z2_action(FiniteGroup::cyclic(3), vec![0, 2, 1], 1));
        assert!(bad.has("cocycle") && !bad.has("naturality"));
        assert!(validate_cocycle(&z2_action(FiniteGroup::cyclic(3), vec![0, 2, 1], 0)).is_ok());
    }

    #[test]
    fn structural_errors() {
        let base = z2();
        let r = WeakAction::new(
            base,
            fam(FiniteGroup::cyclic(3)),
            vec![GroupIso::identity(3), GroupIso::from_map_unchecked(vec![0, 1, 1])],
            vec![0; 4],
        );
        assert!(matches!(r, Err(Error::Structural(_))));
    }

    #[test]
    fn enumeration_counts() {
        let b = Budget::default();
        assert_eq!(enumerate_cocycles(&z2(), &fam(FiniteGroup::cyclic(2)), &b).unwrap().len(), 2);
        assert_eq!(enumerate_cocycles(&z2(), &fam(FiniteGroup::cyclic(3)), &b).unwrap().len(), 4);
        let interval = Arc::new(FiniteGroupoid::interval());
        let mixed = Arc::new(GroupFamily::new(vec![FiniteGroup::cyclic(2), FiniteGroup::cyclic(3)]));
        assert!(enumerate_cocycles(&interval, &mixed, &b).unwrap().is_empty());
    }

    #[test]
    fn nabla_examples() {
        let w = z2_action(FiniteGroup::cyclic(2), vec![0, 1], 0);
        let id = Cochain1::identity(w.base().clone(), w.family().clone());
        assert_eq!(nabla(&id, &w).unwrap(), w);
        let t = Cochain1::new(w.base().clone(), w.family().clone(), vec![0, 1]).unwrap();
        assert_eq!(nabla(&t, &w).unwrap(), w);
        let w = z2_action(FiniteGroup::cyclic(3), vec![0, 2, 1], 0);
        for x in 0..3 {
            let t = Cochain1::new(w.base().clone(), w.family().clone(), vec![0, x]).unwrap();
            assert_eq!(nabla(&t, &w).unwrap().sigma(1, 1), 0);
        }
    }

    #[test]
    fn morphism_validation() {
        let w = z2_action(FiniteGroup::cyclic(3), vec![0, 1, 2], 1);
        assert!(validate_morphism(&ActionMorphism::identity(&w)).unwrap().is_ok());
        let mut m = ActionMorphism::identity(&w);
        m.tau = Cochain1::new(w.base().clone(), w.family().clone(), vec![1, 0]).unwrap();
        assert!(validate_morphism(&m).unwrap().has("normalization"));
    }

    #[test]
    fn cohomologous_examples() {
        let b = Budget::default();
        let z = FiniteGroup::cyclic(2);
        let (w0, w1) = (z2_action(z.clone(), vec![0, 1], 0), z2_action(z, vec![0, 1], 1));
        assert!(cohomologous(&w0, &w0, &b).unwrap().unwrap().is_identity());
        assert!(cohomologous(&w0, &w1, &b).unwrap().is_none());
        let z3 = FiniteGroup::cyclic(3);
        let (a, c) = (z2_action(z3.clone(), vec![0, 1, 2], 1), z2_action(z3, vec![0, 1, 2], 2));
        let t = cohomologous(&a, &c, &b).unwrap().unwrap();
        assert_eq!(nabla(&t, &a).unwrap(), c);
    }

    #[test]
    fn h2_examples() {
        let b = Budget::default();
        assert_eq!(h2(&z2(), &fam(FiniteGroup::cyclic(2)), &b).unwrap().len(), 2);
        assert_eq!(h2(&z2(), &fam(FiniteGroup::cyclic(3)), &b).unwrap().len(), 2);
        let interval = Arc::new(FiniteGroupoid::interval());
        let f = Arc::new(GroupFamily::constant(FiniteGroup::cyclic(2), 2));
        assert_eq!(h2(&interval, &f, &b).unwrap().len(), 1);
    }

    #[test]
    fn weak_identity_upgrade_rejects_bad_unit() {
        let base = z2();
        let sigma = base.pairs().iter().map(|&p| if p == (0, 0) { 1 } else { 0 }).collect();
        let w = WeakAction::new(base, fam(FiniteGroup::cyclic(2)), vec![GroupIso::identity(2); 2], sigma).unwrap();
        assert!(matches!(weak_identity_upgrade(&w), Err(Error::Precondition(_))));
    }

    #[test]
    fn budget_is_enforced() {
        let b = Budget::new(3);
        let r = enumerate_cocycles(&z2(), &fam(FiniteGroup::cyclic(3)), &b);
        assert!(matches!(r, Err(Error::Budget { .. })));
    }
}
