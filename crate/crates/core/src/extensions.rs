//! Extensions `1 → 𝒦 → ℰ → 𝒢 → 1` of groupoids as bijective-on-objects
//! fibrations with identified kernels, their morphisms, connected
//! components of `Ext(𝒢, 𝒦)`, and the comparison with `H²`.

use std::collections::HashMap;
use std::sync::Arc;

use rayon::prelude::*;

use crate::algebra::census::{identify, small_groups};
use crate::algebra::{
    all_homomorphisms, all_isomorphisms, connected_components, validate_functor, vertex_group, ArrowId, Elem,
    FiniteGroup, FiniteGroupoid, GroupFamily, GroupoidFunctor, ObjId,
};
use crate::budget::Budget;
use crate::cocycle::{h2, ActionMorphism};
use crate::grothendieck::{is_opfibration, twist, twist_morphism_between, Lifting, TwistedGroupoid};
use crate::report::Report;
use crate::{Error, Result};

/// An extension of `base` by `family`: a projection `ℰ → 𝒢` with
/// `identifications[o][k]` the kernel arrow of `ℰ` standing for `k ∈ K_o`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Extension {
    pub projection: GroupoidFunctor,
    pub family: Arc<GroupFamily>,
    pub identifications: Vec<Vec<ArrowId>>,
}

impl Extension {
    pub fn total(&self) -> &Arc<FiniteGroupoid> {
        &self.projection.domain
    }

    pub fn base(&self) -> &Arc<FiniteGroupoid> {
        &self.projection.codomain
    }

    /// The twisted product with kernels `(1_o, k)`.
    pub fn from_twist(t: &TwistedGroupoid) -> Self {
        Self {
            projection: t.projection().clone(),
            family: t.action().family().clone(),
            identifications: t.kernel_dictionaries(),
        }
    }

    /// Packages a bijective-on-objects functor with a family, identifying
    /// each `K_o` with the kernel at the object over `o` through the
    /// lexicographically least isomorphism. Where there is none, the raw
    /// kernel arrows are stored and [`validate_extension`] reports the
    /// mismatch.
    pub fn package(projection: GroupoidFunctor, family: Arc<GroupFamily>) -> Result<Self> {
        if !projection.is_bijective_on_objects() {
            return Err(Error::Precondition("projection is not bijective on objects".into()));
        }
        family.check_indexes(&projection.codomain)?;
        let over = inverse_objects(&projection);
        let e = &*projection.domain;
        let b = &*projection.codomain;
        let mut identifications = Vec::with_capacity(b.num_objects());
        for o in b.objects() {
            let x = over[o];
            let mut dict = vec![e.identity(x)];
            dict.extend(e.hom(x, x).filter(|&a| a != e.identity(x) && projection.arrow(a) == b.identity(o)));
            let kernel = crate::algebra::groupoid::group_on_arrows(e, &dict).ok();
            let iso = kernel.and_then(|k| crate::algebra::group_iso_search(family.group(o), &k));
            identifications.push(match iso {
                Some(iso) => iso.map().iter().map(|&i| dict[i]).collect(),
                None => dict,
            });
        }
        Ok(Self {
            projection,
            family,
            identifications,
        })
    }
}

fn inverse_objects(p: &GroupoidFunctor) -> Vec<ObjId> {
    let mut over = vec![0; p.codomain.num_objects()];
    for (x, &o) in p.object_map.iter().enumerate() {
        over[o] = x;
    }
    over
}

/// Checks the projection is a bijective-on-objects fibration whose kernel
/// at each object is `K_o` through the stored identification, and that the
/// base is the quotient of `ℰ` by the kernel.
pub fn validate_extension(e: &Extension) -> Result<Report> {
    let (total, base) = (e.total().clone(), e.base().clone());
    e.family.check_indexes(&base)?;
    if e.identifications.len() != base.num_objects()
        || e.identifications.iter().flatten().any(|&a| a >= total.num_arrows())
    {
        return Err(Error::Structural("kernel identifications do not fit the total groupoid".into()));
    }
    let mut report = validate_functor(&e.projection)?;
    if !report.is_ok() {
        return Ok(report);
    }
    if !e.projection.is_bijective_on_objects() {
        report.push("bijective-on-objects", vec![], "projection is not bijective on objects");
        return Ok(report);
    }
    if let Lifting::NoLift { object, arrow } = is_opfibration(&e.projection)? {
        report.push("fibration", vec![object, arrow], format!("arrow {arrow} has no lift at {object}"));
    }
    let p = &e.projection;
    let over = inverse_objects(p);
    for o in base.objects() {
        let k = e.family.group(o);
        let dict = &e.identifications[o];
        let x = over[o];
        let kernel: Vec<ArrowId> = total.hom(x, x).filter(|&a| p.arrow(a) == base.identity(o)).collect();
        let mut sorted = dict.clone();
        sorted.sort_unstable();
        if dict.len() != k.order() || sorted != kernel {
            report.push(
                "kernel",
                vec![o],
                format!("K_{o} (order {}) is not identified with the kernel at {o} (order {})", k.order(), kernel.len()),
            );
            continue;
        }
        if let Some((a, b)) = k
            .elements()
            .flat_map(|a| k.elements().map(move |b| (a, b)))
            .find(|&(a, b)| total.comp(dict[a], dict[b]) != dict[k.mul(a, b)])
        {
            report.push("kernel", vec![o, a, b], format!("identification at {o} breaks the product {a}·{b}"));
        }
    }
    let is_kernel = |a: ArrowId| base.is_identity(p.arrow(a));
    let mut by_image: HashMap<ArrowId, Vec<ArrowId>> = HashMap::new();
    for a in total.arrows() {
        by_image.entry(p.arrow(a)).or_default().push(a);
    }
    if let Some(f) = base.arrows().find(|f| !by_image.contains_key(f)) {
        report.push("exactness", vec![f], format!("base arrow {f} is not in the image"));
    }
    'outer: for arrows in by_image.values() {
        for &a in arrows {
            for &b in arrows {
                let left = total.comp(b, total.inverse(a));
                let right = total.comp(total.inverse(a), b);
                if !is_kernel(left) || !is_kernel(right) {
                    report.push("exactness", vec![a, b], format!("arrows {a}, {b} over one arrow differ outside the kernel"));
                    break 'outer;
                }
            }
        }
    }
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtensionMorphism {
    pub source: Extension,
    pub target: Extension,
    pub functor: GroupoidFunctor,
}

/// Checks the ladder: the functor commutes with the projections, fixes the
/// identified kernels, and is invertible with an inverse of the same kind.
pub fn validate_extension_morphism(m: &ExtensionMorphism) -> Result<Report> {
    let (s, t, phi) = (&m.source, &m.target, &m.functor);
    if s.base() != t.base() || s.family != t.family {
        return Err(Error::Mismatch("extensions over different base or kernel family".into()));
    }
    if *phi.domain != **s.total() || *phi.codomain != **t.total() {
        return Err(Error::Mismatch("functor does not run between the two totals".into()));
    }
    let mut report = validate_functor(phi)?;
    if !report.is_ok() {
        return Ok(report);
    }
    for x in s.total().objects() {
        if t.projection.obj(phi.obj(x)) != s.projection.obj(x) {
            report.push("projection", vec![x], format!("object {x} changes its image in the base"));
        }
    }
    for a in s.total().arrows() {
        if t.projection.arrow(phi.arrow(a)) != s.projection.arrow(a) {
            report.push("projection", vec![a], format!("arrow {a} changes its image in the base"));
        }
    }
    for (o, (ds, dt)) in s.identifications.iter().zip(&t.identifications).enumerate() {
        if let Some(k) = ds.iter().zip(dt).position(|(&a, &b)| phi.arrow(a) != b) {
            report.push("kernel", vec![o, k], format!("kernel element {k} at {o} is not fixed"));
        }
    }
    if report.is_ok() {
        match phi.inverse() {
            None => report.push("invertible", vec![], "morphism of extensions is not invertible"),
            Some(inv) => {
                if !validate_functor(&inv)?.is_ok() {
                    report.push("invertible", vec![], "inverse is not a functor");
                }
            }
        }
    }
    Ok(report)
}

/// A morphism `e1 → e2` of extensions, if any, found by searching the
/// images of one lift per base arrow; the first hit in lexicographic order
/// of those images is returned.
pub fn find_extension_morphism(e1: &Extension, e2: &Extension, budget: &Budget) -> Result<Option<ExtensionMorphism>> {
    if e1.base() != e2.base() || e1.family != e2.family {
        return Err(Error::Mismatch("extensions over different base or kernel family".into()));
    }
    let (t1, t2) = (e1.total(), e2.total());
    let (p1, p2) = (&e1.projection, &e2.projection);
    let b = &**e1.base();
    let (over1, over2) = (inverse_objects(p1), inverse_objects(p2));
    let mut element = vec![usize::MAX; t1.num_arrows()];
    for dict in &e1.identifications {
        for (k, &a) in dict.iter().enumerate() {
            element[a] = k;
        }
    }
    // kernel arrow of e1 at base object o ↦ the kernel arrow of e2 naming the same element
    let kt = |a: ArrowId| -> Option<ArrowId> {
        let o = b.src(p1.arrow(a));
        if element[a] == usize::MAX {
            return None;
        }
        e2.identifications[o].get(element[a]).copied()
    };
    let lift: Vec<Option<ArrowId>> = b
        .arrows()
        .map(|f| t1.arrows_from(over1[b.src(f)]).iter().copied().find(|&a| p1.arrow(a) == f))
        .collect();
    let lift: Vec<ArrowId> = match lift.into_iter().collect() {
        Some(l) => l,
        None => return Ok(None),
    };
    let candidates: Vec<Vec<ArrowId>> = b
        .arrows()
        .map(|f| {
            if b.is_identity(f) {
                vec![t2.identity(over2[b.src(f)])]
            } else {
                t2.arrows_from(over2[b.src(f)]).iter().copied().filter(|&a| p2.arrow(a) == f).collect()
            }
        })
        .collect();
    let mut pairs_at = vec![Vec::new(); b.num_arrows()];
    for &(g, f) in b.pairs() {
        pairs_at[g.max(f).max(b.comp(g, f))].push((g, f));
    }

    struct Ctx<'a> {
        t1: &'a FiniteGroupoid,
        t2: &'a FiniteGroupoid,
        b: &'a FiniteGroupoid,
        lift: &'a [ArrowId],
        candidates: &'a [Vec<ArrowId>],
        pairs_at: &'a [Vec<(ArrowId, ArrowId)>],
        kernel1: &'a [Vec<ArrowId>],
        budget: &'a Budget,
    }

    fn go(ctx: &Ctx, kt: &dyn Fn(ArrowId) -> Option<ArrowId>, c: &mut Vec<ArrowId>) -> Result<bool> {
        let f = c.len();
        if f == ctx.candidates.len() {
            return Ok(true);
        }
        let (t1, t2, b) = (ctx.t1, ctx.t2, ctx.b);
        for &cf in &ctx.candidates[f] {
            ctx.budget.charge(1)?;
            let lf = ctx.lift[f];
            let conj_ok = ctx.kernel1[b.src(f)].iter().all(|&k| {
                let lhs = kt(t1.comp(t1.comp(lf, k), t1.inverse(lf)));
                let rhs = kt(k).map(|k2| t2.comp(t2.comp(cf, k2), t2.inverse(cf)));
                lhs.is_some() && lhs == rhs
            });
            if !conj_ok {
                continue;
            }
            c.push(cf);
            let pair_ok = ctx.pairs_at[f].iter().all(|&(g, h)| {
                let gh = b.comp(g, h);
                let s = t1.comp(t1.comp(ctx.lift[g], ctx.lift[h]), t1.inverse(ctx.lift[gh]));
                kt(s).is_some_and(|s2| t2.comp(c[g], c[h]) == t2.comp(s2, c[gh]))
            });
            if pair_ok && go(ctx, kt, c)? {
                return Ok(true);
            }
            c.pop();
        }
        Ok(false)
    }

    let ctx = Ctx {
        t1,
        t2,
        b,
        lift: &lift,
        candidates: &candidates,
        pairs_at: &pairs_at,
        kernel1: &e1.identifications,
        budget,
    };
    let mut c = Vec::with_capacity(b.num_arrows());
    if !go(&ctx, &kt, &mut c)? {
        return Ok(None);
    }
    let mut arrow_map = Vec::with_capacity(t1.num_arrows());
    for a in t1.arrows() {
        let f = p1.arrow(a);
        let k = kt(t1.comp(a, t1.inverse(lift[f])))
            .ok_or_else(|| Error::Structural(format!("arrow {a} does not factor through its lift")))?;
        arrow_map.push(t2.comp(k, c[f]));
    }
    let functor = GroupoidFunctor {
        domain: t1.clone(),
        codomain: t2.clone(),
        object_map: t1.objects().map(|x| over2[p1.obj(x)]).collect(),
        arrow_map,
    };
    let m = ExtensionMorphism {
        source: e1.clone(),
        target: e2.clone(),
        functor,
    };
    let report = validate_extension_morphism(&m)?;
    if !report.is_ok() {
        return Err(Error::Theorem(format!("searched morphism of extensions is invalid: {report}")));
    }
    Ok(Some(m))
}

/// A connected component of a pool: member indices, the least first, with
/// `morphisms[i]` running from the first member to `members[i]`.
#[derive(Clone, Debug)]
pub struct ExtComponent {
    pub members: Vec<usize>,
    pub morphisms: Vec<ExtensionMorphism>,
}

/// Partitions `pool` by existence of a morphism of extensions.
pub fn ext_components(pool: &[Extension], budget: &Budget) -> Result<Vec<ExtComponent>> {
    let mut unassigned: Vec<usize> = (0..pool.len()).collect();
    let mut blocks = Vec::new();
    while let Some(&rep) = unassigned.first() {
        let found: Vec<Option<ExtensionMorphism>> = unassigned[1..]
            .par_iter()
            .map(|&j| find_extension_morphism(&pool[rep], &pool[j], budget))
            .collect::<Result<_>>()?;
        let identity = ExtensionMorphism {
            source: pool[rep].clone(),
            target: pool[rep].clone(),
            functor: GroupoidFunctor::identity(pool[rep].total().clone()),
        };
        let mut block = ExtComponent {
            members: vec![rep],
            morphisms: vec![identity],
        };
        let mut rest = Vec::new();
        for (&j, m) in unassigned[1..].iter().zip(found) {
            match m {
                Some(m) => {
                    block.members.push(j);
                    block.morphisms.push(m);
                }
                None => rest.push(j),
            }
        }
        blocks.push(block);
        unassigned = rest;
    }
    Ok(blocks)
}

/// Guard on the size of a generated pool.
pub const MAX_POOL: usize = 4096;

/// One component of a generated extension: `H × codiscrete(m)` with its
/// projection data, in local numbering.
struct ComponentExtension {
    total: FiniteGroupoid,
    arrow_map: Vec<ArrowId>,
    identifications: Vec<Vec<ArrowId>>,
}

fn component_pool(
    base: &FiniteGroupoid,
    family: &GroupFamily,
    objects: &[ObjId],
    budget: &Budget,
) -> Result<Vec<ComponentExtension>> {
    let first = objects[0];
    let k = family.group(first);
    if objects.iter().any(|&o| !crate::algebra::are_isomorphic(family.group(o), k)) {
        return Ok(Vec::new());
    }
    let (g, gdict) = vertex_group(base, first)?;
    let m = objects.len();
    let connectors: Vec<Vec<ArrowId>> = objects.iter().map(|&o| base.hom(first, o).collect()).collect();
    let mut connector_choices: Vec<Vec<ArrowId>> = vec![Vec::new()];
    for (j, options) in connectors.iter().enumerate() {
        let options = if j == 0 { vec![base.identity(first)] } else { options.clone() };
        connector_choices = connector_choices
            .into_iter()
            .flat_map(|c| {
                options.iter().map(move |&a| {
                    let mut c = c.clone();
                    c.push(a);
                    c
                })
            })
            .collect();
    }
    let mut out = Vec::new();
    for h in small_groups(k.order() * g.order())? {
        let total = FiniteGroupoid::group_times_codiscrete(&h, m);
        let n = h.order();
        let arrow_id = |x: Elem, i: usize, j: usize| (i * m + j) * n + x;
        for phi in all_homomorphisms(&h, &g) {
            let mut hit = vec![false; g.order()];
            phi.iter().for_each(|&y| hit[y] = true);
            if !hit.iter().all(|&b| b) {
                continue;
            }
            let kernel_elems: Vec<Elem> = h.elements().filter(|&x| phi[x] == 0).collect();
            let pos: HashMap<Elem, usize> = kernel_elems.iter().enumerate().map(|(i, &x)| (x, i)).collect();
            let kernel = FiniteGroup::from_rows(
                kernel_elems
                    .iter()
                    .map(|&a| kernel_elems.iter().map(|&b| pos[&h.mul(a, b)]).collect())
                    .collect(),
                None,
            )?;
            let mut ident_choices: Vec<Vec<Vec<ArrowId>>> = vec![Vec::new()];
            for (i, &o) in objects.iter().enumerate() {
                let isos = all_isomorphisms(family.group(o), &kernel);
                ident_choices = ident_choices
                    .into_iter()
                    .flat_map(|c| {
                        isos.iter()
                            .map(|iso| {
                                let mut c = c.clone();
                                c.push(iso.map().iter().map(|&e| arrow_id(kernel_elems[e], i, i)).collect());
                                c
                            })
                            .collect::<Vec<_>>()
                    })
                    .collect();
            }
            for conn in &connector_choices {
                let mut arrow_map = vec![0; total.num_arrows()];
                for i in 0..m {
                    for j in 0..m {
                        for x in h.elements() {
                            let a = base.comp(base.comp(conn[j], gdict[phi[x]]), base.inverse(conn[i]));
                            arrow_map[arrow_id(x, i, j)] = a;
                        }
                    }
                }
                for idents in &ident_choices {
                    budget.charge(1)?;
                    out.push(ComponentExtension {
                        total: total.clone(),
                        arrow_map: arrow_map.clone(),
                        identifications: idents.clone(),
                    });
                    if out.len() > MAX_POOL {
                        return Err(Error::TooLarge(format!("extension pool exceeds {MAX_POOL}")));
                    }
                }
            }
        }
    }
    Ok(out)
}

/// A pool of extensions of `base` by `family` built independently of any
/// cocycle: on each connected component with vertex group `G` and kernel
/// `K`, every census group `H` of order `|K|·|G|`, every surjection `H → G`,
/// every choice of connecting arrows and every identification of the
/// kernels, on the groupoid `H × codiscrete`. Components are combined in
/// all ways.
pub fn generate_pool(base: &Arc<FiniteGroupoid>, family: &Arc<GroupFamily>, budget: &Budget) -> Result<Vec<Extension>> {
    family.check_indexes(base)?;
    let components = connected_components(base);
    let mut per_component = Vec::with_capacity(components.len());
    for objs in &components {
        per_component.push(component_pool(base, family, objs, budget)?);
    }
    let mut combos: Vec<Vec<usize>> = vec![Vec::new()];
    for options in &per_component {
        if combos.len().saturating_mul(options.len()) > MAX_POOL {
            return Err(Error::TooLarge(format!("extension pool exceeds {MAX_POOL}")));
        }
        combos = combos
            .into_iter()
            .flat_map(|c| {
                (0..options.len()).map(move |i| {
                    let mut c = c.clone();
                    c.push(i);
                    c
                })
            })
            .collect();
    }
    let mut pool = Vec::with_capacity(combos.len());
    for combo in combos {
        let parts: Vec<&ComponentExtension> = combo.iter().zip(&per_component).map(|(&i, opts)| &opts[i]).collect();
        let totals: Vec<&FiniteGroupoid> = parts.iter().map(|p| &p.total).collect();
        let total = Arc::new(FiniteGroupoid::disjoint_union(&totals));
        let mut object_map = Vec::with_capacity(base.num_objects());
        let mut arrow_map = Vec::with_capacity(total.num_arrows());
        let mut identifications = vec![Vec::new(); base.num_objects()];
        let mut arr_off = 0;
        for (part, objs) in parts.iter().zip(&components) {
            object_map.extend(objs.iter().copied());
            arrow_map.extend(part.arrow_map.iter().copied());
            for (i, &o) in objs.iter().enumerate() {
                identifications[o] = part.identifications[i].iter().map(|a| a + arr_off).collect();
            }
            arr_off += part.total.num_arrows();
        }
        pool.push(Extension {
            projection: GroupoidFunctor {
                domain: total,
                codomain: base.clone(),
                object_map,
                arrow_map,
            },
            family: family.clone(),
            identifications,
        });
    }
    Ok(pool)
}

/// One line of the interpretation table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InterpretationRow {
    pub class: usize,
    pub representative: usize,
    pub class_size: usize,
    /// Census names (or orders) of the vertex groups of the twisted
    /// representative, one per connected component of the base.
    pub middle_groups: Vec<String>,
    /// Pool members connected to this class's twisted representative.
    pub pool_members: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InterpretationReport {
    pub cocycles: usize,
    pub classes: usize,
    pub components: usize,
    pub pool_size: usize,
    pub rows: Vec<InterpretationRow>,
}

fn middle_groups(t: &TwistedGroupoid) -> Result<Vec<String>> {
    connected_components(t.groupoid())
        .iter()
        .map(|objs| {
            let (g, _) = vertex_group(t.groupoid(), objs[0])?;
            Ok(identify(&g).unwrap_or_else(|| format!("order {}", g.order())))
        })
        .collect()
}

/// Checks that twisting induces a bijection from `H²(base, family)` onto
/// the components of `Ext(base, family)`, the latter certified against the
/// generated pool.
pub fn interpretation_check(
    base: &Arc<FiniteGroupoid>,
    family: &Arc<GroupFamily>,
    budget: &Budget,
) -> Result<InterpretationReport> {
    let h = h2(base, family, budget)?;
    let mut twisted: Vec<TwistedGroupoid> = Vec::with_capacity(h.len());
    let mut reps: Vec<Extension> = Vec::with_capacity(h.len());
    for class in &h.classes {
        let rep = &h.cocycles[class.representative()];
        let t = twist(rep)?;
        let ext = Extension::from_twist(&t);
        let report = validate_extension(&ext)?;
        if !report.is_ok() {
            return Err(Error::Theorem(format!("twisted cocycle is not an extension: {report}")));
        }
        for (&j, tau) in class.members.iter().zip(&class.witnesses).skip(1) {
            let member = &h.cocycles[j];
            let tm = twist(member)?;
            let m = ActionMorphism {
                source: rep.clone(),
                target: member.clone(),
                tau: tau.clone(),
            };
            let functor = twist_morphism_between(&m, &t, &tm)?;
            let em = ExtensionMorphism {
                source: ext.clone(),
                target: Extension::from_twist(&tm),
                functor,
            };
            let report = validate_extension_morphism(&em)?;
            if !report.is_ok() {
                return Err(Error::Theorem(format!(
                    "cohomologous cocycles {} and {j} give unconnected extensions: {report}",
                    class.representative()
                )));
            }
        }
        twisted.push(t);
        reps.push(ext);
    }
    let pairs: Vec<(usize, usize)> = (0..reps.len()).flat_map(|i| (i + 1..reps.len()).map(move |j| (i, j))).collect();
    let links: Vec<Option<ExtensionMorphism>> = pairs
        .par_iter()
        .map(|&(i, j)| find_extension_morphism(&reps[i], &reps[j], budget))
        .collect::<Result<_>>()?;
    if let Some((&(i, j), _)) = pairs.iter().zip(&links).find(|(_, l)| l.is_some()) {
        return Err(Error::Theorem(format!(
            "classes {i} and {j} are not cohomologous but their twisted products are connected"
        )));
    }
    let pool = generate_pool(base, family, budget)?;
    let matches: Vec<Vec<usize>> = pool
        .par_iter()
        .map(|p| {
            let report = validate_extension(p)?;
            if !report.is_ok() {
                return Err(Error::Theorem(format!("generated pool member is not an extension: {report}")));
            }
            let mut hits = Vec::new();
            for (i, r) in reps.iter().enumerate() {
                if find_extension_morphism(r, p, budget)?.is_some() {
                    hits.push(i);
                }
            }
            Ok(hits)
        })
        .collect::<Result<_>>()?;
    let mut rows: Vec<InterpretationRow> = h
        .classes
        .iter()
        .enumerate()
        .map(|(i, c)| {
            Ok(InterpretationRow {
                class: i,
                representative: c.representative(),
                class_size: c.len(),
                middle_groups: middle_groups(&twisted[i])?,
                pool_members: Vec::new(),
            })
        })
        .collect::<Result<_>>()?;
    for (p, hits) in matches.iter().enumerate() {
        match hits.as_slice() {
            [i] => rows[*i].pool_members.push(p),
            [] => {
                return Err(Error::Theorem(format!(
                    "pool extension {p} is connected to no twisted representative"
                )))
            }
            _ => {
                return Err(Error::Theorem(format!(
                    "pool extension {p} is connected to several twisted representatives {hits:?}"
                )))
            }
        }
    }
    Ok(InterpretationReport {
        cocycles: h.cocycles.len(),
        classes: h.len(),
        components: reps.len(),
        pool_size: pool.len(),
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::GroupIso;
    use crate::cocycle::WeakAction;

    fn z4_over_z2(family: FiniteGroup) -> Extension {
        let p = GroupoidFunctor::from_group_hom(&FiniteGroup::cyclic(4), &FiniteGroup::cyclic(2), vec![0, 1, 0, 1]).unwrap();
        Extension::package(p, Arc::new(GroupFamily::new(vec![family]))).unwrap()
    }

    #[test]
    fn classical_extension_is_valid() {
        assert!(validate_extension(&z4_over_z2(FiniteGroup::cyclic(2))).unwrap().is_ok());
        assert!(validate_extension(&z4_over_z2(FiniteGroup::cyclic(3))).unwrap().has("kernel"));
    }

    #[test]
    fn identity_morphism_is_valid() {
        let e = z4_over_z2(FiniteGroup::cyclic(2));
        let m = ExtensionMorphism {
            source: e.clone(),
            target: e.clone(),
            functor: GroupoidFunctor::identity(e.total().clone()),
        };
        assert!(validate_extension_morphism(&m).unwrap().is_ok());
    }

    #[test]
    fn conjugating_the_kernel_is_rejected() {
        let s3 = FiniteGroup::symmetric(3);
        let sign: Vec<Elem> = s3.elements().map(|x| usize::from(s3.element_order(x) == 2)).collect();
        let p = GroupoidFunctor::from_group_hom(&s3, &FiniteGroup::cyclic(2), sign).unwrap();
        let e = Extension::package(p, Arc::new(GroupFamily::new(vec![FiniteGroup::cyclic(3)]))).unwrap();
        assert!(validate_extension(&e).unwrap().is_ok());
        let t = (0..6).find(|&x| s3.element_order(x) == 2).unwrap();
        let conj = s3.elements().map(|x| s3.conj(t, x)).collect();
        let functor = GroupoidFunctor::from_group_hom(&s3, &s3, conj).unwrap();
        let m = ExtensionMorphism {
            source: e.clone(),
            target: e,
            functor,
        };
        assert!(validate_extension_morphism(&m).unwrap().has("kernel"));
    }

    #[test]
    fn pool_sizes() {
        let b = Budget::default();
        let z2 = Arc::new(FiniteGroupoid::from_group(&FiniteGroup::cyclic(2)));
        let z3 = Arc::new(FiniteGroupoid::from_group(&FiniteGroup::cyclic(3)));
        let fam = |k: FiniteGroup| Arc::new(GroupFamily::new(vec![k]));
        assert_eq!(generate_pool(&z2, &fam(FiniteGroup::cyclic(2)), &b).unwrap().len(), 4);
        assert_eq!(generate_pool(&z2, &fam(FiniteGroup::cyclic(3)), &b).unwrap().len(), 4);
        assert_eq!(generate_pool(&z3, &fam(FiniteGroup::cyclic(3)), &b).unwrap().len(), 20);
        let interval = Arc::new(FiniteGroupoid::interval());
        let f = Arc::new(GroupFamily::constant(FiniteGroup::cyclic(2), 2));
        assert_eq!(generate_pool(&interval, &f, &b).unwrap().len(), 1);
    }

    #[test]
    fn interpretation_on_z2_z3() {
        let base = Arc::new(FiniteGroupoid::from_group(&FiniteGroup::cyclic(2)));
        let fam = Arc::new(GroupFamily::new(vec![FiniteGroup::cyclic(3)]));
        let r = interpretation_check(&base, &fam, &Budget::default()).unwrap();
        assert_eq!((r.classes, r.components), (2, 2));
        let mut names: Vec<String> = r.rows.iter().map(|row| row.middle_groups[0].clone()).collect();
        names.sort();
        assert_eq!(names, ["S3", "Z6"]);
    }

    #[test]
    fn twist_and_coboundary_share_a_component() {
        let base = Arc::new(FiniteGroupoid::from_group(&FiniteGroup::cyclic(2)));
        let fam = Arc::new(GroupFamily::new(vec![FiniteGroup::cyclic(3)]));
        let w = WeakAction::new(base.clone(), fam.clone(), vec![GroupIso::identity(3); 2], vec![0, 0, 0, 1]).unwrap();
        let t = crate::cocycle::Cochain1::new(base, fam, vec![0, 2]).unwrap();
        let w2 = crate::cocycle::nabla(&t, &w).unwrap();
        let pool = [Extension::from_twist(&twist(&w).unwrap()), Extension::from_twist(&twist(&w2).unwrap())];
        assert_eq!(ext_components(&pool, &Budget::default()).unwrap().len(), 1);
    }
}
