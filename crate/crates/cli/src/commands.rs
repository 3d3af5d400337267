use std::fs;
use std::path::Path;
use std::sync::Arc;

use gpdcoh::algebra::census::small_groups;
use gpdcoh::algebra::{validate_functor, validate_group, validate_groupoid, FiniteGroupoid, GroupFamily, GroupoidFunctor};
use gpdcoh::cocycle::{enumerate_cocycles, enumerate_weakly_normalized, h2, validate_cocycle, validate_morphism, weak_identity_upgrade};
use gpdcoh::extensions::{interpretation_check, validate_extension, Extension};
use gpdcoh::grothendieck::{
    equivalence_check, fiber_action_with, gamma_with, is_opfibration, kernel_family, twist, validate_cleavage, Cleavage,
    Lifting,
};
use gpdcoh::nerve::{
    cocycle_to_map, nerve_of_aut, nerve_of_groupoid, representation_check, validate_simplicial_map,
    validate_simplicial_set, NervePair, SimplicialMap, TruncatedSimplicialSet,
};
use gpdcoh::two_groupoid::build_aut;
use gpdcoh::{Budget, Error, Report};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::de::DeserializeOwned;
use serde::Deserialize;
use serde_json::{json, Value};

use crate::schema::*;

/// A failed command: exit status plus the report explaining it.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub violations: Vec<ViolationDoc>,
}

impl Failure {
    pub fn new(code: u8, rule: &str, at: Vec<usize>, message: impl Into<String>) -> Self {
        Self { code, violations: vec![ViolationDoc { rule: rule.into(), at, message: message.into() }] }
    }

    fn parse(message: impl Into<String>) -> Self {
        Self::new(2, "parse", Vec::new(), message)
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let (code, rule) = match &e {
            Error::Structural(_) => (2, "structural"),
            Error::UnknownObject(_) => (2, "unknown-object"),
            Error::Mismatch(_) => (2, "mismatch"),
            Error::TooLarge(_) => (2, "too-large"),
            Error::Invalid { .. } => (1, "invalid"),
            Error::Precondition(_) => (1, "precondition"),
            Error::Theorem(_) => (1, "theorem"),
            Error::Budget { .. } => (3, "budget"),
        };
        if let Error::Invalid { what, report } = &e {
            let mut f = Failure::new(code, rule, Vec::new(), format!("invalid {what}"));
            f.violations.extend(ReportDoc::from_report("", report).violations);
            return f;
        }
        Failure::new(code, rule, Vec::new(), e.to_string())
    }
}

pub type Outcome = std::result::Result<(Document, u8), Failure>;

fn report_outcome(doc: ReportDoc) -> Outcome {
    let code = if doc.ok { 0 } else { 1 };
    Ok((Document::new(Kind::Report, &doc), code))
}

// loading

#[derive(Deserialize)]
struct Typed<T> {
    #[allow(dead_code)]
    kind: Kind,
    #[allow(dead_code)]
    version: String,
    payload: T,
}

pub struct Input {
    pub kind: Kind,
    text: String,
    path: String,
}

impl Input {
    pub fn read(path: &Path) -> std::result::Result<Self, Failure> {
        let shown = path.display().to_string();
        let text = fs::read_to_string(path).map_err(|e| Failure::new(2, "io", Vec::new(), format!("{shown}: {e}")))?;
        let doc: Document = serde_json::from_str(&text).map_err(|e| Failure::parse(format!("{shown}: {e}")))?;
        if doc.version != VERSION {
            return Err(Failure::parse(format!("{shown}: unsupported version {:?}", doc.version)));
        }
        Ok(Self { kind: doc.kind, text, path: shown })
    }

    pub fn payload<T: DeserializeOwned>(&self) -> std::result::Result<T, Failure> {
        serde_json::from_str::<Typed<T>>(&self.text)
            .map(|t| t.payload)
            .map_err(|e| Failure::parse(format!("{}: {e}", self.path)))
    }

    fn expect(&self, kinds: &[Kind]) -> std::result::Result<(), Failure> {
        if kinds.contains(&self.kind) {
            return Ok(());
        }
        let wanted: Vec<String> = kinds.iter().map(Kind::to_string).collect();
        Err(Failure::parse(format!("{}: expected a {} document, found {}", self.path, wanted.join(" or "), self.kind)))
    }
}

/// A groupoid document, or a group document read as a one-object groupoid.
fn load_groupoid(path: &Path) -> std::result::Result<Arc<FiniteGroupoid>, Failure> {
    let input = Input::read(path)?;
    input.expect(&[Kind::Groupoid, Kind::Group])?;
    Ok(match input.kind {
        Kind::Group => Arc::new(FiniteGroupoid::from_group(&input.payload::<GroupDoc>()?.to_group()?)),
        _ => input.payload::<GroupoidDoc>()?.to_groupoid()?,
    })
}

/// A family document, or a group document placed at every object.
fn load_family(path: &Path, base: &FiniteGroupoid) -> std::result::Result<Arc<GroupFamily>, Failure> {
    let input = Input::read(path)?;
    input.expect(&[Kind::Family, Kind::Group])?;
    let k = match input.kind {
        Kind::Group => Arc::new(GroupFamily::constant(input.payload::<GroupDoc>()?.to_group()?, base.num_objects())),
        _ => input.payload::<FamilyDoc>()?.to_family()?,
    };
    k.check_indexes(base)?;
    Ok(k)
}

struct Fibration {
    projection: GroupoidFunctor,
    family: Arc<GroupFamily>,
    identifications: Vec<Vec<usize>>,
}

/// An extension document as given, or a functor document with kernels read
/// off as vertex groups.
fn load_fibration(path: &Path) -> std::result::Result<Fibration, Failure> {
    let input = Input::read(path)?;
    input.expect(&[Kind::Extension, Kind::Functor])?;
    let projection = match input.kind {
        Kind::Extension => input.payload::<ExtensionDoc>()?.to_extension()?.projection,
        _ => input.payload::<FunctorDoc>()?.to_functor()?,
    };
    let report = validate_functor(&projection)?;
    if !report.is_ok() {
        return Err(Error::Invalid { what: "functor", report }.into());
    }
    if let Lifting::NoLift { object, arrow } = is_opfibration(&projection)? {
        return Err(Failure::new(
            1,
            "fibration",
            vec![object, arrow],
            format!("no arrow out of object {object} lies over base arrow {arrow}"),
        ));
    }
    if !projection.is_bijective_on_objects() {
        return Err(Failure::new(1, "precondition", Vec::new(), "projection is not bijective on objects"));
    }
    if input.kind == Kind::Extension {
        let e = input.payload::<ExtensionDoc>()?.to_extension()?;
        let report = validate_extension(&e)?;
        if !report.is_ok() {
            return Err(Error::Invalid { what: "extension", report }.into());
        }
        return Ok(Fibration { projection, family: e.family, identifications: e.identifications });
    }
    let (family, identifications) = kernel_family(&projection)?;
    Ok(Fibration { projection, family: Arc::new(family), identifications })
}

/// Identities lift to identities; every other base arrow to the least arrow
/// over it.
pub fn canonical_cleavage(p: &GroupoidFunctor) -> Cleavage {
    let (e, b) = (&*p.domain, &*p.codomain);
    let lift = b
        .arrows()
        .map(|f| {
            if b.is_identity(f) {
                let x = e.objects().find(|&x| p.obj(x) == b.src(f)).expect("bijective on objects");
                e.identity(x)
            } else {
                e.arrows().find(|&a| p.arrow(a) == f).expect("fibration lifts every arrow")
            }
        })
        .collect();
    Cleavage { fibration: p.clone(), lift }
}

fn load_cleavage(path: Option<&Path>, fib: &Fibration) -> std::result::Result<Cleavage, Failure> {
    let Some(path) = path else {
        return Ok(canonical_cleavage(&fib.projection));
    };
    let input = Input::read(path)?;
    input.expect(&[Kind::Cleavage])?;
    let c = input.payload::<CleavageDoc>()?.to_cleavage()?;
    if c.fibration != fib.projection {
        return Err(Failure::new(1, "precondition", Vec::new(), "the cleavage is for a different fibration"));
    }
    let report = validate_cleavage(&c)?;
    if !report.is_ok() {
        return Err(Error::Invalid { what: "cleavage", report }.into());
    }
    Ok(c)
}

// commands

fn prefixed(report: &Report, rule: &str, at: usize) -> Vec<ViolationDoc> {
    report
        .violations
        .iter()
        .map(|v| ViolationDoc {
            rule: format!("{rule}.{}", v.rule),
            at: std::iter::once(at).chain(v.at.iter().copied()).collect(),
            message: v.message.clone(),
        })
        .collect()
}

pub fn validate(path: &Path, kind: Option<Kind>) -> Outcome {
    let input = Input::read(path)?;
    if let Some(k) = kind {
        input.expect(&[k])?;
    }
    let subject = format!("validate {}", input.kind);
    let report = match input.kind {
        Kind::Group => {
            let g: GroupDoc = input.payload()?;
            g.check_shape()?;
            validate_group(g.order, &g.table)?
        }
        Kind::Groupoid => validate_groupoid(&input.payload::<GroupoidDoc>()?.data())?,
        Kind::Family => {
            let k: FamilyDoc = input.payload()?;
            let mut doc = ReportDoc::from_report(subject, &Report::new());
            for (&o, g) in &k.groups {
                g.check_shape()?;
                doc.violations.extend(prefixed(&validate_group(g.order, &g.table)?, "group", o));
            }
            k.to_family()?;
            doc.ok = doc.violations.is_empty();
            return report_outcome(doc);
        }
        Kind::Cocycle => validate_cocycle(&input.payload::<CocycleDoc>()?.to_action()?),
        Kind::Cochain => {
            let t = input.payload::<CochainDoc>()?.to_cochain()?;
            let mut r = Report::new();
            for u in t.base().arrows().filter(|&u| t.base().is_identity(u) && t.value(u) != 0) {
                r.push("normalization", vec![u], format!("τ({u}) is not the unit on an identity"));
            }
            r
        }
        Kind::Morphism => validate_morphism(&input.payload::<MorphismDoc>()?.to_morphism()?)?,
        Kind::Extension => validate_extension(&input.payload::<ExtensionDoc>()?.to_extension()?)?,
        Kind::Functor => validate_functor(&input.payload::<FunctorDoc>()?.to_functor()?)?,
        Kind::Cleavage => validate_cleavage(&input.payload::<CleavageDoc>()?.to_cleavage()?)?,
        Kind::Nerve => validate_simplicial_set(&input.payload::<NerveDoc>()?.to_nerve()?),
        Kind::Map => {
            let m: MapDoc = input.payload()?;
            let (g, k) = (m.base.to_groupoid()?, m.family.to_family()?);
            let pair = NervePair::new(&g, &k)?;
            validate_simplicial_map(&SimplicialMap::new(pair.source, pair.target, m.levels)?)
        }
        Kind::Report => {
            let r: ReportDoc = input.payload()?;
            let mut out = Report::new();
            if r.ok != r.violations.is_empty() {
                out.push("consistency", Vec::new(), "ok must hold exactly when there are no violations");
            }
            out
        }
    };
    report_outcome(ReportDoc::from_report(subject, &report))
}

pub fn h2_classes(groupoid: &Path, family: &Path, budget: &Budget, witnesses: bool) -> Outcome {
    let g = load_groupoid(groupoid)?;
    let k = load_family(family, &g)?;
    let h = h2(&g, &k, budget)?;
    let classes: Vec<Value> = h
        .classes
        .iter()
        .map(|c| {
            let mut v = json!({
                "size": c.len(),
                "representative": CocycleBody::of(&h.cocycles[c.representative()]),
            });
            if witnesses {
                v["members"] = c
                    .members
                    .iter()
                    .zip(&c.witnesses)
                    .map(|(&m, t)| {
                        json!({
                            "cocycle": CocycleBody::of(&h.cocycles[m]),
                            "tau": CochainDoc::of(t).tau,
                        })
                    })
                    .collect();
            }
            v
        })
        .collect();
    let result = json!({
        "base": GroupoidDoc::from(g.as_ref()),
        "family": FamilyDoc::from(k.as_ref()),
        "cocycles": h.cocycles.len(),
        "classes": classes,
    });
    report_outcome(ReportDoc::success("h2", result))
}

fn load_cocycle(path: &Path) -> std::result::Result<gpdcoh::cocycle::WeakAction, Failure> {
    let input = Input::read(path)?;
    input.expect(&[Kind::Cocycle])?;
    let w = input.payload::<CocycleDoc>()?.to_action()?;
    let report = validate_cocycle(&w);
    if !report.is_ok() {
        return Err(Error::Invalid { what: "cocycle", report }.into());
    }
    Ok(w)
}

pub fn twist_cmd(cocycle: &Path) -> Outcome {
    let w = load_cocycle(cocycle)?;
    let e = Extension::from_twist(&twist(&w)?);
    let report = validate_extension(&e)?;
    if !report.is_ok() {
        return Err(Error::Invalid { what: "extension", report }.into());
    }
    Ok((Document::new(Kind::Extension, &ExtensionDoc::of(&e)), 0))
}

pub fn fiber_cmd(fibration: &Path, cleavage: Option<&Path>) -> Outcome {
    let fib = load_fibration(fibration)?;
    let c = load_cleavage(cleavage, &fib)?;
    let w = fiber_action_with(&c, fib.family.clone(), &fib.identifications)?;
    let report = validate_cocycle(&w);
    if !report.is_ok() {
        return Err(Error::Invalid { what: "cocycle", report }.into());
    }
    Ok((Document::new(Kind::Cocycle, &CocycleDoc::of(&w)), 0))
}

pub fn gamma_cmd(fibration: &Path, cleavage: Option<&Path>) -> Outcome {
    let fib = load_fibration(fibration)?;
    let c = load_cleavage(cleavage, &fib)?;
    let (_, functor) = gamma_with(&c, fib.family.clone(), &fib.identifications)?;
    let report = validate_functor(&functor)?;
    if !report.is_ok() || !functor.is_isomorphism() {
        return Err(Failure::new(1, "theorem", Vec::new(), "the comparison functor is not an isomorphism"));
    }
    Ok((Document::new(Kind::Functor, &FunctorDoc::from(&functor)), 0))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Theorem {
    Interpretation,
    Representation,
    WeakIdentity,
    Equivalence,
}

pub fn check(theorem: Theorem, inputs: &[std::path::PathBuf], budget: &Budget) -> Outcome {
    let arity = if theorem == Theorem::Equivalence { 1 } else { 2 };
    if inputs.len() != arity {
        return Err(Failure::parse(format!("this check takes {arity} input document(s), got {}", inputs.len())));
    }
    if theorem == Theorem::Equivalence {
        let fib = load_fibration(&inputs[0])?;
        let summary = equivalence_check(&fib.projection, budget)?;
        let witnesses: Vec<Value> = summary.witnesses.iter().map(|t| json!(CochainDoc::of(t).tau)).collect();
        let result = json!({ "cleavages": summary.cleavages, "witnesses": witnesses });
        return report_outcome(ReportDoc::success("check equivalence", result));
    }
    let g = load_groupoid(&inputs[0])?;
    let k = load_family(&inputs[1], &g)?;
    match theorem {
        Theorem::Interpretation => {
            let r = interpretation_check(&g, &k, budget)?;
            let table: Vec<Value> = r
                .rows
                .iter()
                .map(|row| {
                    json!({
                        "class": row.class,
                        "representative": row.representative,
                        "class_size": row.class_size,
                        "middle_groups": row.middle_groups,
                        "pool_members": row.pool_members,
                    })
                })
                .collect();
            let result = json!({
                "cocycles": r.cocycles,
                "classes": r.classes,
                "components": r.components,
                "pool_size": r.pool_size,
                "table": table,
            });
            report_outcome(ReportDoc::success("check interpretation", result))
        }
        Theorem::Representation => {
            let r = representation_check(&g, &k, budget)?;
            let table: Vec<Value> = r
                .rows
                .iter()
                .map(|row| {
                    json!({
                        "homotopy_class": row.homotopy_class,
                        "h2_class": row.h2_class,
                        "size": row.size,
                        "representative": row.representative,
                    })
                })
                .collect();
            let result = json!({
                "cocycles": r.cocycles,
                "maps": r.maps,
                "raw_maps": r.raw_maps,
                "h2_classes": r.h2_classes,
                "homotopy_classes": r.homotopy_classes,
                "table": table,
            });
            report_outcome(ReportDoc::success("check representation", result))
        }
        Theorem::WeakIdentity => {
            let candidates = enumerate_weakly_normalized(&g, &k, budget)?;
            let cocycles = enumerate_cocycles(&g, &k, budget)?;
            let mut report = Report::new();
            for (i, w) in candidates.iter().enumerate() {
                match weak_identity_upgrade(w) {
                    Ok(up) => {
                        for v in validate_cocycle(&up).violations {
                            report.push(v.rule, std::iter::once(i).chain(v.at).collect(), v.message);
                        }
                    }
                    Err(e) => report.push("upgrade", vec![i], e.to_string()),
                }
            }
            if candidates != cocycles {
                report.push("candidates", Vec::new(), "weakly normalized candidates differ from normalized cocycles");
            }
            let mut doc = ReportDoc::from_report("check weak-identity", &report);
            doc.result = json!({ "candidates": candidates.len(), "cocycles": cocycles.len() });
            report_outcome(doc)
        }
        Theorem::Equivalence => unreachable!("handled above"),
    }
}

pub fn nerve_cmd(path: &Path) -> Outcome {
    let input = Input::read(path)?;
    input.expect(&[Kind::Groupoid, Kind::Group, Kind::Family])?;
    let s = match input.kind {
        Kind::Family => {
            let k = input.payload::<FamilyDoc>()?.to_family()?;
            nerve_of_aut(&Arc::new(build_aut(k)?))
        }
        _ => nerve_of_groupoid(&load_groupoid(path)?),
    };
    Ok((Document::new(Kind::Nerve, &NerveDoc::of(&s)), 0))
}

pub fn map_cmd(cocycle: &Path) -> Outcome {
    let w = load_cocycle(cocycle)?;
    let pair = NervePair::new(w.base(), w.family())?;
    let m = cocycle_to_map(&w, &pair)?;
    let doc = MapDoc { base: w.base().as_ref().into(), family: w.family().as_ref().into(), levels: m.levels };
    Ok((Document::new(Kind::Map, &doc), 0))
}

fn fuzz_nerves() -> Vec<TruncatedSimplicialSet> {
    let bg = |n| Arc::new(FiniteGroupoid::from_group(&gpdcoh::algebra::FiniteGroup::cyclic(n)));
    let aut = |orders: &[usize]| {
        let groups = orders.iter().map(|&n| gpdcoh::algebra::FiniteGroup::cyclic(n)).collect();
        Arc::new(build_aut(Arc::new(GroupFamily::new(groups))).expect("cyclic families"))
    };
    vec![
        nerve_of_groupoid(&bg(2)),
        nerve_of_groupoid(&bg(3)),
        nerve_of_groupoid(&Arc::new(FiniteGroupoid::interval())),
        nerve_of_aut(&aut(&[2])),
        nerve_of_aut(&aut(&[3])),
        nerve_of_aut(&aut(&[2, 2])),
    ]
}

/// Changes `slot` to a different value below `range`.
fn bump(rng: &mut StdRng, slot: &mut usize, range: usize) {
    *slot = (*slot + rng.gen_range(1..range)) % range;
}

/// Mutates one cell of a random group table or nerve table and checks that
/// validation notices.
pub fn fuzz(seed: u64, cases: usize) -> Outcome {
    let mut rng = StdRng::seed_from_u64(seed);
    let groups: Vec<_> = (2..=8).flat_map(|n| small_groups(n).expect("census order")).collect();
    let nerves = fuzz_nerves();
    let mut report = Report::new();
    let (mut group_cases, mut nerve_cases) = (0usize, 0usize);
    for case in 0..cases {
        if rng.gen_bool(0.5) {
            let g = &groups[rng.gen_range(0..groups.len())];
            let mut rows = g.rows();
            let n = g.order();
            let (i, j) = (rng.gen_range(0..n), rng.gen_range(0..n));
            bump(&mut rng, &mut rows[i][j], n);
            group_cases += 1;
            if validate_group(n, &rows)?.is_ok() {
                report.push("group", vec![case, i, j], "mutated group table passed validation");
            }
        } else {
            let s = &nerves[rng.gen_range(0..nerves.len())];
            let (r, mut f, mut d, c, src) = s.clone().into_parts();
            let faces = rng.gen_bool(0.5);
            let (table, n, range) = if faces {
                let n = rng.gen_range(1..=3);
                (&mut f[n], n, r[n - 1].len())
            } else {
                let n = rng.gen_range(0..3);
                (&mut d[n], n, r[n + 1].len())
            };
            if range < 2 {
                continue;
            }
            let x = rng.gen_range(0..table.len());
            let i = rng.gen_range(0..table[x].len());
            bump(&mut rng, &mut table[x][i], range);
            nerve_cases += 1;
            let mutated = TruncatedSimplicialSet::from_parts(r, f, d, c, src)?;
            if validate_simplicial_set(&mutated).is_ok() {
                let rule = if faces { "face" } else { "degeneracy" };
                report.push(rule, vec![case, n, x, i], "mutated nerve passed validation");
            }
        }
    }
    let mut doc = ReportDoc::from_report("fuzz", &report);
    doc.result = json!({
        "seed": seed,
        "cases": cases,
        "group_mutations": group_cases,
        "nerve_mutations": nerve_cases,
    });
    report_outcome(doc)
}
