//! The committed corpus: input documents built from the library, and the
//! binary's output on them. Set `GPDCOH_BLESS=1` to rewrite both.

mod common;

use std::fs;
use std::path::Path;
use std::sync::Arc;

use gpdcoh::algebra::{FiniteGroup, FiniteGroupoid, GroupFamily, GroupoidFunctor};
use gpdcoh::cocycle::{enumerate_cocycles, h2, ActionMorphism, WeakAction};
use gpdcoh::extensions::Extension;
use gpdcoh::grothendieck::{twist, Cleavage};
use gpdcoh::nerve::{cocycle_to_map, nerve_of_aut, nerve_of_groupoid, NervePair, TruncatedSimplicialSet};
use gpdcoh::two_groupoid::build_aut;
use gpdcoh::Budget;
use gpdcoh_cli::render::render;
use gpdcoh_cli::schema::*;
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::json;

use common::{bz, z};

fn doc<T: Serialize>(kind: Kind, payload: &T) -> String {
    render(&serde_json::to_value(Document::new(kind, payload)).unwrap())
}

fn family(groups: Vec<FiniteGroup>) -> Arc<GroupFamily> {
    Arc::new(GroupFamily::new(groups))
}

fn cocycles(base: FiniteGroupoid, groups: Vec<FiniteGroup>) -> Vec<WeakAction> {
    enumerate_cocycles(&Arc::new(base), &family(groups), &Budget::default()).unwrap()
}

fn sign_hom(g: &FiniteGroup) -> Vec<usize> {
    let r = g.elements().find(|&x| g.element_order(x) == 3).unwrap();
    g.generated_subgroup(&[r]).iter().map(|&even| usize::from(!even)).collect()
}

/// Every input document of the corpus, by file name.
fn inputs() -> Vec<(&'static str, String)> {
    let mut out: Vec<(&'static str, String)> = Vec::new();
    let v4 = FiniteGroup::direct_product(&z(2), &z(2));
    let s3 = FiniteGroup::symmetric(3);
    for (name, g) in [
        ("group_z2.json", z(2)),
        ("group_z3.json", z(3)),
        ("group_z4.json", z(4)),
        ("group_v4.json", v4.clone()),
        ("group_s3.json", s3.clone()),
    ] {
        out.push((name, doc(Kind::Group, &GroupDoc::from(&g))));
    }
    let broken = GroupDoc { order: 2, table: vec![vec![0, 1], vec![1, 1]], label: None };
    out.push(("group_broken.json", doc(Kind::Group, &broken)));
    out.push(("malformed.json", "{\n  \"kind\": \"group\",\n  \"version\": \"1\",\n  \"payload\": {\"order\": 2,\n".into()));

    for (name, g) in [
        ("groupoid_bz2.json", bz(2)),
        ("groupoid_bz3.json", bz(3)),
        ("groupoid_interval.json", FiniteGroupoid::interval()),
        ("groupoid_bz2_bz2.json", FiniteGroupoid::disjoint_union(&[&bz(2), &bz(2)])),
    ] {
        out.push((name, doc(Kind::Groupoid, &GroupoidDoc::from(&g))));
    }
    for (name, groups) in [
        ("family_z2.json", vec![z(2)]),
        ("family_z3.json", vec![z(3)]),
        ("family_z2_z2.json", vec![z(2), z(2)]),
        ("family_z2_z3.json", vec![z(2), z(3)]),
    ] {
        out.push((name, doc(Kind::Family, &FamilyDoc::from(family(groups).as_ref()))));
    }

    // σ_11 = 0 and σ_11 = 1 under the trivial action
    let ws = cocycles(bz(2), vec![z(2)]);
    let nontrivial = ws.iter().find(|w| w.sigma_values().contains(&1)).unwrap();
    let trivial = ws.iter().find(|w| !w.sigma_values().contains(&1)).unwrap();
    out.push(("cocycle_z2_z2_0.json", doc(Kind::Cocycle, &CocycleDoc::of(trivial))));
    out.push(("cocycle_z2_z2_1.json", doc(Kind::Cocycle, &CocycleDoc::of(nontrivial))));
    let t = twist(nontrivial).unwrap();
    out.push(("extension_z2_z2_1.json", doc(Kind::Extension, &ExtensionDoc::of(&Extension::from_twist(&t)))));
    let pair = NervePair::new(nontrivial.base(), nontrivial.family()).unwrap();
    let m = cocycle_to_map(nontrivial, &pair).unwrap();
    let map = MapDoc {
        base: nontrivial.base().as_ref().into(),
        family: nontrivial.family().as_ref().into(),
        levels: m.levels,
    };
    out.push(("map_z2_z2_1.json", doc(Kind::Map, &map)));

    let g = Arc::new(bz(2));
    let k = family(vec![z(3)]);
    let h = h2(&g, &k, &Budget::default()).unwrap();
    let class = h.classes.iter().find(|c| c.len() > 1).unwrap();
    let (rep, j, tau) = (&h.cocycles[class.representative()], class.members[1], &class.witnesses[1]);
    out.push(("cochain_z2_z3.json", doc(Kind::Cochain, &CochainDoc::of(tau))));
    let morphism = ActionMorphism { source: rep.clone(), target: h.cocycles[j].clone(), tau: tau.clone() };
    out.push(("morphism_z2_z3.json", doc(Kind::Morphism, &MorphismDoc::of(&morphism))));
    // under the inversion action any change of σ_uu breaks the cocycle condition
    let w = h.cocycles.iter().find(|w| !w.f(1).is_identity()).unwrap();
    let mut sigma = w.sigma_values().to_vec();
    let pos = g.pair_index(1, 1).unwrap();
    sigma[pos] = (sigma[pos] + 1) % 3;
    let bad = WeakAction::new(g.clone(), k.clone(), w.f_maps().to_vec(), sigma).unwrap();
    out.push(("cocycle_z2_z3_broken.json", doc(Kind::Cocycle, &CocycleDoc::of(&bad))));

    let z4_z2 = GroupoidFunctor::from_group_hom(&z(4), &z(2), vec![0, 1, 0, 1]).unwrap();
    let v4_z2 = GroupoidFunctor::from_group_hom(&v4, &z(2), vec![0, 1, 0, 1]).unwrap();
    let s3_z2 = GroupoidFunctor::from_group_hom(&s3, &z(2), sign_hom(&s3)).unwrap();
    let not_fibration = GroupoidFunctor::from_group_hom(&FiniteGroup::trivial(), &z(2), vec![0]).unwrap();
    out.push(("functor_z4_z2.json", doc(Kind::Functor, &FunctorDoc::from(&z4_z2))));
    out.push(("functor_v4_z2.json", doc(Kind::Functor, &FunctorDoc::from(&v4_z2))));
    out.push(("functor_s3_z2.json", doc(Kind::Functor, &FunctorDoc::from(&s3_z2))));
    out.push(("functor_not_fibration.json", doc(Kind::Functor, &FunctorDoc::from(&not_fibration))));
    let cleavage = Cleavage { fibration: z4_z2, lift: vec![0, 3] };
    out.push(("cleavage_z4_z2.json", doc(Kind::Cleavage, &CleavageDoc::of(&cleavage))));

    let n = nerve_of_groupoid(&Arc::new(bz(2)));
    out.push(("nerve_bz2.json", doc(Kind::Nerve, &NerveDoc::of(&n))));
    let (r, mut f, d, c, src) = n.into_parts();
    f[2][3][0] = (f[2][3][0] + 1) % r[1].len();
    let broken = TruncatedSimplicialSet::from_parts(r, f, d, c, src).unwrap();
    out.push(("nerve_bz2_broken.json", doc(Kind::Nerve, &NerveDoc::of(&broken))));
    let aut = nerve_of_aut(&Arc::new(build_aut(family(vec![z(3)])).unwrap()));
    out.push(("nerve_aut_z3.json", doc(Kind::Nerve, &NerveDoc::of(&aut))));

    let report = ReportDoc {
        subject: "example".into(),
        ok: false,
        violations: vec![ViolationDoc { rule: "identity".into(), at: vec![0], message: "F(1) is not the identity".into() }],
        result: json!({"cases": 1}),
    };
    out.push(("report_example.json", doc(Kind::Report, &report)));
    out
}

/// Binary invocations with their golden output and exit status.
const CASES: &[(&str, &[&str], i32)] = &[
    ("validate_group_z2", &["validate", "group_z2.json"], 0),
    ("validate_group_broken", &["validate", "group_broken.json"], 1),
    ("validate_malformed", &["validate", "malformed.json"], 2),
    ("validate_wrong_kind", &["validate", "group_z2.json", "--kind", "cocycle"], 2),
    ("validate_cocycle_broken", &["validate", "cocycle_z2_z3_broken.json"], 1),
    ("validate_nerve_broken", &["validate", "nerve_bz2_broken.json"], 1),
    ("h2_z2_z2", &["h2", "groupoid_bz2.json", "group_z2.json"], 0),
    ("h2_z2_z3_witnesses", &["h2", "groupoid_bz2.json", "family_z3.json", "--witnesses"], 0),
    ("h2_interval_z2_z3", &["h2", "groupoid_interval.json", "family_z2_z3.json"], 0),
    ("h2_budget", &["h2", "groupoid_bz3.json", "family_z3.json", "--budget", "5"], 3),
    ("twist_z2_z2_1", &["twist", "cocycle_z2_z2_1.json"], 0),
    ("twist_broken", &["twist", "cocycle_z2_z3_broken.json"], 1),
    ("fiber_canonical", &["fiber", "extension_z2_z2_1.json", "--canonical"], 0),
    ("fiber_cleavage", &["fiber", "functor_z4_z2.json", "--cleavage", "cleavage_z4_z2.json"], 0),
    ("fiber_not_fibration", &["fiber", "functor_not_fibration.json", "--canonical"], 1),
    ("gamma_z4_z2", &["gamma", "functor_z4_z2.json"], 0),
    ("check_interpretation_z2_z3", &["check", "interpretation", "groupoid_bz2.json", "group_z3.json"], 0),
    ("check_representation_z2_z2", &["check", "representation", "groupoid_bz2.json", "group_z2.json"], 0),
    ("check_weak_identity_z2_z3", &["check", "weak-identity", "groupoid_bz2.json", "group_z3.json"], 0),
    ("check_equivalence_s3_z2", &["check", "equivalence", "functor_s3_z2.json"], 0),
    ("nerve_bz2", &["nerve", "groupoid_bz2.json"], 0),
    ("nerve_aut_z3", &["nerve", "family_z3.json"], 0),
    ("map_z2_z2_1", &["map", "cocycle_z2_z2_1.json"], 0),
    ("fuzz", &["fuzz", "--seed", "7", "--cases", "200"], 0),
];

fn compare_or_bless(path: &Path, actual: &[u8]) {
    if common::blessing() {
        fs::create_dir_all(path.parent().unwrap()).unwrap();
        fs::write(path, actual).unwrap();
        return;
    }
    let expected = fs::read(path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    assert!(expected == actual, "{} differs from the generated bytes", path.display());
}

#[test]
fn corpus_inputs_are_current() {
    for (name, text) in inputs() {
        compare_or_bless(&common::inputs_dir().join(name), text.as_bytes());
    }
}

#[test]
fn outputs_match_golden_files() {
    for &(name, args, code) in CASES {
        let (stdout, status) = common::run(args);
        assert_eq!(status, code, "{name}: {}", String::from_utf8_lossy(&stdout));
        compare_or_bless(&common::corpus().join("expected").join(format!("{name}.json")), &stdout);
    }
}

#[test]
fn constructions_close_up() {
    let read = |name: &str| fs::read(common::inputs_dir().join(name)).unwrap();
    let (out, code) = common::run(&["twist", "cocycle_z2_z2_1.json"]);
    assert_eq!((code, out), (0, read("extension_z2_z2_1.json")));
    let (out, code) = common::run(&["fiber", "extension_z2_z2_1.json", "--canonical"]);
    assert_eq!((code, out), (0, read("cocycle_z2_z2_1.json")));
    let (out, code) = common::run(&["nerve", "groupoid_bz2.json"]);
    assert_eq!((code, out), (0, read("nerve_bz2.json")));
    let (out, code) = common::run(&["nerve", "family_z3.json"]);
    assert_eq!((code, out), (0, read("nerve_aut_z3.json")));
    let (out, code) = common::run(&["map", "cocycle_z2_z2_1.json"]);
    assert_eq!((code, out), (0, read("map_z2_z2_1.json")));
}

#[test]
fn output_flag_writes_the_same_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("out.json");
    let (stdout, code) = common::run(&["h2", "groupoid_bz2.json", "group_z2.json"]);
    let (quiet, code2) = common::run(&["h2", "groupoid_bz2.json", "group_z2.json", "--output", target.to_str().unwrap()]);
    assert_eq!((code, code2), (0, 0));
    assert!(quiet.is_empty());
    assert_eq!(fs::read(&target).unwrap(), stdout);
}

fn reprint<T: Serialize + DeserializeOwned>(text: &str) -> String {
    let d: Document = serde_json::from_str(text).unwrap();
    let payload: T = d.payload().unwrap();
    doc(d.kind, &payload)
}

/// Parses into the domain type and prints back.
fn through_domain(text: &str) -> String {
    let d: Document = serde_json::from_str(text).unwrap();
    match d.kind {
        Kind::Group => doc(d.kind, &GroupDoc::from(&d.payload::<GroupDoc>().unwrap().to_group().unwrap())),
        Kind::Groupoid => doc(d.kind, &GroupoidDoc::from(d.payload::<GroupoidDoc>().unwrap().to_groupoid().unwrap().as_ref())),
        Kind::Family => doc(d.kind, &FamilyDoc::from(d.payload::<FamilyDoc>().unwrap().to_family().unwrap().as_ref())),
        Kind::Cocycle => doc(d.kind, &CocycleDoc::of(&d.payload::<CocycleDoc>().unwrap().to_action().unwrap())),
        Kind::Cochain => doc(d.kind, &CochainDoc::of(&d.payload::<CochainDoc>().unwrap().to_cochain().unwrap())),
        Kind::Morphism => doc(d.kind, &MorphismDoc::of(&d.payload::<MorphismDoc>().unwrap().to_morphism().unwrap())),
        Kind::Extension => doc(d.kind, &ExtensionDoc::of(&d.payload::<ExtensionDoc>().unwrap().to_extension().unwrap())),
        Kind::Functor => doc(d.kind, &FunctorDoc::from(&d.payload::<FunctorDoc>().unwrap().to_functor().unwrap())),
        Kind::Cleavage => doc(d.kind, &CleavageDoc::of(&d.payload::<CleavageDoc>().unwrap().to_cleavage().unwrap())),
        Kind::Nerve => doc(d.kind, &NerveDoc::of(&d.payload::<NerveDoc>().unwrap().to_nerve().unwrap())),
        Kind::Map | Kind::Report => text.to_string(),
    }
}

#[test]
fn every_kind_round_trips() {
    let mut kinds = std::collections::BTreeSet::new();
    for (name, text) in inputs() {
        if name == "malformed.json" {
            assert!(serde_json::from_str::<Document>(&text).is_err());
            continue;
        }
        let d: Document = serde_json::from_str(&text).unwrap();
        kinds.insert(d.kind.to_string());
        let again = match d.kind {
            Kind::Group => reprint::<GroupDoc>(&text),
            Kind::Groupoid => reprint::<GroupoidDoc>(&text),
            Kind::Family => reprint::<FamilyDoc>(&text),
            Kind::Cocycle => reprint::<CocycleDoc>(&text),
            Kind::Cochain => reprint::<CochainDoc>(&text),
            Kind::Morphism => reprint::<MorphismDoc>(&text),
            Kind::Extension => reprint::<ExtensionDoc>(&text),
            Kind::Nerve => reprint::<NerveDoc>(&text),
            Kind::Map => reprint::<MapDoc>(&text),
            Kind::Report => reprint::<ReportDoc>(&text),
            Kind::Functor => reprint::<FunctorDoc>(&text),
            Kind::Cleavage => reprint::<CleavageDoc>(&text),
        };
        assert_eq!(again, text, "{name}");
        if name != "group_broken.json" {
            assert_eq!(through_domain(&text), text, "{name}");
        }
    }
    assert_eq!(kinds.len(), 12);
}

#[test]
fn every_input_validates_as_expected() {
    for (name, _) in inputs() {
        let expected = match name {
            "malformed.json" => 2,
            "group_broken.json" | "cocycle_z2_z3_broken.json" | "nerve_bz2_broken.json" => 1,
            _ => 0,
        };
        let (out, code) = common::run(&["validate", name]);
        assert_eq!(code, expected, "{name}: {}", String::from_utf8_lossy(&out));
    }
}
