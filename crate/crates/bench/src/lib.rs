//! Fixtures shared by the benchmarks.

use std::sync::Arc;

use gpdcoh::algebra::{FiniteGroup, FiniteGroupoid, GroupFamily};

pub struct Fixture {
    pub name: &'static str,
    pub base: Arc<FiniteGroupoid>,
    pub family: Arc<GroupFamily>,
}

fn bz(n: usize) -> FiniteGroupoid {
    FiniteGroupoid::from_group(&FiniteGroup::cyclic(n))
}

fn fixture(name: &'static str, base: FiniteGroupoid, groups: Vec<FiniteGroup>) -> Fixture {
    Fixture { name, base: Arc::new(base), family: Arc::new(GroupFamily::new(groups)) }
}

/// The instance list of the theorem checks, plus two larger classical cases.
pub fn fixtures() -> Vec<Fixture> {
    let z = FiniteGroup::cyclic;
    vec![
        fixture("z2_z2", bz(2), vec![z(2)]),
        fixture("z2_z3", bz(2), vec![z(3)]),
        fixture("z3_z3", bz(3), vec![z(3)]),
        fixture("interval_z2_z2", FiniteGroupoid::interval(), vec![z(2), z(2)]),
        fixture("z2+z2_z2_z3", FiniteGroupoid::disjoint_union(&[&bz(2), &bz(2)]), vec![z(2), z(3)]),
        fixture("v4_z2", FiniteGroupoid::from_group(&FiniteGroup::direct_product(&z(2), &z(2))), vec![z(2)]),
        fixture("z2_s3", bz(2), vec![FiniteGroup::symmetric(3)]),
    ]
}

/// The fixtures small enough for the extension and homotopy pipelines.
pub fn theorem_fixtures() -> Vec<Fixture> {
    fixtures().into_iter().take(5).collect()
}
