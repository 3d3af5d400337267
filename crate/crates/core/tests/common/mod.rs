#![allow(dead_code)]

use std::sync::Arc;

use gpdcoh::algebra::{FiniteGroup, FiniteGroupoid, GroupFamily};

pub struct Instance {
    pub name: &'static str,
    pub base: Arc<FiniteGroupoid>,
    pub family: Arc<GroupFamily>,
}

fn instance(name: &'static str, base: FiniteGroupoid, groups: Vec<FiniteGroup>) -> Instance {
    Instance { name, base: Arc::new(base), family: Arc::new(GroupFamily::new(groups)) }
}

pub fn z(n: usize) -> FiniteGroup {
    FiniteGroup::cyclic(n)
}

pub fn bz(n: usize) -> FiniteGroupoid {
    FiniteGroupoid::from_group(&z(n))
}

/// The desk-scale instance list shared by the theorem checks.
pub fn instances() -> Vec<Instance> {
    vec![
        instance("Z2 on Z2", bz(2), vec![z(2)]),
        instance("Z2 on Z3", bz(2), vec![z(3)]),
        instance("Z3 on Z3", bz(3), vec![z(3)]),
        instance("interval on Z2,Z2", FiniteGroupoid::interval(), vec![z(2), z(2)]),
        instance("Z2+Z2 on Z2,Z3", FiniteGroupoid::disjoint_union(&[&bz(2), &bz(2)]), vec![z(2), z(3)]),
    ]
}
