use super::group::FiniteGroup;
use super::groupoid::{FiniteGroupoid, ObjId};
use crate::{Error, Result};

/// Groups indexed by the objects `0..n` of a base groupoid.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GroupFamily {
    groups: Vec<FiniteGroup>,
}

impl GroupFamily {
    pub fn new(groups: Vec<FiniteGroup>) -> Self {
        Self { groups }
    }

    /// The same group at each of `n` objects.
    pub fn constant(group: FiniteGroup, n: usize) -> Self {
        Self {
            groups: vec![group; n],
        }
    }

    pub fn len(&self) -> usize {
        self.groups.len()
    }

    pub fn is_empty(&self) -> bool {
        self.groups.is_empty()
    }

    #[inline]
    pub fn group(&self, o: ObjId) -> &FiniteGroup {
        &self.groups[o]
    }

    pub fn groups(&self) -> &[FiniteGroup] {
        &self.groups
    }

    pub fn max_order(&self) -> usize {
        self.groups.iter().map(FiniteGroup::order).max().unwrap_or(0)
    }

    /// The family must be indexed by exactly the objects of `base`.
    pub fn check_indexes(&self, base: &FiniteGroupoid) -> Result<()> {
        if self.groups.len() != base.num_objects() {
            return Err(Error::Structural(format!(
                "family indexes {} objects, groupoid has {}",
                self.groups.len(),
                base.num_objects()
            )));
        }
        Ok(())
    }
}
