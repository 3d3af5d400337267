use std::sync::atomic::{AtomicU64, Ordering};

use crate::{Error, Result};

/// Node budget used when the caller does not supply one.
pub const DEFAULT_BUDGET: u64 = 50_000_000;

/// A shared count of search nodes; exhaustive searches charge one unit per
/// node visited and fail with [`Error::Budget`] once the limit is passed.
#[derive(Debug)]
pub struct Budget {
    limit: u64,
    used: AtomicU64,
}

impl Budget {
    pub fn new(limit: u64) -> Self {
        Self {
            limit,
            used: AtomicU64::new(0),
        }
    }

    pub fn unlimited() -> Self {
        Self::new(u64::MAX)
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn used(&self) -> u64 {
        self.used.load(Ordering::Relaxed)
    }

    #[inline]
    pub fn charge(&self, nodes: u64) -> Result<()> {
        let before = self.used.fetch_add(nodes, Ordering::Relaxed);
        if before.saturating_add(nodes) > self.limit {
            Err(Error::Budget { budget: self.limit })
        } else {
            Ok(())
        }
    }
}

impl Default for Budget {
    fn default() -> Self {
        Self::new(DEFAULT_BUDGET)
    }
}
