//! Size and time guards shared by all engines.
//!
//! Every guard is checked explicitly; exceeding one is an error, never a
//! silent truncation. The rating base guard exists because the engines work
//! in the powerset semiring `2^N`: workloads grow with `2^|N|`.

use std::time::{Duration, Instant};

use crate::{Error, Result};

/// Hard upper bound on the rating base: rating values are 64-bit sets.
pub const RATING_BASE_CAP: usize = 64;

/// Configurable guards.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Limits {
    /// Maximum number of elements in any constructed monoid.
    pub max_monoid: usize,
    /// Maximum size of the rating base `N` (the rating set is `2^N`).
    pub max_rating_base: usize,
    /// Maximum number of work items (frontier triples, saturation pairs).
    pub max_frontier: usize,
    /// Wall-clock budget for a whole query, if any.
    pub max_wall: Option<Duration>,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_monoid: 512,
            max_rating_base: 16,
            max_frontier: 200_000,
            max_wall: Some(Duration::from_secs(300)),
        }
    }
}

impl Limits {
    /// Guards loose enough for test corpora: larger rating base, no clock.
    pub fn relaxed() -> Self {
        Limits {
            max_monoid: 4096,
            max_rating_base: RATING_BASE_CAP,
            max_frontier: 2_000_000,
            max_wall: None,
        }
    }
}

/// A running query's view of the guards: limits plus a start timestamp.
#[derive(Debug, Clone)]
pub struct Budget {
    limits: Limits,
    start: Instant,
}

impl Budget {
    pub fn new(limits: &Limits) -> Self {
        Budget {
            limits: limits.clone(),
            start: Instant::now(),
        }
    }

    pub fn limits(&self) -> &Limits {
        &self.limits
    }

    pub fn check_monoid(&self, size: usize) -> Result<()> {
        if size > self.limits.max_monoid {
            return Err(Error::Limit {
                guard: "monoid size",
                limit: self.limits.max_monoid,
                actual: size,
            });
        }
        Ok(())
    }

    pub fn check_rating_base(&self, size: usize) -> Result<()> {
        let limit = self.limits.max_rating_base.min(RATING_BASE_CAP);
        if size > limit {
            return Err(Error::Limit {
                guard: "rating base",
                limit,
                actual: size,
            });
        }
        Ok(())
    }

    pub fn check_frontier(&self, items: usize) -> Result<()> {
        if items > self.limits.max_frontier {
            return Err(Error::Limit {
                guard: "frontier size",
                limit: self.limits.max_frontier,
                actual: items,
            });
        }
        Ok(())
    }

    /// Cheap enough to call inside fixpoint loops.
    pub fn check_wall(&self) -> Result<()> {
        if let Some(max) = self.limits.max_wall {
            let elapsed = self.start.elapsed();
            if elapsed > max {
                return Err(Error::WallClock {
                    elapsed_ms: elapsed.as_millis() as u64,
                    limit_ms: max.as_millis() as u64,
                });
            }
        }
        Ok(())
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget::new(&Limits::default())
    }
}
