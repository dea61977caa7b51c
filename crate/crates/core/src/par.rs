//! Index-space map/reduce with a rayon backend and a sequential fallback.
//!
//! Every reduction used by the checkers is a total-order minimum or maximum,
//! so the result does not depend on how rayon splits the range.

use std::ops::Range;

use serde::{Deserialize, Serialize};

/// How a workload is executed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Execution {
    Sequential,
    /// Uses the rayon pool when the `parallel` feature is enabled, otherwise
    /// behaves exactly like `Sequential`.
    #[default]
    Parallel,
}

impl Execution {
    /// True when work will actually be spread over threads.
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Execution::Parallel
    }
}

/// Maps every index of `range` and folds the results with `reduce`.
///
/// `reduce` must be associative and commutative for the result to be
/// independent of scheduling.
pub fn map_reduce<T, M, R>(exec: Execution, range: Range<usize>, identity: T, map: M, reduce: R) -> T
where
    T: Send + Sync + Clone,
    M: Fn(usize) -> T + Sync + Send,
    R: Fn(T, T) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec == Execution::Parallel {
        use rayon::prelude::*;
        return range.into_par_iter().map(&map).reduce(|| identity.clone(), &reduce);
    }
    let _ = exec;
    range.map(map).fold(identity, reduce)
}

/// Maps every index of `range` into a vector, preserving order.
pub fn map_collect<T, M>(exec: Execution, range: Range<usize>, map: M) -> Vec<T>
where
    T: Send,
    M: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec == Execution::Parallel {
        use rayon::prelude::*;
        return range.into_par_iter().map(map).collect();
    }
    let _ = exec;
    range.map(map).collect()
}

/// Installs a global pool with `threads` workers. Has no effect without the
/// `parallel` feature, and silently keeps an existing pool.
pub fn configure_threads(threads: usize) {
    #[cfg(feature = "parallel")]
    {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
    }
    #[cfg(not(feature = "parallel"))]
    let _ = threads;
}
