//! Execution strategy for the enumeration kernels.
//!
//! Every exhaustive kernel (torus enumeration, zero counting, codeword
//! enumeration) is written as a map over independent tasks followed by an
//! associative reduction. With the `parallel` feature the map runs on the
//! rayon pool; without it, or with [`Strategy::Sequential`], it runs on the
//! calling thread. Reductions are min/sum/concatenate-then-sort, so results
//! never depend on scheduling.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Strategy {
    Sequential,
    /// Falls back to sequential when built without the `parallel` feature.
    Parallel,
}

impl Default for Strategy {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Strategy::Parallel
        } else {
            Strategy::Sequential
        }
    }
}

impl Strategy {
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Strategy::Parallel
    }
}

/// Maps `f` over `0..n` and folds the results with `reduce`.
pub(crate) fn map_reduce<R, F, G>(strategy: Strategy, n: usize, identity: R, f: F, reduce: G) -> R
where
    R: Send + Sync + Clone,
    F: Fn(usize) -> R + Send + Sync,
    G: Fn(R, R) -> R + Send + Sync,
{
    #[cfg(feature = "parallel")]
    if strategy.is_parallel() {
        return (0..n)
            .into_par_iter()
            .map(f)
            .reduce(|| identity.clone(), &reduce);
    }
    let _ = strategy;
    (0..n).map(f).fold(identity, reduce)
}

/// Maps `f` over `0..n`, keeping results in index order.
pub(crate) fn map_collect<R, F>(strategy: Strategy, n: usize, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(usize) -> R + Send + Sync,
{
    #[cfg(feature = "parallel")]
    if strategy.is_parallel() {
        return (0..n).into_par_iter().map(f).collect();
    }
    let _ = strategy;
    (0..n).map(f).collect()
}

/// Splits `0..total` into at most `parts` contiguous, nonempty ranges.
pub(crate) fn chunk_ranges(total: u64, parts: usize) -> Vec<std::ops::Range<u64>> {
    if total == 0 {
        return Vec::new();
    }
    let parts = (parts.max(1) as u64).min(total);
    let base = total / parts;
    let extra = total % parts;
    let mut out = Vec::with_capacity(parts as usize);
    let mut start = 0;
    for i in 0..parts {
        let len = base + u64::from(i < extra);
        out.push(start..start + len);
        start += len;
    }
    out
}

/// A task count that keeps every worker busy without drowning small jobs.
pub(crate) fn task_count(strategy: Strategy, work: u64) -> usize {
    if !strategy.is_parallel() || work < 4096 {
        return 1;
    }
    #[cfg(feature = "parallel")]
    {
        let threads = rayon::current_num_threads().max(1);
        ((work / 1024) as usize).clamp(1, threads * 8)
    }
    #[cfg(not(feature = "parallel"))]
    {
        1
    }
}
