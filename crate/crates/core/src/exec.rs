//! Data-parallel helpers with a sequential fallback.
//!
//! Every parallel entry point in the crate goes through these helpers so that
//! the sequential and parallel schedules produce bit-identical results: work
//! items are pure functions of their index, and reductions break ties on the
//! lowest index.

use std::ops::Range;

use serde::{Deserialize, Serialize};

/// How index-parallel loops are scheduled.
///
/// `Parallel` uses rayon when the `parallel` feature is enabled and silently
/// degrades to `Sequential` otherwise.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Execution {
    Sequential,
    Parallel,
}

impl Default for Execution {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Execution::Parallel
        } else {
            Execution::Sequential
        }
    }
}

impl Execution {
    /// Whether this mode actually runs on the thread pool in this build.
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Execution::Parallel
    }
}

/// Minimum of `f` over `range`, skipping `None`. Ties resolve to the lowest index.
pub(crate) fn min_by_index<F>(exec: Execution, range: Range<u64>, f: F) -> Option<(f64, u64)>
where
    F: Fn(u64) -> Option<f64> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        use rayon::prelude::*;
        return range
            .into_par_iter()
            .filter_map(|i| f(i).map(|v| (v, i)))
            .reduce_with(pick_min);
    }
    let _ = exec;
    range.filter_map(|i| f(i).map(|v| (v, i))).reduce(pick_min)
}

fn pick_min(a: (f64, u64), b: (f64, u64)) -> (f64, u64) {
    // total order on (value, index); NaN never reaches here from the callers
    match a.0.partial_cmp(&b.0) {
        Some(std::cmp::Ordering::Less) => a,
        Some(std::cmp::Ordering::Greater) => b,
        _ => {
            if a.1 <= b.1 {
                a
            } else {
                b
            }
        }
    }
}

/// `(0..n).map(f).collect()` with results in index order regardless of schedule.
pub(crate) fn map_indices<T, F>(exec: Execution, n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        use rayon::prelude::*;
        return (0..n).into_par_iter().map(f).collect();
    }
    let _ = exec;
    (0..n).map(f).collect()
}
