//! Deterministic parallel maps over independent scan cells.

use rayon::prelude::*;

use crate::error::Result;

/// Evaluates `f(0..n)` in parallel and returns the results in index order.
pub fn map_indexed<T: Send>(n: usize, f: impl Fn(usize) -> Result<T> + Sync + Send) -> Result<Vec<T>> {
    (0..n).into_par_iter().map(f).collect()
}

/// Sizes the global worker pool. Only the first call has an effect.
pub fn configure_threads(threads: usize) {
    let _ = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.max(1))
        .build_global();
}
