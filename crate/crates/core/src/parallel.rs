//! Thread pool control. Results never depend on the thread count: parallel
//! folds merge partial results in a fixed order.

use crate::error::{Error, Result};

/// Runs `f` on a dedicated pool of `threads` workers.
pub fn with_threads<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> Result<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.max(1))
        .build()
        .map_err(|e| Error::InvariantViolation(format!("thread pool: {e}")))?;
    Ok(pool.install(f))
}

pub fn current_threads() -> usize {
    rayon::current_num_threads()
}
