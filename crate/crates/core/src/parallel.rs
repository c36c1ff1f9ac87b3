//! Bounded worker pools.

use crate::error::{Error, Result};

/// Runs `f` inside a rayon pool of exactly `workers` threads.
pub fn with_workers<T: Send>(workers: usize, f: impl FnOnce() -> T + Send) -> Result<T> {
    if workers == 0 {
        return Err(Error::invalid("workers must be at least 1"));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::invariant(format!("cannot start worker pool: {e}")))?;
    Ok(pool.install(f))
}
