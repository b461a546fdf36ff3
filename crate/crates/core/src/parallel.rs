// SPDX-License-Identifier: Apache-2.0

//! Runs work on a rayon pool of a requested size. Callers collect results
//! in index order, so outputs never depend on the degree of parallelism.

use rayon::ThreadPoolBuilder;

/// Executes `f` inside a pool of `threads` workers (0 = rayon default).
pub fn with_threads<R: Send>(threads: usize, f: impl FnOnce() -> R + Send) -> R {
    match ThreadPoolBuilder::new().num_threads(threads).build() {
        Ok(pool) => pool.install(f),
        Err(e) => {
            log::warn!("could not build a {threads}-thread pool ({e}); running on the global pool");
            f()
        }
    }
}
