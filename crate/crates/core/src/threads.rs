//! Library-owned thread pool.
//!
//! Parallel sections run inside a dedicated rayon pool whose size is read
//! once from the `REPSIEVE_THREADS` environment variable (`0` or unset =
//! automatic). Results are always reduced in a fixed order, so outputs are
//! identical across thread counts.

use std::sync::OnceLock;

static POOL: OnceLock<rayon::ThreadPool> = OnceLock::new();

/// The shared pool honoring `REPSIEVE_THREADS`.
pub fn pool() -> &'static rayon::ThreadPool {
    POOL.get_or_init(|| {
        let requested = std::env::var("REPSIEVE_THREADS")
            .ok()
            .and_then(|s| s.trim().parse::<usize>().ok())
            .unwrap_or(0);
        let mut builder = rayon::ThreadPoolBuilder::new();
        if requested > 0 {
            builder = builder.num_threads(requested);
        }
        builder
            .build()
            .expect("failed to build worker thread pool")
    })
}

#[cfg(test)]
mod tests {
    #[test]
    fn pool_is_usable() {
        let sum: u64 = super::pool().install(|| {
            use rayon::prelude::*;
            (0..1000u64).into_par_iter().sum()
        });
        assert_eq!(sum, 499_500);
    }
}
