//! Worker-count configuration shared by the parallel searches.

/// Environment variable overriding the worker count.
pub const THREADS_ENV: &str = "COLEXCODE_THREADS";

/// Workers to use: `COLEXCODE_THREADS` if set to a positive integer, else the available parallelism.
pub fn worker_count() -> usize {
    std::env::var(THREADS_ENV)
        .ok()
        .and_then(|s| s.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1))
}
