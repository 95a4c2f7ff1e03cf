//! Parallel fan-out over independent jobs with deterministic reduction.
//!
//! Results are always collected in job-index order, so output does not depend
//! on the number of workers or on completion order.

use std::sync::atomic::{AtomicUsize, Ordering};

use rayon::prelude::*;

/// Environment variable consulted for the default worker count.
pub const WORKERS_ENV: &str = "POLYASSEMBLY_WORKERS";

pub fn default_workers() -> usize {
    std::env::var(WORKERS_ENV)
        .ok()
        .and_then(|v| v.parse().ok())
        .filter(|&n| n > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
}

/// Runs `f` inside a dedicated pool of `workers` threads.
pub fn with_workers<T: Send>(workers: usize, f: impl FnOnce() -> T + Send) -> T {
    rayon::ThreadPoolBuilder::new().num_threads(workers.max(1)).build().expect("failed to start worker pool").install(f)
}

/// Maps `job` over `0..n` on the current pool, returning results in index order.
pub fn par_map<T, F>(n: usize, job: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    (0..n).into_par_iter().map(job).collect()
}

/// Completion counter that reports to stderr.
#[derive(Debug)]
pub struct Progress {
    label: String,
    total: usize,
    done: AtomicUsize,
    enabled: bool,
}

impl Progress {
    pub fn new(label: impl Into<String>, total: usize, enabled: bool) -> Self {
        Progress { label: label.into(), total, done: AtomicUsize::new(0), enabled }
    }

    pub fn tick(&self, what: &str) {
        let n = self.done.fetch_add(1, Ordering::Relaxed) + 1;
        if self.enabled {
            eprintln!("[{}] {n}/{} {what}", self.label, self.total);
        }
    }

    pub fn done(&self) -> usize {
        self.done.load(Ordering::Relaxed)
    }
}
