//! Index-range parallelism over scoped threads.
//!
//! Work is split into fixed-size chunks that workers claim from a shared
//! counter. Results are keyed by chunk, so the outcome never depends on the
//! number of workers or on scheduling.

use std::ops::Range;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Mutex;

pub const CHUNK: u64 = 256;

/// Default worker count: the machine's available parallelism.
pub fn default_workers() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

fn chunks(total: u64) -> u64 {
    total.div_ceil(CHUNK)
}

fn chunk_range(chunk: u64, total: u64) -> Range<u64> {
    chunk * CHUNK..((chunk + 1) * CHUNK).min(total)
}

/// Smallest index in `0..total` satisfying `pred`.
pub fn find_first<P>(total: u64, workers: usize, pred: P) -> Option<u64>
where
    P: Fn(u64) -> bool + Sync,
{
    let workers = workers.max(1);
    if workers == 1 {
        return (0..total).find(|&i| pred(i));
    }
    let next = AtomicU64::new(0);
    let best = AtomicU64::new(u64::MAX);
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let chunk = next.fetch_add(1, Ordering::Relaxed);
                if chunk >= chunks(total) || chunk * CHUNK >= best.load(Ordering::Relaxed) {
                    return;
                }
                if let Some(i) = chunk_range(chunk, total).find(|&i| pred(i)) {
                    best.fetch_min(i, Ordering::Relaxed);
                    return;
                }
            });
        }
    });
    match best.into_inner() {
        u64::MAX => None,
        i => Some(i),
    }
}

/// Applies `map` to each chunk of `0..total` and returns the results in
/// chunk order.
pub fn map_chunks<T, M>(total: u64, workers: usize, map: M) -> Vec<T>
where
    T: Send,
    M: Fn(Range<u64>) -> T + Sync,
{
    let workers = workers.max(1);
    if workers == 1 {
        return (0..chunks(total)).map(|c| map(chunk_range(c, total))).collect();
    }
    let next = AtomicU64::new(0);
    let results = Mutex::new(Vec::new());
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let chunk = next.fetch_add(1, Ordering::Relaxed);
                if chunk >= chunks(total) {
                    return;
                }
                let value = map(chunk_range(chunk, total));
                results.lock().expect("worker panicked").push((chunk, value));
            });
        }
    });
    let mut results = results.into_inner().expect("worker panicked");
    results.sort_by_key(|(chunk, _)| *chunk);
    results.into_iter().map(|(_, v)| v).collect()
}
