//! Data-parallel helpers.
//!
//! With the `parallel` feature (on by default) the maps below run on rayon.
//! Without it, or inside [`with_workers`] with a single worker, they run on
//! the calling thread. Results are always returned in input order, so any
//! reduction over them is independent of the worker count.

use std::cell::Cell;
use std::ops::Range;

/// Environment variable that overrides the default worker count.
pub const WORKERS_ENV: &str = "LAMBDA_ROOTS_WORKERS";

thread_local! {
    static SEQUENTIAL: Cell<bool> = const { Cell::new(false) };
}

/// Worker count from [`WORKERS_ENV`], else the number of available cores.
pub fn default_workers() -> usize {
    std::env::var(WORKERS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
}

fn sequential() -> bool {
    !cfg!(feature = "parallel") || SEQUENTIAL.with(|s| s.get())
}

struct SequentialGuard(bool);

impl Drop for SequentialGuard {
    fn drop(&mut self) {
        SEQUENTIAL.with(|s| s.set(self.0));
    }
}

/// Run `f` with `workers` threads. One worker means a plain sequential run
/// on the current thread with no pool at all.
pub fn with_workers<R: Send>(workers: usize, f: impl FnOnce() -> R + Send) -> R {
    if workers <= 1 || !cfg!(feature = "parallel") {
        let _guard = SequentialGuard(SEQUENTIAL.with(|s| s.replace(true)));
        return f();
    }
    #[cfg(feature = "parallel")]
    {
        match rayon::ThreadPoolBuilder::new().num_threads(workers).build() {
            Ok(pool) => pool.install(f),
            Err(_) => f(),
        }
    }
    #[cfg(not(feature = "parallel"))]
    unreachable!()
}

/// Map `f` over `range`, preserving order.
pub fn map_range<T, F>(range: Range<u64>, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> T + Sync + Send,
{
    if sequential() {
        return range.map(f).collect();
    }
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        range.into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    unreachable!()
}

/// Map `f` over a slice, preserving order.
pub fn map_slice<I, T, F>(items: &[I], f: F) -> Vec<T>
where
    I: Sync,
    T: Send,
    F: Fn(&I) -> T + Sync + Send,
{
    if sequential() {
        return items.iter().map(f).collect();
    }
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        items.par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    unreachable!()
}

/// Split `range` into fixed-size shards (independent of worker count) and
/// map `f` over each shard.
pub fn map_shards<T, F>(range: Range<u64>, shard: u64, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(Range<u64>) -> T + Sync + Send,
{
    let shard = shard.max(1);
    let count = (range.end.saturating_sub(range.start)).div_ceil(shard);
    map_range(0..count, |i| {
        let lo = range.start + i * shard;
        f(lo..(lo + shard).min(range.end))
    })
}
