//! Thin data-parallel layer.
//!
//! Every helper returns results in index order, so output never depends on
//! the number of worker threads. Floating point reductions go through
//! [`sum_f64`], which sums fixed-size chunks and then the chunk totals in
//! order.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

const MIN_LEN: usize = 1024;
const SUM_CHUNK: usize = 4096;

#[cfg(feature = "parallel")]
pub fn map_range<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    (0..n).into_par_iter().with_min_len(MIN_LEN).map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn map_range<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    (0..n).map(f).collect()
}

pub fn map_slice<S, T, F>(items: &[S], f: F) -> Vec<T>
where
    S: Sync,
    T: Send,
    F: Fn(&S) -> T + Sync + Send,
{
    map_range(items.len(), |i| f(&items[i]))
}

#[cfg(feature = "parallel")]
pub fn for_each_mut<T, F>(items: &mut [T], f: F)
where
    T: Send,
    F: Fn(usize, &mut T) + Sync + Send,
{
    items
        .par_iter_mut()
        .with_min_len(MIN_LEN)
        .enumerate()
        .for_each(|(i, x)| f(i, x));
}

#[cfg(not(feature = "parallel"))]
pub fn for_each_mut<T, F>(items: &mut [T], f: F)
where
    T: Send,
    F: Fn(usize, &mut T) + Sync + Send,
{
    items.iter_mut().enumerate().for_each(|(i, x)| f(i, x));
}

pub fn sum_u64<F>(n: usize, f: F) -> u64
where
    F: Fn(usize) -> u64 + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        (0..n).into_par_iter().with_min_len(MIN_LEN).map(f).sum()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..n).map(f).sum()
    }
}

/// Order-stable float sum of `f(0) + ... + f(n-1)`.
pub fn sum_f64<F>(n: usize, f: F) -> f64
where
    F: Fn(usize) -> f64 + Sync + Send,
{
    let chunks = n.div_ceil(SUM_CHUNK);
    let partial = map_range(chunks, |c| {
        let lo = c * SUM_CHUNK;
        let hi = (lo + SUM_CHUNK).min(n);
        (lo..hi).map(&f).sum::<f64>()
    });
    partial.iter().sum()
}

/// Run `f` on a dedicated pool with `threads` workers.
#[cfg(feature = "parallel")]
pub fn with_threads<R: Send>(threads: usize, f: impl FnOnce() -> R + Send) -> R {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.max(1))
        .build()
        .expect("thread pool");
    pool.install(f)
}

#[cfg(not(feature = "parallel"))]
pub fn with_threads<R: Send>(_threads: usize, f: impl FnOnce() -> R + Send) -> R {
    f()
}

pub fn current_threads() -> usize {
    #[cfg(feature = "parallel")]
    {
        rayon::current_num_threads()
    }
    #[cfg(not(feature = "parallel"))]
    {
        1
    }
}
