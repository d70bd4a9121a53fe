//! Data-parallel helpers. With the `parallel` feature the maps run on the
//! rayon pool; without it they fall back to plain iterators. Results are
//! always returned in input order so downstream reductions are identical
//! either way.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[cfg(feature = "parallel")]
pub fn map_collect<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    items.par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn map_collect<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    F: Fn(&T) -> R,
{
    items.iter().map(f).collect()
}

/// Map over `0..n` in order.
#[cfg(feature = "parallel")]
pub fn map_range<R, F>(n: usize, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(usize) -> R + Sync + Send,
{
    (0..n).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn map_range<R, F>(n: usize, f: F) -> Vec<R>
where
    F: Fn(usize) -> R,
{
    (0..n).map(f).collect()
}

/// Sum of `f(i)` over `0..n` for integer-valued `f`; exact, so the
/// reduction order does not matter.
#[cfg(feature = "parallel")]
pub fn sum_range_u64<F>(n: u64, chunk: u64, f: F) -> u64
where
    F: Fn(u64, u64) -> u64 + Sync + Send,
{
    let chunks = n.div_ceil(chunk.max(1));
    (0..chunks)
        .into_par_iter()
        .map(|c| f(c * chunk, ((c + 1) * chunk).min(n)))
        .sum()
}

#[cfg(not(feature = "parallel"))]
pub fn sum_range_u64<F>(n: u64, chunk: u64, f: F) -> u64
where
    F: Fn(u64, u64) -> u64,
{
    let chunks = n.div_ceil(chunk.max(1));
    (0..chunks)
        .map(|c| f(c * chunk, ((c + 1) * chunk).min(n)))
        .sum()
}

pub fn is_parallel() -> bool {
    cfg!(feature = "parallel")
}
