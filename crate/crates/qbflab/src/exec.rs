//! Data-parallel helpers with a sequential fallback.
//!
//! With the `parallel` feature (default) the hot enumeration loops run on
//! rayon; without it the same call sites compile to plain iterators. Results
//! are order-preserving either way, so output is identical in both modes.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Maps `f` over `0..n`, collecting results in index order.
#[cfg(feature = "parallel")]
pub(crate) fn map_range<U, F>(n: u64, f: F) -> Vec<U>
where
    U: Send,
    F: Fn(u64) -> U + Sync + Send,
{
    (0..n).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn map_range<U, F>(n: u64, f: F) -> Vec<U>
where
    F: Fn(u64) -> U,
{
    (0..n).map(f).collect()
}

/// Maps `f` over a slice, collecting results in order.
#[cfg(feature = "parallel")]
pub(crate) fn map_slice<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    items.par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn map_slice<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    F: Fn(&T) -> U,
{
    items.iter().map(f).collect()
}
