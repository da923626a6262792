//! Thin switch between data-parallel and sequential batch evaluation.
//!
//! With the `parallel` feature (default) the batch helpers fan out over
//! rayon; without it they run sequentially with identical results. Both
//! preserve input order, so downstream output is deterministic either way.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Maps a function over a slice, in parallel when enabled.
pub fn batch_map<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        items.par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.iter().map(f).collect()
    }
}

/// Sequential twin of [`batch_map`], kept available under every feature
/// set so benchmarks can compare the two code paths directly.
pub fn batch_map_seq<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    F: Fn(&T) -> U,
{
    items.iter().map(f).collect()
}

/// Evaluates a predicate for indices `0..n`, in parallel when enabled.
pub fn batch_test<F>(n: usize, f: F) -> Vec<bool>
where
    F: Fn(usize) -> bool + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        (0..n).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..n).map(f).collect()
    }
}
