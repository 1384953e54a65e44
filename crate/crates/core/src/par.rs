//! Grid mapping with an optional rayon backend.
//!
//! Every grid in this crate is a map of a pure function over independent
//! points, so the parallel and sequential paths produce bit-identical
//! results; order is preserved by construction.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Map `f` over `items`, in parallel when the `parallel` feature is enabled.
///
/// Splits are floored at 8 items so per-task overhead stays amortized for
/// quadrature-heavy points without serializing small grids.
#[cfg(feature = "parallel")]
pub fn map_grid<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    items.par_iter().with_min_len(8).map(f).collect()
}

/// Map `f` over `items`, in parallel when the `parallel` feature is enabled.
#[cfg(not(feature = "parallel"))]
pub fn map_grid<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    F: Fn(&T) -> U,
{
    items.iter().map(f).collect()
}

/// Sequential reference path, kept unconditionally for benchmarks and for
/// checking that the parallel path changes nothing.
pub fn map_grid_seq<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    F: Fn(&T) -> U,
{
    items.iter().map(f).collect()
}
