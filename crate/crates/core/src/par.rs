// Copyright (c) 2026, The linnik Authors
// SPDX-License-Identifier: Apache-2.0

//! Data-parallel helpers. With the `parallel` feature these go through rayon;
//! otherwise they fall back to plain iterators. Output order is always the
//! input order, so results are identical either way.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Maps `f` over `items`, preserving order.
pub(crate) fn map_collect<T, U, F>(items: &[T], f: F) -> Vec<U>
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

/// Maps `f` over the integers in `lo..hi`, preserving order.
pub(crate) fn map_range<U, F>(lo: i64, hi: i64, f: F) -> Vec<U>
where
    U: Send,
    F: Fn(i64) -> U + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        (lo..hi).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (lo..hi).map(f).collect()
    }
}

/// Runs `f` on a pool with `jobs` workers, or on the global pool when `jobs`
/// is `None`. Sequential builds ignore `jobs`.
pub fn with_jobs<R: Send>(jobs: Option<usize>, f: impl FnOnce() -> R + Send) -> R {
    #[cfg(feature = "parallel")]
    {
        match jobs {
            Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build() {
                Ok(pool) => pool.install(f),
                Err(_) => f(),
            },
            None => f(),
        }
    }
    #[cfg(not(feature = "parallel"))]
    {
        let _ = jobs;
        f()
    }
}
