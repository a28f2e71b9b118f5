//! Execution strategy for the data-parallel kernels.
//!
//! Every kernel that loops over values, iterations or frequencies takes an
//! [`Execution`]. With the `parallel` feature (on by default) the parallel
//! strategy runs on the rayon global pool; without it, `Parallel` silently
//! degrades to the sequential path. Results never depend on the strategy:
//! reductions are over integers or are assembled in index order.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Execution {
    Sequential,
    Parallel,
}

impl Default for Execution {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Execution::Parallel
        } else {
            Execution::Sequential
        }
    }
}

impl Execution {
    /// Whether this strategy actually fans out in the current build.
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Execution::Parallel
    }

    /// Maps `0..len` through `f`, returning results in index order.
    pub fn map_indexed<T, F>(self, len: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self == Execution::Parallel {
            return (0..len).into_par_iter().map(f).collect();
        }
        (0..len).map(f).collect()
    }

    /// Maps a slice through `f`, returning results in input order.
    pub fn map_slice<S, T, F>(self, items: &[S], f: F) -> Vec<T>
    where
        S: Sync,
        T: Send,
        F: Fn(&S) -> T + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self == Execution::Parallel {
            return items.par_iter().map(f).collect();
        }
        items.iter().map(f).collect()
    }

    /// Folds fixed-size integer tallies over a slice and merges them by
    /// component-wise addition.
    pub fn tally<S, F>(self, items: &[S], bins: usize, f: F) -> Vec<u64>
    where
        S: Sync,
        F: Fn(&S, &mut [u64]) + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self == Execution::Parallel {
            return items
                .par_iter()
                .fold(
                    || vec![0u64; bins],
                    |mut acc, item| {
                        f(item, &mut acc);
                        acc
                    },
                )
                .reduce(
                    || vec![0u64; bins],
                    |mut a, b| {
                        a.iter_mut().zip(&b).for_each(|(x, y)| *x += y);
                        a
                    },
                );
        }
        let mut acc = vec![0u64; bins];
        for item in items {
            f(item, &mut acc);
        }
        acc
    }

    /// Counts the items satisfying `pred`.
    pub fn count<S, F>(self, items: &[S], pred: F) -> usize
    where
        S: Sync,
        F: Fn(&S) -> bool + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self == Execution::Parallel {
            return items.par_iter().filter(|x| pred(x)).count();
        }
        items.iter().filter(|x| pred(x)).count()
    }
}
