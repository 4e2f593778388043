//! Data-parallel helpers with a sequential fallback.
//!
//! With the `parallel` feature (on by default) batch work is spread over the
//! rayon pool; without it, or when [`Exec::Sequential`] is requested, the same
//! closures run in order on the calling thread.

/// Execution strategy for batch computations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Exec {
    Sequential,
    #[default]
    Parallel,
}

impl Exec {
    /// Maps `f` over `items`, preserving order.
    pub fn map<T, R, F>(self, items: &[T], f: F) -> Vec<R>
    where
        T: Sync,
        R: Send,
        F: Fn(&T) -> R + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        {
            if self == Exec::Parallel {
                use rayon::prelude::*;
                return items.par_iter().map(f).collect();
            }
        }
        items.iter().map(f).collect()
    }

    /// Maps `f` over `0..n`, preserving order.
    pub fn map_range<R, F>(self, n: usize, f: F) -> Vec<R>
    where
        R: Send,
        F: Fn(usize) -> R + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        {
            if self == Exec::Parallel {
                use rayon::prelude::*;
                return (0..n).into_par_iter().map(f).collect();
            }
        }
        (0..n).map(f).collect()
    }

    /// Whether this strategy actually runs in parallel in the current build.
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Exec::Parallel
    }
}
