//! Execution strategy for the data-parallel loops (coefficient grids,
//! codimension tables, condition sweeps).
//!
//! With the `parallel` feature disabled every strategy runs sequentially, so
//! results never depend on the feature set: each index is evaluated by a pure
//! closure and collected in index order.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Exec {
    Sequential,
    #[default]
    Parallel,
}

impl Exec {
    /// True when this build can actually fan out.
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Exec::Parallel
    }
}

pub(crate) fn map_indexed<T, F>(exec: Exec, len: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        if exec.is_parallel() && len > 1 {
            return (0..len).into_par_iter().map(&f).collect();
        }
    }
    let _ = exec;
    (0..len).map(f).collect()
}

pub(crate) fn try_map_indexed<T, E, F>(exec: Exec, len: usize, f: F) -> Result<Vec<T>, E>
where
    T: Send,
    E: Send,
    F: Fn(usize) -> Result<T, E> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        if exec.is_parallel() && len > 1 {
            return (0..len).into_par_iter().map(&f).collect();
        }
    }
    let _ = exec;
    (0..len).map(f).collect()
}
