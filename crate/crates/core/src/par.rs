//! Data-parallel helpers. With the `parallel` feature these fan out over a
//! rayon pool; without it they run sequentially. Either way results come back
//! in input order, so callers see identical output under any schedule.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// How a sweep should be executed. `Parallel` degrades to sequential when the
/// crate is built without the `parallel` feature.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    Sequential,
    #[default]
    Parallel,
}

impl Execution {
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Execution::Parallel
    }
}

/// Maps `f` over `items`, preserving order.
pub fn map_ordered<T, R, F>(exec: Execution, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        return items.par_iter().map(f).collect();
    }
    let _ = exec;
    items.iter().map(f).collect()
}

/// Index and value of the first item (by position) for which `f` yields
/// `Some`. The parallel path may evaluate later items speculatively but always
/// reports the least index.
pub fn find_first<T, R, F>(exec: Execution, items: &[T], f: F) -> Option<(usize, R)>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> Option<R> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        return items
            .par_iter()
            .enumerate()
            .filter_map(|(i, t)| f(t).map(|r| (i, r)))
            .min_by_key(|(i, _)| *i);
    }
    let _ = exec;
    items.iter().enumerate().find_map(|(i, t)| f(t).map(|r| (i, r)))
}
