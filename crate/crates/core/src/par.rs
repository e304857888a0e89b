//! Execution strategy for the exhaustive sweeps. With the `parallel`
//! feature the search is split across rayon workers; without it every
//! strategy runs sequentially. Results never depend on the strategy.

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exec {
    Sequential,
    Parallel,
}

impl Default for Exec {
    fn default() -> Exec {
        if cfg!(feature = "parallel") {
            Exec::Parallel
        } else {
            Exec::Sequential
        }
    }
}

/// The result for the smallest index in `0..n` where `f` yields
/// `Some`. Each worker gets its own state from `init`.
pub fn find_first<S, T, I, F>(exec: Exec, n: u64, init: I, f: F) -> Option<T>
where
    T: Send,
    I: Fn() -> S + Sync + Send,
    F: Fn(&mut S, u64) -> Option<T> + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Exec::Parallel => {
            use rayon::prelude::*;
            (0..n)
                .into_par_iter()
                .map_init(&init, |s, i| f(s, i))
                .find_first(Option::is_some)
                .flatten()
        }
        _ => {
            let mut s = init();
            (0..n).find_map(|i| f(&mut s, i))
        }
    }
}

/// `f` over `0..n`, in index order.
pub fn map<T, F>(exec: Exec, n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Exec::Parallel => {
            use rayon::prelude::*;
            (0..n).into_par_iter().map(f).collect()
        }
        _ => (0..n).map(f).collect(),
    }
}

/// Like [`map`], with per-worker state from `init`.
pub fn map_init<S, T, I, F>(exec: Exec, n: usize, init: I, f: F) -> Vec<T>
where
    T: Send,
    I: Fn() -> S + Sync + Send,
    F: Fn(&mut S, usize) -> T + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Exec::Parallel => {
            use rayon::prelude::*;
            (0..n)
                .into_par_iter()
                .map_init(&init, |s, i| f(s, i))
                .collect()
        }
        _ => {
            let mut s = init();
            (0..n).map(|i| f(&mut s, i)).collect()
        }
    }
}
