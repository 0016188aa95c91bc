//! Index-parallel map with a deterministic output order.

/// `(0..n).map(f)`, evaluated on the rayon pool when the `parallel` feature is on.
/// Results come back in index order, so reductions over them do not depend on the
/// number of threads.
#[cfg(feature = "parallel")]
pub(crate) fn par_map<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    use rayon::prelude::*;
    (0..n).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn par_map<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    (0..n).map(f).collect()
}
