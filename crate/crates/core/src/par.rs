//! Range fold/merge that runs on the rayon pool when `parallel` is enabled.
//!
//! Callers must supply an associative, commutative `merge`; results are then
//! independent of how the range is split.
//!
//! Each of the `t` pool workers folds the strided slice `p, p + t, p + 2t, …`,
//! so there are exactly `t` partial results and the triangular workloads of
//! the subset enumerations stay balanced.

#[cfg(feature = "parallel")]
pub(crate) fn fold_range<T, I, F, M>(n: usize, identity: I, fold: F, merge: M) -> T
where
    T: Send,
    I: Fn() -> T + Sync + Send,
    F: Fn(T, usize) -> T + Sync + Send,
    M: Fn(T, T) -> T + Sync + Send,
{
    use rayon::prelude::*;
    let t = rayon::current_num_threads().clamp(1, n.max(1));
    if t == 1 {
        return (0..n).fold(identity(), fold);
    }
    (0..t)
        .into_par_iter()
        .map(|p| (p..n).step_by(t).fold(identity(), &fold))
        .reduce(&identity, &merge)
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn fold_range<T, I, F, M>(n: usize, identity: I, fold: F, _merge: M) -> T
where
    I: Fn() -> T,
    F: Fn(T, usize) -> T,
    M: Fn(T, T) -> T,
{
    (0..n).fold(identity(), fold)
}

/// `f(0), …, f(n-1)` in index order.
#[cfg(feature = "parallel")]
pub(crate) fn map_range<T, F>(n: usize, f: F) -> alloc::vec::Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    use rayon::prelude::*;
    (0..n).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn map_range<T, F>(n: usize, f: F) -> alloc::vec::Vec<T>
where
    F: Fn(usize) -> T,
{
    (0..n).map(f).collect()
}
