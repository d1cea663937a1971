//! Data-parallel helpers: rayon with the `parallel` feature, plain
//! iterators without it. Results never depend on scheduling.

use std::iter::Sum;

/// `f(0), .., f(n-1)` in index order.
#[cfg(feature = "parallel")]
pub fn map_indexed<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    use rayon::prelude::*;
    (0..n).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn map_indexed<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    (0..n).map(f).collect()
}

/// `sum f(i)` for `i < n`. Only for exact (associative) sums.
#[cfg(feature = "parallel")]
pub fn sum_indexed<T, F>(n: usize, f: F) -> T
where
    T: Send + Sum<T>,
    F: Fn(usize) -> T + Sync + Send,
{
    use rayon::prelude::*;
    (0..n).into_par_iter().map(f).sum()
}

#[cfg(not(feature = "parallel"))]
pub fn sum_indexed<T, F>(n: usize, f: F) -> T
where
    T: Send + Sum<T>,
    F: Fn(usize) -> T + Sync + Send,
{
    (0..n).map(f).sum()
}

pub fn is_parallel() -> bool {
    cfg!(feature = "parallel")
}
