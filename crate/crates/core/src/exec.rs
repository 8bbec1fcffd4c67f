//! Data-parallel map helpers. The `parallel` feature routes grid sweeps and
//! Monte-Carlo loops through rayon; without it everything runs sequentially
//! on the calling thread. Both paths are kept compilable so benchmarks can
//! compare them directly.

/// Sequential map over a slice.
pub fn map_seq<T: Sync, R: Send, F: Fn(&T) -> R + Sync>(items: &[T], f: F) -> Vec<R> {
    items.iter().map(|x| f(x)).collect()
}

/// Rayon-backed map over a slice.
#[cfg(feature = "parallel")]
pub fn map_par<T: Sync, R: Send, F: Fn(&T) -> R + Sync>(items: &[T], f: F) -> Vec<R> {
    use rayon::prelude::*;
    items.par_iter().map(|x| f(x)).collect()
}

/// Map over a slice using the configured execution strategy.
#[cfg(feature = "parallel")]
pub fn map<T: Sync, R: Send, F: Fn(&T) -> R + Sync>(items: &[T], f: F) -> Vec<R> {
    map_par(items, f)
}

/// Map over a slice using the configured execution strategy.
#[cfg(not(feature = "parallel"))]
pub fn map<T: Sync, R: Send, F: Fn(&T) -> R + Sync>(items: &[T], f: F) -> Vec<R> {
    map_seq(items, f)
}

/// Fold the maximum of `f` over `items`, in parallel when enabled.
pub fn max_of<T: Sync, F: Fn(&T) -> f64 + Sync>(items: &[T], f: F) -> f64 {
    map(items, f).into_iter().fold(f64::NEG_INFINITY, f64::max)
}
