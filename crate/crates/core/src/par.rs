//! Order-preserving data-parallel maps.
//!
//! With the `parallel` feature these run on the rayon pool; without it, or
//! inside a [`SequentialGuard`], they are plain iterator maps. Results are
//! collected in index order either way, so outputs never depend on the
//! thread count.

use std::sync::atomic::{AtomicUsize, Ordering};

static FORCED_SEQUENTIAL: AtomicUsize = AtomicUsize::new(0);

/// Forces sequential execution while alive. Intended for benchmarks that
/// compare both paths in one binary.
pub struct SequentialGuard(());

impl SequentialGuard {
    pub fn new() -> Self {
        FORCED_SEQUENTIAL.fetch_add(1, Ordering::SeqCst);
        SequentialGuard(())
    }
}

impl Default for SequentialGuard {
    fn default() -> Self {
        Self::new()
    }
}

impl Drop for SequentialGuard {
    fn drop(&mut self) {
        FORCED_SEQUENTIAL.fetch_sub(1, Ordering::SeqCst);
    }
}

/// Whether maps in this module currently dispatch to rayon.
pub fn is_parallel() -> bool {
    cfg!(feature = "parallel") && FORCED_SEQUENTIAL.load(Ordering::Relaxed) == 0
}

/// `(0..n).map(f).collect()`.
pub fn map_range<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if is_parallel() && n > 1 {
        use rayon::prelude::*;
        return (0..n).into_par_iter().map(f).collect();
    }
    (0..n).map(f).collect()
}

/// `items.iter().map(f).collect()`.
pub fn map_slice<I, T, F>(items: &[I], f: F) -> Vec<T>
where
    I: Sync,
    T: Send,
    F: Fn(&I) -> T + Sync + Send,
{
    map_range(items.len(), |i| f(&items[i]))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_is_preserved() {
        let v = map_range(1000, |i| i * i);
        assert!(v.iter().enumerate().all(|(i, x)| *x == i * i));
        let _g = SequentialGuard::new();
        assert!(!is_parallel());
        assert_eq!(map_slice(&[3, 1, 2], |x| x + 1), vec![4, 2, 3]);
    }
}
