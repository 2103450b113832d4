//! Execution strategy for the data-parallel loops in this crate.
//!
//! Every parallel loop goes through [`Exec`], so a single switch selects
//! between rayon and plain iteration. Reductions are chunked with a fixed
//! chunk size and folded in index order, which makes floating-point results
//! identical under both strategies and for any thread count.

use serde::{Deserialize, Serialize};

/// Number of terms per partial sum in [`Exec::sum_range`].
pub const SUM_CHUNK: usize = 4096;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Exec {
    Sequential,
    #[default]
    Parallel,
}

impl Exec {
    /// `Parallel` when the crate was built with the `parallel` feature.
    pub fn best() -> Self {
        if cfg!(feature = "parallel") {
            Exec::Parallel
        } else {
            Exec::Sequential
        }
    }

    /// True when work is actually spread over threads.
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Exec::Parallel
    }

    pub fn map<T, R, F>(self, items: &[T], f: F) -> Vec<R>
    where
        T: Sync,
        R: Send,
        F: Fn(&T) -> R + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self.is_parallel() {
            use rayon::prelude::*;
            return items.par_iter().map(f).collect();
        }
        items.iter().map(f).collect()
    }

    pub fn map_range<R, F>(self, n: usize, f: F) -> Vec<R>
    where
        R: Send,
        F: Fn(usize) -> R + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self.is_parallel() {
            use rayon::prelude::*;
            return (0..n).into_par_iter().map(f).collect();
        }
        (0..n).map(f).collect()
    }

    /// Fills `out` row by row; `f(row, slice)` writes one row of width `width`.
    pub fn fill_rows<T, F>(self, out: &mut [T], width: usize, f: F)
    where
        T: Send,
        F: Fn(usize, &mut [T]) + Sync + Send,
    {
        if width == 0 {
            return;
        }
        #[cfg(feature = "parallel")]
        if self.is_parallel() {
            use rayon::prelude::*;
            out.par_chunks_mut(width).enumerate().for_each(|(i, row)| f(i, row));
            return;
        }
        out.chunks_mut(width).enumerate().for_each(|(i, row)| f(i, row));
    }

    /// `Σ_{i<n} f(i)`, bit-identical across strategies.
    pub fn sum_range<F>(self, n: usize, f: F) -> f64
    where
        F: Fn(usize) -> f64 + Sync + Send,
    {
        let chunks = n.div_ceil(SUM_CHUNK);
        let partial = self.map_range(chunks, |c| {
            let lo = c * SUM_CHUNK;
            let hi = (lo + SUM_CHUNK).min(n);
            (lo..hi).map(&f).sum::<f64>()
        });
        partial.into_iter().sum()
    }

    /// Thread budget handed to the dense factorizations.
    pub(crate) fn faer_par(self) -> faer::Par {
        #[cfg(feature = "parallel")]
        if self.is_parallel() {
            return faer::Par::rayon(0);
        }
        faer::Par::Seq
    }
}

/// Runs `f` inside a dedicated rayon pool of `threads` workers (0 = default).
///
/// Without the `parallel` feature this just calls `f`.
pub fn with_threads<R: Send>(threads: usize, f: impl FnOnce() -> R + Send) -> R {
    #[cfg(feature = "parallel")]
    if threads > 0 {
        if let Ok(pool) = rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
            return pool.install(f);
        }
    }
    let _ = threads;
    f()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sums_agree_bitwise() {
        let f = |i: usize| 1.0 / (i as f64 + 1.0).sqrt();
        let a = Exec::Sequential.sum_range(100_003, f);
        let b = Exec::Parallel.sum_range(100_003, f);
        assert_eq!(a.to_bits(), b.to_bits());
    }

    #[test]
    fn map_preserves_order() {
        let v: Vec<usize> = (0..1000).collect();
        let out = Exec::Parallel.map(&v, |x| x * 2);
        assert!(out.iter().enumerate().all(|(i, &y)| y == 2 * i));
    }

    #[test]
    fn fill_rows_writes_every_row() {
        let mut buf = vec![0usize; 12];
        Exec::Parallel.fill_rows(&mut buf, 4, |r, row| row.iter_mut().for_each(|x| *x = r));
        assert_eq!(buf, vec![0, 0, 0, 0, 1, 1, 1, 1, 2, 2, 2, 2]);
    }
}
