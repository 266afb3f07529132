//! Data-parallel kernels with sequential twins.
//!
//! The `parallel` feature routes the unsuffixed entry points through rayon;
//! without it they alias the `*_seq` twins. The twins are always compiled so
//! benchmarks can compare both paths in a single build.
//!
//! Reductions are deterministic under either path: inputs are cut into
//! fixed-size chunks, each chunk is reduced sequentially, and the per-chunk
//! partials are combined in chunk order, so thread scheduling never changes
//! the floating-point result.

use num_complex::Complex64;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

const SUM_CHUNK: usize = 2048;

/// Minimum work items before the parallel path engages; below this the
/// sequential twin is used even with the feature on.
const PAR_THRESHOLD: usize = 16;

pub fn map_indexed_seq<U, F>(n: usize, f: F) -> Vec<U>
where
    F: Fn(usize) -> U,
{
    (0..n).map(f).collect()
}

#[cfg(feature = "parallel")]
pub fn map_indexed_par<U, F>(n: usize, f: F) -> Vec<U>
where
    U: Send,
    F: Fn(usize) -> U + Sync + Send,
{
    (0..n).into_par_iter().map(f).collect()
}

/// Ordered map over `0..n`.
pub fn map_indexed<U, F>(n: usize, f: F) -> Vec<U>
where
    U: Send,
    F: Fn(usize) -> U + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        if n >= PAR_THRESHOLD {
            return map_indexed_par(n, f);
        }
    }
    map_indexed_seq(n, f)
}

pub fn sum_indexed_complex_seq<F>(n: usize, f: F) -> Complex64
where
    F: Fn(usize) -> Complex64,
{
    let mut acc = Complex64::new(0.0, 0.0);
    let mut start = 0;
    while start < n {
        let end = (start + SUM_CHUNK).min(n);
        let mut part = Complex64::new(0.0, 0.0);
        for i in start..end {
            part += f(i);
        }
        acc += part;
        start = end;
    }
    acc
}

#[cfg(feature = "parallel")]
pub fn sum_indexed_complex_par<F>(n: usize, f: F) -> Complex64
where
    F: Fn(usize) -> Complex64 + Sync + Send,
{
    let chunks = n.div_ceil(SUM_CHUNK);
    let partials: Vec<Complex64> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let start = c * SUM_CHUNK;
            let end = (start + SUM_CHUNK).min(n);
            let mut part = Complex64::new(0.0, 0.0);
            for i in start..end {
                part += f(i);
            }
            part
        })
        .collect();
    partials.into_iter().sum()
}

/// Deterministic sum of `f(0) + ... + f(n-1)`.
pub fn sum_indexed_complex<F>(n: usize, f: F) -> Complex64
where
    F: Fn(usize) -> Complex64 + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        if n >= 4 * SUM_CHUNK {
            return sum_indexed_complex_par(n, f);
        }
    }
    sum_indexed_complex_seq(n, f)
}
