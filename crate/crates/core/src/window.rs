//! Materialisation of finite windows `k = 1..=n` of a sequence's log shadow.
//!
//! Every probe in the crate reduces to a statistic over such a window, so this
//! is the one hot loop. With the `parallel` feature the terms are evaluated on
//! the rayon pool; otherwise, or for short windows, sequentially. Both paths
//! produce identical vectors.

use crate::error::{Error, Result};
use crate::gseq::GSeq;

/// Windows shorter than this are always evaluated sequentially.
pub const PARALLEL_THRESHOLD: usize = 4096;

fn checked(k: usize, v: f64) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Overflow(format!("log of term {k} is not finite")))
    }
}

pub fn log_window_seq(x: &GSeq, n: usize) -> Result<Vec<f64>> {
    (1..=n).map(|k| checked(k, x.log_term(k)?)).collect()
}

#[cfg(feature = "parallel")]
pub fn log_window_par(x: &GSeq, n: usize) -> Result<Vec<f64>> {
    use rayon::prelude::*;
    (1..n + 1)
        .into_par_iter()
        .with_min_len(1024)
        .map(|k| checked(k, x.log_term(k)?))
        .collect()
}

/// Logs of `x_1, ..., x_n`.
pub fn log_window(x: &GSeq, n: usize) -> Result<Vec<f64>> {
    if let Some(len) = x.len() {
        if n > len {
            return Err(Error::IndexOutOfRange { index: n, len });
        }
    }
    #[cfg(feature = "parallel")]
    if n >= PARALLEL_THRESHOLD {
        return log_window_par(x, n);
    }
    log_window_seq(x, n)
}

/// Evaluates `f` over many sequences, fanning out across the pool when enabled.
pub fn map_batch<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        items.par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.iter().map(f).collect()
    }
}
