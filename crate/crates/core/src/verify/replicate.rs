//! Deterministic parallel replicate loops.
//!
//! Replicate `i` always draws from stream `i` of its seed, and reductions are
//! either integer histogram merges or ordered collections, so results do not
//! depend on the number of worker threads.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::rng::{RngState, StreamSeed};

/// Integer-weighted histogram over nonnegative counts.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Histogram {
    bins: Vec<u64>,
}

impl Histogram {
    pub fn add(&mut self, k: usize, w: u64) {
        if w == 0 {
            return;
        }
        if k >= self.bins.len() {
            self.bins.resize(k + 1, 0);
        }
        self.bins[k] += w;
    }

    pub fn merge(mut self, other: Histogram) -> Histogram {
        if other.bins.len() > self.bins.len() {
            self.bins.resize(other.bins.len(), 0);
        }
        for (a, b) in self.bins.iter_mut().zip(other.bins) {
            *a += b;
        }
        self
    }

    pub fn bins(&self) -> &[u64] {
        &self.bins
    }

    pub fn total(&self) -> u64 {
        self.bins.iter().sum()
    }
}

/// Runs `body` for replicates `0..n` and merges their histograms. On failure
/// the error of the lowest failing replicate index is returned.
pub fn par_histogram<F>(n: u64, seed: StreamSeed, body: F) -> Result<Histogram>
where
    F: Fn(&mut RngState, &mut Histogram) -> Result<()> + Sync,
{
    type Acc = (Histogram, Option<(u64, Error)>);
    let merge = |(h1, e1): Acc, (h2, e2): Acc| -> Acc {
        let err = match (e1, e2) {
            (Some(a), Some(b)) => Some(if a.0 <= b.0 { a } else { b }),
            (a, b) => a.or(b),
        };
        (h1.merge(h2), err)
    };
    let (hist, err) = (0..n)
        .into_par_iter()
        .fold(
            || (Histogram::default(), None),
            |(mut h, err): Acc, i| {
                if err.is_some() {
                    return (h, err);
                }
                let mut rng = seed.stream(i);
                match body(&mut rng, &mut h) {
                    Ok(()) => (h, None),
                    Err(e) => (h, Some((i, e))),
                }
            },
        )
        .reduce(|| (Histogram::default(), None), merge);
    match err {
        Some((_, e)) => Err(e),
        None => Ok(hist),
    }
}

/// Ordered per-replicate values.
pub fn par_collect<V, F>(n: u64, seed: StreamSeed, body: F) -> Result<Vec<V>>
where
    V: Send,
    F: Fn(u64, &mut RngState) -> Result<V> + Sync,
{
    (0..n)
        .into_par_iter()
        .map(|i| body(i, &mut seed.stream(i)))
        .collect()
}

/// Sample mean and standard error of the mean, summed in index order.
pub fn mean_and_se(values: &[f64]) -> (f64, f64) {
    let n = values.len();
    if n == 0 {
        return (f64::NAN, f64::NAN);
    }
    let mean = values.iter().sum::<f64>() / n as f64;
    if n == 1 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1) as f64;
    (mean, (var / n as f64).sqrt())
}
