//! Seeded, chunked Monte Carlo. Sample s of a run uses the stream
//! (seed, base).derive(chunk).derive(index within chunk); chunks are reduced in
//! order, so results do not depend on the worker count.

use crate::error::{Error, Result};
use crate::rng::RngStream;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub const CHUNK: u64 = 512;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub mean: f64,
    pub stderr: f64,
    pub samples: u64,
}

/// Running mean and second central moment (Welford), mergeable (Chan et al.).
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Welford {
    pub count: u64,
    pub mean: f64,
    pub m2: f64,
}

impl Welford {
    pub fn push(&mut self, x: f64) {
        self.count += 1;
        let d = x - self.mean;
        self.mean += d / self.count as f64;
        self.m2 += d * (x - self.mean);
    }

    pub fn merge(&mut self, o: &Welford) {
        if o.count == 0 {
            return;
        }
        if self.count == 0 {
            *self = *o;
            return;
        }
        let n = (self.count + o.count) as f64;
        let d = o.mean - self.mean;
        self.mean += d * o.count as f64 / n;
        self.m2 += o.m2 + d * d * self.count as f64 * o.count as f64 / n;
        self.count += o.count;
    }

    pub fn estimate(&self) -> Estimate {
        let var = if self.count > 1 { self.m2 / (self.count - 1) as f64 } else { 0.0 };
        Estimate { mean: self.mean, stderr: (var.max(0.0) / self.count.max(1) as f64).sqrt(), samples: self.count }
    }
}

fn pool(workers: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new().num_threads(workers.max(1)).build().map_err(|e| Error::InvalidInput(e.to_string()))
}

/// Estimates the means of the `dim` components of `f`.
pub fn monte_carlo_vec<F>(samples: u64, root: RngStream, workers: usize, dim: usize, f: F) -> Result<Vec<Estimate>>
where
    F: Fn(&RngStream) -> Result<Vec<f64>> + Sync,
{
    if samples == 0 {
        return Err(Error::InvalidInput("Monte Carlo needs at least one sample".into()));
    }
    let chunks = samples.div_ceil(CHUNK);
    let run_chunk = |c: u64| -> Result<Vec<Welford>> {
        let cs = root.derive(c);
        let mut acc = vec![Welford::default(); dim];
        for i in 0..CHUNK.min(samples - c * CHUNK) {
            let v = f(&cs.derive(i))?;
            for (a, x) in acc.iter_mut().zip(v) {
                a.push(x);
            }
        }
        Ok(acc)
    };
    let parts: Vec<Result<Vec<Welford>>> = if workers <= 1 {
        (0..chunks).map(run_chunk).collect()
    } else {
        pool(workers)?.install(|| (0..chunks).into_par_iter().map(run_chunk).collect())
    };
    let mut total = vec![Welford::default(); dim];
    for p in parts {
        for (t, w) in total.iter_mut().zip(p?) {
            t.merge(&w);
        }
    }
    Ok(total.iter().map(|w| w.estimate()).collect())
}

pub fn monte_carlo<F>(samples: u64, root: RngStream, workers: usize, f: F) -> Result<Estimate>
where
    F: Fn(&RngStream) -> Result<f64> + Sync,
{
    Ok(monte_carlo_vec(samples, root, workers, 1, |s| Ok(vec![f(s)?]))?[0])
}
