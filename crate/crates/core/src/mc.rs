//! Seed-deterministic parallel Monte Carlo.
//!
//! Samples are split into fixed-size chunks; chunk `c` draws from the
//! ChaCha8 stream `c` of the run seed, so the result depends only on the seed
//! and the sample count, never on the number of worker threads.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

/// Samples per chunk.
pub const CHUNK: usize = 4096;

/// Sample mean with its standard error.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Estimate {
    pub mean: f64,
    pub std_error: f64,
    pub samples: usize,
}

impl Estimate {
    /// Distance to `value` in units of the standard error.
    pub fn z_score(&self, value: f64) -> f64 {
        if self.std_error == 0.0 {
            if self.mean == value {
                0.0
            } else {
                f64::INFINITY
            }
        } else {
            (self.mean - value).abs() / self.std_error
        }
    }

    pub fn within(&self, value: f64, sigmas: f64) -> bool {
        self.z_score(value) <= sigmas
    }
}

/// The generator for chunk `chunk` of a run.
pub fn chunk_rng(seed: u64, chunk: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(chunk);
    rng
}

/// Estimates the means of `dim` statistics. `draw` fills one sample of all
/// statistics into its output slice.
pub fn estimate<F>(samples: usize, seed: u64, dim: usize, draw: F) -> Vec<Estimate>
where
    F: Fn(&mut ChaCha8Rng, &mut [f64]) + Sync,
{
    let chunks = samples.div_ceil(CHUNK);
    // per chunk: sums and sums of squares
    let partial: Vec<(Vec<f64>, Vec<f64>)> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = chunk_rng(seed, c as u64);
            let count = CHUNK.min(samples - c * CHUNK);
            let mut sum = vec![0.0; dim];
            let mut sq = vec![0.0; dim];
            let mut buf = vec![0.0; dim];
            for _ in 0..count {
                draw(&mut rng, &mut buf);
                for d in 0..dim {
                    sum[d] += buf[d];
                    sq[d] += buf[d] * buf[d];
                }
            }
            (sum, sq)
        })
        .collect();

    let mut sum = vec![0.0; dim];
    let mut sq = vec![0.0; dim];
    for (s, q) in &partial {
        for d in 0..dim {
            sum[d] += s[d];
            sq[d] += q[d];
        }
    }
    let n = samples as f64;
    (0..dim)
        .map(|d| {
            let mean = sum[d] / n;
            let var = if samples > 1 {
                ((sq[d] - n * mean * mean) / (n - 1.0)).max(0.0)
            } else {
                0.0
            };
            Estimate {
                mean,
                std_error: (var / n).sqrt(),
                samples,
            }
        })
        .collect()
}
