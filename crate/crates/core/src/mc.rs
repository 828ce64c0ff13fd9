//! Block-parallel Monte-Carlo averaging with a thread-count-independent
//! result.
//!
//! Draws are split into fixed-size blocks. Block `b` of evaluation point `p`
//! reads from ChaCha8 stream `(p << 32) | b` of the user seed, so every draw
//! is a pure function of `(seed, p, b, position)`. Per-block moments are
//! merged in block order.

use crate::channels::ChannelModel;
use crate::metrics::{Estimate, Method};
use crate::sampling::Sampler;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

pub const BLOCK_SIZE: u64 = 4096;

/// Running count, mean and sum of squared deviations.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Moments {
    pub n: u64,
    pub mean: f64,
    pub m2: f64,
}

impl Moments {
    pub fn push(&mut self, v: f64) {
        self.n += 1;
        let d = v - self.mean;
        self.mean += d / self.n as f64;
        self.m2 += d * (v - self.mean);
    }

    /// Pairwise merge (Chan et al.).
    pub fn merge(self, other: Moments) -> Moments {
        if self.n == 0 {
            return other;
        }
        if other.n == 0 {
            return self;
        }
        let n = self.n + other.n;
        let d = other.mean - self.mean;
        let (na, nb) = (self.n as f64, other.n as f64);
        Moments {
            n,
            mean: self.mean + d * nb / n as f64,
            m2: self.m2 + other.m2 + d * d * na * nb / n as f64,
        }
    }

    pub fn stderr(&self) -> f64 {
        if self.n < 2 {
            return f64::INFINITY;
        }
        (self.m2 / (self.n - 1) as f64 / self.n as f64).sqrt()
    }

    pub fn estimate(&self) -> Estimate {
        Estimate {
            value: self.mean,
            stderr: self.stderr(),
            samples: self.n,
            method: Method::MonteCarlo,
        }
    }
}

pub fn block_rng(seed: u64, point: u32, block: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((point as u64) << 32) | (block & 0xffff_ffff));
    rng
}

/// Averages `f(x, rng)` over `n` draws of `X`. With `tilt = Some(λ)` the
/// draws come from [`Sampler::draw_weighted`] and each term is multiplied by
/// its likelihood ratio.
pub fn average<F>(sampler: &Sampler, seed: u64, point: u32, n: u64, tilt: Option<f64>, f: F) -> Moments
where
    F: Fn(f64, &mut ChaCha8Rng) -> f64 + Sync,
{
    let blocks = n.div_ceil(BLOCK_SIZE);
    let parts: Vec<Moments> = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let mut rng = block_rng(seed, point, b);
            let len = BLOCK_SIZE.min(n - b * BLOCK_SIZE);
            let mut m = Moments::default();
            for _ in 0..len {
                let v = match tilt {
                    Some(lambda) => {
                        let (x, w) = sampler.draw_weighted(&mut rng, lambda);
                        if w == 0.0 {
                            0.0
                        } else {
                            w * f(x, &mut rng)
                        }
                    }
                    None => {
                        let x = sampler.draw(&mut rng);
                        f(x, &mut rng)
                    }
                };
                m.push(v);
            }
            m
        })
        .collect();
    parts.into_iter().fold(Moments::default(), Moments::merge)
}

/// Convenience wrapper over [`average`] for a model.
pub fn average_model<F>(model: &ChannelModel, seed: u64, point: u32, n: u64, tilt: Option<f64>, f: F) -> Estimate
where
    F: Fn(f64, &mut ChaCha8Rng) -> f64 + Sync,
{
    average(&model.sampler(), seed, point, n, tilt, f).estimate()
}
