//! Order-fixed parallel reduction of per-path outputs.

use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

pub type PathRng = ChaCha8Rng;

/// Paths per work unit. Blocks are reduced in a fixed tree order, so results
/// do not depend on the number of threads.
pub const BLOCK: u64 = 4096;

/// Random stream of path `k` under master seed `seed`.
pub fn path_stream(seed: u64, k: u64) -> PathRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(k);
    rng
}

/// Running mean and sum of squared deviations.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Moments {
    pub n: u64,
    pub mean: f64,
    pub m2: f64,
}

impl Moments {
    pub fn push(&mut self, x: f64) {
        self.n += 1;
        let d = x - self.mean;
        self.mean += d / self.n as f64;
        self.m2 += d * (x - self.mean);
    }

    pub fn merge(a: Moments, b: Moments) -> Moments {
        if a.n == 0 {
            return b;
        }
        if b.n == 0 {
            return a;
        }
        let n = a.n + b.n;
        let d = b.mean - a.mean;
        let wb = b.n as f64 / n as f64;
        Moments {
            n,
            mean: a.mean + d * wb,
            m2: a.m2 + b.m2 + d * d * a.n as f64 * wb,
        }
    }

    /// Unbiased sample variance; 0 for a single observation.
    pub fn variance(&self) -> f64 {
        if self.n < 2 {
            0.0
        } else {
            (self.m2 / (self.n - 1) as f64).max(0.0)
        }
    }

    pub fn standard_error(&self) -> f64 {
        if self.n == 0 {
            return f64::NAN;
        }
        (self.variance() / self.n as f64).sqrt()
    }
}

fn pairwise(mut level: Vec<Vec<Moments>>) -> Vec<Moments> {
    while level.len() > 1 {
        level = level
            .chunks(2)
            .map(|pair| match pair {
                [a, b] => a.iter().zip(b).map(|(x, y)| Moments::merge(*x, *y)).collect(),
                [a] => a.clone(),
                _ => unreachable!(),
            })
            .collect();
    }
    level.pop().unwrap_or_default()
}

/// Which paths to run: `paths` streams starting at `stream_offset`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct McConfig {
    pub paths: u64,
    pub seed: u64,
    pub stream_offset: u64,
}

impl McConfig {
    pub fn new(paths: u64, seed: u64) -> Self {
        McConfig {
            paths,
            seed,
            stream_offset: 0,
        }
    }

    pub fn with_offset(mut self, offset: u64) -> Self {
        self.stream_offset = offset;
        self
    }
}

/// Runs `f` once per path; `f` writes `dim` outputs per path.
pub fn run_paths<F>(cfg: &McConfig, dim: usize, f: F) -> Vec<Moments>
where
    F: Fn(&mut PathRng, &mut [f64]) + Sync,
{
    let blocks = cfg.paths.div_ceil(BLOCK);
    let per_block: Vec<Vec<Moments>> = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let mut acc = vec![Moments::default(); dim];
            let mut out = vec![0.0; dim];
            let end = ((b + 1) * BLOCK).min(cfg.paths);
            for k in b * BLOCK..end {
                let mut rng = path_stream(cfg.seed, cfg.stream_offset + k);
                out.iter_mut().for_each(|x| *x = 0.0);
                f(&mut rng, &mut out);
                for (m, x) in acc.iter_mut().zip(&out) {
                    m.push(*x);
                }
            }
            acc
        })
        .collect();
    let mut merged = pairwise(per_block);
    merged.resize(dim, Moments::default());
    merged
}

/// Run details attached to an estimate.
#[derive(Debug, Clone, PartialEq, Serialize, Default)]
pub struct Meta {
    pub method: &'static str,
    /// Quantity the mean estimates.
    pub target: &'static str,
    pub horizon: Option<f64>,
    /// Upper bound on ruin after the horizon among surviving paths.
    pub tail_bound: Option<f64>,
    /// Deterministic truncation bias bound, `exp(-s T)`.
    pub bias_bound: Option<f64>,
    pub stream_offset: u64,
}

impl fmt::Display for Meta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "method={};target={}", self.method, self.target)?;
        if let Some(h) = self.horizon {
            write!(f, ";horizon={h}")?;
        }
        if let Some(t) = self.tail_bound {
            write!(f, ";tail_bound={t:e}")?;
        }
        if let Some(b) = self.bias_bound {
            write!(f, ";bias_bound={b:e}")?;
        }
        if self.stream_offset != 0 {
            write!(f, ";stream_offset={}", self.stream_offset)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct McEstimate {
    pub mean: f64,
    pub standard_error: f64,
    pub n: u64,
    pub seed: u64,
    pub meta: Meta,
}

impl McEstimate {
    pub fn from_moments(m: &Moments, seed: u64, meta: Meta) -> Self {
        McEstimate {
            mean: m.mean,
            standard_error: m.standard_error(),
            n: m.n,
            seed,
            meta,
        }
    }

    /// Whether `target` lies within `z` standard errors plus `slack`.
    pub fn covers(&self, target: f64, z: f64, slack: f64) -> bool {
        (self.mean - target).abs() <= z * self.standard_error + slack
    }
}
