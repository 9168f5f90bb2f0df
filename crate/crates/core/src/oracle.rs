//! Brute-force lower estimate of `max_{d∈[0,1]ⁿ} ‖(I − D + DM)⁻¹‖∞`.
//!
//! The d-cube is sampled at its vertices, on a uniform grid and at seeded
//! uniform-random points; every sample is evaluated exactly through an LU
//! inverse. The reported maximum is a lower estimate of the true supremum,
//! so any valid upper bound must dominate it.
//!
//! Samples are evaluated in parallel. The reduction keeps the largest norm
//! and breaks ties by the lexicographically smallest `d`, which makes the
//! result independent of scheduling and identical to the sequential run.

use std::cmp::Ordering;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::lu::inverse_inf_norm;
use crate::matrix::{is_b_matrix, scaled_matrix, DScaling, SquareMatrix, DEFAULT_TOL};

pub const MAX_SAMPLES: u128 = 10_000_000;
/// Vertex enumeration is skipped above this dimension.
pub const MAX_VERTEX_DIM: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleConfig {
    /// Points per axis minus one; `None` disables the grid.
    pub grid_steps: Option<u32>,
    pub include_vertices: bool,
    pub random_samples: u64,
    pub rng_seed: u64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self {
            grid_steps: Some(4),
            include_vertices: true,
            random_samples: 0,
            rng_seed: 0,
        }
    }
}

impl OracleConfig {
    pub fn vertices_only() -> Self {
        Self {
            grid_steps: None,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleResult {
    pub max_norm_found: f64,
    pub argmax_d: DScaling,
    pub samples_evaluated: u64,
    /// Set when vertices were requested but `n` exceeds [`MAX_VERTEX_DIM`].
    pub vertices_skipped: bool,
}

#[derive(Debug, Clone, Copy)]
struct SamplePlan {
    n: usize,
    vertices: u64,
    grid: u64,
    steps: u32,
    random: u64,
    seed: u64,
}

impl SamplePlan {
    fn new(n: usize, cfg: &OracleConfig) -> Result<(Self, bool)> {
        let vertices_skipped = cfg.include_vertices && n > MAX_VERTEX_DIM;
        let vertices: u128 = if cfg.include_vertices && !vertices_skipped {
            1u128 << n
        } else {
            0
        };
        let (grid, steps): (u128, u32) = match cfg.grid_steps {
            None => (0, 0),
            Some(0) => {
                return Err(Error::InvalidConfig("grid_steps must be at least 1".into()));
            }
            Some(s) => {
                let base = u128::from(s) + 1;
                let count = (0..n).try_fold(1u128, |acc, _| acc.checked_mul(base));
                (count.unwrap_or(u128::MAX), s)
            }
        };
        let requested = vertices
            .saturating_add(grid)
            .saturating_add(u128::from(cfg.random_samples));
        if requested > MAX_SAMPLES {
            return Err(Error::SampleBudgetExceeded {
                requested,
                limit: MAX_SAMPLES,
            });
        }
        Ok((
            Self {
                n,
                vertices: vertices as u64,
                grid: grid as u64,
                steps,
                random: cfg.random_samples,
                seed: cfg.rng_seed,
            },
            vertices_skipped,
        ))
    }

    fn total(&self) -> u64 {
        self.vertices + self.grid + self.random
    }

    fn point(&self, index: u64) -> Vec<f64> {
        let n = self.n;
        if index < self.vertices {
            return (0..n).map(|j| ((index >> j) & 1) as f64).collect();
        }
        let index = index - self.vertices;
        if index < self.grid {
            let base = u64::from(self.steps) + 1;
            let mut rest = index;
            return (0..n)
                .map(|_| {
                    let t = rest % base;
                    rest /= base;
                    t as f64 / f64::from(self.steps)
                })
                .collect();
        }
        let index = index - self.grid;
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(index);
        (0..n).map(|_| rng.gen_range(0.0..=1.0)).collect()
    }
}

fn better(a: (f64, Vec<f64>), b: (f64, Vec<f64>)) -> (f64, Vec<f64>) {
    match a.0.partial_cmp(&b.0) {
        Some(Ordering::Greater) => a,
        Some(Ordering::Less) => b,
        _ => {
            if b.1.partial_cmp(&a.1) == Some(Ordering::Less) {
                b
            } else {
                a
            }
        }
    }
}

fn evaluate(m: &SquareMatrix, d: Vec<f64>) -> Result<(f64, Vec<f64>)> {
    let scaling = DScaling::new(d)?;
    let norm = inverse_inf_norm(&scaled_matrix(m, &scaling)?)?;
    Ok((norm, scaling.into_vec()))
}

fn run(m: &SquareMatrix, cfg: &OracleConfig, parallel: bool) -> Result<OracleResult> {
    if !is_b_matrix(m, DEFAULT_TOL) {
        return Err(Error::NotBMatrix);
    }
    let (plan, vertices_skipped) = SamplePlan::new(m.n(), cfg)?;
    let total = plan.total();
    if total == 0 {
        return Err(Error::InvalidConfig("no sample points configured".into()));
    }

    let best = if parallel {
        (0..total)
            .into_par_iter()
            .map(|i| evaluate(m, plan.point(i)))
            .try_reduce_with(|a, b| Ok(better(a, b)))
    } else {
        (0..total)
            .map(|i| evaluate(m, plan.point(i)))
            .reduce(|a, b| Ok(better(a?, b?)))
    }
    .expect("at least one sample")?;

    Ok(OracleResult {
        max_norm_found: best.0,
        argmax_d: DScaling::new(best.1)?,
        samples_evaluated: total,
        vertices_skipped,
    })
}

/// Largest `‖(I − D + DM)⁻¹‖∞` over the configured sample points.
pub fn sample_max_norm(m: &SquareMatrix, cfg: &OracleConfig) -> Result<OracleResult> {
    run(m, cfg, true)
}

/// Single-threaded evaluation; returns exactly what [`sample_max_norm`] does.
pub fn sample_max_norm_sequential(m: &SquareMatrix, cfg: &OracleConfig) -> Result<OracleResult> {
    run(m, cfg, false)
}
